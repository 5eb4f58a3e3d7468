#include "rgauss/caps.hpp"
#include "rgauss/contamination.hpp"
#include "rgauss/harness.hpp"
#include "rgauss/sample_io.hpp"
#include "rgauss/types.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace rgauss;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string caps;
};

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ExperimentConfig configured(const std::string& path, const Globals& g)
{
    ExperimentConfig c = load_experiment(path);
    if (g.seed) c.seed = *g.seed;
    if (g.threads) c.threads = *g.threads;
    if (!g.caps.empty()) c.caps = parse_caps(g.caps);
    c.validate();
    return c;
}

nlohmann::json matrix_json(const Mat& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json vector_json(const Vec& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

void write_json(const std::string& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw InvalidInput("write failed for '" + path + "'");
}

int run_corrupt(const std::string& config_path, const std::string& out, const std::string& labels_out,
                const std::string& truth_out, const Globals& g)
{
    const ExperimentConfig c = configured(config_path, g);
    const ContaminatedSet data = trial_data(c, 0);
    if (ends_with(out, ".csv"))
        write_samples_csv(out, data.samples);
    else
        write_samples_binary(out, data.samples);
    if (!labels_out.empty()) {
        std::ofstream lab(labels_out);
        if (!lab) throw InvalidInput("cannot open '" + labels_out + "' for writing");
        lab << "adversarial\n";
        for (auto l : data.labels) lab << static_cast<int>(l) << '\n';
        if (!lab) throw InvalidInput("write failed for '" + labels_out + "'");
    }
    if (!truth_out.empty()) {
        const GaussianParams truth = trial_truth(c, 0);
        write_json(truth_out, {{"mean", vector_json(truth.mean)},
                               {"covariance", matrix_json(truth.covariance)},
                               {"epsilon", c.epsilon},
                               {"adversary", to_string(c.adversary.kind)}});
    }
    std::cerr << "wrote " << data.size() << " rows (" << data.bad_count() << " adversarial) to " << out << '\n';
    return 0;
}

int run_estimate(const std::string& in, double eps, const std::string& mode_name, const std::string& out,
                 const Globals& g)
{
    const EstimateMode mode = estimate_mode_from_string(mode_name);
    ContaminatedSet set;
    set.samples = ends_with(in, ".csv") ? read_samples_csv(in, false).samples : read_samples_binary(in);
    set.epsilon = eps;
    RecoverOptions opt;
    if (!g.caps.empty()) opt.caps = parse_caps(g.caps);
    const std::uint64_t seed = g.seed.value_or(0);
    GaussianFit fit;
    switch (mode) {
    case EstimateMode::Mean: fit = recover_mean_only(set, eps, seed, opt); break;
    case EstimateMode::Cov: fit = recover_cov_only(set, eps, seed, opt); break;
    case EstimateMode::Full: fit = recover_gaussian(set, eps, seed, opt); break;
    }
    nlohmann::json j{{"mode", to_string(mode)},
                     {"epsilon", eps},
                     {"rows", set.size()},
                     {"caps_bound", fit.usage.describe()}};
    if (mode != EstimateMode::Cov) j["mean"] = vector_json(fit.mean);
    if (mode != EstimateMode::Mean) j["covariance"] = matrix_json(fit.covariance);
    if (out.empty() || out == "-")
        std::cout << j.dump(2) << '\n';
    else
        write_json(out, j);
    return 0;
}

int run_bench(const std::string& config_path, const std::string& csv, const Globals& g)
{
    ExperimentConfig c = configured(config_path, g);
    const std::string path = csv.empty() ? c.output : csv;
    const auto rows = run_experiment(c);
    if (path.empty() || path == "-")
        write_report_csv(std::cout, rows);
    else
        write_report_csv(path, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Robust Gaussian mean and covariance estimation"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    int threads = 1;
    auto* seed_opt = app.add_option("--seed", seed, "Base seed")->check(CLI::NonNegativeNumber);
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads for bench trials")->check(CLI::PositiveNumber);
    app.add_option("--caps", g.caps, "Caps, e.g. k=6,lowdim=6,stitch-m=512");

    std::string config, out, labels_out, truth_out, in, mode = "full", csv;
    double eps = 0.0;

    auto* corrupt = app.add_subcommand("corrupt", "Sample and corrupt one data set");
    corrupt->add_option("--config", config, "Experiment JSON")->required();
    corrupt->add_option("--out", out, "Samples (.bin, or .csv)")->required();
    corrupt->add_option("--labels", labels_out, "CSV of adversarial labels");
    corrupt->add_option("--truth", truth_out, "JSON of the true parameters");

    auto* estimate = app.add_subcommand("estimate", "Estimate parameters from a sample file");
    estimate->add_option("--in", in, "Samples (.bin, or .csv)")->required();
    estimate->add_option("--eps", eps, "Contamination rate")->required();
    estimate->add_option("--mode", mode, "mean | cov | full")->check(CLI::IsMember({"mean", "cov", "full"}));
    estimate->add_option("--out", out, "Result JSON (stdout when omitted)");

    auto* bench = app.add_subcommand("bench", "Run an experiment and write the CSV report");
    bench->add_option("--config", config, "Experiment JSON")->required();
    bench->add_option("--csv", csv, "Report path (config 'output' or stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (*seed_opt) g.seed = seed;
    if (*threads_opt) g.threads = threads;

    try {
        if (*corrupt) return run_corrupt(config, out, labels_out, truth_out, g);
        if (*estimate) return run_estimate(in, eps, mode, out, g);
        return run_bench(config, csv, g);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InsufficientSamples& e) {
        std::cerr << "insufficient samples: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
