#include "rgauss/harness.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/highdim_cov.hpp"
#include "rgauss/highdim_mean.hpp"
#include "rgauss/linalg.hpp"
#include "rgauss/rng.hpp"
#include "rgauss/sample_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace rgauss {

double StageLedger::good_lost_fraction() const
{
    return original_good > 0 ? static_cast<double>(good_lost) / static_cast<double>(original_good) : 0.0;
}

namespace {

// Feeds filter observations of one stage into its ledger.
class LedgerRecorder {
public:
    LedgerRecorder(StageLedger& ledger, const std::vector<std::uint8_t>& labels) : ledger_(ledger), labels_(labels) {}

    void start(const RowSet& rows)
    {
        ledger_.original_good = good_in(rows);
        ledger_.good_lost = 0;
        ledger_.delta.assign(1, delta_of(rows));
    }
    void observe(const RowSet& rows)
    {
        ledger_.good_lost = ledger_.original_good - good_in(rows);
        ledger_.delta.push_back(delta_of(rows));
    }

private:
    Index good_in(const RowSet& rows) const
    {
        Index g = 0;
        for (Index r : rows) g += labels_[static_cast<std::size_t>(r)] ? 0 : 1;
        return g;
    }
    double delta_of(const RowSet& rows) const
    {
        std::vector<std::uint8_t> cur;
        cur.reserve(rows.size());
        for (Index r : rows) cur.push_back(labels_[static_cast<std::size_t>(r)]);
        return delta_ledger(cur, ledger_.original_good).delta;
    }

    StageLedger& ledger_;
    const std::vector<std::uint8_t>& labels_;
};

bool labeled(const ContaminatedSet& set) { return static_cast<Index>(set.labels.size()) == set.size(); }

MeanOptions mean_options(const RecoverOptions& opt, CapUsage* usage)
{
    MeanOptions mo;
    mo.delta = opt.delta;
    mo.lowdim_cap = opt.caps.lowdim;
    mo.usage = usage;
    return mo;
}

double median_of(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string join_trace(const std::vector<StageLedger>& ledgers)
{
    std::string out;
    for (std::size_t s = 0; s < ledgers.size(); ++s) {
        if (s) out += '|';
        for (std::size_t j = 0; j < ledgers[s].delta.size(); ++j) {
            if (j) out += ';';
            out += format_double(ledgers[s].delta[j]);
        }
    }
    return out;
}

}  // namespace

GaussianFit recover_mean_only(const ContaminatedSet& set, double epsilon, std::uint64_t seed, const RecoverOptions& opt)
{
    (void)seed;
    opt.caps.validate();
    const Index d = set.samples.cols();
    GaussianFit fit;
    fit.covariance = Mat::Identity(d, d);
    if (epsilon == 0.0) {
        if (set.size() == 0) throw InsufficientSamples("no rows");
        fit.mean = set.samples.colwise().mean().transpose();
        return fit;
    }
    MeanOptions mo = mean_options(opt, &fit.usage);
    if (labeled(set)) {
        fit.ledgers.push_back(StageLedger{"mean", epsilon, 0, 0, {}});
        auto rec = std::make_shared<LedgerRecorder>(fit.ledgers.back(), set.labels);
        rec->start(all_rows(set.size()));
        mo.observer = [rec](const RowSet& rows) { rec->observe(rows); };
    }
    fit.mean = recover_mean(set.samples, epsilon, mo);
    return fit;
}

GaussianFit recover_cov_only(const ContaminatedSet& set, double epsilon, std::uint64_t seed, const RecoverOptions& opt)
{
    const Index d = set.samples.cols();
    GaussianFit fit;
    fit.mean = Vec::Zero(d);
    CovOptions co;
    co.delta = opt.delta;
    co.caps = opt.caps;
    co.usage = &fit.usage;
    if (labeled(set)) {
        fit.ledgers.push_back(StageLedger{"cov", epsilon, 0, 0, {}});
        auto rec = std::make_shared<LedgerRecorder>(fit.ledgers.back(), set.labels);
        auto first = std::make_shared<bool>(true);
        co.observer = [rec, first](const RowSet& rows) {
            if (*first)
                rec->start(rows);
            else
                rec->observe(rows);
            *first = false;
        };
    }
    fit.covariance = recover_cov(set.samples, epsilon, seed, co);
    return fit;
}

GaussianFit recover_gaussian(const ContaminatedSet& set, double epsilon, std::uint64_t seed, const RecoverOptions& opt)
{
    opt.caps.validate();
    if (!(opt.pair_fraction > 0.0 && opt.pair_fraction < 0.5)) throw InvalidInput("pair fraction must lie in (0, 1/2)");
    if (!(epsilon >= 0.0 && 2.0 * epsilon <= constants::kMaxMeanEpsilon))
        throw InvalidInput("end-to-end recovery supports eps in [0, 1/12]");
    const Index n = set.size();
    const Index d = set.samples.cols();
    const auto half = static_cast<Index>(std::floor(opt.pair_fraction * static_cast<double>(n)));
    const Index rest = n - 2 * half;
    if (half <= 2 * (d + 1) || rest < 2) throw InsufficientSamples("too few rows for pairing and a mean slice");

    Rng rng = make_rng(seed, 0);
    const RowSet perm = random_permutation(n, rng);
    const bool has_labels = labeled(set);
    ContaminatedSet paired;
    paired.epsilon = 2.0 * epsilon;
    paired.samples.resize(half, d);
    for (Index i = 0; i < half; ++i) {
        const Index a = perm[static_cast<std::size_t>(i)];
        const Index b = perm[static_cast<std::size_t>(half + i)];
        paired.samples.row(i) = (set.samples.row(a) - set.samples.row(b)) / std::sqrt(2.0);
        if (has_labels)
            paired.labels.push_back(set.labels[static_cast<std::size_t>(a)] || set.labels[static_cast<std::size_t>(b)]);
    }
    const RowSet slice(perm.begin() + 2 * half, perm.end());
    const ContaminatedSet fresh = set.subset(slice);

    GaussianFit cov = recover_cov_only(paired, 2.0 * epsilon, mix_seed(seed, 1), opt);
    GaussianFit fit;
    fit.covariance = cov.covariance;
    fit.usage = cov.usage;
    fit.ledgers = cov.ledgers;

    const Mat inv_half = psd_inv_sqrt(fit.covariance);
    ContaminatedSet whitened = fresh;
    whitened.samples = fresh.samples * inv_half;
    if (epsilon == 0.0) {
        fit.mean = fresh.samples.colwise().mean().transpose();
        return fit;
    }
    MeanOptions mo = mean_options(opt, &fit.usage);
    if (has_labels) {
        fit.ledgers.push_back(StageLedger{"mean", epsilon, 0, 0, {}});
        auto rec = std::make_shared<LedgerRecorder>(fit.ledgers.back(), whitened.labels);
        rec->start(all_rows(whitened.size()));
        mo.observer = [rec](const RowSet& rows) { rec->observe(rows); };
    }
    const Vec mu_w = recover_mean_noisy(whitened.samples, epsilon, opt.delta, 1.0, constants::kMeanStageChi * epsilon, mo);
    fit.mean = psd_sqrt(fit.covariance) * mu_w;
    return fit;
}

GaussianFit empirical_fit(const Mat& samples)
{
    if (samples.rows() < 2) throw InsufficientSamples("empirical fit needs at least two rows");
    const Moments m = empirical_moments(samples);
    GaussianFit fit;
    fit.mean = m.mean;
    fit.covariance = m.matrix;
    return fit;
}

double mahalanobis_cov_error(const Mat& truth, const Mat& estimate)
{
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) throw InvalidInput("shape mismatch");
    const Mat w = psd_inv_sqrt(truth);
    return (w * estimate * w - Mat::Identity(truth.rows(), truth.cols())).norm();
}

double tv_proxy(const GaussianParams& truth, const GaussianParams& estimate)
{
    truth.validate();
    if (estimate.dim() != truth.dim()) throw InvalidInput("shape mismatch");
    const Index d = truth.dim();
    const Eigen::LLT<Mat> est(estimate.covariance);
    const Eigen::LLT<Mat> tru(truth.covariance);
    if (est.info() != Eigen::Success || tru.info() != Eigen::Success) return 1.0;
    const Vec diff = estimate.mean - truth.mean;
    const double logdet_est = 2.0 * est.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double logdet_tru = 2.0 * tru.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double kl = 0.5 * (est.solve(truth.covariance).trace() + diff.dot(est.solve(diff)) - static_cast<double>(d) +
                             logdet_est - logdet_tru);
    return std::min(1.0, std::sqrt(std::max(0.0, kl) / 2.0));
}

EstimateMode estimate_mode_from_string(const std::string& name)
{
    if (name == "mean") return EstimateMode::Mean;
    if (name == "cov") return EstimateMode::Cov;
    if (name == "full") return EstimateMode::Full;
    throw InvalidInput("unknown mode '" + name + "' (expected mean, cov or full)");
}

std::string to_string(EstimateMode mode)
{
    switch (mode) {
    case EstimateMode::Mean: return "mean";
    case EstimateMode::Cov: return "cov";
    case EstimateMode::Full: return "full";
    }
    return "full";
}

void ExperimentConfig::validate() const
{
    if (d < 1) throw InvalidInput("d must be at least 1");
    if (n < 2) throw InvalidInput("n must be at least 2");
    if (!(epsilon >= 0.0 && epsilon < constants::kMaxContamination)) throw InvalidInput("epsilon must lie in [0, 1/3)");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    if (threads < 1) throw InvalidInput("threads must be at least 1");
    if (estimators.empty()) throw InvalidInput("at least one estimator is required");
    for (const auto& e : estimators)
        if (e != "empirical" && e != "robust") throw InvalidInput("unknown estimator '" + e + "'");
    if (cov_perturbation < 0.0) throw InvalidInput("cov_perturbation must be non-negative");
    if (cov_rank < 1 || cov_rank > d) throw InvalidInput("cov_rank must lie in [1, d]");
    caps.validate();
}

ExperimentConfig parse_experiment_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("config JSON must be an object");
    ExperimentConfig c;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            const auto& v = it.value();
            if (key == "d")
                c.d = v.get<Index>();
            else if (key == "n")
                c.n = v.get<Index>();
            else if (key == "epsilon")
                c.epsilon = v.get<double>();
            else if (key == "delta")
                c.delta = v.get<double>();
            else if (key == "mode")
                c.mode = estimate_mode_from_string(v.get<std::string>());
            else if (key == "adversary")
                c.adversary = parse_adversary_json(v.dump()).strategy;
            else if (key == "estimators")
                c.estimators = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                                             : v.get<std::vector<std::string>>();
            else if (key == "trials")
                c.trials = v.get<int>();
            else if (key == "seed")
                c.seed = v.get<std::uint64_t>();
            else if (key == "caps") {
                for (auto ct = v.begin(); ct != v.end(); ++ct) {
                    if (ct.key() == "k")
                        c.caps.quartic = ct.value().get<int>();
                    else if (ct.key() == "lowdim")
                        c.caps.lowdim = ct.value().get<int>();
                    else if (ct.key() == "stitch-m")
                        c.caps.stitch_m = ct.value().get<int>();
                    else
                        throw InvalidInput("unknown cap '" + ct.key() + "'");
                }
            } else if (key == "mean_scale")
                c.mean_scale = v.get<double>();
            else if (key == "cov_perturbation")
                c.cov_perturbation = v.get<double>();
            else if (key == "cov_rank")
                c.cov_rank = v.get<int>();
            else if (key == "record_time")
                c.record_time = v.get<bool>();
            else if (key == "threads")
                c.threads = v.get<int>();
            else if (key == "output")
                c.output = v.get<std::string>();
            else
                throw InvalidInput("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("config JSON: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_experiment(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_experiment_json(ss.str());
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

GaussianParams trial_truth(const ExperimentConfig& config, int trial)
{
    const std::uint64_t ts = mix_seed(config.seed, static_cast<std::uint64_t>(trial));
    const Index d = config.d;
    GaussianParams p;
    p.mean = config.mode == EstimateMode::Cov ? Vec::Zero(d)
                                              : Vec::Constant(d, config.mean_scale / std::sqrt(static_cast<double>(d)));
    p.covariance = Mat::Identity(d, d);
    if (config.mode != EstimateMode::Mean && config.cov_perturbation > 0.0) {
        Rng rng = make_rng(ts, 1);
        const Mat g = standard_normal(d, config.cov_rank, rng);
        const Mat pert = g * g.transpose();
        p.covariance += config.cov_perturbation * pert / pert.norm();
    }
    return p;
}

ContaminatedSet trial_data(const ExperimentConfig& config, int trial)
{
    const std::uint64_t ts = mix_seed(config.seed, static_cast<std::uint64_t>(trial));
    const Mat clean = sample_gaussian(trial_truth(config, trial), config.n, mix_seed(ts, 2));
    return corrupt(clean, config.epsilon, config.adversary, mix_seed(ts, 3));
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const std::size_t per_trial = config.estimators.size();
    std::vector<ReportRow> rows(static_cast<std::size_t>(config.trials) * per_trial);
    std::vector<CapUsage> usages(rows.size());

    auto run_trial = [&](int t) {
        const GaussianParams truth = trial_truth(config, t);
        const ContaminatedSet data = trial_data(config, t);
        const std::uint64_t ts = mix_seed(config.seed, static_cast<std::uint64_t>(t));
        RecoverOptions opt;
        opt.delta = config.delta;
        opt.caps = config.caps;
        for (std::size_t e = 0; e < per_trial; ++e) {
            const std::string& name = config.estimators[e];
            const auto t0 = std::chrono::steady_clock::now();
            GaussianFit fit;
            if (name == "empirical") {
                fit = empirical_fit(data.samples);
                if (config.mode == EstimateMode::Mean) fit.covariance = Mat::Identity(config.d, config.d);
                if (config.mode == EstimateMode::Cov) {
                    fit.mean = Vec::Zero(config.d);
                    fit.covariance = second_moment(data.samples);
                }
            } else if (config.mode == EstimateMode::Mean) {
                fit = recover_mean_only(data, config.epsilon, mix_seed(ts, 4), opt);
            } else if (config.mode == EstimateMode::Cov) {
                fit = recover_cov_only(data, config.epsilon, mix_seed(ts, 4), opt);
            } else {
                fit = recover_gaussian(data, config.epsilon, mix_seed(ts, 4), opt);
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ReportRow& r = rows[static_cast<std::size_t>(t) * per_trial + e];
            r.trial = std::to_string(t);
            r.seed = ts;
            r.adversary = to_string(config.adversary.kind);
            r.estimator = name;
            r.mean_error = (fit.mean - truth.mean).norm();
            r.cov_error = mahalanobis_cov_error(truth.covariance, fit.covariance);
            r.tv = tv_proxy(truth, GaussianParams{fit.mean, fit.covariance});
            Index lost = 0;
            Index good = 0;
            for (const auto& l : fit.ledgers) {
                lost += l.good_lost;
                good += l.original_good;
            }
            r.good_lost = good > 0 ? static_cast<double>(lost) / static_cast<double>(good) : 0.0;
            r.delta_trace = join_trace(fit.ledgers);
            r.wall_time = config.record_time ? secs : 0.0;
            r.caps_bound = fit.usage.describe();
            usages[static_cast<std::size_t>(t) * per_trial + e] = fit.usage;
        }
    };

    std::mutex next_lock;
    int next = 0;
    auto worker = [&]() {
        for (;;) {
            int t = 0;
            {
                std::lock_guard<std::mutex> g(next_lock);
                if (next >= config.trials) return;
                t = next++;
            }
            run_trial(t);
        }
    };
    const int nthreads = std::min(config.threads, config.trials);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(nthreads));
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i)
            pool.emplace_back([&, i]() {
                try {
                    worker();
                } catch (...) {
                    failures[static_cast<std::size_t>(i)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    for (std::size_t e = 0; e < per_trial; ++e) {
        std::vector<double> me, ce, tv, gl, wt;
        CapUsage usage;
        for (int t = 0; t < config.trials; ++t) {
            const ReportRow& r = rows[static_cast<std::size_t>(t) * per_trial + e];
            me.push_back(r.mean_error);
            ce.push_back(r.cov_error);
            tv.push_back(r.tv);
            gl.push_back(r.good_lost);
            wt.push_back(r.wall_time);
            usage.merge(usages[static_cast<std::size_t>(t) * per_trial + e]);
        }
        ReportRow agg;
        agg.trial = "median";
        agg.seed = config.seed;
        agg.adversary = to_string(config.adversary.kind);
        agg.estimator = config.estimators[e];
        agg.mean_error = median_of(me);
        agg.cov_error = median_of(ce);
        agg.tv = median_of(tv);
        agg.good_lost = median_of(gl);
        agg.wall_time = median_of(wt);
        agg.caps_bound = usage.describe();
        rows.push_back(agg);
    }
    return rows;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows)
{
    out << "trial,seed,adversary,estimator,mean_error,cov_error,tv_proxy,good_lost,delta_trace,wall_time,caps_bound\n";
    for (const ReportRow& r : rows) {
        out << csv_field(r.trial) << ',' << r.seed << ',' << csv_field(r.adversary) << ',' << csv_field(r.estimator)
            << ',' << format_double(r.mean_error) << ',' << format_double(r.cov_error) << ',' << format_double(r.tv)
            << ',' << format_double(r.good_lost) << ',' << csv_field(r.delta_trace) << ','
            << format_double(r.wall_time) << ',' << csv_field(r.caps_bound) << '\n';
    }
    if (!out) throw InvalidInput("failed writing CSV report");
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    try {
        write_report_csv(out, rows);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

}  // namespace rgauss
