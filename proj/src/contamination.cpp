#include "rgauss/contamination.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/linalg.hpp"
#include "rgauss/poly.hpp"

#include "json.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rgauss {

namespace {

struct KindName {
    AdversaryKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {AdversaryKind::TailShift, "tail_shift"},
    {AdversaryKind::DenseCluster, "dense_cluster"},
    {AdversaryKind::HuberMaxDensity, "huber_max_density"},
    {AdversaryKind::SubtractiveTruncation, "subtractive_truncation"},
    {AdversaryKind::VarianceInflation, "variance_inflation"},
    {AdversaryKind::Custom, "custom"},
};

Index direction_count(const AdversaryStrategy& s, Index d)
{
    const double k = s.param("directions", 1.0);
    if (k < 1 || k > static_cast<double>(d) || k != std::floor(k))
        throw InvalidInput("adversary 'directions' must be an integer in [1, d]");
    return static_cast<Index>(k);
}

double log_inv(double eps) { return std::log(1.0 / eps); }

}  // namespace

std::string to_string(AdversaryKind kind)
{
    for (const auto& kn : kKindNames)
        if (kn.kind == kind) return kn.name;
    return "unknown";
}

AdversaryKind adversary_kind_from_string(const std::string& name)
{
    for (const auto& kn : kKindNames)
        if (name == kn.name) return kn.kind;
    throw InvalidInput("unknown adversary kind '" + name + "'");
}

double AdversaryStrategy::param(const std::string& name, double fallback) const
{
    const auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

AdversarySpec parse_adversary_json(const std::string& text)
{
    AdversarySpec spec;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("adversary JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw InvalidInput("adversary JSON needs a string 'kind'");
    spec.strategy.kind = adversary_kind_from_string(j["kind"].get<std::string>());
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InvalidInput("adversary 'seed' must be an unsigned integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (!p.is_object()) throw InvalidInput("adversary 'params' must be an object");
        for (auto it = p.begin(); it != p.end(); ++it) {
            if (it.key() == "points") {
                const auto& rows = it.value();
                if (!rows.is_array() || rows.empty() || !rows[0].is_array())
                    throw InvalidInput("'points' must be a non-empty array of rows");
                const auto width = rows[0].size();
                spec.strategy.points.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (!rows[r].is_array() || rows[r].size() != width) throw InvalidInput("'points' rows differ in length");
                    for (std::size_t c = 0; c < width; ++c)
                        spec.strategy.points(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c].get<double>();
                }
            } else if (it.value().is_number()) {
                spec.strategy.params[it.key()] = it.value().get<double>();
            } else {
                throw InvalidInput("adversary parameter '" + it.key() + "' must be numeric");
            }
        }
    }
    return spec;
}

std::string adversary_to_json(const AdversarySpec& spec)
{
    nlohmann::json j;
    j["kind"] = to_string(spec.strategy.kind);
    j["seed"] = spec.seed;
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : spec.strategy.params) p[k] = v;
    if (spec.strategy.points.size() > 0) {
        nlohmann::json rows = nlohmann::json::array();
        for (Index r = 0; r < spec.strategy.points.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Index c = 0; c < spec.strategy.points.cols(); ++c) row.push_back(spec.strategy.points(r, c));
            rows.push_back(row);
        }
        p["points"] = rows;
    }
    j["params"] = p;
    return j.dump();
}

Index ContaminatedSet::good_count() const
{
    if (labels.empty()) throw InvalidInput("set carries no labels");
    return static_cast<Index>(std::count(labels.begin(), labels.end(), std::uint8_t{0}));
}

Index ContaminatedSet::bad_count() const { return size() - good_count(); }

ContaminatedSet ContaminatedSet::subset(const RowSet& rows) const
{
    ContaminatedSet out;
    out.samples = select_rows(samples, rows);
    out.epsilon = epsilon;
    if (!labels.empty())
        for (Index r : rows) out.labels.push_back(labels[static_cast<std::size_t>(r)]);
    return out;
}

ContaminatedSet corrupt(const Mat& clean, double epsilon, const AdversaryStrategy& strategy, std::uint64_t seed)
{
    if (clean.rows() == 0) throw InvalidInput("clean sample set is empty");
    if (!(epsilon >= 0.0 && epsilon <= constants::kMaxContamination))
        throw InvalidInput("contamination fraction must lie in [0, 1/3]");
    const Index n = clean.rows();
    const Index d = clean.cols();
    const auto m = static_cast<Index>(std::floor(epsilon * static_cast<double>(n)));
    Rng rng = make_rng(seed, 0);

    Mat kept;
    Mat bad(m, d);
    if (strategy.kind == AdversaryKind::SubtractiveTruncation) {
        // Drop the m largest rows along e_1, re-add them reflected through the inlier mean.
        RowSet order = all_rows(n);
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return clean(a, 0) < clean(b, 0); });
        const RowSet keep(order.begin(), order.end() - m);
        kept = select_rows(clean, keep);
        const double center = kept.rows() ? kept.col(0).mean() : 0.0;
        for (Index i = 0; i < m; ++i) {
            bad.row(i) = clean.row(order[static_cast<std::size_t>(n - m + i)]);
            bad(i, 0) = 2.0 * center - bad(i, 0);
        }
    } else {
        kept = clean.topRows(n - m);
        const Vec mu = kept.rows() ? Vec(kept.colwise().mean().transpose()) : Vec(Vec::Zero(d));
        switch (strategy.kind) {
        case AdversaryKind::TailShift: {
            if (m == 0) break;
            const Index k = direction_count(strategy, d);
            const double shift = strategy.param("scale", constants::kTailShiftScale) * std::sqrt(log_inv(epsilon));
            for (Index i = 0; i < m; ++i) {
                bad.row(i) = mu.transpose();
                bad(i, i % k) += shift;
            }
            break;
        }
        case AdversaryKind::DenseCluster: {
            const Index k = direction_count(strategy, d);
            const double r = strategy.param("distance", 5.0);
            for (Index i = 0; i < m; ++i) {
                bad.row(i) = mu.transpose();
                bad(i, i % k) += r;
            }
            break;
        }
        case AdversaryKind::HuberMaxDensity: {
            if (m == 0) break;
            // Inliers play p1; shift the pair so p1 sits at `center` along e_1.
            const double center = strategy.param("center", mu(0));
            const double alpha = strategy.param("alpha", lower_bound_pair(epsilon).alpha);
            const Vec first = lower_bound_pair(epsilon, center + alpha, alpha).sample_outliers_for_p1(m, rng);
            Mat rest = standard_normal(m, d, rng);
            rest.rowwise() += mu.transpose();
            bad = rest;
            bad.col(0) = first;
            break;
        }
        case AdversaryKind::VarianceInflation: {
            const Index k = direction_count(strategy, d);
            const double r = strategy.param("distance", 4.0);
            Mat root = Mat::Identity(d, d);
            if (kept.rows() >= 2) root = psd_sqrt(empirical_moments(kept).matrix);
            bad = standard_normal(m, d, rng) * root;
            bad.rowwise() += mu.transpose();
            std::bernoulli_distribution coin(0.5);
            for (Index i = 0; i < m; ++i) {
                const Index j = i % k;
                bad(i, j) = mu(j) + (coin(rng) ? r : -r);
            }
            break;
        }
        case AdversaryKind::Custom: {
            if (m == 0) break;
            if (strategy.points.rows() == 0 || strategy.points.cols() != d)
                throw InvalidInput("custom adversary needs 'points' rows of width d");
            for (Index i = 0; i < m; ++i) bad.row(i) = strategy.points.row(i % strategy.points.rows());
            break;
        }
        case AdversaryKind::SubtractiveTruncation:
            break;
        }
    }

    ContaminatedSet out;
    out.epsilon = epsilon;
    const Index total = kept.rows() + m;
    Mat all(total, d);
    all.topRows(kept.rows()) = kept;
    all.bottomRows(m) = bad;
    std::vector<std::uint8_t> tags(static_cast<std::size_t>(total), 0);
    for (Index i = kept.rows(); i < total; ++i) tags[static_cast<std::size_t>(i)] = 1;
    Rng shuffle_rng = make_rng(seed, 1);
    const RowSet perm = random_permutation(total, shuffle_rng);
    out.samples = select_rows(all, perm);
    out.labels.resize(static_cast<std::size_t>(total));
    for (Index i = 0; i < total; ++i) out.labels[static_cast<std::size_t>(i)] = tags[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    return out;
}

DeltaLedger delta_ledger(const std::vector<std::uint8_t>& current_labels, Index original_good)
{
    if (current_labels.empty()) throw InvalidInput("ledger needs labels");
    const auto size = static_cast<double>(current_labels.size());
    const auto good = static_cast<Index>(std::count(current_labels.begin(), current_labels.end(), std::uint8_t{0}));
    if (good > original_good) throw InvalidInput("current set has more good rows than the original");
    DeltaLedger l;
    l.phi = static_cast<double>(original_good - good) / size;
    l.psi = static_cast<double>(static_cast<Index>(current_labels.size()) - good) / size;
    l.delta = l.psi + (l.phi > 0.0 ? l.phi * std::log(1.0 / l.phi) : 0.0);
    return l;
}

DeltaLedger delta_ledger(const ContaminatedSet& current, Index original_good)
{
    return delta_ledger(current.labels, original_good);
}

double LowerBoundPair::density_p1(double x) const { return normal_pdf(x - p1.mean(0)); }

double LowerBoundPair::density_p2(double x) const { return normal_pdf(x - p2.mean(0)); }

double LowerBoundPair::common_density(double x) const { return std::max(density_p1(x), density_p2(x)) / eta; }

double LowerBoundPair::corrupted_from_p1(double x) const
{
    const double q1 = (common_density(x) - (1.0 - epsilon) * density_p1(x)) / epsilon;
    return (1.0 - epsilon) * density_p1(x) + epsilon * q1;
}

double LowerBoundPair::corrupted_from_p2(double x) const
{
    const double q2 = (common_density(x) - (1.0 - epsilon) * density_p2(x)) / epsilon;
    return (1.0 - epsilon) * density_p2(x) + epsilon * q2;
}

Vec LowerBoundPair::sample_outliers_for_p1(Index n, Rng& rng) const
{
    // eps q1 = (1/eta - (1 - eps)) p1 + (p2 - p1)_+ / eta; the second part has mass (eta - 1) / eta.
    const double w_p1 = std::max(0.0, (1.0 / eta - (1.0 - epsilon)) / epsilon);
    std::normal_distribution<double> from_p1(p1.mean(0), 1.0);
    std::normal_distribution<double> from_p2(p2.mean(0), 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec out(n);
    for (Index i = 0; i < n;) {
        if (unif(rng) < w_p1) {
            out(i++) = from_p1(rng);
            continue;
        }
        // (p2 - p1)_+ by rejection from p2 with acceptance 1 - p1/p2.
        const double x = from_p2(rng);
        const double accept = 1.0 - density_p1(x) / density_p2(x);
        if (accept > 0.0 && unif(rng) < accept) out(i++) = x;
    }
    return out;
}

LowerBoundPair lower_bound_pair(double epsilon, double center, std::optional<double> alpha)
{
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw InvalidInput("lower-bound pair needs eps in (0, 0.1]");
    // Feasibility 1 - eps <= 1 / eta with eta = 1 + erf(alpha / sqrt 2); equality at
    // erf(alpha / sqrt 2) = eps / (1 - eps).
    const double alpha_max = std::sqrt(2.0) * boost::math::erf_inv(epsilon / (1.0 - epsilon));
    if (alpha && !(*alpha > 0.0 && *alpha <= alpha_max * (1.0 + 1e-12)))
        throw InvalidInput("lower-bound half-gap must lie in (0, " + std::to_string(alpha_max) + "]");
    LowerBoundPair pair;
    pair.epsilon = epsilon;
    pair.alpha = alpha ? std::min(*alpha, alpha_max) : alpha_max;
    pair.eta = 1.0 + std::erf(pair.alpha / std::sqrt(2.0));
    pair.p1 = GaussianParams{Vec::Constant(1, center - pair.alpha), Mat::Identity(1, 1)};
    pair.p2 = GaussianParams{Vec::Constant(1, center + pair.alpha), Mat::Identity(1, 1)};
    return pair;
}

bool GoodnessReport::passes(double eta) const
{
    return verdict_available && bounded && affine_margin <= eta && mean_margin <= eta && quadratic_mean_margin <= eta &&
           quadratic_square_margin <= eta && quartic_margin <= eta;
}

GoodnessReport goodness_check(const Mat& good, const GaussianParams& params, double eta, double delta, Index budget,
                              std::uint64_t seed)
{
    (void)eta;
    params.validate();
    if (good.cols() != params.dim()) throw InvalidInput("sample width does not match parameter dimension");
    GoodnessReport r;
    const Index n = good.rows();
    const Index d = good.cols();
    if (n == 0) return r;
    const Mat whiten = psd_inv_sqrt(params.covariance);
    const Mat y = (good.rowwise() - params.mean.transpose()) * whiten;

    r.mean_margin = (good.colwise().mean().transpose() - params.mean).norm();
    const double scale = static_cast<double>(d) * std::log(static_cast<double>(n) / delta);
    r.boundedness_ratio = y.rowwise().squaredNorm().maxCoeff() / std::max(scale, 1e-300);
    r.bounded = r.boundedness_ratio <= constants::kBoundednessFactor;
    r.probes = budget;
    if (budget <= 0) return r;
    r.verdict_available = true;

    // Reference draws for moments that have no convenient closed form.
    Rng ref_rng = make_rng(seed, 0);
    const Mat ref = standard_normal(200000, d, ref_rng);

    for (Index probe = 0; probe < budget; ++probe) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(probe) + 1);
        // Affine: <v, y> >= t in whitened coordinates.
        const Vec v = random_unit_vector(d, rng);
        const double t = standard_normal(1, rng)(0);
        const double emp = ((y * v).array() >= t).cast<double>().mean();
        r.affine_margin = std::max(r.affine_margin, std::abs(emp - normal_sf(t)));

        // Even quadratic with unit variance under the reference Gaussian.
        const QuadraticPoly q(symmetrize(standard_normal(d, d, rng)));
        const Vec qv = q.evaluate(y);
        r.quadratic_mean_margin = std::max(r.quadratic_mean_margin, std::abs(qv.mean()));
        r.quadratic_square_margin = std::max(r.quadratic_square_margin, std::abs(qv.squaredNorm() / static_cast<double>(n) - 1.0));

        // Even quartic: q1 q2 + c q3, normalised by its reference spread.
        const QuadraticPoly q1(symmetrize(standard_normal(d, d, rng)));
        const QuadraticPoly q2(symmetrize(standard_normal(d, d, rng)));
        const double c = standard_normal(1, rng)(0);
        const Vec ref_vals = (q1.evaluate(ref).array() * q2.evaluate(ref).array()).matrix() + c * q.evaluate(ref);
        const Vec vals = (q1.evaluate(y).array() * q2.evaluate(y).array()).matrix() + c * qv;
        const double ref_mean = ref_vals.mean();
        const double ref_sd = std::sqrt((ref_vals.array() - ref_mean).square().mean());
        r.quartic_margin = std::max(r.quartic_margin, std::abs(vals.mean() - ref_mean) / ref_sd);
    }
    return r;
}

}  // namespace rgauss
