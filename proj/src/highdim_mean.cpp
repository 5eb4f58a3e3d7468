#include "rgauss/highdim_mean.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/linalg.hpp"
#include "rgauss/lowdim_mean.hpp"
#include "rgauss/univariate.hpp"

#include <cmath>

namespace rgauss {

namespace {

void check_inputs(const Mat& samples, double epsilon, const MeanOptions& opt)
{
    if (samples.rows() < 2) throw InsufficientSamples("mean estimation needs at least two rows");
    if (!(epsilon > 0.0 && epsilon <= constants::kMaxMeanEpsilon))
        throw InvalidInput("mean pipeline supports eps in (0, 1/6]");
    if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw InvalidInput("net resolution must lie in (0, 1)");
    if (!(opt.beta > 0.0) || opt.gamma < 0.0 || opt.chi < 0.0) throw InvalidInput("invalid filter parameters");
    if (opt.lowdim_cap < 1 || opt.lowdim_cap > constants::kMaxSubspaceCap) throw InvalidInput("low-dim cap out of range");
}

double log_inv(double eps) { return std::log(1.0 / eps); }

TailRule mean_rule(double epsilon, const MeanOptions& opt, Index d, Index n)
{
    TailRule rule;
    const double lg = std::log(static_cast<double>(n) / opt.delta);
    rule.ratio = constants::kMeanC3 * log_inv(epsilon);
    rule.floor = opt.gamma * epsilon / (static_cast<double>(d) * lg);
    rule.hard_threshold = constants::kMeanC2 * static_cast<double>(d) * lg;
    rule.start_mass = epsilon;
    return rule;
}

}  // namespace

double mean_eigen_threshold(double epsilon, const MeanOptions& opt, Index d, Index n)
{
    return 1.0 + epsilon / opt.beta + opt.chi + spectral_noise(d, n);
}

Index many_eig_trigger(double epsilon, const MeanOptions& opt)
{
    const auto c = static_cast<Index>(std::ceil(constants::kMeanC1 * opt.beta * log_inv(epsilon)));
    return std::max<Index>(1, std::min<Index>(c, opt.lowdim_cap));
}

namespace {

struct ManyEigStep {
    FilterOutcome outcome;
    bool threshold_missing = false;
};

ManyEigStep many_eig_step(const Mat& samples, double epsilon, const MeanOptions& opt)
{
    check_inputs(samples, epsilon, opt);
    const Index n = samples.rows();
    const Index d = samples.cols();
    const SymEigen e = sym_eigendecomp(empirical_moments(samples).matrix);
    const double threshold = mean_eigen_threshold(epsilon, opt, d, n);
    Index large = 0;
    while (large < d && e.values(d - 1 - large) > threshold) ++large;
    const Subspace v(e.vectors.rightCols(large).rowwise().reverse());
    const Index trigger = many_eig_trigger(epsilon, opt);
    if (large < trigger) return {SubspaceOk{v}, false};
    if (opt.usage && std::ceil(constants::kMeanC1 * opt.beta * log_inv(epsilon)) > static_cast<double>(trigger))
        opt.usage->lowdim = true;

    const Subspace vp(v.basis.leftCols(trigger));
    const Vec mu = learn_mean_low_d_blocked(vp, opt.gamma, epsilon, opt.delta, samples, opt.alpha, opt.chi);
    const Vec centre = vp.basis.transpose() * mu;
    const Vec scores = (vp.coords(samples).rowwise() - centre.transpose()).rowwise().squaredNorm().array() -
                       static_cast<double>(trigger);

    TailRule rule = mean_rule(epsilon, opt, d, n);
    const double shift = low_d_error_bound(trigger, opt.gamma, epsilon, opt.delta, d, n, opt.alpha, opt.chi);
    rule.good_tail = [=](double t) { return shifted_chi_squared_tail(t, trigger, shift, 1.0 + opt.chi); };
    const auto t = find_threshold(scores, rule);
    if (!t) return {SubspaceOk{vp}, true};
    return {Filtered{rows_at_most(scores, *t)}, false};
}

}  // namespace

FilterOutcome filter_mean_many_eig(const Mat& samples, double epsilon, const MeanOptions& opt)
{
    ManyEigStep step = many_eig_step(samples, epsilon, opt);
    if (step.threshold_missing) throw GoodnessViolation("no filtering threshold despite many large eigenvalues");
    return std::move(step.outcome);
}

Vec filter_mean_few_eig(const Mat& samples, double epsilon, const MeanOptions& opt, const Subspace& v)
{
    check_inputs(samples, epsilon, opt);
    if (v.ambient_dim() != samples.cols()) throw InvalidInput("subspace does not match sample width");
    if (v.dim() > opt.lowdim_cap) throw InvalidInput("subspace dimension above the low-dimensional cap");
    const Vec mean = samples.colwise().mean().transpose();
    const Vec in_v = learn_mean_low_d_blocked(v, opt.gamma, epsilon, opt.delta, samples, opt.alpha, opt.chi);
    return in_v + (mean - v.projector() * mean);
}

FilterOutcome filter_mean_opt(const Mat& samples, double epsilon, const MeanOptions& opt)
{
    // Outliers spread thinly over many directions can raise the spectrum without
    // standing out in any degree-2 score; then the capped top directions are
    // learned robustly and the rest keeps the empirical mean.
    FilterOutcome out = many_eig_step(samples, epsilon, opt).outcome;
    if (const auto* ok = std::get_if<SubspaceOk>(&out)) return MeanEstimate{filter_mean_few_eig(samples, epsilon, opt, ok->v)};
    return out;
}

InitialMean initial_mean_estimate(const Mat& samples, double epsilon, double chi)
{
    if (samples.rows() < 2) throw InsufficientSamples("initial mean needs at least two rows");
    if (!(epsilon >= 0.0 && epsilon <= constants::kMaxContamination)) throw InvalidInput("epsilon out of range");
    const Index d = samples.cols();
    InitialMean out;
    out.kept = all_rows(samples.rows());
    if (epsilon == 0.0) {
        out.mean = samples.colwise().mean().transpose();
        return out;
    }
    const double ratio = constants::kMeanC3 * log_inv(epsilon);
    for (Index round = 0; round < samples.rows(); ++round) {
        const Mat cur = select_rows(samples, out.kept);
        const Index n = cur.rows();
        if (n < 2) throw InsufficientSamples("initial filter removed almost every row");
        const Moments mom = empirical_moments(cur);
        const SymEigen e = sym_eigendecomp(mom.matrix);
        const double limit =
            1.0 + constants::kInitEigenFactor * epsilon * log_inv(epsilon) + chi + spectral_noise(d, n);
        if (e.values(d - 1) <= limit) {
            out.mean = mom.mean;
            return out;
        }
        const Vec proj = cur * e.vectors.col(d - 1);
        const double med = median(proj);
        const Vec scores = (proj.array() - med).abs();
        const double shift = (epsilon < 0.5 ? normal_quantile(0.5 / (1.0 - epsilon)) : 1.0) +
                             constants::kMedianSlack * std::sqrt(M_PI / 2.0 / static_cast<double>(n));
        TailRule rule;
        rule.ratio = ratio;
        rule.floor = epsilon / (static_cast<double>(d) * std::log(static_cast<double>(n) / 0.01));
        rule.start_mass = epsilon;
        const double sd = std::sqrt(1.0 + chi);
        rule.good_tail = [=](double t) { return 2.0 * normal_sf((t - shift) / sd); };
        const auto t = find_threshold(scores, rule);
        if (!t) {
            out.mean = mom.mean;
            return out;
        }
        out.kept = compose_rows(out.kept, rows_at_most(scores, *t));
    }
    throw InternalError("initial filter exceeded its round budget");
}

Vec recover_mean(const Mat& samples, double epsilon, const MeanOptions& opt)
{
    check_inputs(samples, epsilon, opt);
    const Vec centre = initial_mean_estimate(samples, epsilon, opt.chi).mean;
    const Mat shifted = samples.rowwise() - centre.transpose();
    RowSet rows = all_rows(samples.rows());
    for (Index round = 0; round <= samples.rows(); ++round) {
        const Mat cur = select_rows(shifted, rows);
        if (cur.rows() < 2) throw InsufficientSamples("filtering removed almost every row");
        FilterOutcome out = filter_mean_opt(cur, epsilon, opt);
        if (const auto* est = std::get_if<MeanEstimate>(&out)) return centre + est->mean;
        const auto& kept = std::get<Filtered>(out).kept;
        if (kept.size() >= rows.size()) throw InternalError("filter did not shrink the sample set");
        rows = compose_rows(rows, kept);
        if (opt.observer) opt.observer(rows);
    }
    throw InternalError("mean filter exceeded its round budget");
}

Vec recover_mean_noisy(const Mat& samples, double epsilon, double delta, double gamma, double chi,
                       const MeanOptions& base)
{
    MeanOptions opt = base;
    opt.delta = delta;
    opt.gamma = gamma;
    opt.chi = chi;
    return recover_mean(samples, epsilon, opt);
}

}  // namespace rgauss
