#include "rgauss/highdim_cov.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/highdim_mean.hpp"
#include "rgauss/linalg.hpp"
#include "rgauss/poly_cov.hpp"
#include "rgauss/rng.hpp"
#include "rgauss/selection.hpp"
#include "rgauss/univariate.hpp"

#include <algorithm>
#include <cmath>

namespace rgauss {

namespace {

constexpr std::uint64_t kQuarticReferenceSeed = 0x9e4a11;

double log_inv(double eps) { return std::log(1.0 / eps); }

void check_cov_inputs(const Mat& samples, double epsilon, double xi, double delta)
{
    if (samples.rows() < 2) throw InsufficientSamples("covariance filter needs at least two rows");
    if (!(epsilon > 0.0 && epsilon <= constants::kMaxMeanEpsilon))
        throw InvalidInput("covariance pipeline supports eps in (0, 1/6]");
    if (!(xi >= 0.0)) throw InvalidInput("accuracy xi must be non-negative");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
}

Mat gram(const Mat& features)
{
    Mat k = Mat::Zero(features.cols(), features.cols());
    k.selfadjointView<Eigen::Lower>().rankUpdate(features.transpose());
    k = k.selfadjointView<Eigen::Lower>();
    return k / static_cast<double>(features.rows());
}

// Tail of a score under inlier draws, smoothed so that it never reaches zero.
struct EmpiricalTail {
    std::vector<double> sorted;

    explicit EmpiricalTail(const Vec& draws) : sorted(draws.data(), draws.data() + draws.size())
    {
        std::sort(sorted.begin(), sorted.end());
    }
    double operator()(double t) const
    {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        return static_cast<double>(sorted.end() - it + 1) / static_cast<double>(sorted.size() + 1);
    }
};

TailRule cov_rule(double epsilon, double delta, Index d, Index n)
{
    TailRule rule;
    rule.ratio = constants::kCovC3 * log_inv(epsilon);
    rule.floor = epsilon / (static_cast<double>(d) * std::log(static_cast<double>(n) / delta));
    rule.start_mass = epsilon;
    return rule;
}

Mat ambient_quadratic(const Subspace& w, const Mat& local) { return w.basis * local * w.basis.transpose(); }

Mat block_diag(const Mat& a, const Mat& b)
{
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

double fit_objective(const Mat& a, const Mat& v, const Mat& b)
{
    return ((a - v * b.transpose()).rowwise().norm()).mean();
}

// Minimises mean_j |a_j - B v_j| by averaged normalised subgradient steps from the least-squares fit.
Mat fit_stitch_map(const Mat& a, const Mat& v)
{
    const Mat ls = v.completeOrthogonalDecomposition().solve(a).transpose();
    const double scale = v.rowwise().norm().mean();
    const double radius = scale > 0.0 ? fit_objective(a, v, ls) / scale : 0.0;
    if (radius == 0.0) return ls;
    Mat b = ls;
    Mat avg = Mat::Zero(ls.rows(), ls.cols());
    int averaged = 0;
    const int iters = constants::kStitchFitIterations;
    for (int t = 0; t < iters; ++t) {
        const Mat res = a - v * b.transpose();
        Mat g = Mat::Zero(b.rows(), b.cols());
        for (Index j = 0; j < res.rows(); ++j) {
            const double r = res.row(j).norm();
            if (r > 0.0) g -= res.row(j).transpose() * v.row(j) / r;
        }
        const double gn = g.norm();
        if (gn == 0.0) break;
        b -= (radius / std::sqrt(static_cast<double>(t + 1))) * g / gn;
        if (t >= iters / 2) {
            avg += b;
            ++averaged;
        }
    }
    if (averaged == 0) return ls;
    avg /= static_cast<double>(averaged);
    return fit_objective(a, v, avg) < fit_objective(a, v, ls) ? avg : ls;
}

}  // namespace

double deg2_eigen_threshold(double xi, Index d, Index n) { return constants::kDeg2C * xi + spectral_noise(d, n); }

Index deg2_trigger(double epsilon)
{
    const auto c = static_cast<Index>(std::ceil(constants::kCovC1 * log_inv(epsilon)));
    return std::max<Index>(1, std::min<Index>(c, constants::kCovLowDimCap + 1));
}

FilterOutcome filter_cov_many_deg2_eig(const Mat& samples, double epsilon, double xi, double delta, CapUsage* usage)
{
    check_cov_inputs(samples, epsilon, xi, delta);
    const Index n = samples.rows();
    const Index d = samples.cols();
    const SymEigen e = sym_eigendecomp(second_moment(samples));
    const double threshold = 1.0 + deg2_eigen_threshold(xi, d, n);
    Index large = 0;
    while (large < d && e.values(d - 1 - large) > threshold) ++large;
    if (large == 0) return SubspaceOk{Subspace::zero(d)};

    const Index trigger = deg2_trigger(epsilon);
    const Index k = std::min(large, trigger);
    const Subspace vp(e.vectors.rightCols(k).rowwise().reverse());
    const Vec scores = vp.coords(samples).rowwise().squaredNorm().array() - static_cast<double>(k);
    TailRule rule = cov_rule(epsilon, delta, d, n);
    rule.hard_threshold = constants::kCovC2 * static_cast<double>(d) * std::log(static_cast<double>(n) / delta);
    rule.good_tail = [=](double t) { return shifted_chi_squared_tail(t, k, 0.0, 1.0 + xi); };
    if (const auto t = find_threshold(scores, rule)) return Filtered{rows_at_most(scores, *t)};

    if (large < trigger) return SubspaceOk{vp};
    if (usage && std::ceil(constants::kCovC1 * log_inv(epsilon)) > static_cast<double>(trigger))
        usage->cov_subspace = true;
    return SubspaceOk{Subspace(vp.basis.leftCols(constants::kCovLowDimCap))};
}

double deg4_excess_threshold(Index poly_dim, Index n)
{
    return constants::kPolyVarianceMargin *
           std::sqrt(constants::kPolyFourthMoment * static_cast<double>(poly_dim) / static_cast<double>(n));
}

Mat quadratic_moment_model(const PolySubspace& basis, const Mat& c)
{
    const Index k = basis.dim();
    const Index d = c.rows();
    Vec shift(k);
    std::vector<Mat> cm;
    for (Index a = 0; a < k; ++a) {
        const Mat& m = basis.basis[static_cast<std::size_t>(a)];
        if (m.rows() != d) throw InvalidInput("basis does not match covariance size");
        shift(a) = (m.cwiseProduct(c).sum() - m.trace());
        cm.push_back(m * c);
    }
    Mat out(k, k);
    for (Index a = 0; a < k; ++a)
        for (Index b = a; b < k; ++b) {
            const double v = cm[static_cast<std::size_t>(a)].cwiseProduct(cm[static_cast<std::size_t>(b)].transpose()).sum() +
                             0.5 * shift(a) * shift(b);
            out(a, b) = v;
            out(b, a) = v;
        }
    return out;
}

Index deg4_trigger(double epsilon, int cap)
{
    const double l = log_inv(epsilon);
    const auto c = static_cast<Index>(std::ceil(l * l * l * l));
    return std::max<Index>(1, std::min<Index>(c, cap));
}

FilterOutcome filter_cov_many_deg4_eig(const Mat& samples, double epsilon, double xi, double delta, const Subspace& w,
                                       int cap, CapUsage* usage)
{
    check_cov_inputs(samples, epsilon, xi, delta);
    if (w.ambient_dim() != samples.cols()) throw InvalidInput("subspace does not match sample width");
    if (cap < 1) throw InvalidInput("k cap must be at least 1");
    const Index n = samples.rows();
    const Index d = samples.cols();
    const Index wd = w.dim();
    if (wd == 0) return PolyBasisOk{};

    const Mat y = w.coords(samples);
    const Mat c = second_moment(y);
    const PolySubspace canon = PolySubspace::quadratics_on(Subspace::full(wd));
    const SymEigen e = sym_eigendecomp(gram(canonical_quadratic_features(y)) - quadratic_moment_model(canon, c));
    const Index dim = e.values.size();
    const double threshold = deg4_excess_threshold(dim, n);
    Index m = 0;
    while (m < dim && e.values(dim - 1 - m) > threshold) ++m;

    auto local_poly = [&](Index j) { return canon.element(e.vectors.col(dim - 1 - j)); };
    auto basis_of = [&](Index count) {
        PolyBasisOk out;
        for (Index j = 0; j < count; ++j) out.basis.basis.push_back(ambient_quadratic(w, local_poly(j)));
        return out;
    };

    if (m == 0) return PolyBasisOk{};
    const Index k = deg4_trigger(epsilon, cap);
    const Index used = std::min(m, k);
    QuarticHarmonic q;
    for (Index j = 0; j < used; ++j) q.source.emplace_back(local_poly(j));
    const Vec scores = q.evaluate(y).cwiseAbs();

    // Inlier reference from a robust covariance: outliers inflate the second moment and would hide themselves.
    Rng rng = make_rng(kQuarticReferenceSeed, static_cast<std::uint64_t>(wd));
    const Mat root = psd_sqrt(pairwise_mad_covariance(y));
    const Mat ref = standard_normal(constants::kQuarticTailSamples, wd, rng) * root;
    const EmpiricalTail tail(q.evaluate(ref).cwiseAbs());

    TailRule rule = cov_rule(epsilon, delta, d, n);
    rule.hard_threshold = constants::kCovC2 * static_cast<double>(d * d) * std::sqrt(static_cast<double>(used)) *
                          std::log(static_cast<double>(n));
    rule.good_tail = [&tail](double t) { return tail(t); };
    if (usage && m >= k) {
        const double l = log_inv(epsilon);
        if (std::ceil(l * l * l * l) > static_cast<double>(k)) usage->quartic = true;
    }
    if (const auto t = find_threshold(scores, rule)) return Filtered{rows_at_most(scores, *t)};
    return basis_of(used);
}

Mat stitching_conditional_map(const Mat& sigma, const Subspace& v, const Subspace& w)
{
    const Index d = sigma.rows();
    if (sigma.cols() != d || v.ambient_dim() != d || w.ambient_dim() != d)
        throw InvalidInput("covariance and subspaces disagree in dimension");
    const Mat precision = sigma.llt().solve(Mat::Identity(d, d));
    const Mat cond = (precision + v.projector()).llt().solve(Mat::Identity(d, d));
    return w.basis.transpose() * cond * v.basis;
}

StitchReport stitching(const Mat& fresh, const Subspace& v, const Subspace& w, double xi, double eta, double epsilon,
                       double tau, std::uint64_t seed, int m_cap)
{
    const Index d = fresh.cols();
    if (v.ambient_dim() != d || w.ambient_dim() != d || v.dim() + w.dim() != d)
        throw InvalidInput("V and W must split the sample space");
    if ((v.basis.transpose() * w.basis).cwiseAbs().maxCoeff() > 1e-9 && v.dim() > 0 && w.dim() > 0)
        throw InvalidInput("V and W must be orthogonal");
    if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("eta must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon <= constants::kMaxMeanEpsilon)) throw InvalidInput("eps must lie in (0, 1/6]");
    if (!(tau > 0.0 && tau < 1.0)) throw InvalidInput("tau must lie in (0, 1)");
    if (xi < 0.0) throw InvalidInput("accuracy xi must be non-negative");
    if (m_cap < 1) throw InvalidInput("stitch-m cap must be at least 1");

    const Index k = v.dim();
    const Index wd = w.dim();
    StitchReport out;
    out.b = Mat::Zero(wd, k);
    out.sigma0 = Mat::Identity(d, d);
    if (k == 0 || wd == 0) return out;

    std::vector<double> grid;
    const double floor_eps = std::min(eta, constants::kMaxMeanEpsilon);
    for (double e = constants::kStitchTopEpsilon; e > floor_eps; e /= 2.0) grid.push_back(e);
    grid.push_back(floor_eps);
    const double chi = eta + xi * xi;
    const Index min_rows = static_cast<Index>(constants::kStitchMinSamplesPerDim) * wd;
    const double norm_bound = constants::kStitchNormFactor * log_inv(epsilon);

    const Mat zv = v.coords(fresh);
    const Mat zw = w.coords(fresh);
    Rng vrng = make_rng(seed, 0);
    const Mat conds = std::sqrt(2.0) * standard_normal(m_cap, k, vrng);
    out.draws = m_cap;

    std::vector<Vec> used_v;
    std::vector<Vec> used_a;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Index j = 0; j < conds.rows(); ++j) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(j) + 1);
        RowSet accepted;
        for (Index i = 0; i < zv.rows(); ++i)
            if (unif(rng) < std::exp(-0.5 * (zv.row(i) - conds.row(j)).squaredNorm())) accepted.push_back(i);
        if (static_cast<Index>(accepted.size()) < min_rows) {
            ++out.starved;
            continue;
        }
        const Mat y = select_rows(zw, accepted);
        std::vector<Hypothesis> hyps;
        for (double e : grid) {
            try {
                const Vec mu = recover_mean_noisy(y, e, tau, 1.0, chi);
                hyps.push_back(gaussian_hypothesis(GaussianParams{mu, Mat::Identity(wd, wd)}));
            } catch (const GoodnessViolation&) {
            } catch (const InsufficientSamples&) {
            }
        }
        if (hyps.empty()) {
            ++out.starved;
            continue;
        }
        const Index win = hyps.size() == 1
                              ? 0
                              : tournament(hyps, y, constants::kStitchTournamentAccuracy, tau,
                                           mix_seed(seed, static_cast<std::uint64_t>(j) + 1))
                                    .winner;
        Vec a = hyps[static_cast<std::size_t>(win)].params.mean;
        if (a.norm() > norm_bound) {
            a.setZero();
            ++out.zeroed;
        }
        used_v.push_back(conds.row(j).transpose());
        used_a.push_back(a);
    }
    if (used_v.empty()) throw InsufficientSamples("every stitching conditioning vector was starved of rows");

    Mat vm(static_cast<Index>(used_v.size()), k);
    Mat am(static_cast<Index>(used_a.size()), wd);
    for (std::size_t j = 0; j < used_v.size(); ++j) {
        vm.row(static_cast<Index>(j)) = used_v[j].transpose();
        am.row(static_cast<Index>(j)) = used_a[j].transpose();
    }
    out.b = fit_stitch_map(am, vm);

    Mat blocks = Mat::Identity(d, d);
    blocks.bottomLeftCorner(wd, k) = 2.0 * out.b;
    blocks.topRightCorner(k, wd) = 2.0 * out.b.transpose();
    Mat frame(d, d);
    frame << v.basis, w.basis;
    out.sigma0 = symmetrize(frame * blocks * frame.transpose());
    return out;
}

FilterOutcome improve_cov(const Mat& samples, const Mat& fresh, double xi, double epsilon, double delta,
                          std::uint64_t seed, const Caps& caps, CapUsage* usage, BlockCovEstimate* block)
{
    check_cov_inputs(samples, epsilon, xi, delta);
    caps.validate();
    const Index d = samples.cols();
    if (fresh.cols() != d) throw InvalidInput("fresh rows do not match sample width");

    FilterOutcome deg2 = filter_cov_many_deg2_eig(samples, epsilon, xi, delta, usage);
    if (std::holds_alternative<Filtered>(deg2)) return deg2;
    const Subspace v = std::get<SubspaceOk>(deg2).v;
    const Subspace w = v.complement();

    FilterOutcome deg4 = filter_cov_many_deg4_eig(samples, epsilon, xi, delta, w, caps.quartic, usage);
    if (std::holds_alternative<Filtered>(deg4)) return deg4;
    const PolySubspace u1 = std::get<PolyBasisOk>(deg4).basis;

    const double tau = delta;
    const Index k = v.dim();
    const Index wd = w.dim();
    const Mat sigma_v = learn_cov_low_dim(samples, epsilon, xi, tau, v, mix_seed(seed, 1));
    const Mat robust = learn_mean_poly_low_d(samples, epsilon, u1, PolySubspace{}, second_moment(samples), xi, tau,
                                             mix_seed(seed, 2))
                           .sigma;
    const Mat sigma_w = symmetrize(w.basis.transpose() * robust * w.basis);
    if (block) *block = BlockCovEstimate{v, w, sigma_v, sigma_w, u1, xi};

    Mat frame(d, d);
    frame << v.basis, w.basis;
    if (k == 0) return CovEstimate{symmetrize(frame * sigma_w * frame.transpose())};
    if (wd == 0) return CovEstimate{symmetrize(frame * sigma_v * frame.transpose())};

    const Mat half = block_diag(psd_sqrt(sigma_v), psd_sqrt(sigma_w));
    const Mat inv_half = block_diag(psd_inv_sqrt(sigma_v), psd_inv_sqrt(sigma_w));
    const Mat z = fresh * frame * inv_half;
    const Mat id = Mat::Identity(d, d);
    const double eta = std::clamp(xi / 2.0, epsilon, constants::kStitchTopEpsilon);
    const StitchReport st = stitching(z, Subspace(id.leftCols(k)), Subspace(id.rightCols(wd)), xi, eta, epsilon, tau,
                                      mix_seed(seed, 3), caps.stitch_m);
    if (usage) usage->stitch = true;
    return CovEstimate{symmetrize(frame * half * st.sigma0 * half * frame.transpose())};
}

InitialCov initial_cov_estimate(const Mat& samples, double epsilon, std::uint64_t seed)
{
    if (!(epsilon >= 0.0 && epsilon <= constants::kMaxMeanEpsilon)) throw InvalidInput("eps must lie in [0, 1/6]");
    const Index d = samples.cols();
    if (samples.rows() <= d) throw InsufficientSamples("covariance initializer needs more rows than dimensions");
    InitialCov out;
    out.kept = all_rows(samples.rows());
    const PolySubspace canon = PolySubspace::quadratics_on(Subspace::full(d));
    for (Index round = 0; round < samples.rows(); ++round) {
        const Mat cur = select_rows(samples, out.kept);
        const Index n = cur.rows();
        if (n <= d) throw InsufficientSamples("covariance initializer removed almost every row");
        out.covariance = second_moment(cur);
        if (epsilon == 0.0) return out;
        const Mat y = cur * psd_inv_sqrt(out.covariance);
        const SymEigen e = sym_eigendecomp(gram(canonical_quadratic_features(y)));
        const Index dim = e.values.size();
        const double l = log_inv(epsilon);
        const double limit = 1.0 + constants::kInitCovFactor * epsilon * l +
                             constants::kPolyVarianceMargin *
                                 std::sqrt(constants::kPolyFourthMoment * static_cast<double>(dim) / static_cast<double>(n));
        if (e.values(dim - 1) <= limit) return out;

        const QuadraticPoly p(canon.element(e.vectors.col(dim - 1)));
        const Vec scores = p.evaluate(y).cwiseAbs();
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(round));
        const Mat z = standard_normal(constants::kQuarticTailSamples, d, rng) * psd_sqrt(pairwise_mad_covariance(y));
        const EmpiricalTail tail(p.evaluate(z).cwiseAbs());
        TailRule rule = cov_rule(epsilon, 0.01, d, n);
        rule.good_tail = [&tail](double t) { return tail(t); };
        const auto t = find_threshold(scores, rule);
        if (!t) return out;
        out.kept = compose_rows(out.kept, rows_at_most(scores, *t));
    }
    throw InternalError("covariance initializer exceeded its round budget");
}

Mat recover_cov(const Mat& samples, double epsilon, std::uint64_t seed, const CovOptions& opt)
{
    if (!(epsilon >= 0.0 && epsilon <= constants::kMaxMeanEpsilon)) throw InvalidInput("eps must lie in [0, 1/6]");
    if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    opt.caps.validate();
    const Index n = samples.rows();
    const Index d = samples.cols();
    if (n <= 2 * (d + 1)) throw InsufficientSamples("covariance recovery needs more than 2(d+1) rows");
    if (epsilon == 0.0) return second_moment(samples);

    const auto n_fresh = static_cast<Index>(std::floor(constants::kCovFreshFraction * static_cast<double>(n)));
    Rng rng = make_rng(seed, 0);
    const RowSet perm = random_permutation(n, rng);
    RowSet main_rows(perm.begin(), perm.end() - n_fresh);
    RowSet fresh_rows(perm.end() - n_fresh, perm.end());
    std::sort(main_rows.begin(), main_rows.end());
    std::sort(fresh_rows.begin(), fresh_rows.end());
    const Mat main = select_rows(samples, main_rows);
    const Mat fresh = select_rows(samples, fresh_rows);

    if (opt.observer) opt.observer(main_rows);
    const InitialCov init = initial_cov_estimate(main, epsilon, mix_seed(seed, 1));
    RowSet rows = init.kept;
    if (opt.observer && rows.size() < main_rows.size()) opt.observer(compose_rows(main_rows, rows));

    Mat t = psd_inv_sqrt(init.covariance);
    const double band = std::sqrt(static_cast<double>(d * (d + 1)) / static_cast<double>(main.rows()));
    double xi = constants::kInitCovXiFactor * epsilon * log_inv(epsilon) + band;
    const double xi_floor = epsilon + band;
    int estimates = 0;
    for (Index round = 0; round <= main.rows(); ++round) {
        const Mat cur = select_rows(main, rows) * t;
        if (cur.rows() <= d) throw InsufficientSamples("covariance filters removed almost every row");
        FilterOutcome out = improve_cov(cur, fresh * t, xi, epsilon, opt.delta,
                                        mix_seed(seed, 16 + static_cast<std::uint64_t>(round)), opt.caps, opt.usage);
        if (const auto* f = std::get_if<Filtered>(&out)) {
            if (f->kept.size() >= rows.size()) throw InternalError("covariance filter did not shrink the sample set");
            rows = compose_rows(rows, f->kept);
            if (opt.observer) opt.observer(compose_rows(main_rows, rows));
            continue;
        }
        t = t * psd_inv_sqrt(std::get<CovEstimate>(out).covariance);
        if (++estimates >= constants::kCovRoundCap || xi <= xi_floor) break;
        xi = std::max(xi / 2.0, xi_floor);
    }
    const Mat tt = t * t.transpose();
    return symmetrize(tt.llt().solve(Mat::Identity(d, d)));
}

}  // namespace rgauss
