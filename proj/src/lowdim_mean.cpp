#include "rgauss/lowdim_mean.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/rng.hpp"
#include "rgauss/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace rgauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat greedy_net(int k, double beta)
{
    if (k == 1) {
        Mat net(2, 1);
        net << 1.0, -1.0;
        return net;
    }
    Rng rng = make_rng(0x5eedf00dULL, static_cast<std::uint64_t>(k));
    Mat probes = standard_normal(constants::kNetProbes, k, rng);
    probes.rowwise().normalize();
    const double target = constants::kNetSafety * beta;
    Vec mind = Vec::Constant(probes.rows(), kInf);
    std::vector<Index> chosen;
    Index next = 0;
    while (true) {
        chosen.push_back(next);
        mind = mind.cwiseMin((probes.rowwise() - probes.row(next)).rowwise().norm());
        Index far = 0;
        if (mind.maxCoeff(&far) <= target) break;
        next = far;
    }
    Mat net(static_cast<Index>(chosen.size()), k);
    for (std::size_t i = 0; i < chosen.size(); ++i) net.row(static_cast<Index>(i)) = probes.row(chosen[i]);
    return net;
}

// Calls f(point) for every point of the cubic lattice x + h Z^k within `radius` of x.
template <class F>
void for_each_lattice_point(const Vec& x, double h, double radius, F&& f)
{
    const Index k = x.size();
    Vec z(k);
    const double r2 = radius * radius;
    auto rec = [&](auto&& self, Index j, double used) -> void {
        if (j == k) {
            f(Vec(x + h * z));
            return;
        }
        const double room = std::sqrt(std::max(0.0, r2 - used));
        const auto hi = static_cast<long>(std::floor(room / h));
        for (long i = -hi; i <= hi; ++i) {
            z(j) = static_cast<double>(i);
            const double step = h * static_cast<double>(i);
            self(self, j + 1, used + step * step);
        }
    };
    rec(rec, 0, 0.0);
}

double max_distance(const std::vector<Vec>& pts, const Vec& c, double stop_above = kInf)
{
    double worst = 0.0;
    for (const Vec& p : pts) {
        worst = std::max(worst, (p - c).squaredNorm());
        if (worst > stop_above * stop_above) return std::sqrt(worst);
    }
    return std::sqrt(worst);
}

}  // namespace

std::shared_ptr<const Mat> sphere_net(int k, double beta)
{
    if (k < 1 || k > constants::kLowDimCap) throw InvalidInput("sphere net dimension outside [1, cap]");
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("sphere net resolution must lie in (0, 1)");
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const Mat>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{k, beta}];
    if (!slot) slot = std::make_shared<const Mat>(greedy_net(k, beta));
    return slot;
}

double SlabBody::max_violation(const Vec& y) const
{
    if (y.size() != dim()) throw InvalidInput("point dimension does not match body");
    return ((directions * y - centers).array().abs() - half_width).maxCoeff();
}

SlabBody build_slab_body(const Mat& samples, const Subspace& v, double rho, double beta)
{
    if (samples.cols() != v.ambient_dim()) throw InvalidInput("subspace does not match sample width");
    if (samples.rows() == 0) throw InvalidInput("empty sample set");
    if (!(beta >= 0.0)) throw InvalidInput("slab half-width must be non-negative");
    SlabBody body;
    body.half_width = beta;
    body.directions = *sphere_net(static_cast<int>(v.dim()), rho);
    const Mat y = v.coords(samples);
    body.centers.resize(body.directions.rows());
    for (Index i = 0; i < body.directions.rows(); ++i)
        body.centers(i) = median(Vec(y * body.directions.row(i).transpose()));
    return body;
}

Vec proj_oracle(const SlabBody& body, const Vec& y, double rho_prime)
{
    // Goldfarb-Idnani dual active set for min |x - y|^2 / 2 s.t. n_i . x >= c_i,
    // each slab contributing n = v, c = b - w and n = -v, c = -(b + w).
    const Index k = body.dim();
    if (y.size() != k) throw InvalidInput("point dimension does not match body");
    const Index m = body.directions.rows();
    auto normal = [&](Index i) -> Vec {
        return i < m ? Vec(body.directions.row(i).transpose()) : Vec(-body.directions.row(i - m).transpose());
    };
    auto rhs = [&](Index i) { return i < m ? body.centers(i) - body.half_width : -(body.centers(i - m) + body.half_width); };
    if (!(rho_prime > 0.0)) throw InvalidInput("projection accuracy must be positive");
    // The solver is exact; rho_prime only caps the feasibility tolerance.
    const double tol = std::min(rho_prime, 1e-12 * (1.0 + body.centers.cwiseAbs().maxCoeff() + body.half_width));

    Vec x = y;
    std::vector<Index> active;
    std::vector<double> u;
    for (Index iter = 0; iter < 50 * (2 * m + k) + 100; ++iter) {
        Index p = -1;
        double worst = -tol;
        for (Index i = 0; i < 2 * m; ++i) {
            const double s = normal(i).dot(x) - rhs(i);
            if (s < worst) {
                worst = s;
                p = i;
            }
        }
        if (p < 0) return x;
        const Vec np = normal(p);
        double up = 0.0;
        for (;;) {
            const auto q = static_cast<Index>(active.size());
            Vec r(q);
            Vec z = np;
            if (q > 0) {
                Mat nmat(k, q);
                for (Index j = 0; j < q; ++j) nmat.col(j) = normal(active[static_cast<std::size_t>(j)]);
                r = (nmat.transpose() * nmat).ldlt().solve(nmat.transpose() * np);
                z = np - nmat * r;
            }
            double t1 = kInf;
            Index drop = -1;
            for (Index j = 0; j < q; ++j)
                if (r(j) > 1e-14 && u[static_cast<std::size_t>(j)] / r(j) < t1) {
                    t1 = u[static_cast<std::size_t>(j)] / r(j);
                    drop = j;
                }
            const double zz = z.squaredNorm();
            const double sp = np.dot(x) - rhs(p);
            const double t2 = zz > 1e-14 ? -sp / zz : kInf;
            const double t = std::min(t1, t2);
            if (t == kInf) throw GoodnessViolation("slab body is empty");
            x += (t2 == kInf ? 0.0 : t) * z;
            for (Index j = 0; j < q; ++j) u[static_cast<std::size_t>(j)] -= t * r(j);
            up += t;
            if (t2 <= t1) {
                active.push_back(p);
                u.push_back(up);
                break;
            }
            active.erase(active.begin() + drop);
            u.erase(u.begin() + drop);
        }
    }
    throw InternalError("projection oracle did not converge");
}

std::vector<Vec> circumscribe_net(double radius, double rho, const ProjectionOracle& oracle, const Vec& x,
                                  const DistanceBound& bound)
{
    if (!(radius > 0.0) || !(rho > 0.0 && rho < 1.0)) throw InvalidInput("circumscribe needs R > 0 and rho in (0, 1)");
    const Index k = x.size();
    std::vector<Vec> out;
    if (k == 0) {
        out.push_back(x);
        return out;
    }
    const double res = rho * radius / 3.0;
    const double h = 2.0 * res / std::sqrt(static_cast<double>(k));
    const double keep = 2.0 * rho * radius / 3.0;
    for_each_lattice_point(x, h, 2.0 * radius + res, [&](const Vec& v) {
        if (bound && bound(v) > keep) return;
        Vec u = oracle(v);
        if ((v - u).norm() <= keep) out.push_back(std::move(u));
    });
    return out;
}

Vec circumscribe(double radius, double rho, const ProjectionOracle& oracle, const Vec& x, const DistanceBound& bound)
{
    const std::vector<Vec> net = circumscribe_net(radius, rho, oracle, x, bound);
    const Index k = x.size();
    if (k == 0) return x;
    if (net.empty()) throw GoodnessViolation("body has no net points");

    // Approximate minimum enclosing ball; its farthest points form a core set.
    Vec c = net.front();
    std::vector<Vec> core;
    for (int it = 1; it <= constants::kCoreSetIterations; ++it) {
        std::size_t far = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < net.size(); ++i) {
            const double dd = (net[i] - c).squaredNorm();
            if (dd > best) {
                best = dd;
                far = i;
            }
        }
        if (std::none_of(core.begin(), core.end(), [&](const Vec& p) { return (p - net[far]).norm() == 0.0; }))
            core.push_back(net[far]);
        c += (net[far] - c) / static_cast<double>(it + 1);
    }

    auto scan = [&](const Vec& around, double h, double reach, Vec& best_point, double& best_val) {
        for_each_lattice_point(around, h, reach, [&](const Vec& v) {
            if (max_distance(core, v) >= best_val) return;
            const double exact = max_distance(net, v, best_val);
            if (exact < best_val) {
                best_val = exact;
                best_point = v;
            }
        });
    };

    const double res = rho * radius / 3.0;
    const double h = 2.0 * res / std::sqrt(static_cast<double>(k));
    Vec best_point = x + h * ((c - x) / h).array().round().matrix();
    double best_val = max_distance(net, best_point);
    scan(x, h, 2.0 * radius + res, best_point, best_val);
    const double accept = std::sqrt(2.0) * (1.0 + rho) * radius;
    if (best_val > accept) throw InternalError("no candidate center within the circumscribing radius");

    double step = h;
    for (int level = 0; level < constants::kCircumscribeRefineLevels; ++level) {
        const Vec around = best_point;
        const double reach = step * std::sqrt(static_cast<double>(k));
        step /= 4.0;
        scan(around, step, reach, best_point, best_val);
    }
    return best_point;
}

double median_slab_width(double epsilon, double gamma, Index d, Index n, Index directions, double delta, double chi)
{
    if (!(epsilon >= 0.0 && epsilon < 0.5)) throw InvalidInput("epsilon out of range");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    if (n < 1 || d < 1) throw InvalidInput("slab width needs samples");
    // Worst-case shift of a median under an eps fraction of outliers solves (1 - eps) Phi(t) = 1/2.
    const double shift = epsilon > 0.0 ? normal_quantile(0.5 / (1.0 - epsilon)) : 0.0;
    const double sd = std::sqrt(M_PI / 2.0) / std::sqrt(static_cast<double>(n));
    const double z = std::max(constants::kMedianSlack,
                              std::sqrt(2.0 * std::log(2.0 * static_cast<double>(std::max<Index>(directions, 1)) / delta)));
    const double slack = gamma * epsilon / static_cast<double>(d);
    return (shift + z * sd + slack) * (1.0 + constants::kNoisyMedianWidening * chi);
}

Vec learn_mean_low_d(const Subspace& v, double gamma, double epsilon, double delta, const Mat& samples, double rho,
                     double chi)
{
    if (samples.cols() != v.ambient_dim()) throw InvalidInput("subspace does not match sample width");
    if (v.dim() > constants::kLowDimCap) throw InvalidInput("subspace dimension above the low-dimensional cap");
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidInput("net resolution must lie in (0, 1)");
    if (samples.rows() == 0) throw InvalidInput("empty sample set");
    const Index k = v.dim();
    if (k == 0) return Vec::Zero(v.ambient_dim());

    const auto net = sphere_net(static_cast<int>(k), rho);
    const double beta = median_slab_width(epsilon, gamma, samples.cols(), samples.rows(), net->rows(), delta, chi);
    const SlabBody body = build_slab_body(samples, v, rho, beta);

    const Mat y = v.coords(samples);
    Vec start(k);
    for (Index j = 0; j < k; ++j) start(j) = median(Vec(y.col(j)));
    const Vec x0 = proj_oracle(body, start);

    const double radius = beta / (1.0 - rho);
    const Vec center = circumscribe(
        radius, rho, [&](const Vec& p) { return proj_oracle(body, p); }, x0,
        [&](const Vec& p) { return body.max_violation(p); });
    return v.basis * center;
}

Vec learn_mean_low_d_blocked(const Subspace& v, double gamma, double epsilon, double delta, const Mat& samples,
                             double rho, double chi)
{
    Vec out = Vec::Zero(v.ambient_dim());
    for (Index start = 0; start < v.dim(); start += constants::kLowDimBlock) {
        const Index width = std::min<Index>(constants::kLowDimBlock, v.dim() - start);
        out += learn_mean_low_d(Subspace(v.basis.middleCols(start, width)), gamma, epsilon, delta, samples, rho, chi);
    }
    return out;
}

double low_d_error_bound(Index k, double gamma, double epsilon, double delta, Index d, Index n, double rho, double chi)
{
    if (k == 0) return 0.0;
    const Index blocks = (k + constants::kLowDimBlock - 1) / constants::kLowDimBlock;
    const int width = static_cast<int>(std::min<Index>(k, constants::kLowDimBlock));
    const double beta = median_slab_width(epsilon, gamma, d, n, sphere_net(width, rho)->rows(), delta, chi);
    return std::sqrt(static_cast<double>(blocks)) * std::sqrt(2.0) * (1.0 + 2.0 * rho) * beta / (1.0 - rho);
}

}  // namespace rgauss
