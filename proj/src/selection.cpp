#include "rgauss/selection.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace rgauss {

Hypothesis gaussian_hypothesis(const GaussianParams& params, std::string label)
{
    params.validate();
    const Eigen::LLT<Mat> llt(params.covariance);
    if (llt.info() != Eigen::Success) throw InvalidInput("hypothesis covariance must be positive definite");
    const Mat l = llt.matrixL();
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    const double norm = -0.5 * (static_cast<double>(params.dim()) * std::log(2.0 * M_PI) + log_det);
    Hypothesis h;
    h.label = std::move(label);
    h.params = params;
    h.log_density = [l, mu = params.mean, norm](const Mat& x) -> Vec {
        const Mat c = (x.rowwise() - mu.transpose()).transpose();
        const Mat z = l.triangularView<Eigen::Lower>().solve(c);
        return (norm - 0.5 * z.colwise().squaredNorm().array()).matrix().transpose();
    };
    h.sampler = [params](Index n, Rng& rng) { return sample_gaussian(params, n, rng); };
    return h;
}

namespace {

// m(j, l) = fraction of rows where log f_j > log f_l.
std::vector<double> set_masses(const Mat& logs)
{
    const Index k = logs.cols();
    std::vector<double> out(static_cast<std::size_t>(k * k), 0.0);
    for (Index j = 0; j < k; ++j)
        for (Index l = 0; l < k; ++l)
            out[static_cast<std::size_t>(j * k + l)] = (logs.col(j).array() > logs.col(l).array()).cast<double>().mean();
    return out;
}

Mat evaluate_all(const std::vector<Hypothesis>& hs, const Mat& x, long& calls)
{
    Mat logs(x.rows(), static_cast<Index>(hs.size()));
    for (std::size_t j = 0; j < hs.size(); ++j) logs.col(static_cast<Index>(j)) = hs[j].log_density(x);
    calls += static_cast<long>(x.rows()) * static_cast<long>(hs.size());
    return logs;
}

}  // namespace

ScheffeTable::ScheffeTable(const std::vector<Hypothesis>& hypotheses, const Mat& samples, double epsilon,
                           std::uint64_t seed)
    : k_(static_cast<Index>(hypotheses.size()))
{
    if (hypotheses.empty()) throw InvalidInput("tournament needs at least one hypothesis");
    if (samples.rows() == 0) throw InvalidInput("tournament needs samples");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("tournament accuracy must lie in (0, 1)");
    empirical_ = set_masses(evaluate_all(hypotheses, samples, calls_));
    const auto draws = static_cast<Index>(std::ceil(constants::kTournamentDraws / (epsilon * epsilon)));
    model_.reserve(static_cast<std::size_t>(k_ * k_ * k_));
    for (Index i = 0; i < k_; ++i) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
        const Mat x = hypotheses[static_cast<std::size_t>(i)].sampler(draws, rng);
        const std::vector<double> m = set_masses(evaluate_all(hypotheses, x, calls_));
        model_.insert(model_.end(), m.begin(), m.end());
    }
}

double ScheffeTable::discrepancy(Index i, Index j, Index l) const
{
    const Index a = std::min(j, l);
    const Index b = std::max(j, l);
    const auto e = empirical_[static_cast<std::size_t>(a * k_ + b)];
    const auto p = model_[static_cast<std::size_t>((i * k_ + a) * k_ + b)];
    return std::abs(p - e);
}

Index ScheffeTable::contest(Index i, Index j) const
{
    const double di = discrepancy(i, i, j);
    const double dj = discrepancy(j, i, j);
    if (di < dj) return i;
    if (dj < di) return j;
    return std::min(i, j);
}

double ScheffeTable::worst_discrepancy(Index i) const
{
    double worst = 0.0;
    for (Index j = 0; j < k_; ++j)
        for (Index l = j + 1; l < k_; ++l) worst = std::max(worst, discrepancy(i, j, l));
    return worst;
}

TournamentResult tournament(const std::vector<Hypothesis>& hypotheses, const Mat& samples, double epsilon,
                            double delta, std::uint64_t seed)
{
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    TournamentResult out;
    if (hypotheses.size() == 1) return out;
    const ScheffeTable table(hypotheses, samples, epsilon, seed);
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < table.size(); ++i) {
        const double w = table.worst_discrepancy(i);
        if (w < best) {
            best = w;
            out.winner = i;
        }
    }
    out.density_calls = table.density_calls();
    return out;
}

std::vector<double> epsilon_grid(double eta, double grid_ratio, double top)
{
    if (!(eta > 0.0 && eta <= top)) throw InvalidInput("grid floor must lie in (0, top]");
    if (!(grid_ratio > 0.0)) throw InvalidInput("grid ratio must be positive");
    std::vector<double> grid;
    for (double e = eta; e <= top * (1.0 + 1e-12); e *= 1.0 + grid_ratio) grid.push_back(e);
    return grid;
}

GaussianParams eps_grid_select(const std::function<GaussianParams(double)>& estimator, double eta, double grid_ratio,
                               const Mat& samples, double delta, std::uint64_t seed)
{
    const std::vector<double> grid = epsilon_grid(eta, grid_ratio);
    std::vector<Hypothesis> hs;
    // A grid point below the true corruption may leave a filter without a valid
    // threshold; such runs produce no hypothesis.
    for (double e : grid) {
        try {
            hs.push_back(gaussian_hypothesis(estimator(e)));
        } catch (const GoodnessViolation&) {
        }
    }
    if (hs.empty()) throw GoodnessViolation("no grid point produced an estimate");
    const TournamentResult r = tournament(hs, samples, eta, delta, seed);
    return hs[static_cast<std::size_t>(r.winner)].params;
}

}  // namespace rgauss
