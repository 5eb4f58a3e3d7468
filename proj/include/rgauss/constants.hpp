#pragma once

// Every tunable constant of the estimators lives here. Values marked
// "measured" were fixed once from Monte-Carlo runs and frozen.

namespace rgauss::constants {

// Contamination model.
inline constexpr double kMaxContamination = 1.0 / 3.0;
inline constexpr double kTailShiftScale = 1.0;
inline constexpr double kBoundednessFactor = 4.0;  // goodness: |x-mu|^2 <= f * d log(n/delta)

// Mean pipeline accepts epsilon up to this value.
inline constexpr double kMaxMeanEpsilon = 1.0 / 6.0;

// Truncated chi-squared estimator: T = kappa * ln C, m = kappa_m * ln(2/tau) / eps^2.
inline constexpr double kTruncationKappa = 8.0;
inline constexpr double kTailSamplesKappa = 4.0;
inline constexpr long kMaxTailSamples = 1000000;

// Low-dimensional learner.
inline constexpr int kLowDimCap = 6;
inline constexpr int kLowDimBlock = 3;             // high-dimensional callers learn V in blocks of this size
inline constexpr int kMaxSubspaceCap = 24;         // largest configurable dim(V') of the mean filter
inline constexpr int kNetProbes = 100000;
inline constexpr double kNetSafety = 0.95;         // pack at this fraction of the requested radius
inline constexpr double kMedianSlack = 3.5;        // sampling slack in units of the median's sd
inline constexpr int kCircumscribeRefineLevels = 3;
inline constexpr int kCoreSetIterations = 400;

// Threshold search shared by all filters.
inline constexpr double kThresholdGridRatio = 1.1;
inline constexpr int kThresholdGridSteps = 400;

// Hanson-Wright constant (measured: dominates the chi-squared tail at t >= 0).
inline constexpr double kHansonWrightC0 = 1.0 / 8.0;

// Mean filters: trigger count C1*beta*ln(1/eps), hard-threshold C2*d*ln(n/delta),
// tail ratio C3*ln(1/eps) between the empirical tail and the inlier tail bound.
inline constexpr double kMeanC1 = 4.0;
inline constexpr double kMeanC2 = 16.0;
inline constexpr double kMeanC3 = 4.0;
inline constexpr double kInitEigenFactor = 1.0;     // initializer stops below 1 + f*eps*ln(1/eps)
inline constexpr double kNoisyMedianWidening = 1.0; // median slack grows by f*chi

// Covariance filters.
inline constexpr double kDeg2C = 1.0;               // eigenvalues above kDeg2C * xi enter V
inline constexpr double kCovC1 = 4.0;
inline constexpr double kCovC2 = 16.0;
inline constexpr double kCovC3 = 2.0;               // measured: inlier quartic tails reached 1.1 ln(1/eps) x reference
inline constexpr int kCovLowDimCap = 3;
inline constexpr int kQuarticCap = 6;
inline constexpr double kPolyVarianceMargin = 1.25; // noise on the top of E_S[p^2] in units of sqrt(15 D / n) (measured)
inline constexpr double kPolyFourthMoment = 15.0;   // E[p^4] of a unit quadratic, 1-d worst case
inline constexpr long kQuarticTailSamples = 100000;
inline constexpr double kInitCovFactor = 1.0;       // initial covariance filter stops below 1 + f*eps*ln(1/eps) + noise
inline constexpr double kInitCovXiFactor = 2.0;     // first contraction round assumes xi = f*eps*ln(1/eps) + noise
inline constexpr double kCovFreshFraction = 0.4;    // share of the covariance input held back for stitching
inline constexpr int kCovRoundCap = 6;              // contraction rounds that return an estimate

// Hypercontractive tail exp(-A t^{1/2}) for t >= onset, and |Q|_2 <= B sqrt(k) (measured).
inline constexpr double kHypercontractiveA = 1.0;
inline constexpr double kHypercontractiveOnset = 2.0;
inline constexpr double kQuarticNormB = 2.449489742783178;  // sqrt(6)

// Polynomial covers and covariance recovery.
inline constexpr int kPolyCap = 10;
inline constexpr double kPolyCoverRadius = 0.5;
inline constexpr double kImprovementC = 10.0;
inline constexpr double kChiSlabFactor = 8.0;      // slab half-width factor on ln(C) * eps

// Stitching.
inline constexpr int kStitchCap = 512;
inline constexpr double kStitchNormFactor = 1.0;    // a_v zeroed when |a_v| > f * ln(1/eps)
inline constexpr int kStitchMinSamplesPerDim = 10;
inline constexpr int kStitchFitIterations = 400;
inline constexpr double kStitchTopEpsilon = 0.125;  // top of the inner epsilon grid
inline constexpr double kStitchTournamentAccuracy = 0.1;

// End-to-end: the mean stage assumes |Sigma_hat^{-1/2} Sigma Sigma_hat^{-1/2} - I|_2 <= f * eps.
inline constexpr double kMeanStageChi = 2.0;

// Tournament Monte-Carlo draws per hypothesis: kTournamentDraws / eps^2.
inline constexpr double kTournamentDraws = 10.0;

}  // namespace rgauss::constants
