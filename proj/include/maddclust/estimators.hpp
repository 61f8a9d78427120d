#ifndef MADDCLUST_ESTIMATORS_HPP
#define MADDCLUST_ESTIMATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maddclust/sweep.hpp"
#include "maddclust/types.hpp"

namespace maddclust {

/// Additive per-cluster penalty for the penalized Dunn estimator:
/// zeta(d) = lambda * ln d.
struct PenaltySpec {
    double lambda = 0.015;
};
double pd_penalty(const PenaltySpec& penalty, std::size_t dim);

enum class JumpMode { Euclid, Madd };

/// Outcome of one estimator on one sweep. `statistic[k]` is the criterion
/// value at k (NaN where undefined); selection ties always go to the
/// smallest k.
struct EstimatorReport {
    std::string estimator;
    int k_lo = 1;
    int k_hi = 12;
    int k_hat = 0;
    std::vector<double> statistic;      // index k, size k_hi + 1
    std::vector<double> spread;         // gap only: the s_k margins
    std::vector<int> repetition_k;      // cv vote only: per-repetition minimizers
    std::vector<std::string> diagnostics;
};

/// Ratio-of-dispersion-drops estimator:
///   Diff(k) = (k-1)^{2/d} W_{k-1} - k^{2/d} W_k,  KL(k) = |Diff(k) / Diff(k+1)|,
/// maximized over k = 2..K. A zero denominator scores +inf and is flagged.
EstimatorReport kl_select(const KSweep& sweep);

/// Largest jump of the transformed dispersion d_k^{-t} (d_0^{-t} := 0) over
/// k = 1..K, with d_k = W_k / dim in Euclid mode and d_k = W_k in MADD mode.
EstimatorReport jump_select(const KSweep& sweep, double t, JumpMode mode);

/// Dunn index maximized over k = 2..K; a zero within-spread scores +inf.
EstimatorReport dunn_select(const KSweep& sweep);

/// Penalized Dunn over k = 1..K: PD(k) = D(k) - k * zeta(d), where the k = 1
/// numerator borrows the k = 2 between-cluster separation.
EstimatorReport pd_select(const KSweep& sweep, const PenaltySpec& penalty);

/// Gap statistic with a feature-wise uniform reference over the observed
/// ranges: Gap(k) = mean_b log W_k^(b) - log W_k, selecting the smallest k
/// with Gap(k) >= Gap(k+1) - s_{k+1}, s_k = sqrt(1 + 1/B) * sd_k. Every
/// bootstrap rebuilds the full pipeline of `algo` (including MADD matrices)
/// on the reference draw. Throws on zero dispersion (log undefined).
EstimatorReport gap_select(const DataMatrix& data, const BaseAlgorithm& algo, const KSweep& sweep,
                           int B, std::uint64_t seed);

struct CvReports {
    EstimatorReport averaged; // argmin of the mean instability curve
    EstimatorReport vote;     // mode of the per-repetition minimizers
};

/// Cross-validation instability: each repetition splits the rows into two
/// training thirds of size m (the largest multiple of 5 at most n/3) and a
/// held-out remainder, fits `algo` on both training parts for every
/// k = 2..K, extends each fit to the held-out rows by smallest mean squared
/// dissimilarity (MADD fits cross against the training part; Euclidean
/// k-means uses centroid distance), and scores the fraction of held-out
/// pairs on which the two extended partitions disagree.
CvReports cv_select(const DataMatrix& data, const BaseAlgorithm& algo, int k_cap, int B,
                    std::uint64_t seed);

} // namespace maddclust

#endif
