#ifndef MADDCLUST_SWEEP_HPP
#define MADDCLUST_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "maddclust/dissimilarity.hpp"
#include "maddclust/hierarchy.hpp"
#include "maddclust/kmeans.hpp"
#include "maddclust/transform.hpp"
#include "maddclust/types.hpp"

namespace maddclust {

/// Within-cluster dispersion of a partition on a dissimilarity matrix:
///   W = sum_j (2 |C_j|)^{-1} sum_{z,w in C_j} D(z,w)^2.
double within_dispersion(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment);

/// The two halves of the Dunn ratio for one partition: the minimum mean
/// between-cluster dissimilarity and the maximum mean within-cluster
/// dissimilarity (singletons count 0 within).
struct DunnParts {
    double between_min = 0.0; // undefined for k = 1 (reported as NaN)
    double within_max = 0.0;
};
DunnParts dunn_parts(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment);

/// Dunn index between_min / within_max; +inf when within_max is 0.
double dunn_index(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment);

enum class BaseMethod { AverageLinkage, SingleLinkage, CompleteLinkage, KMeansMadd, KMeansEuclid };

/// The clustering routine a k-sweep (and the estimators on top of it) runs.
/// With `madd` set the method clusters on the MADD matrix built from that
/// base transform; otherwise it works with plain Euclidean geometry.
struct BaseAlgorithm {
    BaseMethod method = BaseMethod::AverageLinkage;
    std::optional<TransformSpec> madd = TransformSpec::rho0();
    int n_init = 10;
    int max_iter = 100;

    bool uses_madd() const { return madd.has_value(); }
    bool is_kmeans() const { return method == BaseMethod::KMeansMadd || method == BaseMethod::KMeansEuclid; }
    std::string name() const;
};
BaseAlgorithm base_algorithm_from_name(const std::string& name);

/// Partitions and per-k statistics for k = 1..k_cap+1 produced by one base
/// algorithm on one dataset. The extra slot past k_cap exists because the
/// dispersion-ratio estimator looks one k ahead.
struct KSweep {
    int k_cap = 12;
    std::size_t n = 0;
    std::size_t dim = 0;           // feature dimension of the underlying data
    bool madd_mode = false;
    std::vector<ClusterAssignment> assignment; // index k, valid 1..k_cap+1
    std::vector<double> W;                     // within dispersion, index k
    std::vector<double> between_min;           // Dunn numerator, NaN at k = 1
    std::vector<double> within_max;            // Dunn denominator

    const ClusterAssignment& at(int k) const { return assignment[static_cast<std::size_t>(k)]; }
};

/// Runs `algo` on `data` for every k in 1..k_cap+1 and collects the per-k
/// statistics. Hierarchical methods fit one dendrogram and cut it, so their
/// partitions are nested across k. k-means methods derive per-k seeds from
/// (seed, k).
KSweep build_ksweep(const DataMatrix& data, const BaseAlgorithm& algo, int k_cap, std::uint64_t seed);

/// The matrix `algo` clusters on and scores W against: the MADD matrix of
/// its transform, or the plain Euclidean distance matrix.
DissimilarityMatrix algorithm_dissimilarity(const DataMatrix& data, const BaseAlgorithm& algo);

/// One fit of `algo` at a single k (the harness uses this for Rand scoring
/// at the true class count).
ClusterAssignment fit_single_k(const DataMatrix& data, const BaseAlgorithm& algo, int k,
                               std::uint64_t seed);

} // namespace maddclust

#endif
