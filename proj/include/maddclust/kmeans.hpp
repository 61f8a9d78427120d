#ifndef MADDCLUST_KMEANS_HPP
#define MADDCLUST_KMEANS_HPP

#include <cstdint>

#include "maddclust/dissimilarity.hpp"
#include "maddclust/types.hpp"

namespace maddclust {

struct KMeansConfig {
    int k = 2;
    int n_init = 10;   // independent restarts; best objective wins
    int max_iter = 100;
    std::uint64_t seed = 0;
};

/// Clustering objective on a dissimilarity matrix:
///   Phi* = sum_r (2 |C_r|)^{-1} sum_{z,w in C_r} D(z,w)^2
/// with the inner sum over ordered pairs.
double objective_phi_star(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment);

/// Sum of squared Euclidean distances of rows to their cluster means.
double objective_euclid(const DataMatrix& data, const ClusterAssignment& assignment);

/// k-means acting directly on a dissimilarity matrix (intended for MADD).
/// Each restart seeds k observation indices with squared-dissimilarity
/// proportional sampling, then repeats full passes assigning every point to
/// argmin_j mean_{z in C_j} D(x,z)^2 (ties to the lowest cluster index) until
/// labels stop changing, a pass fails to improve Phi*, or max_iter. A cluster
/// emptied by a pass is re-seeded with the point farthest (by that same mean)
/// from its own cluster. Restart r draws from a stream derived from
/// (config.seed, r), so results do not depend on scheduling.
ClusterAssignment kmeans_madd(const DissimilarityMatrix& dissim, const KMeansConfig& config);

/// Lloyd's algorithm with mean centroids and squared-distance seeding; the
/// restart and empty-cluster conventions match kmeans_madd.
ClusterAssignment kmeans_euclid(const DataMatrix& data, const KMeansConfig& config);

} // namespace maddclust

#endif
