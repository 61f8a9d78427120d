#ifndef MADDCLUST_SPECTRAL_HPP
#define MADDCLUST_SPECTRAL_HPP

#include "maddclust/dissimilarity.hpp"
#include "maddclust/kmeans.hpp"
#include "maddclust/types.hpp"

namespace maddclust {

enum class SigmaRule { MedianHeuristic, Fixed };

struct SpectralConfig {
    int k = 2;
    SigmaRule sigma_rule = SigmaRule::MedianHeuristic;
    double sigma = 1.0;   // used when sigma_rule == Fixed
    KMeansConfig embed;   // k-means on the embedding; its k is overridden
};

struct SpectralResult {
    ClusterAssignment assignment;
    double sigma = 0.0;  // bandwidth actually used
};

/// Median of the off-diagonal entries of a dissimilarity matrix.
double median_off_diagonal(const DissimilarityMatrix& dissim);

/// Gaussian similarities s_ij = exp(-D_ij^2 / (2 sigma^2)); the diagonal is 1.
SquareMatrix rbf_similarity(const DissimilarityMatrix& dissim, double sigma);

/// Normalized-cut spectral clustering on any dissimilarity matrix: RBF
/// similarity graph, L = I - Deg^{-1/2} W Deg^{-1/2}, the k eigenvectors of
/// the smallest eigenvalues row-normalized, then Euclidean k-means on the
/// embedding. Throws on an isolated vertex (zero degree).
SpectralResult spectral(const DissimilarityMatrix& dissim, const SpectralConfig& config);

} // namespace maddclust

#endif
