#ifndef MADDCLUST_DISSIMILARITY_HPP
#define MADDCLUST_DISSIMILARITY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "maddclust/transform.hpp"
#include "maddclust/types.hpp"

namespace maddclust {

enum class DissimilarityKind { BasePhi, MaddRho };

/// Symmetric nonnegative matrix with zero diagonal. The kind records whether
/// entries come from a base metric or from the MADD construction, so that
/// downstream code can refuse mismatched inputs.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    DissimilarityMatrix(std::size_t n, DissimilarityKind kind)
        : n_(n), kind_(kind), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    DissimilarityKind kind() const { return kind_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        values_[i * n_ + j] = v;
        values_[j * n_ + i] = v;
    }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
    const std::vector<double>& values() const { return values_; }

    /// Checks symmetry, zero diagonal, nonnegativity and finiteness.
    void validate() const;

private:
    std::size_t n_ = 0;
    DissimilarityKind kind_ = DissimilarityKind::BasePhi;
    std::vector<double> values_;
};

/// phi(x, y) = h( mean_q psi(|x_q - y_q|) ). The inner mean uses pairwise
/// (tree) summation so rounding error stays bounded for d in the thousands.
double base_distance(std::span<const double> x, std::span<const double> y, const TransformSpec& spec);

/// All pairwise base distances of the rows of data.
DissimilarityMatrix base_distance_matrix(const DataMatrix& data, const TransformSpec& spec);

/// Plain (unscaled) Euclidean distance matrix of the rows of data.
DissimilarityMatrix euclidean_distance_matrix(const DataMatrix& data);

/// MADD: rho(x_i, x_j) = (n-2)^{-1} sum_{k != i,j} |phi(x_i, x_k) - phi(x_j, x_k)|.
/// Requires a base-phi matrix with n >= 3.
DissimilarityMatrix madd_matrix(const DissimilarityMatrix& base);

/// MADD of an unseen query point against each training row, with the average
/// taken over the other n-1 training rows:
///   out[j] = (n-1)^{-1} sum_{z != j} |phi(query, x_z) - phi(x_j, x_z)|.
/// train_base must be the base-phi matrix of train under the same spec.
std::vector<double> madd_cross(const DataMatrix& train, const DissimilarityMatrix& train_base,
                               std::span<const double> query, const TransformSpec& spec);

} // namespace maddclust

#endif
