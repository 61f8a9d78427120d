#ifndef MADDCLUST_TYPES_HPP
#define MADDCLUST_TYPES_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace maddclust {

/// Dense row-major sample matrix: n observations by d features.
class DataMatrix {
public:
    DataMatrix() = default;
    DataMatrix(std::size_t n, std::size_t d);
    DataMatrix(std::size_t n, std::size_t d, std::vector<double> values);

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return d_; }
    bool empty() const { return n_ == 0; }

    double& operator()(std::size_t i, std::size_t q) { return values_[i * d_ + q]; }
    double operator()(std::size_t i, std::size_t q) const { return values_[i * d_ + q]; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * d_, d_}; }

    const std::vector<double>& values() const { return values_; }

    /// Throws std::invalid_argument if any entry is not finite.
    void ensure_finite() const;

private:
    std::size_t n_ = 0, d_ = 0;
    std::vector<double> values_;
};

/// Cluster labels in 1..k; every cluster non-empty.
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;

    std::size_t size() const { return labels.size(); }

    /// Throws std::invalid_argument on out-of-range labels or empty clusters.
    void validate() const;

    /// Per-cluster sizes, index = label - 1.
    std::vector<std::size_t> cluster_sizes() const;

    /// Per-cluster observation indices, index = label - 1.
    std::vector<std::vector<std::size_t>> members() const;
};

/// A sample together with its ground-truth class labels.
struct LabeledSample {
    DataMatrix data;
    std::vector<int> labels;
};

/// Plain dense square matrix (similarities, graph weights).
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

} // namespace maddclust

#endif
