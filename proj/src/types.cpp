#include "maddclust/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace maddclust {

DataMatrix::DataMatrix(std::size_t n, std::size_t d) : n_(n), d_(d), values_(n * d, 0.0) {
    if (d == 0 && n > 0) throw std::invalid_argument("DataMatrix: zero feature dimension");
}

DataMatrix::DataMatrix(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
    if (d == 0 && n > 0) throw std::invalid_argument("DataMatrix: zero feature dimension");
    if (values_.size() != n * d)
        throw std::invalid_argument("DataMatrix: value buffer size " + std::to_string(values_.size()) +
                                    " does not match " + std::to_string(n) + "x" + std::to_string(d));
    ensure_finite();
}

void DataMatrix::ensure_finite() const {
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (!std::isfinite(values_[idx]))
            throw std::invalid_argument("DataMatrix: non-finite entry at row " + std::to_string(idx / d_) +
                                        ", column " + std::to_string(idx % d_));
    }
}

void ClusterAssignment::validate() const {
    if (k <= 0) throw std::invalid_argument("ClusterAssignment: k must be positive");
    if (labels.empty()) throw std::invalid_argument("ClusterAssignment: no observations");
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int lab : labels) {
        if (lab < 1 || lab > k)
            throw std::invalid_argument("ClusterAssignment: label " + std::to_string(lab) +
                                        " outside 1.." + std::to_string(k));
        ++sizes[static_cast<std::size_t>(lab - 1)];
    }
    for (int j = 0; j < k; ++j)
        if (sizes[static_cast<std::size_t>(j)] == 0)
            throw std::invalid_argument("ClusterAssignment: cluster " + std::to_string(j + 1) + " is empty");
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int lab : labels) ++sizes[static_cast<std::size_t>(lab - 1)];
    return sizes;
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
    return out;
}

} // namespace maddclust
