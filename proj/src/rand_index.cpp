#include "maddclust/rand_index.hpp"

#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace maddclust {

namespace {

std::vector<std::size_t> compress_labels(std::span<const int> labels) {
    std::unordered_map<int, std::size_t> ids;
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], ids.size());
        out[i] = it->second;
    }
    return out;
}

double choose2(double m) { return m * (m - 1.0) / 2.0; }

} // namespace

double rand_index(std::span<const int> truth, std::span<const int> predicted) {
    const std::size_t n = truth.size();
    if (n != predicted.size()) throw std::invalid_argument("rand_index: length mismatch");
    if (n < 2) throw std::invalid_argument("rand_index: needs at least 2 items");

    const auto t = compress_labels(truth);
    const auto p = compress_labels(predicted);
    std::size_t kt = 0, kp = 0;
    for (std::size_t v : t) kt = std::max(kt, v + 1);
    for (std::size_t v : p) kp = std::max(kp, v + 1);

    // Contingency counts give the pair tallies without the O(n^2) loop.
    std::vector<double> joint(kt * kp, 0.0), row(kt, 0.0), col(kp, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[t[i] * kp + p[i]] += 1.0;
        row[t[i]] += 1.0;
        col[p[i]] += 1.0;
    }

    double same_both = 0.0;
    for (double c : joint) same_both += choose2(c);
    double same_truth = 0.0;
    for (double c : row) same_truth += choose2(c);
    double same_pred = 0.0;
    for (double c : col) same_pred += choose2(c);

    const double total = choose2(static_cast<double>(n));
    const double disagree = same_truth + same_pred - 2.0 * same_both;
    return disagree / total;
}

} // namespace maddclust
