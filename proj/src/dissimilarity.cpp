#include "maddclust/dissimilarity.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace maddclust {

namespace {

// Deterministic pairwise (tree) reduction; error grows like log(len) instead
// of len for a running sum.
template <typename Term>
double pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
    const std::size_t len = hi - lo;
    if (len <= 32) {
        double s = 0.0;
        for (std::size_t q = lo; q < hi; ++q) s += term(q);
        return s;
    }
    const std::size_t mid = lo + len / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

double base_distance_unchecked(std::span<const double> x, std::span<const double> y,
                               const TransformSpec& spec) {
    const std::size_t d = x.size();
    const double mean =
        pairwise_sum(0, d, [&](std::size_t q) { return spec.apply_psi(std::abs(x[q] - y[q])); }) /
        static_cast<double>(d);
    return spec.apply_h(mean);
}

} // namespace

void DissimilarityMatrix::validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (values_[i * n_ + i] != 0.0)
            throw std::invalid_argument("DissimilarityMatrix: nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = values_[i * n_ + j];
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("DissimilarityMatrix: invalid entry at (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
            if (v != values_[j * n_ + i])
                throw std::invalid_argument("DissimilarityMatrix: asymmetry at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
        }
    }
}

double base_distance(std::span<const double> x, std::span<const double> y, const TransformSpec& spec) {
    if (x.size() != y.size())
        throw std::invalid_argument("base_distance: dimension mismatch " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
    if (x.empty()) throw std::invalid_argument("base_distance: empty vectors");
    for (std::size_t q = 0; q < x.size(); ++q)
        if (!std::isfinite(x[q]) || !std::isfinite(y[q]))
            throw std::invalid_argument("base_distance: non-finite coordinate at " + std::to_string(q));
    return base_distance_unchecked(x, y, spec);
}

DissimilarityMatrix base_distance_matrix(const DataMatrix& data, const TransformSpec& spec) {
    const std::size_t n = data.rows();
    if (n == 0 || data.cols() == 0) throw std::invalid_argument("base_distance_matrix: empty data");
    data.ensure_finite();
    DissimilarityMatrix out(n, DissimilarityKind::BasePhi);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = data.row(i);
        for (std::size_t j = i + 1; j < n; ++j)
            out.set(i, j, base_distance_unchecked(xi, data.row(j), spec));
    }
    return out;
}

DissimilarityMatrix euclidean_distance_matrix(const DataMatrix& data) {
    const std::size_t n = data.rows();
    if (n == 0 || data.cols() == 0) throw std::invalid_argument("euclidean_distance_matrix: empty data");
    data.ensure_finite();
    const std::size_t d = data.cols();
    DissimilarityMatrix out(n, DissimilarityKind::BasePhi);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = data.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto xj = data.row(j);
            const double ss = pairwise_sum(0, d, [&](std::size_t q) {
                const double diff = xi[q] - xj[q];
                return diff * diff;
            });
            out.set(i, j, std::sqrt(ss));
        }
    }
    return out;
}

DissimilarityMatrix madd_matrix(const DissimilarityMatrix& base) {
    const std::size_t n = base.size();
    if (base.kind() != DissimilarityKind::BasePhi)
        throw std::invalid_argument("madd_matrix: input must be a base-phi matrix");
    if (n < 3) throw std::invalid_argument("madd_matrix: needs at least 3 observations, got " + std::to_string(n));
    DissimilarityMatrix out(n, DissimilarityKind::MaddRho);
    const double scale = 1.0 / static_cast<double>(n - 2);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ri = base.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto rj = base.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += std::abs(ri[k] - rj[k]);
            // the k = i and k = j terms both contribute |phi(i,j)|; drop them
            s -= 2.0 * ri[j];
            out.set(i, j, scale * s);
        }
    }
    return out;
}

std::vector<double> madd_cross(const DataMatrix& train, const DissimilarityMatrix& train_base,
                               std::span<const double> query, const TransformSpec& spec) {
    const std::size_t n = train.rows();
    if (n < 2) throw std::invalid_argument("madd_cross: needs at least 2 training rows");
    if (train_base.size() != n)
        throw std::invalid_argument("madd_cross: base matrix size does not match training rows");
    if (query.size() != train.cols())
        throw std::invalid_argument("madd_cross: query dimension mismatch");

    std::vector<double> phi_q(n);
    for (std::size_t z = 0; z < n; ++z) phi_q[z] = base_distance(query, train.row(z), spec);

    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const auto rj = train_base.row(j);
        double s = 0.0;
        for (std::size_t z = 0; z < n; ++z) s += std::abs(phi_q[z] - rj[z]);
        s -= std::abs(phi_q[j]); // z = j is excluded from the average
        out[j] = scale * s;
    }
    return out;
}

} // namespace maddclust
