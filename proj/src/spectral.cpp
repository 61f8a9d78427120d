#include "maddclust/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace maddclust {

double median_off_diagonal(const DissimilarityMatrix& dissim) {
    const std::size_t n = dissim.size();
    if (n < 2) throw std::invalid_argument("median_off_diagonal: needs at least 2 observations");
    std::vector<double> vals;
    vals.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) vals.push_back(dissim(i, j));
    std::sort(vals.begin(), vals.end());
    const std::size_t m = vals.size();
    return m % 2 == 1 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

SquareMatrix rbf_similarity(const DissimilarityMatrix& dissim, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("rbf_similarity: sigma must be positive");
    const std::size_t n = dissim.size();
    SquareMatrix w(n);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = dissim(i, j);
            const double s = std::exp(-v * v * inv);
            w(i, j) = s;
            w(j, i) = s;
        }
    }
    return w;
}

SpectralResult spectral(const DissimilarityMatrix& dissim, const SpectralConfig& config) {
    const std::size_t n = dissim.size();
    if (config.k < 1) throw std::invalid_argument("spectral: k must be >= 1");
    if (static_cast<std::size_t>(config.k) > n)
        throw std::invalid_argument("spectral: k exceeds the number of observations");

    const double sigma =
        config.sigma_rule == SigmaRule::MedianHeuristic ? median_off_diagonal(dissim) : config.sigma;
    if (!(sigma > 0.0))
        throw std::invalid_argument("spectral: non-positive bandwidth (degenerate dissimilarities)");

    const SquareMatrix w = rbf_similarity(dissim, sigma);

    Eigen::VectorXd degree(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += w(i, j);
        if (s <= 0.0)
            throw std::invalid_argument("spectral: isolated vertex at index " + std::to_string(i));
        degree(static_cast<Eigen::Index>(i)) = s;
    }

    Eigen::MatrixXd lap(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double di = 1.0 / std::sqrt(degree(static_cast<Eigen::Index>(i)));
        for (std::size_t j = 0; j < n; ++j) {
            const double dj = 1.0 / std::sqrt(degree(static_cast<Eigen::Index>(j)));
            const double norm = di * w(i, j) * dj;
            lap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (i == j ? 1.0 : 0.0) - norm;
        }
    }
    // guard against rounding asymmetry before the symmetric solver
    lap = 0.5 * (lap + lap.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral: eigensolver failed to converge");

    // eigenvalues come back ascending: the first k columns span the bottom
    const std::size_t k = static_cast<std::size_t>(config.k);
    DataMatrix embedding(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        double norm = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double v = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
            embedding(i, c) = v;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (std::size_t c = 0; c < k; ++c) embedding(i, c) /= norm;
    }

    KMeansConfig km = config.embed;
    km.k = config.k;
    SpectralResult out;
    out.assignment = kmeans_euclid(embedding, km);
    out.sigma = sigma;
    return out;
}

} // namespace maddclust
