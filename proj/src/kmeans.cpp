#include "maddclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "maddclust/rng.hpp"

namespace maddclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(const KMeansConfig& config, std::size_t n) {
    if (config.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(config.k) > n)
        throw std::invalid_argument("kmeans: k = " + std::to_string(config.k) + " exceeds n = " +
                                    std::to_string(n));
    if (config.n_init < 1) throw std::invalid_argument("kmeans: n_init must be >= 1");
    if (config.max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
}

// Squared-dissimilarity proportional seeding on an n*n row-major table of
// squared dissimilarities; returns k distinct row indices.
std::vector<std::size_t> seed_centers(std::size_t n, int k, std::mt19937_64& engine,
                                      const std::vector<double>& sq_to, std::size_t stride) {
    std::vector<std::size_t> centers;
    centers.reserve(static_cast<std::size_t>(k));
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centers.push_back(first(engine));
    std::vector<double> weight(n);
    for (std::size_t x = 0; x < n; ++x) weight[x] = sq_to[x * stride + centers[0]];

    std::vector<bool> is_center(n, false);
    is_center[centers[0]] = true;
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (double w : weight) total += w;
        std::size_t pick = n;
        if (total > 0.0) {
            std::uniform_real_distribution<double> unif(0.0, total);
            const double r = unif(engine);
            double cum = 0.0;
            for (std::size_t x = 0; x < n; ++x) {
                cum += weight[x];
                if (r < cum) {
                    pick = x;
                    break;
                }
            }
            if (pick == n) { // r landed on the tail of accumulated rounding
                for (std::size_t x = n; x-- > 0;)
                    if (weight[x] > 0.0) {
                        pick = x;
                        break;
                    }
            }
        }
        if (pick == n) { // all remaining weights zero (duplicate points)
            for (std::size_t x = 0; x < n; ++x)
                if (!is_center[x]) {
                    pick = x;
                    break;
                }
        }
        is_center[pick] = true;
        centers.push_back(pick);
        for (std::size_t x = 0; x < n; ++x) weight[x] = std::min(weight[x], sq_to[x * stride + pick]);
    }
    return centers;
}

} // namespace

double objective_phi_star(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment) {
    const std::size_t n = dissim.size();
    if (assignment.labels.size() != n) throw std::invalid_argument("objective_phi_star: size mismatch");
    assignment.validate();
    const auto groups = assignment.members();
    double total = 0.0;
    for (const auto& g : groups) {
        double s = 0.0;
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b) {
                const double v = dissim(g[a], g[b]);
                s += v * v;
            }
        total += s / static_cast<double>(g.size());
    }
    return total;
}

double objective_euclid(const DataMatrix& data, const ClusterAssignment& assignment) {
    const std::size_t n = data.rows(), d = data.cols();
    if (assignment.labels.size() != n) throw std::invalid_argument("objective_euclid: size mismatch");
    assignment.validate();
    const std::size_t k = static_cast<std::size_t>(assignment.k);
    std::vector<double> mean(k * d, 0.0);
    const auto sizes = assignment.cluster_sizes();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(assignment.labels[i] - 1);
        for (std::size_t q = 0; q < d; ++q) mean[j * d + q] += data(i, q);
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t q = 0; q < d; ++q) mean[j * d + q] /= static_cast<double>(sizes[j]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(assignment.labels[i] - 1);
        for (std::size_t q = 0; q < d; ++q) {
            const double diff = data(i, q) - mean[j * d + q];
            total += diff * diff;
        }
    }
    return total;
}

ClusterAssignment kmeans_madd(const DissimilarityMatrix& dissim, const KMeansConfig& config) {
    const std::size_t n = dissim.size();
    check_config(config, n);
    const std::size_t k = static_cast<std::size_t>(config.k);

    std::vector<double> sq(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = dissim(i, j);
            sq[i * n + j] = v * v;
        }

    // mean squared dissimilarity of every point to every cluster of `labels`
    const auto cluster_scores = [&](const std::vector<int>& labels, std::vector<double>& score,
                                    std::vector<std::size_t>& sizes) {
        std::fill(score.begin(), score.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t z = 0; z < n; ++z) {
            const std::size_t j = static_cast<std::size_t>(labels[z] - 1);
            ++sizes[j];
            const double* row = sq.data() + z * n;
            for (std::size_t x = 0; x < n; ++x) score[x * k + j] += row[x];
        }
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t j = 0; j < k; ++j)
                score[x * k + j] = sizes[j] > 0 ? score[x * k + j] / static_cast<double>(sizes[j]) : kInf;
    };

    const auto phi_star = [&](const std::vector<int>& labels) {
        std::vector<double> acc(k, 0.0);
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t ji = static_cast<std::size_t>(labels[i] - 1);
            ++sizes[ji];
            for (std::size_t j2 = i + 1; j2 < n; ++j2)
                if (labels[j2] == labels[i]) acc[ji] += sq[i * n + j2];
        }
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            if (sizes[j] > 0) total += acc[j] / static_cast<double>(sizes[j]);
        return total;
    };

    std::vector<int> best_labels;
    double best_phi = kInf;

    std::vector<double> score(n * k);
    std::vector<std::size_t> sizes(k);

    for (int restart = 0; restart < config.n_init; ++restart) {
        auto engine = rng::make_engine(config.seed, static_cast<std::uint64_t>(restart));
        const auto centers = seed_centers(n, config.k, engine, sq, n);

        std::vector<int> labels(n);
        for (std::size_t x = 0; x < n; ++x) {
            std::size_t arg = 0;
            double bestv = sq[x * n + centers[0]];
            for (std::size_t j = 1; j < k; ++j) {
                const double v = sq[x * n + centers[j]];
                if (v < bestv) {
                    bestv = v;
                    arg = j;
                }
            }
            labels[x] = static_cast<int>(arg) + 1;
        }

        double phi = phi_star(labels);
        for (int iter = 0; iter < config.max_iter; ++iter) {
            cluster_scores(labels, score, sizes);
            std::vector<int> next(n);
            for (std::size_t x = 0; x < n; ++x) {
                std::size_t arg = 0;
                double bestv = score[x * k];
                for (std::size_t j = 1; j < k; ++j)
                    if (score[x * k + j] < bestv) {
                        bestv = score[x * k + j];
                        arg = j;
                    }
                next[x] = static_cast<int>(arg) + 1;
            }

            // re-seed clusters the pass emptied with the point sitting worst
            // in its own (new) cluster
            for (std::size_t j = 0; j < k; ++j) {
                std::vector<std::size_t> nsz(k, 0);
                for (int lab : next) ++nsz[static_cast<std::size_t>(lab - 1)];
                if (nsz[j] > 0) continue;
                cluster_scores(next, score, nsz);
                double worst = -1.0;
                std::size_t pick = n;
                for (std::size_t x = 0; x < n; ++x) {
                    const std::size_t cur = static_cast<std::size_t>(next[x] - 1);
                    if (nsz[cur] < 2) continue;
                    const double v = score[x * k + cur];
                    if (v > worst) {
                        worst = v;
                        pick = x;
                    }
                }
                if (pick < n) next[pick] = static_cast<int>(j) + 1;
            }

            if (next == labels) break;
            const double next_phi = phi_star(next);
            if (next_phi > phi) break; // reject a worsening pass; keeps Phi* non-increasing
            labels = std::move(next);
            phi = next_phi;
        }

        if (phi < best_phi) {
            best_phi = phi;
            best_labels = labels;
        }
    }

    ClusterAssignment out;
    out.k = config.k;
    out.labels = std::move(best_labels);
    out.validate();
    return out;
}

ClusterAssignment kmeans_euclid(const DataMatrix& data, const KMeansConfig& config) {
    const std::size_t n = data.rows(), d = data.cols();
    check_config(config, n);
    const std::size_t k = static_cast<std::size_t>(config.k);

    const auto sqdist_rows = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t q = 0; q < d; ++q) {
            const double diff = data(a, q) - data(b, q);
            s += diff * diff;
        }
        return s;
    };
    const auto sqdist_to = [&](std::size_t x, const double* center) {
        double s = 0.0;
        for (std::size_t q = 0; q < d; ++q) {
            const double diff = data(x, q) - center[q];
            s += diff * diff;
        }
        return s;
    };

    std::vector<int> best_labels;
    double best_obj = kInf;

    for (int restart = 0; restart < config.n_init; ++restart) {
        auto engine = rng::make_engine(config.seed, static_cast<std::uint64_t>(restart));

        // squared-distance proportional seeding without materializing n^2 memory
        std::vector<std::size_t> centers;
        std::uniform_int_distribution<std::size_t> first(0, n - 1);
        centers.push_back(first(engine));
        std::vector<double> weight(n);
        std::vector<bool> is_center(n, false);
        is_center[centers[0]] = true;
        for (std::size_t x = 0; x < n; ++x) weight[x] = sqdist_rows(x, centers[0]);
        while (centers.size() < k) {
            double total = 0.0;
            for (double w : weight) total += w;
            std::size_t pick = n;
            if (total > 0.0) {
                std::uniform_real_distribution<double> unif(0.0, total);
                const double r = unif(engine);
                double cum = 0.0;
                for (std::size_t x = 0; x < n; ++x) {
                    cum += weight[x];
                    if (r < cum) {
                        pick = x;
                        break;
                    }
                }
                if (pick == n) {
                    for (std::size_t x = n; x-- > 0;)
                        if (weight[x] > 0.0) {
                            pick = x;
                            break;
                        }
                }
            }
            if (pick == n) {
                for (std::size_t x = 0; x < n; ++x)
                    if (!is_center[x]) {
                        pick = x;
                        break;
                    }
            }
            is_center[pick] = true;
            centers.push_back(pick);
            for (std::size_t x = 0; x < n; ++x)
                weight[x] = std::min(weight[x], sqdist_rows(x, pick));
        }

        std::vector<double> centroid(k * d);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t q = 0; q < d; ++q) centroid[j * d + q] = data(centers[j], q);

        std::vector<int> labels(n, 0);
        for (int iter = 0; iter < config.max_iter; ++iter) {
            std::vector<int> next(n);
            for (std::size_t x = 0; x < n; ++x) {
                std::size_t arg = 0;
                double bestv = sqdist_to(x, centroid.data());
                for (std::size_t j = 1; j < k; ++j) {
                    const double v = sqdist_to(x, centroid.data() + j * d);
                    if (v < bestv) {
                        bestv = v;
                        arg = j;
                    }
                }
                next[x] = static_cast<int>(arg) + 1;
            }

            for (std::size_t j = 0; j < k; ++j) {
                std::vector<std::size_t> nsz(k, 0);
                for (int lab : next) ++nsz[static_cast<std::size_t>(lab - 1)];
                if (nsz[j] > 0) continue;
                double worst = -1.0;
                std::size_t pick = n;
                for (std::size_t x = 0; x < n; ++x) {
                    const std::size_t cur = static_cast<std::size_t>(next[x] - 1);
                    if (nsz[cur] < 2) continue;
                    const double v = sqdist_to(x, centroid.data() + cur * d);
                    if (v > worst) {
                        worst = v;
                        pick = x;
                    }
                }
                if (pick < n) next[pick] = static_cast<int>(j) + 1;
            }

            const bool settled = next == labels;
            labels = std::move(next);

            std::fill(centroid.begin(), centroid.end(), 0.0);
            std::vector<std::size_t> sizes(k, 0);
            for (std::size_t x = 0; x < n; ++x) {
                const std::size_t j = static_cast<std::size_t>(labels[x] - 1);
                ++sizes[j];
                for (std::size_t q = 0; q < d; ++q) centroid[j * d + q] += data(x, q);
            }
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t q = 0; q < d; ++q)
                    centroid[j * d + q] /= static_cast<double>(sizes[j]);

            if (settled) break;
        }

        double obj = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            obj += sqdist_to(x, centroid.data() + static_cast<std::size_t>(labels[x] - 1) * d);
        if (obj < best_obj) {
            best_obj = obj;
            best_labels = labels;
        }
    }

    ClusterAssignment out;
    out.k = config.k;
    out.labels = std::move(best_labels);
    out.validate();
    return out;
}

} // namespace maddclust
