#include "maddclust/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "maddclust/rng.hpp"

namespace maddclust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// argmax over k_lo..k_hi with ties to the smallest k; NaN entries are skipped
int argmax_k(const std::vector<double>& stat, int k_lo, int k_hi) {
    int best_k = 0;
    double best = -kInf;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double v = stat[static_cast<std::size_t>(k)];
        if (std::isnan(v)) continue;
        if (best_k == 0 || v > best) {
            best = v;
            best_k = k;
        }
    }
    if (best_k == 0) throw std::logic_error("estimator: empty selection range");
    return best_k;
}

void flag_boundary(EstimatorReport& report) {
    if (report.k_hat == report.k_hi) report.diagnostics.push_back("boundary-selection");
}

double safe_ratio(double num, double den, bool& degenerate) {
    if (den == 0.0) {
        degenerate = true;
        return kInf;
    }
    return num / den;
}

} // namespace

double pd_penalty(const PenaltySpec& penalty, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("pd_penalty: zero dimension");
    return penalty.lambda * std::log(static_cast<double>(dim));
}

EstimatorReport kl_select(const KSweep& sweep) {
    const int K = sweep.k_cap;
    const double d = static_cast<double>(sweep.dim);
    const double e = 2.0 / d;

    // Diff(k) defined for 2..K+1; the sweep carries W up to K+1
    std::vector<double> diff(static_cast<std::size_t>(K) + 2, kNaN);
    for (int k = 2; k <= K + 1; ++k)
        diff[static_cast<std::size_t>(k)] =
            std::pow(k - 1.0, e) * sweep.W[static_cast<std::size_t>(k - 1)] -
            std::pow(static_cast<double>(k), e) * sweep.W[static_cast<std::size_t>(k)];

    EstimatorReport report;
    report.estimator = "kl";
    report.k_lo = 2;
    report.k_hi = K;
    report.statistic.assign(static_cast<std::size_t>(K) + 1, kNaN);
    bool degenerate = false;
    for (int k = 2; k <= K; ++k)
        report.statistic[static_cast<std::size_t>(k)] =
            std::abs(safe_ratio(diff[static_cast<std::size_t>(k)], diff[static_cast<std::size_t>(k + 1)],
                                degenerate));
    if (degenerate) report.diagnostics.push_back("zero-denominator");
    report.k_hat = argmax_k(report.statistic, report.k_lo, report.k_hi);
    flag_boundary(report);
    return report;
}

EstimatorReport jump_select(const KSweep& sweep, double t, JumpMode mode) {
    if (!(t > 0.0)) throw std::invalid_argument("jump_select: t must be positive");
    const int K = sweep.k_cap;

    EstimatorReport report;
    report.estimator = "jump";
    report.k_lo = 1;
    report.k_hi = K;
    report.statistic.assign(static_cast<std::size_t>(K) + 1, kNaN);

    bool degenerate = false;
    std::vector<double> transformed(static_cast<std::size_t>(K) + 1, 0.0); // index 0 is d_0^{-t} := 0
    for (int k = 1; k <= K; ++k) {
        double disp = sweep.W[static_cast<std::size_t>(k)];
        if (mode == JumpMode::Euclid) disp /= static_cast<double>(sweep.dim);
        if (disp == 0.0) {
            transformed[static_cast<std::size_t>(k)] = kInf;
            degenerate = true;
        } else {
            transformed[static_cast<std::size_t>(k)] = std::pow(disp, -t);
        }
    }
    for (int k = 1; k <= K; ++k) {
        const double hi = transformed[static_cast<std::size_t>(k)];
        const double lo = transformed[static_cast<std::size_t>(k - 1)];
        report.statistic[static_cast<std::size_t>(k)] =
            (std::isinf(hi) && std::isinf(lo)) ? 0.0 : hi - lo;
    }
    if (degenerate) report.diagnostics.push_back("zero-dispersion");
    report.k_hat = argmax_k(report.statistic, report.k_lo, report.k_hi);
    flag_boundary(report);
    return report;
}

EstimatorReport dunn_select(const KSweep& sweep) {
    const int K = sweep.k_cap;
    EstimatorReport report;
    report.estimator = "dunn";
    report.k_lo = 2;
    report.k_hi = K;
    report.statistic.assign(static_cast<std::size_t>(K) + 1, kNaN);
    bool degenerate = false;
    for (int k = 2; k <= K; ++k)
        report.statistic[static_cast<std::size_t>(k)] =
            safe_ratio(sweep.between_min[static_cast<std::size_t>(k)],
                       sweep.within_max[static_cast<std::size_t>(k)], degenerate);
    if (degenerate) report.diagnostics.push_back("zero-within-spread");
    report.k_hat = argmax_k(report.statistic, report.k_lo, report.k_hi);
    flag_boundary(report);
    return report;
}

EstimatorReport pd_select(const KSweep& sweep, const PenaltySpec& penalty) {
    const int K = sweep.k_cap;
    const double zeta = pd_penalty(penalty, sweep.dim);

    EstimatorReport report;
    report.estimator = "pd";
    report.k_lo = 1;
    report.k_hi = K;
    report.statistic.assign(static_cast<std::size_t>(K) + 1, kNaN);
    bool degenerate = false;
    for (int k = 1; k <= K; ++k) {
        // the partition at k = 1 has no between term; borrow it from k = 2
        const double between = sweep.between_min[static_cast<std::size_t>(std::max(k, 2))];
        const double within = sweep.within_max[static_cast<std::size_t>(k)];
        report.statistic[static_cast<std::size_t>(k)] =
            safe_ratio(between, within, degenerate) - static_cast<double>(k) * zeta;
    }
    if (degenerate) report.diagnostics.push_back("zero-within-spread");
    report.k_hat = argmax_k(report.statistic, report.k_lo, report.k_hi);
    flag_boundary(report);
    return report;
}

EstimatorReport gap_select(const DataMatrix& data, const BaseAlgorithm& algo, const KSweep& sweep,
                           int B, std::uint64_t seed) {
    if (B < 2) throw std::invalid_argument("gap_select: needs at least 2 reference draws");
    const int K = sweep.k_cap;
    const std::size_t n = data.rows(), d = data.cols();

    std::vector<double> lo(d), hi(d);
    for (std::size_t q = 0; q < d; ++q) {
        double mn = data(0, q), mx = data(0, q);
        for (std::size_t i = 1; i < n; ++i) {
            mn = std::min(mn, data(i, q));
            mx = std::max(mx, data(i, q));
        }
        lo[q] = mn;
        hi[q] = mx;
    }

    std::vector<double> log_w(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        const double w = sweep.W[static_cast<std::size_t>(k)];
        if (!(w > 0.0))
            throw std::domain_error("gap_select: degenerate zero dispersion at k = " + std::to_string(k));
        log_w[static_cast<std::size_t>(k)] = std::log(w);
    }

    // mean and spread of log W_k over the reference draws
    std::vector<double> ref_mean(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<double> ref_sq(static_cast<std::size_t>(K) + 1, 0.0);
    for (int b = 0; b < B; ++b) {
        auto engine = rng::make_engine(seed, static_cast<std::uint64_t>(b));
        DataMatrix ref(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t q = 0; q < d; ++q) {
                std::uniform_real_distribution<double> unif(lo[q], hi[q]);
                ref(i, q) = lo[q] == hi[q] ? lo[q] : unif(engine);
            }
        const KSweep ref_sweep =
            build_ksweep(ref, algo, K, rng::derive_seed(seed, static_cast<std::uint64_t>(b), 0x9a9aULL));
        for (int k = 1; k <= K; ++k) {
            const double w = ref_sweep.W[static_cast<std::size_t>(k)];
            if (!(w > 0.0))
                throw std::domain_error("gap_select: degenerate reference dispersion at k = " +
                                        std::to_string(k));
            const double lw = std::log(w);
            ref_mean[static_cast<std::size_t>(k)] += lw;
            ref_sq[static_cast<std::size_t>(k)] += lw * lw;
        }
    }

    EstimatorReport report;
    report.estimator = "gap";
    report.k_lo = 1;
    report.k_hi = K;
    report.statistic.assign(static_cast<std::size_t>(K) + 1, kNaN);
    report.spread.assign(static_cast<std::size_t>(K) + 1, kNaN);
    for (int k = 1; k <= K; ++k) {
        const std::size_t ki = static_cast<std::size_t>(k);
        ref_mean[ki] /= static_cast<double>(B);
        const double var = std::max(0.0, ref_sq[ki] / static_cast<double>(B) - ref_mean[ki] * ref_mean[ki]);
        report.statistic[ki] = ref_mean[ki] - log_w[ki];
        report.spread[ki] = std::sqrt(var) * std::sqrt(1.0 + 1.0 / static_cast<double>(B));
    }

    report.k_hat = 0;
    for (int k = 1; k < K; ++k) {
        if (report.statistic[static_cast<std::size_t>(k)] >=
            report.statistic[static_cast<std::size_t>(k + 1)] - report.spread[static_cast<std::size_t>(k + 1)]) {
            report.k_hat = k;
            break;
        }
    }
    if (report.k_hat == 0) {
        report.k_hat = K;
        report.diagnostics.push_back("no-crossing");
        flag_boundary(report);
    }
    return report;
}

CvReports cv_select(const DataMatrix& data, const BaseAlgorithm& algo, int k_cap, int B,
                    std::uint64_t seed) {
    const std::size_t n = data.rows(), d = data.cols();
    if (B < 1) throw std::invalid_argument("cv_select: needs at least 1 repetition");
    const std::size_t third = n / 3;
    const std::size_t m = (third / 5) * 5;
    if (m < 5)
        throw std::invalid_argument("cv_select: needs n >= 15, got n = " + std::to_string(n));
    const std::size_t n_hold = n - 2 * m;
    const int k_hi = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k_cap), m));

    EstimatorReport averaged;
    averaged.estimator = "cv-a";
    averaged.k_lo = 2;
    averaged.k_hi = k_hi;
    averaged.statistic.assign(static_cast<std::size_t>(k_hi) + 1, 0.0);
    averaged.statistic[0] = kNaN;
    averaged.statistic[1] = kNaN;
    if (k_hi < k_cap) averaged.diagnostics.push_back("k-range-clipped");

    EstimatorReport vote = averaged;
    vote.estimator = "cv-v";
    std::fill(vote.statistic.begin() + 2, vote.statistic.end(), 0.0);

    std::vector<std::size_t> order(n);

    for (int b = 0; b < B; ++b) {
        auto engine = rng::make_engine(seed, static_cast<std::uint64_t>(b));
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = n; i > 1; --i) { // Fisher-Yates, engine-portable
            const std::size_t j = static_cast<std::size_t>(engine() % i);
            std::swap(order[i - 1], order[j]);
        }

        std::array<DataMatrix, 2> train;
        for (int p = 0; p < 2; ++p) {
            train[p] = DataMatrix(m, d);
            for (std::size_t i = 0; i < m; ++i) {
                const auto src = data.row(order[static_cast<std::size_t>(p) * m + i]);
                std::copy(src.begin(), src.end(), train[p].row(i).begin());
            }
        }
        DataMatrix hold(n_hold, d);
        for (std::size_t i = 0; i < n_hold; ++i) {
            const auto src = data.row(order[2 * m + i]);
            std::copy(src.begin(), src.end(), hold.row(i).begin());
        }

        // squared dissimilarity of each held-out row to each training row;
        // Euclidean k-means extends by centroids instead and skips this
        std::array<std::vector<double>, 2> cross_sq; // n_hold x m
        std::array<DissimilarityMatrix, 2> train_dissim;
        std::array<Dendrogram, 2> tree;
        for (int p = 0; p < 2; ++p) {
            if (algo.uses_madd()) {
                const DissimilarityMatrix base = base_distance_matrix(train[p], *algo.madd);
                train_dissim[p] = madd_matrix(base);
                cross_sq[p].resize(n_hold * m);
                for (std::size_t x = 0; x < n_hold; ++x) {
                    const auto rho = madd_cross(train[p], base, hold.row(x), *algo.madd);
                    for (std::size_t z = 0; z < m; ++z) cross_sq[p][x * m + z] = rho[z] * rho[z];
                }
            } else {
                train_dissim[p] = euclidean_distance_matrix(train[p]);
                if (algo.method != BaseMethod::KMeansEuclid) {
                    cross_sq[p].resize(n_hold * m);
                    for (std::size_t x = 0; x < n_hold; ++x)
                        for (std::size_t z = 0; z < m; ++z) {
                            double s = 0.0;
                            for (std::size_t q = 0; q < d; ++q) {
                                const double diff = hold(x, q) - train[p](z, q);
                                s += diff * diff;
                            }
                            cross_sq[p][x * m + z] = s;
                        }
                }
            }
            if (!algo.is_kmeans()) {
                Linkage link = algo.method == BaseMethod::AverageLinkage ? Linkage::Average
                               : algo.method == BaseMethod::SingleLinkage ? Linkage::Single
                                                                          : Linkage::Complete;
                tree[p] = agglomerate(train_dissim[p], link);
            }
        }

        int best_k = 0;
        double best_ins = kInf;
        for (int k = 2; k <= k_hi; ++k) {
            std::array<std::vector<int>, 2> hold_labels;
            for (int p = 0; p < 2; ++p) {
                ClusterAssignment fit;
                if (algo.method == BaseMethod::KMeansMadd) {
                    KMeansConfig cfg{k, algo.n_init, algo.max_iter,
                                     rng::derive_seed(seed, static_cast<std::uint64_t>(b),
                                                      static_cast<std::uint64_t>(2 * k + p))};
                    fit = kmeans_madd(train_dissim[p], cfg);
                } else if (algo.method == BaseMethod::KMeansEuclid) {
                    KMeansConfig cfg{k, algo.n_init, algo.max_iter,
                                     rng::derive_seed(seed, static_cast<std::uint64_t>(b),
                                                      static_cast<std::uint64_t>(2 * k + p))};
                    fit = kmeans_euclid(train[p], cfg);
                } else {
                    fit = cut(tree[p], k);
                }

                const auto groups = fit.members();
                hold_labels[p].assign(n_hold, 0);

                if (algo.method == BaseMethod::KMeansEuclid) {
                    std::vector<double> centroid(static_cast<std::size_t>(k) * d, 0.0);
                    for (std::size_t z = 0; z < m; ++z) {
                        const std::size_t j = static_cast<std::size_t>(fit.labels[z] - 1);
                        for (std::size_t q = 0; q < d; ++q) centroid[j * d + q] += train[p](z, q);
                    }
                    for (int j = 0; j < k; ++j)
                        for (std::size_t q = 0; q < d; ++q)
                            centroid[static_cast<std::size_t>(j) * d + q] /=
                                static_cast<double>(groups[static_cast<std::size_t>(j)].size());
                    for (std::size_t x = 0; x < n_hold; ++x) {
                        int arg = 0;
                        double best = kInf;
                        for (int j = 0; j < k; ++j) {
                            double s = 0.0;
                            for (std::size_t q = 0; q < d; ++q) {
                                const double diff = hold(x, q) - centroid[static_cast<std::size_t>(j) * d + q];
                                s += diff * diff;
                            }
                            if (s < best) {
                                best = s;
                                arg = j;
                            }
                        }
                        hold_labels[p][x] = arg + 1;
                    }
                } else {
                    for (std::size_t x = 0; x < n_hold; ++x) {
                        int arg = 0;
                        double best = kInf;
                        for (int j = 0; j < k; ++j) {
                            double s = 0.0;
                            for (std::size_t z : groups[static_cast<std::size_t>(j)])
                                s += cross_sq[p][x * m + z];
                            s /= static_cast<double>(groups[static_cast<std::size_t>(j)].size());
                            if (s < best) {
                                best = s;
                                arg = j;
                            }
                        }
                        hold_labels[p][x] = arg + 1;
                    }
                }
            }

            std::size_t disagree = 0;
            for (std::size_t x = 0; x < n_hold; ++x)
                for (std::size_t y = x + 1; y < n_hold; ++y) {
                    const bool same1 = hold_labels[0][x] == hold_labels[0][y];
                    const bool same2 = hold_labels[1][x] == hold_labels[1][y];
                    if (same1 != same2) ++disagree;
                }
            const double ins = static_cast<double>(disagree) /
                               (static_cast<double>(n_hold) * (static_cast<double>(n_hold) - 1.0) / 2.0);
            averaged.statistic[static_cast<std::size_t>(k)] += ins;
            if (ins < best_ins) {
                best_ins = ins;
                best_k = k;
            }
        }
        vote.repetition_k.push_back(best_k);
    }

    for (int k = 2; k <= k_hi; ++k)
        averaged.statistic[static_cast<std::size_t>(k)] /= static_cast<double>(B);

    averaged.k_hat = 0;
    double best = kInf;
    for (int k = 2; k <= k_hi; ++k)
        if (averaged.statistic[static_cast<std::size_t>(k)] < best) {
            best = averaged.statistic[static_cast<std::size_t>(k)];
            averaged.k_hat = k;
        }

    for (int rep_k : vote.repetition_k) vote.statistic[static_cast<std::size_t>(rep_k)] += 1.0;
    vote.k_hat = 0;
    double best_count = -1.0;
    for (int k = 2; k <= k_hi; ++k)
        if (vote.statistic[static_cast<std::size_t>(k)] > best_count) {
            best_count = vote.statistic[static_cast<std::size_t>(k)];
            vote.k_hat = k;
        }

    return {std::move(averaged), std::move(vote)};
}

} // namespace maddclust
