#include "maddclust/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "maddclust/rng.hpp"

namespace maddclust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Linkage linkage_of(BaseMethod m) {
    switch (m) {
        case BaseMethod::AverageLinkage: return Linkage::Average;
        case BaseMethod::SingleLinkage: return Linkage::Single;
        case BaseMethod::CompleteLinkage: return Linkage::Complete;
        default: throw std::logic_error("linkage_of: not a hierarchical method");
    }
}

} // namespace

double within_dispersion(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment) {
    return objective_phi_star(dissim, assignment);
}

DunnParts dunn_parts(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment) {
    if (assignment.labels.size() != dissim.size())
        throw std::invalid_argument("dunn_parts: size mismatch");
    assignment.validate();
    const auto groups = assignment.members();
    const std::size_t k = groups.size();

    DunnParts parts;
    parts.within_max = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) continue; // singleton spread counts as 0
        double s = 0.0;
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b) s += dissim(g[a], g[b]);
        const double m = static_cast<double>(g.size());
        parts.within_max = std::max(parts.within_max, 2.0 * s / (m * (m - 1.0)));
    }

    if (k < 2) {
        parts.between_min = kNaN;
        return parts;
    }
    parts.between_min = kInf;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = 0.0;
            for (std::size_t a : groups[i])
                for (std::size_t b : groups[j]) s += dissim(a, b);
            const double mean = s / (static_cast<double>(groups[i].size()) *
                                     static_cast<double>(groups[j].size()));
            parts.between_min = std::min(parts.between_min, mean);
        }
    return parts;
}

double dunn_index(const DissimilarityMatrix& dissim, const ClusterAssignment& assignment) {
    const DunnParts parts = dunn_parts(dissim, assignment);
    if (assignment.k < 2) throw std::invalid_argument("dunn_index: needs k >= 2");
    if (parts.within_max == 0.0) return kInf;
    return parts.between_min / parts.within_max;
}

std::string BaseAlgorithm::name() const {
    std::string m;
    switch (method) {
        case BaseMethod::AverageLinkage: m = "avgl"; break;
        case BaseMethod::SingleLinkage: m = "single"; break;
        case BaseMethod::CompleteLinkage: m = "complete"; break;
        case BaseMethod::KMeansMadd:
        case BaseMethod::KMeansEuclid: m = "km"; break;
    }
    return m + "-" + (madd ? madd->name() : std::string("euclid"));
}

BaseAlgorithm base_algorithm_from_name(const std::string& name) {
    const auto dash = name.rfind('-');
    if (dash == std::string::npos)
        throw std::invalid_argument("base algorithm name must look like avgl-rho0 or km-euclid: " + name);
    const std::string method = name.substr(0, dash);
    const std::string dist = name.substr(dash + 1);

    BaseAlgorithm algo;
    if (method == "avgl")
        algo.method = BaseMethod::AverageLinkage;
    else if (method == "single")
        algo.method = BaseMethod::SingleLinkage;
    else if (method == "complete")
        algo.method = BaseMethod::CompleteLinkage;
    else if (method == "km")
        algo.method = dist == "euclid" ? BaseMethod::KMeansEuclid : BaseMethod::KMeansMadd;
    else
        throw std::invalid_argument("unknown base method: " + method);

    if (dist == "euclid")
        algo.madd = std::nullopt;
    else
        algo.madd = transform_from_name(dist);
    if (algo.method == BaseMethod::KMeansEuclid && algo.madd)
        throw std::logic_error("internal: km-euclid with a transform");
    return algo;
}

DissimilarityMatrix algorithm_dissimilarity(const DataMatrix& data, const BaseAlgorithm& algo) {
    if (algo.uses_madd()) return madd_matrix(base_distance_matrix(data, *algo.madd));
    return euclidean_distance_matrix(data);
}

ClusterAssignment fit_single_k(const DataMatrix& data, const BaseAlgorithm& algo, int k,
                               std::uint64_t seed) {
    if (algo.method == BaseMethod::KMeansEuclid) {
        KMeansConfig cfg{k, algo.n_init, algo.max_iter, seed};
        return kmeans_euclid(data, cfg);
    }
    const DissimilarityMatrix dissim = algorithm_dissimilarity(data, algo);
    if (algo.method == BaseMethod::KMeansMadd) {
        KMeansConfig cfg{k, algo.n_init, algo.max_iter, seed};
        return kmeans_madd(dissim, cfg);
    }
    return cut(agglomerate(dissim, linkage_of(algo.method)), k);
}

KSweep build_ksweep(const DataMatrix& data, const BaseAlgorithm& algo, int k_cap, std::uint64_t seed) {
    const std::size_t n = data.rows();
    if (k_cap < 2) throw std::invalid_argument("build_ksweep: k_cap must be >= 2");
    if (static_cast<std::size_t>(k_cap) + 1 > n)
        throw std::invalid_argument("build_ksweep: k_cap + 1 exceeds the number of observations");

    KSweep sweep;
    sweep.k_cap = k_cap;
    sweep.n = n;
    sweep.dim = data.cols();
    sweep.madd_mode = algo.uses_madd();

    const DissimilarityMatrix dissim = algorithm_dissimilarity(data, algo);
    const int k_top = k_cap + 1;
    sweep.assignment.resize(static_cast<std::size_t>(k_top) + 1);
    sweep.W.assign(static_cast<std::size_t>(k_top) + 1, kNaN);
    sweep.between_min.assign(static_cast<std::size_t>(k_top) + 1, kNaN);
    sweep.within_max.assign(static_cast<std::size_t>(k_top) + 1, kNaN);

    Dendrogram tree;
    if (!algo.is_kmeans()) tree = agglomerate(dissim, linkage_of(algo.method));

    for (int k = 1; k <= k_top; ++k) {
        ClusterAssignment a;
        switch (algo.method) {
            case BaseMethod::KMeansMadd: {
                KMeansConfig cfg{k, algo.n_init, algo.max_iter,
                                 rng::derive_seed(seed, static_cast<std::uint64_t>(k))};
                a = kmeans_madd(dissim, cfg);
                break;
            }
            case BaseMethod::KMeansEuclid: {
                KMeansConfig cfg{k, algo.n_init, algo.max_iter,
                                 rng::derive_seed(seed, static_cast<std::uint64_t>(k))};
                a = kmeans_euclid(data, cfg);
                break;
            }
            default:
                a = cut(tree, k);
        }
        const std::size_t ki = static_cast<std::size_t>(k);
        sweep.W[ki] = within_dispersion(dissim, a);
        const DunnParts parts = dunn_parts(dissim, a);
        sweep.between_min[ki] = parts.between_min;
        sweep.within_max[ki] = parts.within_max;
        sweep.assignment[ki] = std::move(a);
    }
    return sweep;
}

} // namespace maddclust
