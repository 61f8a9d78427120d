#include "maddclust/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace maddclust {

void Dendrogram::validate() const {
    if (n_leaves == 0) throw std::invalid_argument("Dendrogram: empty");
    if (merges.size() + 1 != n_leaves)
        throw std::invalid_argument("Dendrogram: expected " + std::to_string(n_leaves - 1) + " merges, have " +
                                    std::to_string(merges.size()));
    const int total = static_cast<int>(2 * n_leaves - 1);
    std::vector<bool> consumed(static_cast<std::size_t>(total), false);
    for (std::size_t t = 0; t < merges.size(); ++t) {
        const auto& m = merges[t];
        const int created = static_cast<int>(n_leaves + t);
        for (int node : {m.left, m.right}) {
            if (node < 0 || node >= created)
                throw std::invalid_argument("Dendrogram: node id " + std::to_string(node) +
                                            " out of range at step " + std::to_string(t));
            if (consumed[static_cast<std::size_t>(node)])
                throw std::invalid_argument("Dendrogram: node " + std::to_string(node) + " consumed twice");
            consumed[static_cast<std::size_t>(node)] = true;
        }
        if (!(m.height >= 0.0) || !std::isfinite(m.height))
            throw std::invalid_argument("Dendrogram: bad height at step " + std::to_string(t));
    }
}

Dendrogram agglomerate(const DissimilarityMatrix& dissim, Linkage linkage) {
    const std::size_t n = dissim.size();
    if (n < 2) throw std::invalid_argument("agglomerate: needs at least 2 observations");

    // Slot-indexed working state; a merge reuses the first slot of the pair.
    std::vector<bool> active(n, true);
    std::vector<int> node_id(n);
    std::vector<double> csize(n, 1.0);
    std::vector<double> work(dissim.values());
    for (std::size_t i = 0; i < n; ++i) node_id[i] = static_cast<int>(i);
    const auto at = [&](std::size_t i, std::size_t j) -> double& { return work[i * n + j]; };

    Dendrogram tree;
    tree.n_leaves = n;
    tree.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = n, bj = n;
        int best_lo = 0, best_hi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double v = at(i, j);
                const int lo = std::min(node_id[i], node_id[j]);
                const int hi = std::max(node_id[i], node_id[j]);
                if (v < best ||
                    (v == best && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
                    best = v;
                    bi = i;
                    bj = j;
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }

        tree.merges.push_back({best_lo, best_hi, best});

        const double si = csize[bi], sj = csize[bj];
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            double merged = 0.0;
            switch (linkage) {
                case Linkage::Average:
                    merged = (si * at(bi, k) + sj * at(bj, k)) / (si + sj);
                    break;
                case Linkage::Single:
                    merged = std::min(at(bi, k), at(bj, k));
                    break;
                case Linkage::Complete:
                    merged = std::max(at(bi, k), at(bj, k));
                    break;
            }
            at(bi, k) = merged;
            at(k, bi) = merged;
        }
        csize[bi] = si + sj;
        node_id[bi] = static_cast<int>(n + step);
        active[bj] = false;
    }
    return tree;
}

ClusterAssignment cut(const Dendrogram& tree, int k) {
    tree.validate();
    const std::size_t n = tree.n_leaves;
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("cut: k = " + std::to_string(k) + " outside 1.." + std::to_string(n));

    // Apply the first n-k merges, then read components off the leaves.
    const std::size_t applied = n - static_cast<std::size_t>(k);
    std::vector<int> parent(n + applied, -1);
    for (std::size_t t = 0; t < applied; ++t) {
        parent[static_cast<std::size_t>(tree.merges[t].left)] = static_cast<int>(n + t);
        parent[static_cast<std::size_t>(tree.merges[t].right)] = static_cast<int>(n + t);
    }
    const auto root_of = [&](std::size_t leaf) {
        std::size_t node = leaf;
        while (parent[node] >= 0) node = static_cast<std::size_t>(parent[node]);
        return node;
    };

    ClusterAssignment out;
    out.k = k;
    out.labels.assign(n, 0);
    std::vector<int> label_of_root(n + applied, 0);
    int next = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = root_of(i);
        if (label_of_root[r] == 0) label_of_root[r] = next++;
        out.labels[i] = label_of_root[r];
    }
    out.validate();
    return out;
}

} // namespace maddclust
