#ifndef MADDCLUST_HIERARCHY_HPP
#define MADDCLUST_HIERARCHY_HPP

#include <cstddef>
#include <vector>

#include "maddclust/dissimilarity.hpp"
#include "maddclust/types.hpp"

namespace maddclust {

enum class Linkage { Average, Single, Complete };

/// One agglomeration step. Node ids: leaves are 0..n-1, the cluster created
/// by merge step t gets id n+t.
struct MergeStep {
    int left = 0;
    int right = 0;
    double height = 0.0;
};

struct Dendrogram {
    std::size_t n_leaves = 0;
    std::vector<MergeStep> merges; // exactly n_leaves - 1 steps

    void validate() const;
};

/// Bottom-up agglomeration. Average linkage keeps the exact mean pairwise
/// dissimilarity between clusters at every step (weighted updates); single
/// and complete use min/max. Tie merges pick the lexicographically smallest
/// node-id pair. Heights are reported as encountered, without monotone
/// correction.
Dendrogram agglomerate(const DissimilarityMatrix& dissim, Linkage linkage);

/// Partition into k clusters by undoing the last k-1 merges. Labels are 1..k,
/// ordered by each cluster's smallest observation index.
ClusterAssignment cut(const Dendrogram& tree, int k);

} // namespace maddclust

#endif
