#ifndef MADDCLUST_RAND_INDEX_HPP
#define MADDCLUST_RAND_INDEX_HPP

#include <span>

namespace maddclust {

/// Pair-disagreement rate between two partitions of the same n >= 2 items:
/// the fraction of unordered pairs grouped together in exactly one of the
/// two partitions. 0 means the partitions coincide up to relabeling; this is
/// the complement of the classical Rand index.
double rand_index(std::span<const int> truth, std::span<const int> predicted);

} // namespace maddclust

#endif
