#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace prodnet {

// A partition of {0..n-1} as a list of blocks; blocks and members sorted.
using Partition = std::vector<std::vector<int>>;

// All partitions of {0..n-1} via restricted growth strings, lexicographic.
std::vector<Partition> enumerate_partitions(int n, int cap = 12);

std::uint64_t bell_number(int n);

bool is_partition_of(const Partition& q, int n);

// Block index of each element, or throws if q is not a partition of {0..n-1}.
std::vector<int> block_index(const Partition& q, int n);

}  // namespace prodnet
