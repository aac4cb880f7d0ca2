#include "prodnet/partitions.hpp"

#include <algorithm>

namespace prodnet {

std::vector<Partition> enumerate_partitions(int n, int cap) {
    if (n <= 0) throw std::invalid_argument("partition ground set must be nonempty");
    if (n > cap) throw std::domain_error("partition enumeration cap exceeded");

    std::vector<Partition> out;
    std::vector<int> rgs(n, 0);
    // Restricted growth: rgs[0] = 0 and rgs[i] <= 1 + max(rgs[0..i-1]).
    while (true) {
        int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        Partition q(blocks);
        for (int i = 0; i < n; ++i) q[rgs[i]].push_back(i);
        out.push_back(std::move(q));

        int i = n - 1;
        while (i > 0) {
            int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
            if (rgs[i] <= prefix_max) break;
            --i;
        }
        if (i == 0) break;
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
    }
    return out;
}

std::uint64_t bell_number(int n) {
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::uint64_t x : row) next.push_back(next.back() + x);
        row = std::move(next);
    }
    return row.front();
}

bool is_partition_of(const Partition& q, int n) {
    std::vector<char> seen(n, 0);
    for (const auto& block : q) {
        if (block.empty()) return false;
        for (int x : block) {
            if (x < 0 || x >= n || seen[x]) return false;
            seen[x] = 1;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::vector<int> block_index(const Partition& q, int n) {
    if (!is_partition_of(q, n)) throw std::invalid_argument("not a partition of {0..n-1}");
    std::vector<int> idx(n, -1);
    for (int k = 0; k < static_cast<int>(q.size()); ++k)
        for (int x : q[k]) idx[x] = k;
    return idx;
}

}  // namespace prodnet
