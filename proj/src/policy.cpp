#include "prodnet/policy.hpp"

#include <algorithm>
#include <numeric>

namespace prodnet {

namespace {

// Base requirement from a category-cat firm toward category other.
double category_requirement(const ReplicateGame& rep, int cat, int other) {
    for (int i = 0; i < rep.base.firm_count(); ++i)
        if (rep.base.categories.firm_category[i] == cat) return rep.base.requirements(i, other);
    throw std::logic_error("category without a base firm");
}

// Whether the link (buyer, supplier) is present in the clustered network a^Q.
bool link_present(const Partition& q, const ReplicateGame& rep, const FirmPair& link,
                  const std::vector<int>& blk) {
    const int cat_b = rep.category_of(link.buyer);
    const int cat_s = rep.category_of(link.supplier);
    if (cat_b == cat_s)
        return link.buyer == link.supplier && category_requirement(rep, cat_b, cat_b) > 0.0;
    if (category_requirement(rep, cat_b, cat_s) <= 0.0) return false;
    return blk[rep.country_of(link.buyer)] == blk[rep.country_of(link.supplier)];
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void TradePolicy::validate(int firm_count) const {
    auto check_range = [&](const FirmPair& p) {
        if (p.buyer < 0 || p.buyer >= firm_count || p.supplier < 0 || p.supplier >= firm_count)
            throw std::invalid_argument("policy link refers to a firm outside the replicate");
    };
    for (const FirmPair& p : prevented) check_range(p);
    for (const FirmPair& p : catalyzed) check_range(p);
    for (const FirmPair& p : prevented)
        if (std::find(catalyzed.begin(), catalyzed.end(), p) != catalyzed.end())
            throw std::invalid_argument("prevented and catalyzed link sets must be disjoint");
}

bool is_compatible(const Partition& q, const ReplicateGame& rep, const TradePolicy& policy) {
    policy.validate(rep.economy.firm_count());
    const std::vector<int> blk = block_index(q, rep.n);
    for (const FirmPair& p : policy.prevented)
        if (link_present(q, rep, p, blk)) return false;
    for (const FirmPair& p : policy.catalyzed)
        if (!link_present(q, rep, p, blk)) return false;
    return true;
}

PolicyFilterResult compatible_partitions(const ReplicateGame& rep, const TradePolicy& policy,
                                         int n_cap) {
    policy.validate(rep.economy.firm_count());
    PolicyFilterResult out;
    auto fail = [&](const FirmPair& p, std::string why) {
        out.infeasible = true;
        out.certificate = p;
        out.reason = std::move(why);
        out.partitions.clear();
        return out;
    };

    // Project firm-pair constraints to country pairs. must_merge / must_split
    // hold country pairs for cross-category links whose base requirement is
    // positive; partition-independent links resolve immediately.
    std::vector<std::pair<int, int>> must_merge, must_split;
    std::vector<FirmPair> merge_src, split_src;
    for (const FirmPair& p : policy.catalyzed) {
        const int cb = rep.category_of(p.buyer), cs = rep.category_of(p.supplier);
        if (cb == cs) {
            if (p.buyer != p.supplier)
                return fail(p, "clustered networks never contain same-category cross links");
            if (category_requirement(rep, cb, cb) <= 0.0)
                return fail(p, "self link absent for a category with zero own requirement");
            continue;   // always present
        }
        if (category_requirement(rep, cb, cs) <= 0.0)
            return fail(p, "catalyzed link has zero base requirement and can never form");
        const int a = rep.country_of(p.buyer), b = rep.country_of(p.supplier);
        if (a == b) continue;   // same country, always merged
        must_merge.emplace_back(a, b);
        merge_src.push_back(p);
    }
    for (const FirmPair& p : policy.prevented) {
        const int cb = rep.category_of(p.buyer), cs = rep.category_of(p.supplier);
        if (cb == cs) {
            if (p.buyer == p.supplier && category_requirement(rep, cb, cb) > 0.0)
                return fail(p, "self link is always present and cannot be prevented");
            continue;   // same-category cross link never present: vacuous
        }
        if (category_requirement(rep, cb, cs) <= 0.0) continue;   // never present: vacuous
        const int a = rep.country_of(p.buyer), b = rep.country_of(p.supplier);
        if (a == b)
            return fail(p, "same-country cross-category link is always present");
        must_split.emplace_back(a, b);
        split_src.push_back(p);
    }

    // Constraint propagation: merge catalyzed pairs, then check separations.
    UnionFind uf(rep.n);
    for (const auto& [a, b] : must_merge) uf.merge(a, b);
    for (std::size_t k = 0; k < must_split.size(); ++k)
        if (uf.find(must_split[k].first) == uf.find(must_split[k].second))
            return fail(split_src[k], "catalyzed links force a prevented pair into one cluster");

    for (const auto& q : enumerate_partitions(rep.n, n_cap)) {
        const std::vector<int> blk = block_index(q, rep.n);
        bool ok = true;
        for (const auto& [a, b] : must_merge)
            if (blk[a] != blk[b]) { ok = false; break; }
        if (ok)
            for (const auto& [a, b] : must_split)
                if (blk[a] == blk[b]) { ok = false; break; }
        if (ok) out.partitions.push_back(q);
    }
    return out;
}

TradePolicy design_policy(const ReplicateGame& rep, const Partition& target) {
    if (!is_partition_of(target, rep.n))
        throw std::invalid_argument("target is not a partition of the countries");
    const int L = rep.base.categories.num_categories;

    int buyer_cat = -1, supplier_cat = -1;
    for (int l = 0; l < L && buyer_cat < 0; ++l)
        for (int l2 = 0; l2 < L; ++l2)
            if (l != l2 && category_requirement(rep, l, l2) > 0.0) {
                buyer_cat = l;
                supplier_cat = l2;
                break;
            }
    if (buyer_cat < 0 && rep.n > 1)
        throw std::logic_error("no cross-category requirement: partitions cannot be distinguished");

    TradePolicy policy;
    if (rep.n == 1) return policy;

    Partition blocks = target;
    for (auto& b : blocks) std::sort(b.begin(), b.end());

    // Spanning path of catalyzed links inside each block.
    for (const auto& block : blocks)
        for (std::size_t t = 0; t + 1 < block.size(); ++t)
            policy.catalyzed.push_back(
                FirmPair{buyer_cat * rep.n + block[t], supplier_cat * rep.n + block[t + 1]});

    // One prevented link between representatives of each pair of blocks.
    for (std::size_t k = 0; k < blocks.size(); ++k)
        for (std::size_t k2 = k + 1; k2 < blocks.size(); ++k2)
            policy.prevented.push_back(
                FirmPair{buyer_cat * rep.n + blocks[k].front(),
                         supplier_cat * rep.n + blocks[k2].front()});
    return policy;
}

}  // namespace prodnet
