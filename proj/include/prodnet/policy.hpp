#pragma once

#include "prodnet/replicate.hpp"

namespace prodnet {

struct FirmPair {
    int buyer = 0;
    int supplier = 0;

    friend bool operator==(const FirmPair& a, const FirmPair& b) {
        return a.buyer == b.buyer && a.supplier == b.supplier;
    }
};

// Ordered firm-pair link sets: prevented links must be absent from the
// clustered network, catalyzed links must be present. The two sets must be
// disjoint.
struct TradePolicy {
    std::vector<FirmPair> prevented;
    std::vector<FirmPair> catalyzed;

    void validate(int firm_count) const;
};

struct PolicyFilterResult {
    std::vector<Partition> partitions;
    bool infeasible = false;
    FirmPair certificate;     // the conflicting pair when infeasible
    std::string reason;
};

bool is_compatible(const Partition& q, const ReplicateGame& rep, const TradePolicy& policy);

PolicyFilterResult compatible_partitions(const ReplicateGame& rep, const TradePolicy& policy,
                                         int n_cap = 6);

// A policy whose compatible set is exactly {target}: catalyze a spanning path
// inside each block, prevent one link between each pair of blocks.
TradePolicy design_policy(const ReplicateGame& rep, const Partition& target);

}  // namespace prodnet
