#pragma once

#include "prodnet/economy.hpp"

namespace prodnet {

// Walk calculus on the revenue-routing weights t_{h,k} = a_{h,k} + eps_h a_{0,k},
// walks restricted to firm nodes.
struct WalkTables {
    Matrix transitions;   // T, m x m, T(h,k) = share of h's revenue routed to k
    Matrix total;         // P(j,i) = sum of all walk weights j -> i
    Matrix direct;        // D(j,i) = direct-walk weight; D(i,i) = direct-cycle weight
    Vector household;     // P(0,i) = sum_j a0_j P(j,i)
};

struct WalkProfit {
    Vector resolvent_route;   // eps_i sum_j a0_j P_{j,i}
    Vector ratio_route;       // eps_i (a0_i + sum_{j!=i} a0_j D_{j,i}) / (1 - own-routing term)
};

WalkTables walk_tables(const EconomySpec& econ, const ProductionNetwork& net);

WalkProfit profit_via_walks(const EconomySpec& econ, const ProductionNetwork& net);

}  // namespace prodnet
