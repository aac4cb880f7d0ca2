#pragma once

#include "prodnet/game.hpp"
#include "prodnet/walks.hpp"

namespace prodnet {

struct OracleConfig {
    int tree_node_cap = 8;
    int walk_length_cap = 25;
    double grid_step = 0.05;
    int partition_cap = 6;
};

struct GridDeviationResult {
    double best_gain = 0.0;      // best profit improvement found on the grid
    double incumbent_profit = 0.0;
    int best_category = -1;      // category of the best deviation (-1 if none)
    Vector best_row;             // full row achieving incumbent + best_gain
    std::size_t evaluated = 0;   // grid points actually solved
};

// Explicit enumeration of rooted spanning trees of the flow chain (edges
// oriented toward the root); independent of the determinant route.
Vector tree_enumeration_oracle(const FlowMatrix& flow, int node_cap = 8);

// Per-category simplex grid search over firm i's input row, profit evaluated
// by a full equilibrium re-solve at every grid point. The profit objective is
// additively separable across categories, so scanning one category at a time
// while holding the others fixed finds an improving deviation iff one exists.
GridDeviationResult grid_deviation_oracle(const EconomySpec& econ, const ProductionNetwork& net,
                                          int firm, double step = 0.05,
                                          std::size_t point_cap = 1000000);

// Truncated walk sum sum_{t<=cap} T^t with a geometric tail bound; checks the
// resolvent route for P.
Matrix truncated_walk_oracle(const Matrix& transitions, int length_cap, double* tail_bound);

// Power iteration for the stationary distribution of the flow chain.
Vector power_iteration_stationary(const FlowMatrix& flow, int max_iters = 100000,
                                  double tol = 1e-13);

}  // namespace prodnet
