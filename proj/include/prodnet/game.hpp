#pragma once

#include "prodnet/walks.hpp"

namespace prodnet {

enum class TiePolicy { UniformOverArgmax, KeepCurrent, LowestIndex };
enum class Schedule { RoundRobin, Random };

struct BestResponseResult {
    Vector row;                                // replacement strategy row for the firm
    Vector coefficients;                       // per-supplier objective weight (own = 1, else D_{k,i})
    double profit = 0.0;                       // profit at the returned row
    std::vector<std::vector<int>> ties_per_category;   // argmax sets, one per category
};

struct NashReport {
    bool is_nash = false;
    int worst_firm = -1;
    double max_gain = 0.0;
    double tolerance = 0.0;
};

struct DynamicsResult {
    ProductionNetwork terminal;
    std::vector<double> potential_per_round;
    int rounds = 0;
    bool converged = false;
};

struct PotentialReport {
    Vector tree_weights;        // w(T_r) per root, size m+1 (index 0 = household)
    double potential = 0.0;     // 1 / w(T_0); exact ordinal potential of the game
    double potential_firm_sum = 0.0;   // 1 / sum_{j in M} w(T_j); reported, never asserted
    Vector stationary;          // mu, Perron vector of the flow matrix, sums to 1
};

// Game operations are degenerate when profits vanish; require eps_i >= this.
constexpr double kMinGameEpsilon = 1e-6;

BestResponseResult best_response(const EconomySpec& econ, const ProductionNetwork& net,
                                 int firm, TiePolicy tie_policy);

NashReport is_nash(const EconomySpec& econ, const ProductionNetwork& net, double tol = 1e-9);

DynamicsResult best_response_dynamics(const EconomySpec& econ, const ProductionNetwork& start,
                                      Schedule schedule, unsigned seed, int max_rounds,
                                      double tol);

PotentialReport potential_value(const EconomySpec& econ, const ProductionNetwork& net);

// Rooted-tree weights of an arbitrary flow matrix via all-minors matrix-tree
// determinants on the chain Laplacian; exposed for the oracle cross-checks.
Vector tree_weights_determinant(const FlowMatrix& flow);

// Stationary vector of the flow matrix by direct linear solve.
Vector stationary_distribution(const FlowMatrix& flow);

}  // namespace prodnet
