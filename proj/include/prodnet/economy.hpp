#pragma once

#include "prodnet/types.hpp"

#include <optional>

namespace prodnet {

struct AssumptionReport {
    bool household_consumes_every_good = false;   // a0 strictly positive
    bool all_firms_use_labor = false;             // a_{i,0} > 0 for all i
    bool some_firm_uses_intermediates = false;    // exists b_{i,ell} > 0, ell != labor
    bool irreducible = false;
    bool aperiodic = false;

    bool assumptions_hold() const {
        return household_consumes_every_good && all_firms_use_labor && some_firm_uses_intermediates;
    }
    bool ergodic() const { return irreducible && aperiodic; }
    // Ergodicity, not the sufficient conditions, is what the solver needs.
    bool solver_eligible() const { return ergodic(); }
};

struct EquilibriumResult {
    Vector revenues;            // v_i, numeraire p0 = 1
    double household_revenue;   // v0 = p0 + total profits
    Vector prices;              // p_i
    Vector outputs;             // y_i = v_i / p_i
    Matrix allocation;          // (m+1)x(m+1), x_{i,j}; row 0 = household consumption
    Vector profits;             // pi_i = eps_i v_i
    double log_welfare;         // V, exact log-utility welfare
    double simplified_welfare;  // W = a0' (I-A)^-1 u
};

struct WelfareReport {
    Vector entropy_corrected_productivity;   // u_i
    Vector diag_returns;                     // D_ii = sum_j a_{i,j} - 1 = -eps_i
    Vector gateway;                          // g_i = [a0' (I-A)^-1]_i
    double exact;                            // V from the closed form
    double simplified;                       // W
    double direct_allocation_log_utility;    // V recomputed from the solved allocation
    double constant_log_v0;                  // the log(v0) constant of the exact form
    double constant_log_p0;                  // the constant-returns variant, log(p0) = 0
};

struct GradientReport {
    Matrix partial_closed_form;    // proof route, only meaningful where a_{i,j} > 0
    Matrix partial_statement_form; // P_{0,i}(sum_k P_{j,k} u_k + ...) route
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> at_zero;  // one-sided (-inf) entries
    Matrix kkt_residual;           // firm x category: max - min partial over positive entries
};

// True when every category row-sum matches b_{i,ell} and entries are
// nonnegative; fills `why` with the first violation if given.
bool is_admissible(const EconomySpec& econ, const ProductionNetwork& net,
                   double tol = kShareTol, std::string* why = nullptr);
void require_admissible(const EconomySpec& econ, const ProductionNetwork& net);

AssumptionReport validate_assumptions(const EconomySpec& econ, const ProductionNetwork& net);

FlowMatrix build_flow_matrix(const EconomySpec& econ, const ProductionNetwork& net);

// Entropy-corrected productivity u_i = log lambda_i(a_i) + sum_{j in N} a_{i,j} log a_{i,j}
// (labor term included, 0 log 0 = 0).
Vector entropy_corrected_productivity(const EconomySpec& econ, const ProductionNetwork& net);

// Gateway weights a0' (I-A)^-1 over the production matrix A.
Vector gateway_weights(const EconomySpec& econ, const ProductionNetwork& net);

double simplified_welfare(const EconomySpec& econ, const ProductionNetwork& net);

EquilibriumResult solve_equilibrium(const EconomySpec& econ, const ProductionNetwork& net);

WelfareReport compute_welfare(const EconomySpec& econ, const ProductionNetwork& net,
                              const EquilibriumResult& eq);

GradientReport welfare_first_order(const EconomySpec& econ, const ProductionNetwork& net);

}  // namespace prodnet
