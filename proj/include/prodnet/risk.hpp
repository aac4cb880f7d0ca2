#pragma once

#include "prodnet/replicate.hpp"

namespace prodnet {

enum class DisruptionKind { Min, Sum };
enum class RiskSpatial { Homogeneous, DistanceByCountry, DistanceByCategory };

// Per-link disruption probabilities over firm pairs; only links with
// a_{i,j} > 0 are live. rho scales the output hit (1-rho)^phi.
struct RiskModel {
    Matrix link_probability;   // m x m
    double rho = 0.0;          // in [0, 1)
    DisruptionKind kind = DisruptionKind::Sum;

    void validate() const;
};

struct LiveLink {
    int buyer;
    int supplier;
};

struct ExpectedWelfare {
    double expected_simplified = 0.0;   // W-hat
    double expected_exact = 0.0;        // V-hat
    double baseline_simplified = 0.0;
    double baseline_exact = 0.0;
    double scenario_weight_sum = 0.0;   // must be 1
    std::size_t scenario_count = 0;
};

struct RiskPartitionScan {
    std::vector<PartitionWelfare> scan;   // expected welfare per partition
    Partition argmax;
    Partition argmin;
    double max_welfare = 0.0;
    double min_welfare = 0.0;
};

struct ProbabilityIdentity {
    double expected_count_lhs = 0.0;   // sum_k k P(exactly k disrupted)
    double probability_sum_rhs = 0.0;  // sum_j p_j
};

struct DistanceInequality {
    double lhs = 0.0;   // (m/n) sum_{i<j}|a_i-a_j| + (n/m) sum_{i<j}|b_i-b_j|
    double rhs = 0.0;   // sum_{i,j} |a_i - b_j|
    double merged_form_lhs = 0.0;   // (S_a + S_b + S_ab)/(m+n)
    double merged_form_rhs = 0.0;   // S_a/n + S_b/m
};

Matrix build_risk_matrix(const ReplicateGame& rep, RiskSpatial spatial, double r);

std::vector<LiveLink> live_links(const ProductionNetwork& net);

double disruption_exponent(const ProductionNetwork& net, const CategoryMap& categories,
                           const std::vector<LiveLink>& disrupted, DisruptionKind kind,
                           int firm);

// Exact expected welfare by enumerating every disruption scenario over the
// live links (2^|E|). Welfare per scenario is evaluated through the exact
// affine form W(K) = W + log(1-rho) * sum_i g_i phi_i(K); equilibrium
// quantities are unchanged by productivity shocks.
ExpectedWelfare expected_welfare_exact(const EconomySpec& econ, const ProductionNetwork& net,
                                       const RiskModel& risk, int live_link_cap = 20);

// Closed-form expected welfare on a Q-clustered structure with Hicks-neutral
// productivity and category-uniform consumption shares.
double expected_welfare_clustered(const ReplicateGame& rep, const Partition& q,
                                  DisruptionKind kind, RiskSpatial spatial, double r,
                                  double rho);

RiskPartitionScan risk_partition_scan(const ReplicateGame& rep, DisruptionKind kind,
                                      RiskSpatial spatial, double r, double rho,
                                      int n_cap = 6);

ProbabilityIdentity expected_count_identity(const std::vector<double>& p);

DistanceInequality distance_sum_inequality(const std::vector<double>& a,
                                           const std::vector<double>& b);

}  // namespace prodnet
