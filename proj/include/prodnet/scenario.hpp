#pragma once

#include "prodnet/oracles.hpp"
#include "prodnet/policy.hpp"
#include "prodnet/risk.hpp"

#include <optional>

namespace prodnet {

struct ScenarioOptions {
    double tol = 1e-9;
    double epsilon = 1e-3;
    TiePolicy tie_policy = TiePolicy::KeepCurrent;
    unsigned seed = 0;
    int max_rounds = 100;
    int n_cap = 6;
    double grid_step = 0.05;
    int live_link_cap = 20;
};

struct RiskSpec {
    DisruptionKind kind = DisruptionKind::Sum;
    RiskSpatial spatial = RiskSpatial::Homogeneous;
    double r = 0.0;
    double rho = 0.0;
};

struct Scenario {
    std::string name;
    EconomySpec economy;                  // base game
    std::optional<Matrix> network;        // explicit strategy profile
    int replicate_n = 0;                  // 0 when absent
    std::optional<Partition> partition;   // country partition for clustered runs
    std::optional<RiskSpec> risk;
    std::optional<TradePolicy> policy;    // firm pairs over the replicate economy
    ScenarioOptions options;
};

// Strict parse: unknown keys are rejected with a nearest-key suggestion, all
// validation errors name the offending field path.
Scenario load_scenario(const std::string& path);

std::string tie_policy_name(TiePolicy p);
TiePolicy tie_policy_from_name(const std::string& name);

}  // namespace prodnet
