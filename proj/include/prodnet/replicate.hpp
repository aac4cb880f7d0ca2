#pragma once

#include "prodnet/economy.hpp"
#include "prodnet/game.hpp"
#include "prodnet/partitions.hpp"

namespace prodnet {

// n-fold replicate of a simple game (one firm per category). Firm l*n + c has
// category l and country c; consumption shares split evenly per category.
struct ReplicateGame {
    EconomySpec base;      // simple game, m == L
    EconomySpec economy;   // replicated spec with country labels
    int n = 1;

    int category_of(int firm) const { return firm / n; }
    int country_of(int firm) const { return firm % n; }
};

struct ClusterStructure {
    Partition partition;      // blocks of countries {0..n-1}
    ProductionNetwork network;
};

struct ClusterInverseTable {
    Matrix category_table;          // C = (I-B)^-1, L x L, partition-independent
    Vector gateway_by_category;     // Q_l = sum_l' a0_l' C_{l',l}
    std::vector<Matrix> block_inverses;   // direct (I - A^{Qk})^-1 per block
    double max_closed_form_error = 0.0;   // direct inverse vs the three-case closed form
};

struct PartitionWelfare {
    Partition partition;
    double welfare = 0.0;
};

struct PoAReport {
    std::vector<PartitionWelfare> scan;          // welfare of every Q-clustered structure
    double max_equilibrium_welfare = 0.0;        // over clustered equilibria + BR fixed points
    double min_equilibrium_welfare = 0.0;
    double max_over_clustered_configurations = 0.0;   // second numerator, same family here
    double poa_ratio = 0.0;                      // max / min of the log-welfares
    double poa_difference = 0.0;                 // max - min
    bool ratio_sign_consistent = false;          // ratio only meaningful when signs agree
    double gap_constant = 0.0;                // K = sum_l Q_l (1 - b_ll - b_l0)
};

enum class DiversificationReturns { Increasing, Decreasing, Boundary, Neither };

struct EpsilonNashScan {
    std::vector<double> epsilons;
    std::vector<NashReport> reports;
    double threshold = 0.0;   // largest grid eps such that every eps' <= eps in the grid is Nash
};

ReplicateGame replicate_game(const EconomySpec& base, int n);

// Rescale requirement rows (labor included) so every firm has profit rate eps.
EconomySpec with_uniform_epsilon(const EconomySpec& econ, double eps);

ClusterStructure build_clustered_network(const ReplicateGame& rep, const Partition& q);

EpsilonNashScan verify_cluster_nash(const ReplicateGame& rep, const Partition& q,
                                    const std::vector<double>& epsilon_grid,
                                    double tol = 1e-9);

ClusterInverseTable cluster_inverse_table(const ReplicateGame& rep, const Partition& q);

PoAReport partition_welfare_scan(const ReplicateGame& rep, const ProductivityModel& productivity,
                                 int n_cap = 6);

DiversificationReturns classify_returns_to_diversification(const ProductivityModel& productivity,
                                                           int sample_count, unsigned seed);

}  // namespace prodnet
