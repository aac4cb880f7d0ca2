// Acceptance suite: twelve end-to-end criteria, one pass/fail line each.
#include "prodnet/oracles.hpp"
#include "prodnet/policy.hpp"
#include "prodnet/risk.hpp"
#include "prodnet/sampling.hpp"
#include "prodnet/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace prodnet;

namespace {

int failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  %2d. %s (%s)\n", ok ? "PASS" : "FAIL", index, name, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

EconomySpec inst_b(const ProductivityModel& p = ProductivityModel::constant()) {
    EconomySpec e;
    e.consumption_shares = Vector(2);
    e.consumption_shares << 0.5, 0.5;
    e.labor_shares = Vector(2);
    e.labor_shares << 0.5, 0.5;
    e.requirements = Matrix(2, 2);
    e.requirements << 0.2, 0.3, 0.3, 0.2;
    e.categories.num_categories = 2;
    e.categories.firm_category = {0, 1};
    e.productivity = p;
    e.validate();
    return e;
}

EconomySpec simple_l3() {
    EconomySpec e;
    e.consumption_shares = Vector(3);
    e.consumption_shares << 0.5, 0.3, 0.2;
    e.labor_shares = Vector(3);
    e.labor_shares << 0.4, 0.35, 0.3;
    e.requirements = Matrix(3, 3);
    e.requirements << 0.1, 0.2, 0.15, 0.25, 0.1, 0.2, 0.2, 0.3, 0.1;
    e.categories.num_categories = 3;
    e.categories.firm_category = {0, 1, 2};
    e.validate();
    return e;
}

// 1. Equilibrium correctness on 200 random admissible instances.
void criterion_1() {
    std::mt19937 rng(101);
    double worst = 0.0;
    bool ok = true;
    for (int t = 0; t < 200; ++t) {
        const EconomySpec econ = sample_economy(rng, 8);
        const ProductionNetwork net = sample_network(rng, econ);
        const EquilibriumResult eq = solve_equilibrium(econ, net);
        const FlowMatrix flow = build_flow_matrix(econ, net);
        const int m = econ.firm_count();

        const Matrix am = flow.values.bottomRightCorner(m, m);
        const double fixed_point =
            ((Matrix::Identity(m, m) - am) * eq.revenues - econ.consumption_shares)
                .cwiseAbs()
                .maxCoeff();
        double labor = -1.0;
        for (int i = 0; i < m; ++i) labor += econ.labor_shares[i] * eq.revenues[i];
        double market = 0.0;
        for (int j = 0; j < m; ++j) {
            double demand = eq.allocation(0, j + 1);
            for (int i = 0; i < m; ++i) demand += eq.allocation(i + 1, j + 1);
            market = std::max(market, std::abs(eq.outputs[j] - demand));
        }
        const Vector mu = stationary_distribution(flow);
        double stat = 0.0;
        for (int i = 0; i < m; ++i)
            stat = std::max(stat, std::abs(mu[i + 1] / mu[0] - eq.revenues[i]));

        worst = std::max({worst, fixed_point, std::abs(labor), market, stat});
        ok = ok && fixed_point < 1e-10 && std::abs(labor) < 1e-10 && market < 1e-9 &&
             stat < 1e-9;
    }
    report(1, "equilibrium correctness on 200 random instances", ok,
           "worst residual " + fmt(worst));
}

// 2. Walk-calculus equivalence and identities on the same scale.
void criterion_2() {
    std::mt19937 rng(102);
    double worst_profit = 0.0, worst_identity = 0.0;
    for (int t = 0; t < 200; ++t) {
        const EconomySpec econ = sample_economy(rng, 8);
        const ProductionNetwork net = sample_network(rng, econ);
        const EquilibriumResult eq = solve_equilibrium(econ, net);
        const WalkProfit wp = profit_via_walks(econ, net);
        const WalkTables wt = walk_tables(econ, net);
        for (int i = 0; i < econ.firm_count(); ++i) {
            const double pi = econ.epsilon(i) * eq.revenues[i];
            worst_profit = std::max({worst_profit, std::abs(wp.resolvent_route[i] - pi),
                                     std::abs(wp.ratio_route[i] - pi)});
            worst_identity = std::max(
                worst_identity, std::abs(wt.total(i, i) * (1.0 - wt.direct(i, i)) - 1.0));
            for (int j = 0; j < econ.firm_count(); ++j)
                if (j != i)
                    worst_identity =
                        std::max(worst_identity, std::abs(wt.total(j, i) -
                                                          wt.direct(j, i) * wt.total(i, i)));
        }
    }
    report(2, "walk-calculus equivalence on 200 random instances",
           worst_profit < 1e-9 && worst_identity < 1e-10,
           "profit routes " + fmt(worst_profit) + ", identities " + fmt(worst_identity));
}

// 3. Ordinal potential sign property and tree-weight cross-check.
void criterion_3() {
    std::mt19937 rng(103);
    int deviations = 0, mismatches = 0;
    while (deviations < 500) {
        const EconomySpec econ = sample_economy(rng, 5);
        ProductionNetwork net = sample_network(rng, econ);
        std::uniform_int_distribution<int> pick(0, econ.firm_count() - 1);
        for (int d = 0; d < 5 && deviations < 500; ++d) {
            const int firm = pick(rng);
            ProductionNetwork alt = net;
            alt.shares.row(firm) = sample_network(rng, econ).shares.row(firm);
            const double dpi =
                econ.epsilon(firm) * (solve_equilibrium(econ, alt).revenues[firm] -
                                      solve_equilibrium(econ, net).revenues[firm]);
            if (std::abs(dpi) <= 1e-12) continue;
            const double dphi =
                potential_value(econ, alt).potential - potential_value(econ, net).potential;
            if (dpi * dphi <= 0.0) ++mismatches;
            ++deviations;
        }
    }
    double worst_tree = 0.0;
    for (int t = 0; t < 25; ++t) {
        const EconomySpec econ = sample_economy(rng, 5);
        const FlowMatrix flow = build_flow_matrix(econ, sample_network(rng, econ));
        worst_tree = std::max(worst_tree, (tree_weights_determinant(flow) -
                                           tree_enumeration_oracle(flow))
                                              .cwiseAbs()
                                              .maxCoeff());
    }
    report(3, "ordinal potential over 500 deviations + tree enumeration",
           mismatches == 0 && worst_tree < 1e-10,
           std::to_string(mismatches) + " sign mismatches, tree gap " + fmt(worst_tree));
}

// 4. Best responses keep the own-category budget at home.
void criterion_4() {
    std::mt19937 rng(104);
    bool analytic_ok = true;
    for (int t = 0; t < 40; ++t) {
        const EconomySpec econ = sample_economy(rng, 6);
        const ProductionNetwork net = sample_network(rng, econ);
        for (int i = 0; i < econ.firm_count(); ++i) {
            const BestResponseResult br = best_response(econ, net, i, TiePolicy::LowestIndex);
            const int own = econ.categories.firm_category[i];
            if (std::abs(br.row[i] - econ.requirements(i, own)) > 1e-14) analytic_ok = false;
        }
    }
    // Grid route: no improving deviation reduces the self-supply weight.
    bool grid_ok = true;
    const ReplicateGame rep = replicate_game(inst_b(), 2);
    const EconomySpec econ = with_uniform_epsilon(rep.economy, 1e-3);
    std::mt19937 rng2(1040);
    const ProductionNetwork net = sample_network(rng2, econ);
    for (int firm = 0; firm < econ.firm_count(); ++firm) {
        const GridDeviationResult grid = grid_deviation_oracle(econ, net, firm, 0.05);
        const int own = econ.categories.firm_category[firm];
        if (grid.best_gain > 1e-9 &&
            grid.best_row[firm] < econ.requirements(firm, own) - 1e-12)
            grid_ok = false;
    }
    report(4, "best responses self-supply the own category", analytic_ok && grid_ok,
           std::string("analytic ") + (analytic_ok ? "exact" : "violated") + ", grid " +
               (grid_ok ? "agrees" : "disagrees"));
}

// 5. All clustered structures are Nash at eps = 1e-3 (n <= 4, L <= 3).
void criterion_5() {
    bool ok = true;
    for (const EconomySpec& base : {inst_b(), simple_l3()}) {
        for (int n = 2; n <= 4; ++n) {
            const ReplicateGame rep = replicate_game(base, n);
            for (const auto& q : enumerate_partitions(n, 6))
                ok = ok && verify_cluster_nash(rep, q, {1e-3}).reports[0].is_nash;
        }
    }
    // Grid confirmation on the 2x2 case.
    const ReplicateGame rep = replicate_game(inst_b(), 2);
    const EconomySpec econ = with_uniform_epsilon(rep.economy, 1e-3);
    ProductionNetwork net = build_clustered_network(rep, Partition{{0}, {1}}).network;
    net.shares *= 1.0 - 1e-3;
    double grid_gain = 0.0;
    for (int firm = 0; firm < econ.firm_count(); ++firm)
        grid_gain =
            std::max(grid_gain, grid_deviation_oracle(econ, net, firm, 0.05).best_gain);
    ok = ok && grid_gain <= 1e-9;
    report(5, "clustered structures are Nash (Bell scan + grid oracle)", ok,
           "grid gain " + fmt(grid_gain));
}

// 6. Hicks-neutral welfare is partition-invariant.
void criterion_6() {
    double spread = 0.0;
    for (int n = 2; n <= 4; ++n) {
        const ReplicateGame rep = replicate_game(inst_b(ProductivityModel::hicks_neutral()), n);
        double lo = 1e300, hi = -1e300;
        for (const auto& q : enumerate_partitions(n, 6)) {
            const double w =
                simplified_welfare(rep.economy, build_clustered_network(rep, q).network);
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
        spread = std::max(spread, hi - lo);
    }
    report(6, "hicks-neutral welfare equal across partitions", spread < 1e-9,
           "spread " + fmt(spread));
}

// 7. The productivity exponent flips the islands/full ordering.
void criterion_7() {
    bool ok = true;
    for (int n = 2; n <= 4; ++n) {
        Partition islands, full(1);
        for (int c = 0; c < n; ++c) islands.push_back({c}), full[0].push_back(c);
        const ReplicateGame sharp = replicate_game(inst_b(ProductivityModel::power(2.0)), n);
        const ReplicateGame flat = replicate_game(inst_b(), n);
        const double w_sharp_full =
            simplified_welfare(sharp.economy, build_clustered_network(sharp, full).network);
        const double w_sharp_isl =
            simplified_welfare(sharp.economy, build_clustered_network(sharp, islands).network);
        const double w_flat_full =
            simplified_welfare(flat.economy, build_clustered_network(flat, full).network);
        const double w_flat_isl =
            simplified_welfare(flat.economy, build_clustered_network(flat, islands).network);
        ok = ok && w_sharp_full > w_sharp_isl && w_flat_isl > w_flat_full;
    }
    report(7, "theta = 2 favors full, theta = 0 favors islands (n = 2..4)", ok,
           ok ? "both orderings hold" : "ordering violated");
}

// 8. Islands-minus-full gap equals K log n with K from the inverse table.
void criterion_8() {
    double worst = 0.0;
    double k_table = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const ReplicateGame rep = replicate_game(inst_b(), n);
        Partition islands, full(1);
        for (int c = 0; c < n; ++c) islands.push_back({c}), full[0].push_back(c);
        const ClusterInverseTable table = cluster_inverse_table(rep, full);
        double K = 0.0;
        for (int l = 0; l < 2; ++l)
            K += table.gateway_by_category[l] *
                 (1.0 - rep.base.requirements(l, l) - rep.base.labor_shares[l]);
        k_table = K;
        const double wi =
            simplified_welfare(rep.economy, build_clustered_network(rep, islands).network);
        const double wf =
            simplified_welfare(rep.economy, build_clustered_network(rep, full).network);
        worst = std::max(worst, std::abs(wi - wf - K * std::log(n)));
    }
    report(8, "welfare gap equals K log n for n = 2..6",
           worst < 1e-9 && std::abs(k_table - 0.6) < 1e-12,
           "K = " + fmt(k_table) + ", worst gap error " + fmt(worst));
}

// 9. Cluster inverse closed form vs direct inversion, partition-independent C.
void criterion_9() {
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
        const ReplicateGame rep = replicate_game(inst_b(), n);
        Matrix reference;
        for (const auto& q : enumerate_partitions(n, 6)) {
            const ClusterInverseTable t = cluster_inverse_table(rep, q);
            worst = std::max(worst, t.max_closed_form_error);
            if (reference.size() == 0)
                reference = t.category_table;
            else
                worst = std::max(worst,
                                 (reference - t.category_table).cwiseAbs().maxCoeff());
        }
    }
    report(9, "cluster inverse closed form (all partitions, n <= 4)", worst < 1e-10,
           "worst error " + fmt(worst));
}

// 10. Risk: exact enumeration vs closed form, the three orderings, identities.
void criterion_10() {
    const EconomySpec base = inst_b(ProductivityModel::hicks_neutral());
    double dual_gap = 0.0;
    for (int n = 2; n <= 3; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        for (const auto& q : enumerate_partitions(n, 6)) {
            RiskModel risk{build_risk_matrix(rep, RiskSpatial::Homogeneous, 0.1), 0.2,
                           DisruptionKind::Min};
            const ProductionNetwork net = build_clustered_network(rep, q).network;
            const ExpectedWelfare exact = expected_welfare_exact(rep.economy, net, risk, 24);
            const double closed = expected_welfare_clustered(
                rep, q, DisruptionKind::Min, RiskSpatial::Homogeneous, 0.1, 0.2);
            dual_gap = std::max(dual_gap, std::abs(exact.expected_simplified - closed));
        }
    }

    bool orderings = true;
    for (int n = 2; n <= 4; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        Partition islands, full(1);
        for (int c = 0; c < n; ++c) islands.push_back({c}), full[0].push_back(c);
        const RiskPartitionScan c1 = risk_partition_scan(rep, DisruptionKind::Min,
                                                         RiskSpatial::Homogeneous, 0.1, 0.2);
        const RiskPartitionScan c2 = risk_partition_scan(rep, DisruptionKind::Sum,
                                                         RiskSpatial::Homogeneous, 0.1, 0.2);
        const RiskPartitionScan c3 = risk_partition_scan(
            rep, DisruptionKind::Sum, RiskSpatial::DistanceByCountry, 0.1, 0.2);
        orderings = orderings && c1.argmax == full && c1.argmin == islands &&
                    (c2.max_welfare - c2.min_welfare) < 1e-9 && c3.argmax == islands &&
                    c3.argmin == full;
    }

    std::mt19937 rng(110);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 2.0);
    double identity_gap = 0.0;
    bool inequality_ok = true;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> p(std::uniform_int_distribution<int>(1, 12)(rng));
        for (double& x : p) x = unif(rng);
        const ProbabilityIdentity id = expected_count_identity(p);
        identity_gap = std::max(identity_gap,
                                std::abs(id.expected_count_lhs - id.probability_sum_rhs));
    }
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> a(std::uniform_int_distribution<int>(1, 8)(rng));
        std::vector<double> b(std::uniform_int_distribution<int>(1, 8)(rng));
        for (double& x : a) x = normal(rng);
        for (double& x : b) x = normal(rng);
        const DistanceInequality d = distance_sum_inequality(a, b);
        if (d.lhs > d.rhs + 1e-9) inequality_ok = false;
    }
    report(10, "risk dual routes, orderings, and appendix identities",
           dual_gap < 1e-9 && orderings && identity_gap < 1e-12 && inequality_ok,
           "dual gap " + fmt(dual_gap) + ", identity gap " + fmt(identity_gap));
}

// 11. Policy filtering agrees with brute force; designed policies round-trip.
void criterion_11() {
    const EconomySpec base = inst_b();
    std::mt19937 rng(111);
    bool brute_ok = true;
    for (int n = 2; n <= 5; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        const auto all = enumerate_partitions(n, 6);
        std::uniform_int_distribution<int> country(0, n - 1);
        for (int t = 0; t < 30; ++t) {
            TradePolicy policy;
            for (int k = 0; k < 3; ++k) {
                const FirmPair link{0 * n + country(rng), 1 * n + country(rng)};
                auto& side = (k % 2 == 0) ? policy.prevented : policy.catalyzed;
                bool dup = false;
                for (const auto& p : policy.prevented) dup = dup || p == link;
                for (const auto& p : policy.catalyzed) dup = dup || p == link;
                if (!dup) side.push_back(link);
            }
            const PolicyFilterResult fast = compatible_partitions(rep, policy);
            std::vector<Partition> brute;
            for (const auto& q : all)
                if (is_compatible(q, rep, policy)) brute.push_back(q);
            brute_ok = brute_ok && fast.partitions == brute;
        }
    }
    bool design_ok = true;
    for (int n = 2; n <= 4; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        for (const auto& target : enumerate_partitions(n, 6)) {
            const PolicyFilterResult round =
                compatible_partitions(rep, design_policy(rep, target));
            design_ok = design_ok && round.partitions == std::vector<Partition>{target};
        }
    }
    report(11, "policy filtering (brute force n <= 5, round-trips n <= 4)",
           brute_ok && design_ok,
           std::string("brute ") + (brute_ok ? "agrees" : "disagrees") + ", design " +
               (design_ok ? "exact" : "broken"));
}

// 12. `verify` is deterministic: two runs, byte-identical reports.
void criterion_12() {
    const char* cli = std::getenv("PRODNET_CLI");
    if (cli == nullptr) {
        report(12, "verify determinism", false, "PRODNET_CLI not set");
        return;
    }
    auto run_verify = [&](const std::string& dir) {
        if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) return -1;
        const std::string cmd =
            std::string(cli) + " verify --out " + dir + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = "/tmp/prodnet-acc-verify-a", b = "/tmp/prodnet-acc-verify-b";
    const int ca = run_verify(a), cb = run_verify(b);
    const std::string ja = slurp(a + "/verify.json"), jb = slurp(b + "/verify.json");
    const bool ok = ca == 0 && cb == 0 && !ja.empty() && ja == jb &&
                    slurp(a + "/verify.csv") == slurp(b + "/verify.csv");
    report(12, "verify runs are byte-identical", ok,
           "exit codes " + std::to_string(ca) + "/" + std::to_string(cb));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
