#include "prodnet/verify.hpp"

#include "prodnet/oracles.hpp"
#include "prodnet/policy.hpp"
#include "prodnet/risk.hpp"
#include "prodnet/sampling.hpp"
#include "prodnet/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace prodnet {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

EconomySpec inst_b(const ProductivityModel& productivity) {
    EconomySpec e;
    e.consumption_shares = Vector(2);
    e.consumption_shares << 0.5, 0.5;
    e.labor_shares = Vector(2);
    e.labor_shares << 0.5, 0.5;
    e.requirements = Matrix(2, 2);
    e.requirements << 0.2, 0.3, 0.3, 0.2;
    e.categories.num_categories = 2;
    e.categories.firm_category = {0, 1};
    e.productivity = productivity;
    e.validate();
    return e;
}

VerifyCheck check_equilibrium_residuals() {
    VerifyCheck c{"equilibrium_residuals", true, 0.0, ""};
    std::mt19937 rng(20240801);
    for (int t = 0; t < 40; ++t) {
        const EconomySpec econ = sample_economy(rng, 8);
        const ProductionNetwork net = sample_network(rng, econ);
        const EquilibriumResult eq = solve_equilibrium(econ, net);
        const FlowMatrix flow = build_flow_matrix(econ, net);
        const int m = econ.firm_count();

        // Revenue fixed point (I - A~_M) v = a0.
        Matrix am = flow.values.bottomRightCorner(m, m);
        const double res_eq =
            ((Matrix::Identity(m, m) - am) * eq.revenues - econ.consumption_shares)
                .cwiseAbs()
                .maxCoeff();
        // Labor market clears at wage 1.
        double labor = -1.0;
        for (int i = 0; i < m; ++i) labor += econ.labor_shares[i] * eq.revenues[i];
        // Goods markets: output of j equals total allocation of good j.
        double market = 0.0;
        for (int j = 0; j < m; ++j) {
            double demand = eq.allocation(0, j + 1);
            for (int i = 0; i < m; ++i) demand += eq.allocation(i + 1, j + 1);
            market = std::max(market, std::abs(eq.outputs[j] - demand));
        }
        // Stationary route: v = mu_i / mu_0.
        const Vector mu = stationary_distribution(flow);
        double stat = 0.0;
        for (int i = 0; i < m; ++i)
            stat = std::max(stat, std::abs(mu[i + 1] / mu[0] - eq.revenues[i]));

        c.worst_error = std::max({c.worst_error, res_eq, std::abs(labor), market, stat});
        if (res_eq > 1e-10 || std::abs(labor) > 1e-10 || market > 1e-9 || stat > 1e-9)
            c.passed = false;
    }
    c.detail = "worst residual " + fmt(c.worst_error) + " over 40 instances";
    return c;
}

VerifyCheck check_walk_equivalence() {
    VerifyCheck c{"walk_equivalence", true, 0.0, ""};
    std::mt19937 rng(20240802);
    for (int t = 0; t < 40; ++t) {
        const EconomySpec econ = sample_economy(rng, 8);
        const ProductionNetwork net = sample_network(rng, econ);
        const EquilibriumResult eq = solve_equilibrium(econ, net);
        const WalkProfit wp = profit_via_walks(econ, net);
        const WalkTables wt = walk_tables(econ, net);
        const int m = econ.firm_count();
        for (int i = 0; i < m; ++i) {
            const double direct = econ.epsilon(i) * eq.revenues[i];
            c.worst_error = std::max({c.worst_error,
                                      std::abs(wp.resolvent_route[i] - direct),
                                      std::abs(wp.ratio_route[i] - direct)});
            c.worst_error = std::max(
                c.worst_error, std::abs(wt.total(i, i) * (1.0 - wt.direct(i, i)) - 1.0));
            for (int j = 0; j < m; ++j)
                if (j != i)
                    c.worst_error = std::max(
                        c.worst_error,
                        std::abs(wt.total(j, i) - wt.direct(j, i) * wt.total(i, i)));
        }
    }
    c.passed = c.worst_error < 1e-9;
    c.detail = "worst deviation " + fmt(c.worst_error) + " over 40 instances";
    return c;
}

VerifyCheck check_potential_sign() {
    VerifyCheck c{"potential_sign", true, 0.0, ""};
    std::mt19937 rng(20240803);
    int checked = 0;
    for (int t = 0; t < 60 && c.passed; ++t) {
        const EconomySpec econ = sample_economy(rng, 5);
        ProductionNetwork net = sample_network(rng, econ);
        const int m = econ.firm_count();
        std::uniform_int_distribution<int> pick(0, m - 1);
        for (int d = 0; d < 5; ++d) {
            const int firm = pick(rng);
            ProductionNetwork alt = net;
            alt.shares.row(firm) = sample_network(rng, econ).shares.row(firm);
            const double dpi = econ.epsilon(firm) * (solve_equilibrium(econ, alt).revenues[firm] -
                                                     solve_equilibrium(econ, net).revenues[firm]);
            const double dphi = potential_value(econ, alt).potential -
                                potential_value(econ, net).potential;
            ++checked;
            if (std::abs(dpi) > 1e-12 && dpi * dphi <= 0.0) {
                c.passed = false;
                c.detail = "sign mismatch dpi=" + fmt(dpi) + " dphi=" + fmt(dphi);
                break;
            }
        }
    }
    if (c.passed) c.detail = fmt(checked) + " unilateral deviations, all signs agree";
    return c;
}

VerifyCheck check_tree_enumeration() {
    VerifyCheck c{"tree_enumeration", true, 0.0, ""};
    std::mt19937 rng(20240804);
    for (int t = 0; t < 20; ++t) {
        const EconomySpec econ = sample_economy(rng, 5);
        const ProductionNetwork net = sample_network(rng, econ);
        const FlowMatrix flow = build_flow_matrix(econ, net);
        const Vector det = tree_weights_determinant(flow);
        const Vector enumd = tree_enumeration_oracle(flow);
        c.worst_error = std::max(c.worst_error, (det - enumd).cwiseAbs().maxCoeff());
    }
    c.passed = c.worst_error < 1e-10;
    c.detail = "max |determinant - enumeration| = " + fmt(c.worst_error);
    return c;
}

VerifyCheck check_cluster_table() {
    VerifyCheck c{"cluster_table", true, 0.0, ""};
    const EconomySpec base = inst_b(ProductivityModel::constant());
    for (int n = 2; n <= 4; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        Matrix first;
        for (const auto& q : enumerate_partitions(n, 6)) {
            const ClusterInverseTable table = cluster_inverse_table(rep, q);
            c.worst_error = std::max(c.worst_error, table.max_closed_form_error);
            if (first.size() == 0)
                first = table.category_table;
            else
                c.worst_error = std::max(
                    c.worst_error, (first - table.category_table).cwiseAbs().maxCoeff());
        }
    }
    c.passed = c.worst_error < 1e-10;
    c.detail = "closed form vs direct inverse, worst " + fmt(c.worst_error);
    return c;
}

VerifyCheck check_partition_welfare() {
    VerifyCheck c{"partition_welfare", true, 0.0, ""};
    const EconomySpec hicks = inst_b(ProductivityModel::hicks_neutral());
    const EconomySpec constant = inst_b(ProductivityModel::constant());
    for (int n = 2; n <= 4; ++n) {
        // Hicks-neutral welfare is partition-invariant.
        const ReplicateGame rep = replicate_game(hicks, n);
        double w_min = std::numeric_limits<double>::infinity(), w_max = -w_min;
        for (const auto& q : enumerate_partitions(n, 6)) {
            const ClusterStructure cs = build_clustered_network(rep, q);
            const double w = simplified_welfare(rep.economy, cs.network);
            w_min = std::min(w_min, w);
            w_max = std::max(w_max, w);
        }
        c.worst_error = std::max(c.worst_error, w_max - w_min);

        // Constant lambda: islands beat full by K log n.
        const ReplicateGame repc = replicate_game(constant, n);
        Partition islands, full(1);
        for (int k = 0; k < n; ++k) islands.push_back({k}), full[0].push_back(k);
        const double wi = simplified_welfare(
            repc.economy, build_clustered_network(repc, islands).network);
        const double wf = simplified_welfare(repc.economy,
                                             build_clustered_network(repc, full).network);
        const double gap = wi - wf - 0.6 * std::log(n);
        c.worst_error = std::max(c.worst_error, std::abs(gap));
    }
    c.passed = c.worst_error < 1e-9;
    c.detail = "partition invariance + K log n gap, worst " + fmt(c.worst_error);
    return c;
}

VerifyCheck check_risk_dual_route() {
    VerifyCheck c{"risk_dual_route", true, 0.0, ""};
    const EconomySpec base = inst_b(ProductivityModel::hicks_neutral());
    for (int n = 2; n <= 3; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        for (const auto& q : enumerate_partitions(n, 6)) {
            for (DisruptionKind kind : {DisruptionKind::Min, DisruptionKind::Sum}) {
                for (RiskSpatial spatial :
                     {RiskSpatial::Homogeneous, RiskSpatial::DistanceByCountry}) {
                    if (n == 3 && static_cast<int>(q.size()) == 1 &&
                        kind == DisruptionKind::Min && spatial == RiskSpatial::Homogeneous)
                        continue;   // 24-link case covered by the acceptance suite
                    const double closed = expected_welfare_clustered(rep, q, kind, spatial,
                                                                     0.1, 0.2);
                    const ClusterStructure cs = build_clustered_network(rep, q);
                    RiskModel risk;
                    risk.link_probability = build_risk_matrix(rep, spatial, 0.1);
                    risk.rho = 0.2;
                    risk.kind = kind;
                    const ExpectedWelfare exact =
                        expected_welfare_exact(rep.economy, cs.network, risk, 24);
                    c.worst_error =
                        std::max(c.worst_error, std::abs(exact.expected_simplified - closed));
                    c.worst_error = std::max(c.worst_error,
                                             std::abs(exact.scenario_weight_sum - 1.0));
                }
            }
        }
    }
    c.passed = c.worst_error < 1e-9;
    c.detail = "exact enumeration vs closed form, worst " + fmt(c.worst_error);
    return c;
}

VerifyCheck check_risk_identities() {
    VerifyCheck c{"risk_identities", true, 0.0, ""};
    std::mt19937 rng(20240805);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> p(std::uniform_int_distribution<int>(1, 12)(rng));
        for (double& x : p) x = unif(rng);
        const ProbabilityIdentity id = expected_count_identity(p);
        c.worst_error =
            std::max(c.worst_error, std::abs(id.expected_count_lhs - id.probability_sum_rhs));
        if (c.worst_error > 1e-12) c.passed = false;
    }
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(std::uniform_int_distribution<int>(1, 8)(rng));
        std::vector<double> b(std::uniform_int_distribution<int>(1, 8)(rng));
        for (double& x : a) x = normal(rng);
        for (double& x : b) x = normal(rng);
        const DistanceInequality d = distance_sum_inequality(a, b);
        if (d.lhs > d.rhs + 1e-9) c.passed = false;
        if (d.merged_form_lhs < d.merged_form_rhs - 1e-9) c.passed = false;
    }
    c.detail = "probability identity + distance inequality, worst " + fmt(c.worst_error);
    return c;
}

VerifyCheck check_policy_filter() {
    VerifyCheck c{"policy_filter", true, 0.0, ""};
    const EconomySpec base = inst_b(ProductivityModel::constant());
    std::mt19937 rng(20240806);
    for (int n = 2; n <= 4 && c.passed; ++n) {
        const ReplicateGame rep = replicate_game(base, n);
        const auto all = enumerate_partitions(n, 6);
        std::uniform_int_distribution<int> country(0, n - 1);
        for (int t = 0; t < 20 && c.passed; ++t) {
            TradePolicy policy;
            for (int k = 0; k < 2; ++k) {
                const FirmPair link{0 * n + country(rng), 1 * n + country(rng)};
                if (k == 0) policy.prevented.push_back(link);
                else if (std::find(policy.prevented.begin(), policy.prevented.end(), link) ==
                         policy.prevented.end())
                    policy.catalyzed.push_back(link);
            }
            const PolicyFilterResult fast = compatible_partitions(rep, policy);
            std::vector<Partition> brute;
            for (const auto& q : all)
                if (is_compatible(q, rep, policy)) brute.push_back(q);
            if (fast.partitions != brute) {
                c.passed = false;
                c.detail = "propagation/enumeration mismatch at n=" + std::to_string(n);
            }
        }
        for (const auto& target : all) {
            const TradePolicy designed = design_policy(rep, target);
            const PolicyFilterResult round = compatible_partitions(rep, designed);
            std::vector<Partition> want{target};
            std::vector<Partition> got = round.partitions;
            // design targets are canonical (sorted) partitions from the enumerator
            if (got != want) {
                c.passed = false;
                c.detail = "design round-trip not a singleton at n=" + std::to_string(n);
            }
        }
    }
    if (c.passed) c.detail = "brute-force agreement and design round-trips for n <= 4";
    return c;
}

VerifyCheck check_grid_best_response() {
    VerifyCheck c{"grid_best_response", true, 0.0, ""};
    const EconomySpec base = inst_b(ProductivityModel::constant());
    const ReplicateGame rep = replicate_game(base, 2);
    const EconomySpec econ = with_uniform_epsilon(rep.economy, 1e-3);
    Partition islands{{0}, {1}};
    ProductionNetwork net = build_clustered_network(rep, islands).network;
    net.shares *= 1.0 - 1e-3;   // move to the eps = 1e-3 budget
    for (int firm = 0; firm < econ.firm_count(); ++firm) {
        const GridDeviationResult grid = grid_deviation_oracle(econ, net, firm, 0.05);
        c.worst_error = std::max(c.worst_error, grid.best_gain);
    }
    const NashReport nash = is_nash(econ, net);
    c.passed = c.worst_error <= 1e-9 && nash.is_nash;
    c.detail = "islands replicate: grid gain " + fmt(c.worst_error) + ", analytic nash " +
               (nash.is_nash ? "yes" : "no");
    return c;
}

}  // namespace

std::vector<VerifyCheck> run_verification() {
    return {check_equilibrium_residuals(), check_walk_equivalence(), check_potential_sign(),
            check_tree_enumeration(),      check_cluster_table(),    check_partition_welfare(),
            check_risk_dual_route(),       check_risk_identities(),  check_policy_filter(),
            check_grid_best_response()};
}

}  // namespace prodnet
