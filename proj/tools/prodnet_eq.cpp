#include "prodnet/scenario.hpp"
#include "prodnet/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace prodnet;

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

json json_vector(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json json_matrix(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

json json_partition(const Partition& q) {
    json out = json::array();
    for (const auto& block : q) out.push_back(block);
    return out;
}

std::string partition_label(const Partition& q) {
    std::string s;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (k) s += '|';
        for (std::size_t i = 0; i < q[k].size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(q[k][i]);
        }
    }
    return s;
}

// Atomic write: temp file in the target directory, then rename.
void write_atomic(const fs::path& target, const std::string& content) {
    fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

struct Emitter {
    fs::path dir;
    std::string format;   // json | csv | both

    void json_report(const std::string& name, const json& doc) const {
        if (format == "csv") return;
        write_atomic(dir / (name + ".json"), doc.dump(2) + "\n");
    }
    void csv_table(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) const {
        if (format == "json") return;
        std::string out;
        for (std::size_t k = 0; k < header.size(); ++k)
            out += (k ? "," : "") + header[k];
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + row[k];
            out += '\n';
        }
        write_atomic(dir / (name + ".csv"), out);
    }
};

struct Resolved {
    EconomySpec econ;
    ProductionNetwork net;
    std::optional<ReplicateGame> rep;
    Partition partition;   // used when rep is present
};

// Build the concrete (economy, network) the command runs on. Precedence:
// explicit network; replicate + partition (default islands) as a clustered
// structure; otherwise the unique admissible network of a simple game.
Resolved resolve(const Scenario& sc) {
    Resolved r;
    if (sc.replicate_n > 0) {
        r.rep = replicate_game(sc.economy, sc.replicate_n);
        r.econ = r.rep->economy;
        if (sc.partition) {
            r.partition = *sc.partition;
        } else {
            for (int c = 0; c < sc.replicate_n; ++c) r.partition.push_back({c});
        }
        if (sc.network) {
            r.net = ProductionNetwork{*sc.network};
            require_admissible(r.econ, r.net);
        } else {
            r.net = build_clustered_network(*r.rep, r.partition).network;
        }
        return r;
    }
    r.econ = sc.economy;
    if (sc.network) {
        r.net = ProductionNetwork{*sc.network};
        require_admissible(r.econ, r.net);
        return r;
    }
    const auto members = r.econ.categories.members();
    for (const auto& supp : members)
        if (supp.size() != 1)
            throw std::invalid_argument(
                "scenario needs an explicit network: some category has several suppliers");
    const int m = r.econ.firm_count();
    Matrix a = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < r.econ.categories.num_categories; ++l)
            a(i, members[l][0]) = r.econ.requirements(i, l);
    r.net = ProductionNetwork{std::move(a)};
    return r;
}

int cmd_solve(const Scenario& sc, const Emitter& out) {
    Resolved r = resolve(sc);
    const AssumptionReport assume = validate_assumptions(r.econ, r.net);
    if (!assume.solver_eligible())
        throw std::domain_error("flow chain is not ergodic; equilibrium is not unique");
    const EquilibriumResult eq = solve_equilibrium(r.econ, r.net);

    json doc;
    doc["assumptions"] = {{"household_consumes_every_good", assume.household_consumes_every_good},
                          {"all_firms_use_labor", assume.all_firms_use_labor},
                          {"some_firm_uses_intermediates", assume.some_firm_uses_intermediates},
                          {"irreducible", assume.irreducible},
                          {"aperiodic", assume.aperiodic}};
    doc["revenues"] = json_vector(eq.revenues);
    doc["household_revenue"] = eq.household_revenue;
    doc["prices"] = json_vector(eq.prices);
    doc["outputs"] = json_vector(eq.outputs);
    doc["profits"] = json_vector(eq.profits);
    doc["log_welfare"] = eq.log_welfare;
    doc["simplified_welfare"] = eq.simplified_welfare;
    out.json_report("solve", doc);

    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < r.econ.firm_count(); ++i)
        rows.push_back({std::to_string(i), fmt(eq.revenues[i]), fmt(eq.prices[i]),
                        fmt(eq.outputs[i]), fmt(eq.profits[i])});
    out.csv_table("solve", {"firm", "revenue", "price", "output", "profit"}, rows);
    return 0;
}

int cmd_welfare(const Scenario& sc, const Emitter& out) {
    Resolved r = resolve(sc);
    const EquilibriumResult eq = solve_equilibrium(r.econ, r.net);
    const WelfareReport w = compute_welfare(r.econ, r.net, eq);
    const GradientReport grad = welfare_first_order(r.econ, r.net);

    json doc;
    doc["entropy_corrected_productivity"] = json_vector(w.entropy_corrected_productivity);
    doc["gateway"] = json_vector(w.gateway);
    doc["exact_log_welfare"] = w.exact;
    doc["simplified_welfare"] = w.simplified;
    doc["direct_allocation_log_utility"] = w.direct_allocation_log_utility;
    doc["gradient"] = json_matrix(grad.partial_closed_form);
    doc["kkt_residual"] = json_matrix(grad.kkt_residual);
    out.json_report("welfare", doc);

    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < r.econ.firm_count(); ++i)
        rows.push_back({std::to_string(i), fmt(w.entropy_corrected_productivity[i]),
                        fmt(w.gateway[i])});
    out.csv_table("welfare", {"firm", "entropy_corrected_productivity", "gateway"}, rows);
    return 0;
}

// Nash and dynamics need nonvanishing profits; replicate scenarios at the
// zero-profit budget are rescaled to the option epsilon.
std::pair<EconomySpec, ProductionNetwork> game_ready(const Resolved& r, double epsilon) {
    for (int i = 0; i < r.econ.firm_count(); ++i)
        if (r.econ.epsilon(i) < kMinGameEpsilon) {
            EconomySpec econ = with_uniform_epsilon(r.econ, epsilon);
            ProductionNetwork net = r.net;
            for (int j = 0; j < net.firm_count(); ++j) {
                const double target = econ.requirements.row(j).sum();
                const double current = r.net.shares.row(j).sum();
                if (current > 0.0) net.shares.row(j) *= target / current;
            }
            return {std::move(econ), std::move(net)};
        }
    return {r.econ, r.net};
}

int cmd_nash(const Scenario& sc, const Emitter& out) {
    Resolved r = resolve(sc);
    auto [econ, net] = game_ready(r, sc.options.epsilon);
    const NashReport rep = is_nash(econ, net, sc.options.tol);

    json doc;
    doc["is_nash"] = rep.is_nash;
    doc["worst_firm"] = rep.worst_firm;
    doc["max_gain"] = rep.max_gain;
    doc["tolerance"] = rep.tolerance;
    out.json_report("nash", doc);
    out.csv_table("nash", {"is_nash", "worst_firm", "max_gain"},
                  {{rep.is_nash ? "1" : "0", std::to_string(rep.worst_firm),
                    fmt(rep.max_gain)}});
    return 0;
}

int cmd_dynamics(const Scenario& sc, const Emitter& out) {
    Resolved r = resolve(sc);
    auto [econ, net] = game_ready(r, sc.options.epsilon);
    const DynamicsResult dyn = best_response_dynamics(
        econ, net, Schedule::RoundRobin, sc.options.seed, sc.options.max_rounds,
        sc.options.tol);

    json doc;
    doc["converged"] = dyn.converged;
    doc["rounds"] = dyn.rounds;
    doc["potential_per_round"] = dyn.potential_per_round;
    doc["terminal_network"] = json_matrix(dyn.terminal.shares);
    doc["terminal_is_nash"] = is_nash(econ, dyn.terminal, sc.options.tol).is_nash;
    out.json_report("dynamics", doc);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < dyn.potential_per_round.size(); ++k)
        rows.push_back({std::to_string(k), fmt(dyn.potential_per_round[k])});
    out.csv_table("dynamics", {"round", "potential"}, rows);
    return 0;
}

const ReplicateGame& need_replicate(const Resolved& r, const char* command) {
    if (!r.rep)
        throw std::invalid_argument(std::string(command) +
                                    " requires a replicate block in the scenario");
    return *r.rep;
}

int cmd_replicate_scan(const Scenario& sc, const Emitter& out) {
    Resolved r = resolve(sc);
    const ReplicateGame& rep = need_replicate(r, "replicate-scan");

    json scan = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& q : enumerate_partitions(rep.n, sc.options.n_cap)) {
        const EpsilonNashScan nash = verify_cluster_nash(rep, q, {sc.options.epsilon},
                                                         sc.options.tol);
        const ClusterStructure cs = build_clustered_network(rep, q);
        const double w = simplified_welfare(rep.economy, cs.network);
        json entry;
        entry["partition"] = json_partition(q);
        entry["welfare"] = w;
        entry["nash_at_epsilon"] = nash.reports.front().is_nash;
        scan.push_back(entry);
        rows.push_back({partition_label(q), fmt(w),
                        nash.reports.front().is_nash ? "1" : "0"});
    }
    json doc;
    doc["epsilon"] = sc.options.epsilon;
    doc["partitions"] = scan;
    out.json_report("replicate-scan", doc);
    out.csv_table("replicate-scan", {"partition", "welfare", "nash_at_epsilon"}, rows);
    return 0;
}

int cmd_poa(const Scenario& sc, const Emitter& out) {
    Resolved r = resolve(sc);
    const ReplicateGame& rep = need_replicate(r, "poa");
    const PoAReport poa = partition_welfare_scan(rep, sc.economy.productivity,
                                                 sc.options.n_cap);
    json doc;
    json scan = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& pw : poa.scan) {
        json entry;
        entry["partition"] = json_partition(pw.partition);
        entry["welfare"] = pw.welfare;
        scan.push_back(entry);
        rows.push_back({partition_label(pw.partition), fmt(pw.welfare)});
    }
    doc["scan"] = scan;
    doc["max_equilibrium_welfare"] = poa.max_equilibrium_welfare;
    doc["min_equilibrium_welfare"] = poa.min_equilibrium_welfare;
    doc["max_over_clustered_configurations"] = poa.max_over_clustered_configurations;
    doc["poa_ratio"] = poa.poa_ratio;
    doc["poa_difference"] = poa.poa_difference;
    doc["ratio_sign_consistent"] = poa.ratio_sign_consistent;
    doc["gap_constant"] = poa.gap_constant;
    out.json_report("poa", doc);
    out.csv_table("poa", {"partition", "welfare"}, rows);
    return 0;
}

int cmd_risk(const Scenario& sc, const Emitter& out) {
    if (!sc.risk) throw std::invalid_argument("risk command requires a risk block");
    Resolved r = resolve(sc);
    const RiskSpec& rs = *sc.risk;

    json doc;
    doc["kind"] = rs.kind == DisruptionKind::Min ? "min" : "sum";
    doc["r"] = rs.r;
    doc["rho"] = rs.rho;

    std::vector<std::vector<std::string>> rows;
    if (r.rep) {
        const RiskPartitionScan scan = risk_partition_scan(*r.rep, rs.kind, rs.spatial, rs.r,
                                                           rs.rho, sc.options.n_cap);
        json entries = json::array();
        for (const auto& pw : scan.scan) {
            json entry;
            entry["partition"] = json_partition(pw.partition);
            entry["expected_welfare"] = pw.welfare;
            entries.push_back(entry);
            rows.push_back({partition_label(pw.partition), fmt(pw.welfare)});
        }
        doc["scan"] = entries;
        doc["argmax"] = json_partition(scan.argmax);
        doc["argmin"] = json_partition(scan.argmin);
        doc["max_expected_welfare"] = scan.max_welfare;
        doc["min_expected_welfare"] = scan.min_welfare;

        RiskModel model;
        model.link_probability = build_risk_matrix(*r.rep, rs.spatial, rs.r);
        model.rho = rs.rho;
        model.kind = rs.kind;
        const auto links = live_links(r.net);
        if (static_cast<int>(links.size()) <= sc.options.live_link_cap) {
            const ExpectedWelfare exact =
                expected_welfare_exact(r.econ, r.net, model, sc.options.live_link_cap);
            doc["exact_enumeration"] = {
                {"partition", json_partition(r.partition)},
                {"expected_simplified", exact.expected_simplified},
                {"expected_exact", exact.expected_exact},
                {"scenario_count", exact.scenario_count},
                {"scenario_weight_sum", exact.scenario_weight_sum}};
        }
    } else {
        RiskModel model;
        model.link_probability =
            Matrix::Constant(r.econ.firm_count(), r.econ.firm_count(), rs.r);
        model.rho = rs.rho;
        model.kind = rs.kind;
        const ExpectedWelfare exact =
            expected_welfare_exact(r.econ, r.net, model, sc.options.live_link_cap);
        doc["expected_simplified"] = exact.expected_simplified;
        doc["expected_exact"] = exact.expected_exact;
        doc["baseline_simplified"] = exact.baseline_simplified;
        doc["baseline_exact"] = exact.baseline_exact;
        doc["scenario_count"] = exact.scenario_count;
        doc["scenario_weight_sum"] = exact.scenario_weight_sum;
        rows.push_back({"-", fmt(exact.expected_simplified)});
    }
    out.json_report("risk", doc);
    out.csv_table("risk", {"partition", "expected_welfare"}, rows);
    return 0;
}

int cmd_policy_filter(const Scenario& sc, const Emitter& out) {
    if (!sc.policy) throw std::invalid_argument("policy-filter requires a policy block");
    Resolved r = resolve(sc);
    const ReplicateGame& rep = need_replicate(r, "policy-filter");
    const PolicyFilterResult result =
        compatible_partitions(rep, *sc.policy, sc.options.n_cap);

    json doc;
    doc["infeasible"] = result.infeasible;
    if (result.infeasible) {
        doc["certificate"] = {result.certificate.buyer, result.certificate.supplier};
        doc["reason"] = result.reason;
    }
    json list = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& q : result.partitions) {
        list.push_back(json_partition(q));
        rows.push_back({partition_label(q)});
    }
    doc["compatible_partitions"] = list;
    out.json_report("policy-filter", doc);
    out.csv_table("policy-filter", {"partition"}, rows);
    return 0;
}

int cmd_verify(const Emitter& out) {
    const std::vector<VerifyCheck> checks = run_verification();
    json doc;
    json list = json::array();
    std::vector<std::vector<std::string>> rows;
    bool all = true;
    for (const auto& c : checks) {
        json entry;
        entry["name"] = c.name;
        entry["passed"] = c.passed;
        entry["worst_error"] = c.worst_error;
        entry["detail"] = c.detail;
        list.push_back(entry);
        rows.push_back({c.name, c.passed ? "1" : "0", fmt(c.worst_error)});
        all = all && c.passed;
    }
    doc["checks"] = list;
    doc["all_passed"] = all;
    out.json_report("verify", doc);
    out.csv_table("verify", {"check", "passed", "worst_error"}, rows);
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prodnet-eq: production-network equilibrium toolkit"};
    app.require_subcommand(0);

    std::string command, scenario_path, out_dir = ".", format = "both";
    double tol = -1.0, epsilon = -1.0;
    std::string tie;
    long long seed = -1;
    int n_cap = -1;

    app.add_option("command", command,
                   "solve | welfare | nash | dynamics | replicate-scan | poa | risk | "
                   "policy-filter | verify")
        ->required();
    app.add_option("--scenario", scenario_path, "scenario JSON file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "json | csv | both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    app.add_option("--tol", tol, "comparison tolerance override");
    app.add_option("--epsilon", epsilon, "profit-rate override for game commands");
    app.add_option("--tie-break", tie, "uniform_over_argmax | keep_current | lowest_index");
    app.add_option("--seed", seed, "seed override");
    app.add_option("--n-cap", n_cap, "partition enumeration cap override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::vector<std::string> known = {"solve",  "welfare",        "nash",
                                            "dynamics", "replicate-scan", "poa",
                                            "risk",   "policy-filter",  "verify"};
    if (std::find(known.begin(), known.end(), command) == known.end()) {
        std::fprintf(stderr, "error: unknown command \"%s\"\n", command.c_str());
        return 2;
    }

    const Emitter out{fs::path(out_dir), format};
    try {
        if (command == "verify") return cmd_verify(out);

        if (scenario_path.empty()) {
            std::fprintf(stderr, "error: --scenario is required for %s\n", command.c_str());
            return 2;
        }
        Scenario sc = load_scenario(scenario_path);
        if (tol > 0.0) sc.options.tol = tol;
        if (epsilon > 0.0) sc.options.epsilon = epsilon;
        if (!tie.empty()) sc.options.tie_policy = tie_policy_from_name(tie);
        if (seed >= 0) sc.options.seed = static_cast<unsigned>(seed);
        if (n_cap > 0) sc.options.n_cap = n_cap;

        if (command == "solve") return cmd_solve(sc, out);
        if (command == "welfare") return cmd_welfare(sc, out);
        if (command == "nash") return cmd_nash(sc, out);
        if (command == "dynamics") return cmd_dynamics(sc, out);
        if (command == "replicate-scan") return cmd_replicate_scan(sc, out);
        if (command == "poa") return cmd_poa(sc, out);
        if (command == "risk") return cmd_risk(sc, out);
        if (command == "policy-filter") return cmd_policy_filter(sc, out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
