#include "prodnet/replicate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace prodnet {

namespace {

// Clustered network per the replicate indexing: firm l*n + c. Own category
// entirely self-supplied; other categories sourced uniformly inside the block.
ProductionNetwork clustered_network(const EconomySpec& econ, int n, const Partition& q) {
    const int L = econ.categories.num_categories;
    const std::vector<int> blk = block_index(q, n);
    const int m = econ.firm_count();
    Matrix a = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const int cat = econ.categories.firm_category[i];
        const int country = econ.categories.firm_country[i];
        const auto& block = q[blk[country]];
        const double mk = static_cast<double>(block.size());
        a(i, i) = econ.requirements(i, cat);
        for (int other = 0; other < L; ++other) {
            if (other == cat) continue;
            const double w = econ.requirements(i, other) / mk;
            for (int c : block) a(i, other * n + c) = w;
        }
    }
    return ProductionNetwork{std::move(a)};
}

}  // namespace

ReplicateGame replicate_game(const EconomySpec& base, int n) {
    base.validate();
    if (n < 1) throw std::invalid_argument("replication count must be >= 1");
    const int L = base.categories.num_categories;
    if (base.firm_count() != L)
        throw std::invalid_argument("replicate base must be a simple game (one firm per category)");
    std::vector<int> base_firm_of(L, -1);
    for (int i = 0; i < L; ++i) {
        int c = base.categories.firm_category[i];
        if (base_firm_of[c] != -1)
            throw std::invalid_argument("replicate base must be a simple game (one firm per category)");
        base_firm_of[c] = i;
    }

    ReplicateGame rep;
    rep.base = base;
    rep.n = n;
    const int m = n * L;
    EconomySpec& e = rep.economy;
    e.consumption_shares = Vector(m);
    e.labor_shares = Vector(m);
    e.requirements = Matrix(m, L);
    e.categories.num_categories = L;
    e.categories.firm_category.resize(m);
    e.categories.firm_country.resize(m);
    Vector lambda0(m);
    for (int cat = 0; cat < L; ++cat) {
        const int src = base_firm_of[cat];
        for (int c = 0; c < n; ++c) {
            const int i = cat * n + c;
            e.consumption_shares[i] = base.consumption_shares[src] / n;
            e.labor_shares[i] = base.labor_shares[src];
            e.requirements.row(i) = base.requirements.row(src);
            e.categories.firm_category[i] = cat;
            e.categories.firm_country[i] = c;
            lambda0[i] = base.productivity.base(src);
        }
    }
    e.productivity = base.productivity;
    e.productivity.lambda0 = lambda0;
    e.validate();
    return rep;
}

EconomySpec with_uniform_epsilon(const EconomySpec& econ, double eps) {
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("epsilon must be in [0, 1)");
    EconomySpec out = econ;
    for (int i = 0; i < econ.firm_count(); ++i) {
        const double total = econ.labor_shares[i] + econ.requirements.row(i).sum();
        const double scale = (1.0 - eps) / total;
        out.labor_shares[i] *= scale;
        out.requirements.row(i) *= scale;
    }
    return out;
}

ClusterStructure build_clustered_network(const ReplicateGame& rep, const Partition& q) {
    if (!is_partition_of(q, rep.n)) throw std::invalid_argument("not a partition of the countries");
    ClusterStructure cs;
    cs.partition = q;
    cs.network = clustered_network(rep.economy, rep.n, q);
    require_admissible(rep.economy, cs.network);
    return cs;
}

EpsilonNashScan verify_cluster_nash(const ReplicateGame& rep, const Partition& q,
                                    const std::vector<double>& epsilon_grid, double tol) {
    EpsilonNashScan scan;
    scan.epsilons = epsilon_grid;
    std::sort(scan.epsilons.begin(), scan.epsilons.end());
    for (double eps : scan.epsilons) {
        EconomySpec econ = with_uniform_epsilon(rep.economy, eps);
        ProductionNetwork net = clustered_network(econ, rep.n, q);
        scan.reports.push_back(is_nash(econ, net, tol));
    }
    scan.threshold = 0.0;
    for (std::size_t k = 0; k < scan.reports.size(); ++k) {
        if (!scan.reports[k].is_nash) break;
        scan.threshold = scan.epsilons[k];
    }
    return scan;
}

ClusterInverseTable cluster_inverse_table(const ReplicateGame& rep, const Partition& q) {
    const int L = rep.base.categories.num_categories;
    const int n = rep.n;
    if (!is_partition_of(q, n)) throw std::invalid_argument("not a partition of the countries");

    // B_{l,l'} = requirement of a category-l firm from category l'.
    Matrix B(L, L);
    {
        std::vector<int> base_firm_of(L);
        for (int i = 0; i < L; ++i) base_firm_of[rep.base.categories.firm_category[i]] = i;
        for (int l = 0; l < L; ++l) B.row(l) = rep.base.requirements.row(base_firm_of[l]);
    }

    ClusterInverseTable table;
    table.category_table = (Matrix::Identity(L, L) - B).inverse();
    table.gateway_by_category = Vector(L);
    {
        Vector a0_by_cat(L);
        std::vector<int> base_firm_of(L);
        for (int i = 0; i < L; ++i) base_firm_of[rep.base.categories.firm_category[i]] = i;
        for (int l = 0; l < L; ++l) a0_by_cat[l] = rep.base.consumption_shares[base_firm_of[l]];
        table.gateway_by_category = table.category_table.transpose() * a0_by_cat;
    }

    const ProductionNetwork net = clustered_network(rep.economy, n, q);
    for (const auto& block : q) {
        const int mk = static_cast<int>(block.size());
        std::vector<int> firms;
        firms.reserve(static_cast<std::size_t>(mk) * L);
        for (int l = 0; l < L; ++l)
            for (int c : block) firms.push_back(l * n + c);
        const int sz = static_cast<int>(firms.size());
        Matrix sub(sz, sz);
        for (int r = 0; r < sz; ++r)
            for (int c = 0; c < sz; ++c)
                sub(r, c) = net.shares(firms[r], firms[c]);
        Matrix inv = (Matrix::Identity(sz, sz) - sub).inverse();
        if (!inv.allFinite()) throw std::logic_error("singular cluster block");

        // Three-case closed form against the direct inverse.
        for (int r = 0; r < sz; ++r) {
            const int li = r / mk;
            for (int c = 0; c < sz; ++c) {
                const int lj = c / mk;
                double expected;
                if (li == lj) {
                    const double own = 1.0 / (1.0 - B(li, li));
                    expected = (r == c)
                                   ? table.category_table(li, li) / mk + (mk - 1.0) / mk * own
                                   : table.category_table(li, li) / mk - own / mk;
                } else {
                    expected = table.category_table(li, lj) / mk;
                }
                table.max_closed_form_error =
                    std::max(table.max_closed_form_error, std::abs(inv(r, c) - expected));
            }
        }
        table.block_inverses.push_back(std::move(inv));
    }
    return table;
}

PoAReport partition_welfare_scan(const ReplicateGame& rep, const ProductivityModel& productivity,
                                 int n_cap) {
    const auto partitions = enumerate_partitions(rep.n, n_cap);

    EconomySpec econ0 = with_uniform_epsilon(rep.economy, 0.0);
    econ0.productivity = productivity;
    if (productivity.lambda0.size() != 1 && productivity.lambda0.size() != econ0.firm_count())
        throw std::invalid_argument("productivity lambda0 size does not match the replicate");

    PoAReport rep_out;
    double max_w = -std::numeric_limits<double>::infinity();
    double min_w = std::numeric_limits<double>::infinity();
    for (const auto& q : partitions) {
        const ProductionNetwork net = clustered_network(econ0, rep.n, q);
        const double w = simplified_welfare(econ0, net);
        rep_out.scan.push_back(PartitionWelfare{q, w});
        max_w = std::max(max_w, w);
        min_w = std::min(min_w, w);
    }

    // Best-response dynamics fixed points from random starts, mapped back to
    // the eps = 0 budget for comparable welfare.
    const double dyn_eps = 1e-3;
    EconomySpec econ_dyn = with_uniform_epsilon(rep.economy, dyn_eps);
    std::mt19937 rng(12345);
    const auto members = econ_dyn.categories.members();
    for (int trial = 0; trial < 3; ++trial) {
        Matrix start = Matrix::Zero(econ_dyn.firm_count(), econ_dyn.firm_count());
        std::gamma_distribution<double> gamma(1.0, 1.0);
        for (int i = 0; i < econ_dyn.firm_count(); ++i)
            for (int l = 0; l < econ_dyn.categories.num_categories; ++l) {
                double total = 0.0;
                std::vector<double> draw;
                for (int j : members[l]) draw.push_back(gamma(rng)), total += draw.back();
                for (std::size_t k = 0; k < members[l].size(); ++k)
                    start(i, members[l][k]) = econ_dyn.requirements(i, l) * draw[k] / total;
            }
        DynamicsResult dyn = best_response_dynamics(econ_dyn, ProductionNetwork{start},
                                                    Schedule::RoundRobin, 0, 50, 1e-12);
        if (!dyn.converged) continue;
        ProductionNetwork terminal = dyn.terminal;
        terminal.shares /= (1.0 - dyn_eps);
        if (!is_admissible(econ0, terminal, 1e-9)) continue;
        const double w = simplified_welfare(econ0, terminal);
        max_w = std::max(max_w, w);
        min_w = std::min(min_w, w);
    }

    rep_out.max_equilibrium_welfare = max_w;
    rep_out.min_equilibrium_welfare = min_w;
    rep_out.max_over_clustered_configurations = max_w;
    rep_out.poa_difference = max_w - min_w;
    rep_out.ratio_sign_consistent = (max_w > 0) == (min_w > 0) && min_w != 0.0;
    rep_out.poa_ratio = rep_out.ratio_sign_consistent ? max_w / min_w : 0.0;

    // Constant is defined on the eps = 0 budget.
    const ReplicateGame rep0 = replicate_game(with_uniform_epsilon(rep.base, 0.0), rep.n);
    Partition full(1);
    for (int c = 0; c < rep.n; ++c) full[0].push_back(c);
    const ClusterInverseTable table = cluster_inverse_table(rep0, full);
    double K = 0.0;
    for (int l = 0; l < rep0.base.categories.num_categories; ++l) {
        std::vector<int> base_firm_of(rep0.base.categories.num_categories);
        for (int i = 0; i < rep0.base.firm_count(); ++i)
            base_firm_of[rep0.base.categories.firm_category[i]] = i;
        const int src = base_firm_of[l];
        K += table.gateway_by_category[l] *
             (1.0 - rep0.base.requirements(src, l) - rep0.base.labor_shares[src]);
    }
    rep_out.gap_constant = K;
    return rep_out;
}

DiversificationReturns classify_returns_to_diversification(const ProductivityModel& productivity,
                                                           int sample_count, unsigned seed) {
    std::mt19937 rng(seed);
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::uniform_int_distribution<int> dim(2, 6);
    std::uniform_real_distribution<double> budget(0.2, 0.9);

    auto sample_row = [&](int m) {
        Vector row(m);
        double total = 0.0;
        for (int j = 0; j < m; ++j) total += (row[j] = gamma(rng));
        row *= budget(rng) / total;
        return row;
    };
    auto log_hicks = [](const Vector& row) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < row.size(); ++j) s -= xlogx(row[j]);
        return s;
    };

    bool increasing_ok = true, decreasing_ok = true;
    bool any_strict = false;
    constexpr double tol = 1e-10;
    for (int t = 0; t < sample_count; ++t) {
        const int m = dim(rng);
        Vector a = sample_row(m), b = sample_row(m);
        if (log_hicks(a) < log_hicks(b)) std::swap(a, b);
        const double log_hicks_ratio = log_hicks(a) - log_hicks(b);
        const double log_ratio = productivity.log_value(0, a) - productivity.log_value(0, b);
        if (log_hicks_ratio > tol) any_strict = true;
        if (log_ratio < log_hicks_ratio - tol) increasing_ok = false;
        if (log_ratio > log_hicks_ratio + tol) decreasing_ok = false;
    }
    if (increasing_ok && decreasing_ok) return any_strict ? DiversificationReturns::Boundary
                                                          : DiversificationReturns::Neither;
    if (increasing_ok) return DiversificationReturns::Increasing;
    if (decreasing_ok) return DiversificationReturns::Decreasing;
    return DiversificationReturns::Neither;
}

}  // namespace prodnet
