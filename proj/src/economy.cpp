#include "prodnet/economy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace prodnet {

double ProductivityModel::log_value(int firm, const Eigen::Ref<const Vector>& row) const {
    double th = exponent();
    double log_hicks = 0.0;
    if (th != 0.0) {
        for (Eigen::Index j = 0; j < row.size(); ++j) log_hicks -= xlogx(row[j]);
    }
    return std::log(base(firm)) + th * log_hicks;
}

void EconomySpec::validate() const {
    const int m = firm_count();
    if (m <= 0) throw std::invalid_argument("economy needs at least one firm");
    categories.validate();
    if (categories.firm_count() != m) throw std::invalid_argument("category map / firm count mismatch");
    if (labor_shares.size() != m || requirements.rows() != m ||
        requirements.cols() != categories.num_categories)
        throw std::invalid_argument("requirement dimensions inconsistent");
    if (std::abs(consumption_shares.sum() - 1.0) > kShareTol)
        throw std::invalid_argument("consumption shares must sum to 1");
    for (int i = 0; i < m; ++i) {
        if (consumption_shares[i] < 0.0) throw std::invalid_argument("negative consumption share");
        if (labor_shares[i] < 0.0) throw std::invalid_argument("negative labor share");
        for (int l = 0; l < categories.num_categories; ++l)
            if (requirements(i, l) < 0.0) throw std::invalid_argument("negative requirement");
        double e = epsilon(i);
        if (e < -kShareTol || e >= 1.0)
            throw std::invalid_argument("requirement shares must sum into [0, 1)");
    }
    productivity.validate(m);
}

bool is_admissible(const EconomySpec& econ, const ProductionNetwork& net,
                   double tol, std::string* why) {
    const int m = econ.firm_count();
    if (net.firm_count() != m || net.shares.cols() != m) {
        if (why) *why = "network dimension mismatch";
        return false;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (net.shares(i, j) < -tol) {
                if (why) *why = "negative input share at firm " + std::to_string(i);
                return false;
            }
    const auto members = econ.categories.members();
    for (int i = 0; i < m; ++i) {
        for (int l = 0; l < econ.categories.num_categories; ++l) {
            double s = 0.0;
            for (int j : members[l]) s += net.shares(i, j);
            if (std::abs(s - econ.requirements(i, l)) > std::max(tol, 64 * kShareTol)) {
                if (why)
                    *why = "category sum mismatch for firm " + std::to_string(i) +
                           ", category " + std::to_string(l);
                return false;
            }
        }
    }
    return true;
}

void require_admissible(const EconomySpec& econ, const ProductionNetwork& net) {
    std::string why;
    if (!is_admissible(econ, net, kShareTol, &why))
        throw std::invalid_argument("inadmissible network: " + why);
}

FlowMatrix build_flow_matrix(const EconomySpec& econ, const ProductionNetwork& net) {
    require_admissible(econ, net);
    const int m = econ.firm_count();
    Matrix tilde = Matrix::Zero(m + 1, m + 1);
    for (int j = 0; j < m; ++j) tilde(j + 1, 0) = econ.consumption_shares[j];
    for (int i = 0; i < m; ++i) {
        const double eps = econ.epsilon(i);
        tilde(0, i + 1) = econ.labor_shares[i];
        for (int j = 0; j < m; ++j)
            tilde(j + 1, i + 1) = net.shares(i, j) + eps * econ.consumption_shares[j];
    }
    return FlowMatrix{std::move(tilde)};
}

namespace {

// Strong connectivity of the positive-entry digraph plus gcd-of-cycle-lengths
// aperiodicity, on edges u -> v where tilde(v, u) > 0.
void ergodicity(const Matrix& tilde, bool& irreducible, bool& aperiodic) {
    const int n = static_cast<int>(tilde.rows());
    auto reaches_all = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v = 0; v < n; ++v) {
                double w = forward ? tilde(v, u) : tilde(u, v);
                if (w > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    ++count;
                    q.push(v);
                }
            }
        }
        return count == n;
    };
    irreducible = reaches_all(true) && reaches_all(false);
    if (!irreducible) {
        aperiodic = false;
        return;
    }
    // BFS levels from node 0; gcd over edges of level[u] + 1 - level[v].
    std::vector<int> level(n, -1);
    std::queue<int> q;
    q.push(0);
    level[0] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v)
            if (tilde(v, u) > 0.0 && level[v] < 0) {
                level[v] = level[u] + 1;
                q.push(v);
            }
    }
    int g = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (tilde(v, u) > 0.0) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    aperiodic = (g == 1);
}

}  // namespace

AssumptionReport validate_assumptions(const EconomySpec& econ, const ProductionNetwork& net) {
    econ.validate();
    AssumptionReport rep;
    rep.household_consumes_every_good = (econ.consumption_shares.array() > 0.0).all();
    rep.all_firms_use_labor = (econ.labor_shares.array() > 0.0).all();
    rep.some_firm_uses_intermediates = (econ.requirements.array() > 0.0).any();
    const FlowMatrix flow = build_flow_matrix(econ, net);
    ergodicity(flow.values, rep.irreducible, rep.aperiodic);
    return rep;
}

Vector entropy_corrected_productivity(const EconomySpec& econ, const ProductionNetwork& net) {
    const int m = econ.firm_count();
    Vector u(m);
    for (int i = 0; i < m; ++i) {
        double entropy_term = xlogx(econ.labor_shares[i]);
        for (int j = 0; j < m; ++j) entropy_term += xlogx(net.shares(i, j));
        u[i] = econ.productivity.log_value(i, net.shares.row(i)) + entropy_term;
    }
    return u;
}

Vector gateway_weights(const EconomySpec& econ, const ProductionNetwork& net) {
    const int m = econ.firm_count();
    Matrix ImA = Matrix::Identity(m, m) - net.shares;
    return ImA.transpose().partialPivLu().solve(econ.consumption_shares);
}

double simplified_welfare(const EconomySpec& econ, const ProductionNetwork& net) {
    return gateway_weights(econ, net).dot(entropy_corrected_productivity(econ, net));
}

EquilibriumResult solve_equilibrium(const EconomySpec& econ, const ProductionNetwork& net) {
    const AssumptionReport assume = validate_assumptions(econ, net);
    if (!assume.solver_eligible())
        throw std::domain_error("flow matrix is not ergodic; equilibrium is not unique");

    const int m = econ.firm_count();
    const FlowMatrix flow = build_flow_matrix(econ, net);
    const Matrix tildeM = flow.values.block(1, 1, m, m);
    const Vector eps = econ.epsilons();

    // v = a0 + A~_M v with p0 = 1; labor clearing sum a_{i,0} v_i = 1 follows.
    Matrix lhs = Matrix::Identity(m, m) - tildeM;
    Vector v = lhs.partialPivLu().solve(econ.consumption_shares);

    EquilibriumResult eq;
    eq.revenues = v;
    eq.profits = eps.cwiseProduct(v);
    eq.household_revenue = 1.0 + eq.profits.sum();

    // (A - I) log p = u + D log v, from the firms' cost conditions.
    const Vector u = entropy_corrected_productivity(econ, net);
    Matrix AmI = net.shares - Matrix::Identity(m, m);
    Vector rhs = u - eps.cwiseProduct(v.array().log().matrix());
    Vector logp = AmI.partialPivLu().solve(rhs);
    eq.prices = logp.array().exp();
    eq.outputs = v.cwiseQuotient(eq.prices);

    eq.allocation = Matrix::Zero(m + 1, m + 1);
    for (int j = 0; j < m; ++j)
        eq.allocation(0, j + 1) = econ.consumption_shares[j] * eq.household_revenue / eq.prices[j];
    for (int i = 0; i < m; ++i) {
        eq.allocation(i + 1, 0) = econ.labor_shares[i] * v[i];
        for (int j = 0; j < m; ++j)
            eq.allocation(i + 1, j + 1) = net.shares(i, j) * v[i] / eq.prices[j];
    }

    double V = 0.0;
    for (int j = 0; j < m; ++j)
        V += econ.consumption_shares[j] * std::log(eq.allocation(0, j + 1));
    eq.log_welfare = V;
    eq.simplified_welfare = gateway_weights(econ, net).dot(u);
    return eq;
}

WelfareReport compute_welfare(const EconomySpec& econ, const ProductionNetwork& net,
                              const EquilibriumResult& eq) {
    const int m = econ.firm_count();
    WelfareReport rep;
    rep.entropy_corrected_productivity = entropy_corrected_productivity(econ, net);
    rep.diag_returns = -econ.epsilons();
    rep.gateway = gateway_weights(econ, net);
    rep.simplified = rep.gateway.dot(rep.entropy_corrected_productivity);

    double consumption_entropy = 0.0;
    for (int j = 0; j < m; ++j) consumption_entropy += xlogx(econ.consumption_shares[j]);

    const Vector logv = eq.revenues.array().log();
    rep.constant_log_v0 = std::log(eq.household_revenue);
    rep.constant_log_p0 = 0.0;
    rep.exact = rep.constant_log_v0 + consumption_entropy +
                rep.gateway.dot(rep.entropy_corrected_productivity +
                                rep.diag_returns.cwiseProduct(logv));
    rep.direct_allocation_log_utility = eq.log_welfare;
    return rep;
}

GradientReport welfare_first_order(const EconomySpec& econ, const ProductionNetwork& net) {
    require_admissible(econ, net);
    const int m = econ.firm_count();
    const int L = econ.categories.num_categories;
    const Vector u = entropy_corrected_productivity(econ, net);
    const double theta = econ.productivity.exponent();

    // Proof route: two linear solves.
    Matrix ImA = Matrix::Identity(m, m) - net.shares;
    const Vector g = ImA.transpose().partialPivLu().solve(econ.consumption_shares);
    const Vector h = ImA.partialPivLu().solve(u);

    // Statement route: explicit inverse, walk-weight reading of (I-A)^-1.
    const Matrix walks = ImA.inverse();
    const Vector p0 = walks.transpose() * econ.consumption_shares;
    const Vector pu = walks * u;

    GradientReport rep;
    rep.partial_closed_form = Matrix::Zero(m, m);
    rep.partial_statement_form = Matrix::Zero(m, m);
    rep.at_zero.setConstant(m, m, false);
    rep.kkt_residual = Matrix::Zero(m, L);

    const auto members = econ.categories.members();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double a = net.shares(i, j);
            if (a <= 0.0) {
                rep.at_zero(i, j) = true;
                continue;
            }
            const double entropy_deriv = (1.0 - theta) * (std::log(a) + 1.0);
            rep.partial_closed_form(i, j) = g[i] * h[j] + g[i] * entropy_deriv;
            rep.partial_statement_form(i, j) = p0[i] * (pu[j] + entropy_deriv);
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int l = 0; l < L; ++l) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (int j : members[l]) {
                if (net.shares(i, j) <= 0.0) continue;
                lo = std::min(lo, rep.partial_closed_form(i, j));
                hi = std::max(hi, rep.partial_closed_form(i, j));
            }
            rep.kkt_residual(i, l) = (hi >= lo) ? hi - lo : 0.0;
        }
    }
    return rep;
}

}  // namespace prodnet
