#include "prodnet/game.hpp"

#include <algorithm>
#include <random>

namespace prodnet {

namespace {

void require_nondegenerate(const EconomySpec& econ) {
    for (int i = 0; i < econ.firm_count(); ++i)
        if (econ.epsilon(i) < kMinGameEpsilon)
            throw std::domain_error(
                "game operations need eps_i >= 1e-6 for every firm; profits are "
                "(near) zero and every strategy is a best response");
}

// Profit of firm i from the ratio form, given its walk coefficients and a
// candidate row. Numerator is independent of the row.
double ratio_profit(const EconomySpec& econ, const WalkTables& t, int firm,
                    const Eigen::Ref<const Vector>& row) {
    const int m = econ.firm_count();
    const Vector& a0 = econ.consumption_shares;
    const double eps = econ.epsilon(firm);
    double numer = a0[firm];
    double routed = row[firm] + eps * a0[firm];
    for (int k = 0; k < m; ++k) {
        if (k == firm) continue;
        numer += a0[k] * t.direct(k, firm);
        routed += (row[k] + eps * a0[k]) * t.direct(k, firm);
    }
    return eps * numer / (1.0 - routed);
}

}  // namespace

BestResponseResult best_response(const EconomySpec& econ, const ProductionNetwork& net,
                                 int firm, TiePolicy tie_policy) {
    require_nondegenerate(econ);
    if (firm < 0 || firm >= econ.firm_count()) throw std::out_of_range("firm index out of range");

    const WalkTables t = walk_tables(econ, net);
    const int m = econ.firm_count();
    const int L = econ.categories.num_categories;
    const auto members = econ.categories.members();
    constexpr double tie_tol = 1e-12;

    BestResponseResult res;
    res.coefficients = Vector::Zero(m);
    for (int k = 0; k < m; ++k)
        res.coefficients[k] = (k == firm) ? 1.0 : t.direct(k, firm);

    res.row = Vector::Zero(m);
    res.ties_per_category.resize(L);
    for (int l = 0; l < L; ++l) {
        const double budget = econ.requirements(firm, l);
        if (budget <= 0.0 || members[l].empty()) continue;
        double best = -1.0;
        for (int j : members[l]) best = std::max(best, res.coefficients[j]);
        std::vector<int>& ties = res.ties_per_category[l];
        for (int j : members[l])
            if (res.coefficients[j] >= best - tie_tol) ties.push_back(j);

        switch (tie_policy) {
            case TiePolicy::LowestIndex:
                res.row[ties.front()] = budget;
                break;
            case TiePolicy::UniformOverArgmax:
                for (int j : ties) res.row[j] = budget / static_cast<double>(ties.size());
                break;
            case TiePolicy::KeepCurrent: {
                // Keep the incumbent allocation if it already attains the
                // category maximum of the (affine) objective.
                double incumbent = 0.0, optimal = 0.0;
                for (int j : members[l]) incumbent += net.shares(firm, j) * res.coefficients[j];
                optimal = budget * best;
                if (incumbent >= optimal - tie_tol * std::max(1.0, budget)) {
                    for (int j : members[l]) res.row[j] = net.shares(firm, j);
                } else {
                    res.row[ties.front()] = budget;
                }
                break;
            }
        }
    }
    res.profit = ratio_profit(econ, t, firm, res.row);
    return res;
}

NashReport is_nash(const EconomySpec& econ, const ProductionNetwork& net, double tol) {
    require_nondegenerate(econ);
    require_admissible(econ, net);
    const WalkTables t = walk_tables(econ, net);

    NashReport rep;
    rep.tolerance = tol;
    rep.max_gain = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < econ.firm_count(); ++i) {
        const BestResponseResult br = best_response(econ, net, i, TiePolicy::LowestIndex);
        const double incumbent = ratio_profit(econ, t, i, net.shares.row(i));
        const double gain = br.profit - incumbent;
        if (gain > rep.max_gain) {
            rep.max_gain = gain;
            rep.worst_firm = i;
        }
    }
    rep.is_nash = rep.max_gain <= tol;
    return rep;
}

DynamicsResult best_response_dynamics(const EconomySpec& econ, const ProductionNetwork& start,
                                      Schedule schedule, unsigned seed, int max_rounds,
                                      double tol) {
    require_nondegenerate(econ);
    require_admissible(econ, start);
    const int m = econ.firm_count();

    DynamicsResult out;
    out.terminal = start;
    std::mt19937 rng(seed);
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);

    out.potential_per_round.push_back(potential_value(econ, out.terminal).potential);
    for (int round = 0; round < max_rounds; ++round) {
        if (schedule == Schedule::Random) std::shuffle(order.begin(), order.end(), rng);
        double max_change = 0.0;
        for (int i : order) {
            const BestResponseResult br =
                best_response(econ, out.terminal, i, TiePolicy::KeepCurrent);
            max_change = std::max(
                max_change, (br.row - out.terminal.shares.row(i).transpose()).cwiseAbs().maxCoeff());
            out.terminal.shares.row(i) = br.row.transpose();
        }
        ++out.rounds;
        out.potential_per_round.push_back(potential_value(econ, out.terminal).potential);
        if (max_change <= tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

Vector tree_weights_determinant(const FlowMatrix& flow) {
    const int n = flow.node_count();
    // Chain transitions R(h,k) = tilde(k,h), row-stochastic; Laplacian I - R.
    Matrix laplacian = Matrix::Identity(n, n) - flow.values.transpose();
    Vector w(n);
    for (int root = 0; root < n; ++root) {
        Matrix minor(n - 1, n - 1);
        for (int r = 0, rr = 0; r < n; ++r) {
            if (r == root) continue;
            for (int c = 0, cc = 0; c < n; ++c) {
                if (c == root) continue;
                minor(rr, cc++) = laplacian(r, c);
            }
            ++rr;
        }
        w[root] = (n == 1) ? 1.0 : minor.determinant();
    }
    return w;
}

Vector stationary_distribution(const FlowMatrix& flow) {
    const int n = flow.node_count();
    // (tilde - I) mu = 0 with sum mu = 1; replace the last equation.
    Matrix sys = flow.values - Matrix::Identity(n, n);
    sys.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs[n - 1] = 1.0;
    return sys.partialPivLu().solve(rhs);
}

PotentialReport potential_value(const EconomySpec& econ, const ProductionNetwork& net) {
    const AssumptionReport assume = validate_assumptions(econ, net);
    if (!assume.solver_eligible()) throw std::domain_error("potential needs an ergodic flow matrix");
    const FlowMatrix flow = build_flow_matrix(econ, net);

    PotentialReport rep;
    rep.tree_weights = tree_weights_determinant(flow);
    rep.potential = 1.0 / rep.tree_weights[0];
    rep.potential_firm_sum = 1.0 / rep.tree_weights.tail(econ.firm_count()).sum();
    rep.stationary = stationary_distribution(flow);
    return rep;
}

}  // namespace prodnet
