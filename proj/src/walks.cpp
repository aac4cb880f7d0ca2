#include "prodnet/walks.hpp"

namespace prodnet {

WalkTables walk_tables(const EconomySpec& econ, const ProductionNetwork& net) {
    const AssumptionReport assume = validate_assumptions(econ, net);
    if (!assume.solver_eligible()) throw std::domain_error("walk tables need an ergodic flow matrix");

    const int m = econ.firm_count();
    WalkTables t;
    t.transitions = Matrix::Zero(m, m);
    for (int h = 0; h < m; ++h) {
        const double eps = econ.epsilon(h);
        for (int k = 0; k < m; ++k)
            t.transitions(h, k) = net.shares(h, k) + eps * econ.consumption_shares[k];
    }

    Matrix ImT = Matrix::Identity(m, m) - t.transitions;
    t.total = ImT.inverse();

    // Direct walks to target i: zero the transitions out of i, so i can only
    // appear at the end. D(i,i) needs one genuine step out of i first.
    t.direct = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        Matrix deleted = t.transitions;
        deleted.row(i).setZero();
        Vector rhs = Vector::Zero(m);
        rhs[i] = 1.0;
        Vector col = (Matrix::Identity(m, m) - deleted).partialPivLu().solve(rhs);
        for (int j = 0; j < m; ++j)
            if (j != i) t.direct(j, i) = col[j];
        t.direct(i, i) = t.transitions.row(i).dot(col);
    }

    t.household = t.total.transpose() * econ.consumption_shares;
    return t;
}

WalkProfit profit_via_walks(const EconomySpec& econ, const ProductionNetwork& net) {
    const WalkTables t = walk_tables(econ, net);
    const int m = econ.firm_count();
    const Vector& a0 = econ.consumption_shares;

    WalkProfit out;
    out.resolvent_route = econ.epsilons().cwiseProduct(t.household);
    out.ratio_route = Vector::Zero(m);
    for (int i = 0; i < m; ++i) {
        double numer = a0[i];
        double own_routing = t.transitions(i, i);
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            numer += a0[j] * t.direct(j, i);
            own_routing += t.transitions(i, j) * t.direct(j, i);
        }
        out.ratio_route[i] = econ.epsilon(i) * numer / (1.0 - own_routing);
    }
    return out;
}

}  // namespace prodnet
