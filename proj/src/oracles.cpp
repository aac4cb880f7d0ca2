#include "prodnet/oracles.hpp"

#include <cmath>
#include <limits>

namespace prodnet {

namespace {

bool reaches_root(const std::vector<int>& parent, int start, int root, int n) {
    int u = start;
    for (int steps = 0; steps <= n; ++steps) {
        if (u == root) return true;
        u = parent[u];
        if (u < 0) return false;
    }
    return false;   // cycle
}

void enumerate_trees(const Matrix& chain, int root, int node, std::vector<int>& parent,
                     double weight, double& total) {
    const int n = static_cast<int>(chain.rows());
    if (node == n) {
        for (int u = 0; u < n; ++u)
            if (u != root && !reaches_root(parent, u, root, n)) return;
        total += weight;
        return;
    }
    if (node == root) {
        enumerate_trees(chain, root, node + 1, parent, weight, total);
        return;
    }
    for (int v = 0; v < n; ++v) {
        if (v == node || chain(node, v) <= 0.0) continue;
        parent[node] = v;
        enumerate_trees(chain, root, node + 1, parent, weight * chain(node, v), total);
    }
    parent[node] = -1;
}

std::size_t compositions_count(int total, int parts) {
    // C(total + parts - 1, parts - 1), saturating.
    long double c = 1.0L;
    for (int k = 1; k < parts; ++k) c = c * (total + k) / k;
    if (c > 1e18L) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::llround(c));
}

}  // namespace

Vector tree_enumeration_oracle(const FlowMatrix& flow, int node_cap) {
    const int n = static_cast<int>(flow.values.rows());
    if (n > node_cap) throw std::domain_error("tree enumeration node cap exceeded");
    const Matrix chain = flow.values.transpose();   // edge u -> v weighs chain(u, v)

    Vector weights(n);
    for (int root = 0; root < n; ++root) {
        std::vector<int> parent(n, -1);
        double total = 0.0;
        enumerate_trees(chain, root, 0, parent, 1.0, total);
        weights[root] = total;
    }
    return weights;
}

GridDeviationResult grid_deviation_oracle(const EconomySpec& econ, const ProductionNetwork& net,
                                          int firm, double step, std::size_t point_cap) {
    if (step <= 0.0 || step > 1.0) throw std::invalid_argument("grid step must be in (0, 1]");
    const int levels = static_cast<int>(std::lround(1.0 / step));
    if (std::abs(levels * step - 1.0) > 1e-9)
        throw std::invalid_argument("grid step must divide 1 evenly");

    const auto members = econ.categories.members();
    const double eps = econ.epsilon(firm);

    auto profit_of = [&](const Vector& row) -> double {
        ProductionNetwork candidate = net;
        candidate.shares.row(firm) = row.transpose();
        const EquilibriumResult eq = solve_equilibrium(econ, candidate);
        return eps * eq.revenues[firm];
    };

    GridDeviationResult out;
    const Vector incumbent = net.shares.row(firm).transpose();
    out.incumbent_profit = profit_of(incumbent);
    out.best_row = incumbent;

    for (int l = 0; l < econ.categories.num_categories; ++l) {
        const double budget = econ.requirements(firm, l);
        const auto& supp = members[l];
        if (budget <= 0.0 || supp.size() <= 1) continue;   // degenerate grid
        if (compositions_count(levels, static_cast<int>(supp.size())) > point_cap)
            throw std::domain_error("grid point cap exceeded");

        // Enumerate compositions of `levels` into |supp| parts.
        std::vector<int> counts(supp.size(), 0);
        auto visit = [&](const std::vector<int>& parts) {
            Vector row = incumbent;
            for (std::size_t k = 0; k < supp.size(); ++k)
                row[supp[k]] = budget * parts[k] / levels;
            double profit;
            try {
                profit = profit_of(row);
            } catch (const std::exception&) {
                profit = -std::numeric_limits<double>::infinity();
            }
            ++out.evaluated;
            if (profit - out.incumbent_profit > out.best_gain) {
                out.best_gain = profit - out.incumbent_profit;
                out.best_category = l;
                out.best_row = row;
            }
        };
        auto recurse = [&](auto&& self, std::size_t idx, int remaining) -> void {
            if (idx + 1 == counts.size()) {
                counts[idx] = remaining;
                visit(counts);
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                counts[idx] = k;
                self(self, idx + 1, remaining - k);
            }
        };
        recurse(recurse, 0, levels);
    }
    return out;
}

Matrix truncated_walk_oracle(const Matrix& transitions, int length_cap, double* tail_bound) {
    const int n = static_cast<int>(transitions.rows());
    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int t = 1; t <= length_cap; ++t) {
        term = term * transitions;
        sum += term;
    }
    if (tail_bound) {
        const double q = transitions.cwiseAbs().rowwise().sum().maxCoeff();
        *tail_bound = (q < 1.0) ? std::pow(q, length_cap + 1) / (1.0 - q)
                                : std::numeric_limits<double>::infinity();
    }
    return sum;
}

Vector power_iteration_stationary(const FlowMatrix& flow, int max_iters, double tol) {
    const int n = static_cast<int>(flow.values.rows());
    Vector x = Vector::Constant(n, 1.0 / n);
    for (int it = 0; it < max_iters; ++it) {
        // Lazy step kills periodicity without moving the fixed point.
        Vector next = 0.5 * (x + flow.values * x);
        next /= next.sum();
        const double diff = (next - x).cwiseAbs().maxCoeff();
        x = next;
        if (diff < tol) return x;
    }
    throw std::runtime_error("power iteration did not converge");
}

}  // namespace prodnet
