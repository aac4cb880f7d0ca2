#pragma once

#include "prodnet/economy.hpp"

namespace testutil {

using namespace prodnet;

// One self-contained firm: labor 0.6, no intermediates, profit rate 0.4.
inline EconomySpec inst_a() {
    EconomySpec e;
    e.consumption_shares = Vector::Constant(1, 1.0);
    e.labor_shares = Vector::Constant(1, 0.6);
    e.requirements = Matrix::Zero(1, 1);
    e.categories.num_categories = 1;
    e.categories.firm_category = {0};
    e.validate();
    return e;
}

inline ProductionNetwork inst_a_network() { return ProductionNetwork{Matrix::Zero(1, 1)}; }

// Two symmetric firms / categories, zero profits: labor 0.5, own 0.2, cross 0.3.
inline EconomySpec inst_b(const ProductivityModel& p = ProductivityModel::constant()) {
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

inline ProductionNetwork inst_b_network() {
    Matrix a(2, 2);
    a << 0.2, 0.3, 0.3, 0.2;
    return ProductionNetwork{std::move(a)};
}

// Simple 3-category game with distinct budgets, strictly positive profits.
inline EconomySpec simple_l3() {
    EconomySpec e;
    e.consumption_shares = Vector(3);
    e.consumption_shares << 0.5, 0.3, 0.2;
    e.labor_shares = Vector(3);
    e.labor_shares << 0.4, 0.35, 0.3;
    e.requirements = Matrix(3, 3);
    e.requirements << 0.1, 0.2, 0.15,
                      0.25, 0.1, 0.2,
                      0.2, 0.3, 0.1;
    e.categories.num_categories = 3;
    e.categories.firm_category = {0, 1, 2};
    e.validate();
    return e;
}

}  // namespace testutil
