#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "prodnet/game.hpp"
#include "prodnet/oracles.hpp"
#include "prodnet/replicate.hpp"
#include "prodnet/sampling.hpp"

#include <cmath>

using namespace prodnet;
using namespace testutil;
using doctest::Approx;

namespace {

// One monopolist in category 0, two exact replica suppliers in category 1.
EconomySpec replica_suppliers() {
    EconomySpec e;
    e.consumption_shares = Vector(3);
    e.consumption_shares << 0.4, 0.3, 0.3;
    e.labor_shares = Vector(3);
    e.labor_shares << 0.3, 0.3, 0.3;
    e.requirements = Matrix(3, 2);
    e.requirements << 0.1, 0.4,
                      0.2, 0.3,
                      0.2, 0.3;
    e.categories.num_categories = 2;
    e.categories.firm_category = {0, 1, 1};
    e.validate();
    return e;
}

ProductionNetwork replica_network() {
    Matrix a(3, 3);
    a << 0.1, 0.2, 0.2,
         0.2, 0.15, 0.15,
         0.2, 0.15, 0.15;
    return ProductionNetwork{std::move(a)};
}

}  // namespace

TEST_CASE("single-firm potential report in closed form") {
    const EconomySpec econ = inst_a();
    const PotentialReport p = potential_value(econ, inst_a_network());
    CHECK(p.tree_weights[0] == Approx(0.6).epsilon(1e-12));
    CHECK(p.tree_weights[1] == Approx(1.0).epsilon(1e-12));
    CHECK(p.potential == Approx(1.0 / 0.6).epsilon(1e-12));
    CHECK(p.stationary[0] == Approx(0.375).epsilon(1e-12));
    CHECK(p.stationary[1] == Approx(0.625).epsilon(1e-12));
}

TEST_CASE("tied replica suppliers split the budget under uniform tie policy") {
    const EconomySpec econ = replica_suppliers();
    const ProductionNetwork net = replica_network();
    const BestResponseResult br = best_response(econ, net, 0, TiePolicy::UniformOverArgmax);
    CHECK(br.row[1] == Approx(0.2).epsilon(1e-12));
    CHECK(br.row[2] == Approx(0.2).epsilon(1e-12));
    CHECK(br.row[0] == Approx(0.1).epsilon(1e-12));   // own category on itself
    REQUIRE(br.ties_per_category.size() == 2);
    CHECK(br.ties_per_category[1] == std::vector<int>{1, 2});

    const BestResponseResult lowest = best_response(econ, net, 0, TiePolicy::LowestIndex);
    CHECK(lowest.row[1] == Approx(0.4).epsilon(1e-12));
    CHECK(lowest.row[2] == Approx(0.0));

    ProductionNetwork skew = net;
    skew.shares(0, 1) = 0.25;
    skew.shares(0, 2) = 0.15;
    const BestResponseResult keep = best_response(econ, skew, 0, TiePolicy::KeepCurrent);
    CHECK(keep.row[1] == Approx(0.25).epsilon(1e-12));
    CHECK(keep.row[2] == Approx(0.15).epsilon(1e-12));
}

TEST_CASE("best response puts the whole own-category budget on itself") {
    std::mt19937 rng(31);
    for (int t = 0; t < 20; ++t) {
        const EconomySpec econ = sample_economy(rng, 6);
        const ProductionNetwork net = sample_network(rng, econ);
        for (int i = 0; i < econ.firm_count(); ++i) {
            const BestResponseResult br = best_response(econ, net, i, TiePolicy::LowestIndex);
            const int own = econ.categories.firm_category[i];
            CHECK(br.row[i] == Approx(econ.requirements(i, own)).epsilon(1e-14));
        }
    }
}

TEST_CASE("potential changes share the sign of profit changes") {
    std::mt19937 rng(32);
    int deviations = 0;
    for (int t = 0; t < 30; ++t) {
        const EconomySpec econ = sample_economy(rng, 5);
        const ProductionNetwork net = sample_network(rng, econ);
        std::uniform_int_distribution<int> pick(0, econ.firm_count() - 1);
        for (int d = 0; d < 4; ++d) {
            const int firm = pick(rng);
            ProductionNetwork alt = net;
            alt.shares.row(firm) = sample_network(rng, econ).shares.row(firm);
            const double dpi =
                econ.epsilon(firm) * (solve_equilibrium(econ, alt).revenues[firm] -
                                      solve_equilibrium(econ, net).revenues[firm]);
            const double dphi =
                potential_value(econ, alt).potential - potential_value(econ, net).potential;
            if (std::abs(dpi) > 1e-12) {
                CHECK(dpi * dphi > 0.0);
                ++deviations;
            }
        }
    }
    CHECK(deviations > 50);
}

TEST_CASE("tree weights match explicit enumeration") {
    std::mt19937 rng(33);
    for (int t = 0; t < 10; ++t) {
        const EconomySpec econ = sample_economy(rng, 5);
        const FlowMatrix flow = build_flow_matrix(econ, sample_network(rng, econ));
        const Vector det = tree_weights_determinant(flow);
        const Vector enumd = tree_enumeration_oracle(flow);
        CHECK((det - enumd).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("best-response dynamics climb the potential to a Nash point") {
    const ReplicateGame rep = replicate_game(inst_b(), 2);
    const EconomySpec econ = with_uniform_epsilon(rep.economy, 1e-3);
    std::mt19937 rng(34);
    const ProductionNetwork start = sample_network(rng, econ);
    const DynamicsResult dyn =
        best_response_dynamics(econ, start, Schedule::RoundRobin, 0, 50, 1e-12);
    CHECK(dyn.converged);
    for (std::size_t k = 1; k < dyn.potential_per_round.size(); ++k)
        CHECK(dyn.potential_per_round[k] >= dyn.potential_per_round[k - 1] - 1e-12);
    CHECK(is_nash(econ, dyn.terminal).is_nash);
}

TEST_CASE("non-equilibrium profile is flagged with a positive gain") {
    const ReplicateGame rep = replicate_game(inst_b(), 2);
    const EconomySpec econ = with_uniform_epsilon(rep.economy, 1e-3);
    Partition islands{{0}, {1}};
    ProductionNetwork net = build_clustered_network(rep, islands).network;
    net.shares *= 1.0 - 1e-3;
    CHECK(is_nash(econ, net).is_nash);

    // Move firm 0's cross-category sourcing to the foreign supplier.
    ProductionNetwork off = net;
    const double budget = off.shares(0, 2) + off.shares(0, 3);
    off.shares(0, 2) = 0.0;
    off.shares(0, 3) = budget;
    const NashReport report = is_nash(econ, off);
    CHECK_FALSE(report.is_nash);
    CHECK(report.max_gain > 0.0);
    CHECK(report.worst_firm >= 0);
}

TEST_CASE("vanishing profits make game operations degenerate") {
    const EconomySpec econ = inst_b();   // eps = 0
    CHECK_THROWS_AS(best_response(econ, inst_b_network(), 0, TiePolicy::LowestIndex),
                    std::domain_error);
    CHECK_THROWS_AS(is_nash(econ, inst_b_network()), std::domain_error);
}
