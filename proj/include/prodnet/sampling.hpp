#pragma once

#include "prodnet/economy.hpp"

#include <random>

namespace prodnet {

// Random admissible instances for property tests and the verify suite. All
// weights are strictly positive, so the flow chain is ergodic and every firm
// keeps a profit margin of at least min_epsilon.
EconomySpec sample_economy(std::mt19937& rng, int max_firms, double min_epsilon = 0.01);

// Strictly positive admissible network matching the economy's category budgets.
ProductionNetwork sample_network(std::mt19937& rng, const EconomySpec& econ);

}  // namespace prodnet
