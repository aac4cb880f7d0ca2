#include "prodnet/sampling.hpp"

namespace prodnet {

EconomySpec sample_economy(std::mt19937& rng, int max_firms, double min_epsilon) {
    std::uniform_int_distribution<int> firm_count(2, max_firms);
    const int m = firm_count(rng);
    std::uniform_int_distribution<int> cat_count(1, std::min(m, 3));
    const int L = cat_count(rng);

    EconomySpec econ;
    econ.categories.num_categories = L;
    econ.categories.firm_category.resize(m);
    // Every category gets at least one firm.
    for (int i = 0; i < m; ++i)
        econ.categories.firm_category[i] =
            i < L ? i : std::uniform_int_distribution<int>(0, L - 1)(rng);

    std::gamma_distribution<double> gamma(1.0, 1.0);
    econ.consumption_shares = Vector(m);
    for (int i = 0; i < m; ++i) econ.consumption_shares[i] = gamma(rng) + 0.05;
    econ.consumption_shares /= econ.consumption_shares.sum();

    econ.labor_shares = Vector(m);
    econ.requirements = Matrix(m, L);
    std::uniform_real_distribution<double> eps_draw(min_epsilon, 0.3);
    for (int i = 0; i < m; ++i) {
        const double budget = 1.0 - eps_draw(rng);
        Vector parts(L + 1);
        for (int k = 0; k <= L; ++k) parts[k] = gamma(rng) + 0.1;
        parts *= budget / parts.sum();
        econ.labor_shares[i] = parts[0];
        for (int l = 0; l < L; ++l) econ.requirements(i, l) = parts[l + 1];
    }
    econ.productivity = ProductivityModel::constant();
    econ.validate();
    return econ;
}

ProductionNetwork sample_network(std::mt19937& rng, const EconomySpec& econ) {
    const int m = econ.firm_count();
    const auto members = econ.categories.members();
    std::gamma_distribution<double> gamma(1.0, 1.0);
    Matrix a = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < econ.categories.num_categories; ++l) {
            Vector draw(static_cast<Eigen::Index>(members[l].size()));
            for (Eigen::Index k = 0; k < draw.size(); ++k) draw[k] = gamma(rng) + 0.05;
            draw *= econ.requirements(i, l) / draw.sum();
            for (std::size_t k = 0; k < members[l].size(); ++k)
                a(i, members[l][k]) = draw[static_cast<Eigen::Index>(k)];
        }
    return ProductionNetwork{std::move(a)};
}

}  // namespace prodnet
