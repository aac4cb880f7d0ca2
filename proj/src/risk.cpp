#include "prodnet/risk.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace prodnet {

void RiskModel::validate() const {
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("shock magnitude rho must be in [0, 1)");
    for (Eigen::Index i = 0; i < link_probability.rows(); ++i)
        for (Eigen::Index j = 0; j < link_probability.cols(); ++j)
            if (link_probability(i, j) < 0.0 || link_probability(i, j) > 1.0)
                throw std::invalid_argument("link disruption probabilities must be in [0, 1]");
}

Matrix build_risk_matrix(const ReplicateGame& rep, RiskSpatial spatial, double r) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("base risk r must be in [0, 1]");
    const int m = rep.economy.firm_count();
    Matrix out(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            switch (spatial) {
                case RiskSpatial::Homogeneous:
                    out(i, j) = r;
                    break;
                case RiskSpatial::DistanceByCountry:
                    out(i, j) = r *
                                (std::abs(rep.country_of(i) - rep.country_of(j)) + 1.0) / rep.n;
                    break;
                case RiskSpatial::DistanceByCategory:
                    out(i, j) = r *
                                (std::abs(rep.category_of(i) - rep.category_of(j)) + 1.0) / rep.n;
                    break;
            }
        }
    }
    return out;
}

std::vector<LiveLink> live_links(const ProductionNetwork& net) {
    std::vector<LiveLink> links;
    for (int i = 0; i < net.firm_count(); ++i)
        for (int j = 0; j < net.firm_count(); ++j)
            if (net.shares(i, j) > 0.0) links.push_back(LiveLink{i, j});
    return links;
}

double disruption_exponent(const ProductionNetwork& net, const CategoryMap& categories,
                           const std::vector<LiveLink>& disrupted, DisruptionKind kind,
                           int firm) {
    if (kind == DisruptionKind::Sum) {
        double total = 0.0;
        for (const LiveLink& link : disrupted)
            if (link.buyer == firm && net.shares(link.buyer, link.supplier) > 0.0)
                total += net.shares(link.buyer, link.supplier);
        return total;
    }
    // Min over disrupted links per category; empty category contributes 0.
    std::vector<double> best(categories.num_categories,
                             std::numeric_limits<double>::infinity());
    for (const LiveLink& link : disrupted) {
        if (link.buyer != firm) continue;
        const double a = net.shares(link.buyer, link.supplier);
        if (a <= 0.0) continue;
        int cat = categories.firm_category[link.supplier];
        best[cat] = std::min(best[cat], a);
    }
    double total = 0.0;
    for (double x : best)
        if (std::isfinite(x)) total += x;
    return total;
}

ExpectedWelfare expected_welfare_exact(const EconomySpec& econ, const ProductionNetwork& net,
                                       const RiskModel& risk, int live_link_cap) {
    risk.validate();
    if (risk.link_probability.rows() != econ.firm_count() ||
        risk.link_probability.cols() != econ.firm_count())
        throw std::invalid_argument("risk matrix dimension mismatch");

    const std::vector<LiveLink> links = live_links(net);
    const int e = static_cast<int>(links.size());
    if (e > live_link_cap) throw std::domain_error("live_link_cap exceeded");

    const EquilibriumResult eq = solve_equilibrium(econ, net);
    const WelfareReport base = compute_welfare(econ, net, eq);
    const Vector& g = base.gateway;
    const double log_keep = std::log1p(-risk.rho);

    // Per-link data for the scenario sweep.
    struct LinkData {
        int buyer;
        int cat;
        double share;
        double prob;
        double sum_shift;   // g_buyer * share, the phi-sum contribution
    };
    std::vector<LinkData> data(e);
    for (int k = 0; k < e; ++k) {
        const auto [i, j] = links[k];
        data[k] = LinkData{i, econ.categories.firm_category[j], net.shares(i, j),
                           risk.link_probability(i, j), g[i] * net.shares(i, j)};
    }

    ExpectedWelfare out;
    out.baseline_simplified = base.simplified;
    out.baseline_exact = base.exact;

    const int m = econ.firm_count();
    const int L = econ.categories.num_categories;
    std::vector<double> min_slot(static_cast<std::size_t>(m) * L);
    std::vector<std::uint32_t> slot_gen(static_cast<std::size_t>(m) * L, 0);
    std::uint32_t generation = 0;

    const std::uint64_t total = std::uint64_t{1} << e;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double weight = 1.0;
        for (int k = 0; k < e; ++k)
            weight *= (mask >> k & 1) ? data[k].prob : 1.0 - data[k].prob;
        if (weight == 0.0) {
            ++out.scenario_count;
            continue;
        }

        double shift;   // sum_i g_i phi_i(K)
        if (risk.kind == DisruptionKind::Sum) {
            shift = 0.0;
            for (int k = 0; k < e; ++k)
                if (mask >> k & 1) shift += data[k].sum_shift;
        } else {
            ++generation;
            for (int k = 0; k < e; ++k) {
                if (!(mask >> k & 1)) continue;
                const std::size_t slot =
                    static_cast<std::size_t>(data[k].buyer) * L + data[k].cat;
                if (slot_gen[slot] != generation || data[k].share < min_slot[slot]) {
                    slot_gen[slot] = generation;
                    min_slot[slot] = data[k].share;
                }
            }
            shift = 0.0;
            for (int k = 0; k < e; ++k) {
                if (!(mask >> k & 1)) continue;
                const std::size_t slot =
                    static_cast<std::size_t>(data[k].buyer) * L + data[k].cat;
                if (slot_gen[slot] == generation && min_slot[slot] == data[k].share) {
                    shift += g[data[k].buyer] * min_slot[slot];
                    slot_gen[slot] = 0;   // count each (firm, category) once
                }
            }
        }

        out.expected_simplified += weight * (base.simplified + log_keep * shift);
        out.expected_exact += weight * (base.exact + log_keep * shift);
        out.scenario_weight_sum += weight;
        ++out.scenario_count;
    }
    return out;
}

double expected_welfare_clustered(const ReplicateGame& rep, const Partition& q,
                                  DisruptionKind kind, RiskSpatial spatial, double r,
                                  double rho) {
    if (rep.base.productivity.kind != ProductivityKind::HicksNeutral)
        throw std::invalid_argument("clustered closed form requires Hicks-neutral productivity");
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("rho must be in [0, 1)");

    // Work at the eps = 0 budget, where W is the exact welfare objective.
    const ReplicateGame rep0 = replicate_game(with_uniform_epsilon(rep.base, 0.0), rep.n);
    const int L = rep0.base.categories.num_categories;
    const int n = rep0.n;
    const ClusterInverseTable table = cluster_inverse_table(rep0, q);
    const Matrix risk_matrix = build_risk_matrix(rep0, spatial, r);

    std::vector<int> base_firm_of(L);
    for (int i = 0; i < L; ++i) base_firm_of[rep0.base.categories.firm_category[i]] = i;
    Matrix B(L, L);
    Vector labor(L);
    for (int l = 0; l < L; ++l) {
        B.row(l) = rep0.base.requirements.row(base_firm_of[l]);
        labor[l] = rep0.base.labor_shares[base_firm_of[l]];
    }

    double base_welfare = 0.0;
    for (int l = 0; l < L; ++l)
        base_welfare += table.gateway_by_category[l] * xlogx(labor[l]);

    const std::vector<int> blk = block_index(q, n);
    const double log_keep = std::log1p(-rho);
    double shift = 0.0;
    for (int cat = 0; cat < L; ++cat) {
        const double gate = table.gateway_by_category[cat] / n;
        for (int c = 0; c < n; ++c) {
            const int i = cat * n + c;
            const auto& block = q[blk[c]];
            const double mk = static_cast<double>(block.size());
            double phi = 0.0;
            if (B(cat, cat) > 0.0) phi += risk_matrix(i, i) * B(cat, cat);
            for (int other = 0; other < L; ++other) {
                if (other == cat || B(cat, other) <= 0.0) continue;
                if (kind == DisruptionKind::Min) {
                    double keep_all = 1.0;
                    for (int c2 : block) keep_all *= 1.0 - risk_matrix(i, other * n + c2);
                    phi += B(cat, other) * (1.0 - keep_all) / mk;
                } else {
                    double prob_sum = 0.0;
                    for (int c2 : block) prob_sum += risk_matrix(i, other * n + c2);
                    phi += B(cat, other) * prob_sum / mk;
                }
            }
            shift += gate * phi;
        }
    }
    return base_welfare + log_keep * shift;
}

RiskPartitionScan risk_partition_scan(const ReplicateGame& rep, DisruptionKind kind,
                                      RiskSpatial spatial, double r, double rho, int n_cap) {
    RiskPartitionScan out;
    out.max_welfare = -std::numeric_limits<double>::infinity();
    out.min_welfare = std::numeric_limits<double>::infinity();
    for (const auto& q : enumerate_partitions(rep.n, n_cap)) {
        const double w = expected_welfare_clustered(rep, q, kind, spatial, r, rho);
        out.scan.push_back(PartitionWelfare{q, w});
        if (w > out.max_welfare) {
            out.max_welfare = w;
            out.argmax = q;
        }
        if (w < out.min_welfare) {
            out.min_welfare = w;
            out.argmin = q;
        }
    }
    return out;
}

ProbabilityIdentity expected_count_identity(const std::vector<double>& p) {
    const int n = static_cast<int>(p.size());
    if (n > 20) throw std::domain_error("probability identity enumeration capped at 20 entries");
    for (double x : p)
        if (x < 0.0 || x > 1.0) throw std::invalid_argument("probabilities must be in [0, 1]");

    ProbabilityIdentity id;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double weight = 1.0;
        int count = 0;
        for (int k = 0; k < n; ++k) {
            if (mask >> k & 1) {
                weight *= p[k];
                ++count;
            } else {
                weight *= 1.0 - p[k];
            }
        }
        id.expected_count_lhs += count * weight;
    }
    for (double x : p) id.probability_sum_rhs += x;
    return id;
}

DistanceInequality distance_sum_inequality(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    if (a.empty() || b.empty()) throw std::invalid_argument("both samples must be nonempty");

    auto pairwise = [](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j) s += std::abs(x[i] - x[j]);
        return s;
    };
    const double sa = pairwise(a);
    const double sb = pairwise(b);
    double sab = 0.0;
    for (double x : a)
        for (double y : b) sab += std::abs(x - y);

    DistanceInequality out;
    out.lhs = (m / n) * sa + (n / m) * sb;
    out.rhs = sab;
    out.merged_form_lhs = (sa + sb + sab) / (m + n);
    out.merged_form_rhs = sa / n + sb / m;
    return out;
}

}  // namespace prodnet
