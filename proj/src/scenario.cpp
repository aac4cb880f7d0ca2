#include "prodnet/scenario.hpp"

#include <json.hpp>

#include <fstream>

namespace prodnet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw std::invalid_argument(path + ": " + why);
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) != known.end()) continue;
        std::string best = known.front();
        int best_d = edit_distance(key, best);
        for (const auto& k : known) {
            const int d = edit_distance(key, k);
            if (d < best_d) best = k, best_d = d;
        }
        fail(path + "." + key, "unknown key (did you mean \"" + best + "\"?)");
    }
}

Vector parse_vector(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Vector v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) fail(path + "[" + std::to_string(k) + "]", "expected a number");
        v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
    }
    return v;
}

Matrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    const std::size_t cols = j[0].size();
    Matrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail(path + "[" + std::to_string(r) + "]", "ragged or non-array row");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j[r][c].get<double>();
    }
    return m;
}

ProductivityModel parse_productivity(const json& j, const std::string& path) {
    reject_unknown_keys(j, {"kind", "theta", "lambda0"}, path);
    if (!j.contains("kind")) fail(path + ".kind", "required");
    const std::string kind = j.at("kind").get<std::string>();
    ProductivityModel p;
    if (kind == "constant") {
        p = ProductivityModel::constant();
    } else if (kind == "hicks") {
        p = ProductivityModel::hicks_neutral();
    } else if (kind == "power") {
        if (!j.contains("theta")) fail(path + ".theta", "required for kind \"power\"");
        p = ProductivityModel::power(j.at("theta").get<double>());
    } else {
        fail(path + ".kind", "must be one of \"constant\", \"hicks\", \"power\"");
    }
    if (j.contains("lambda0")) {
        if (j.at("lambda0").is_number())
            p.lambda0 = Vector::Constant(1, j.at("lambda0").get<double>());
        else
            p.lambda0 = parse_vector(j.at("lambda0"), path + ".lambda0");
    }
    return p;
}

FirmPair parse_link(const json& j, const Scenario& sc, const std::string& path) {
    if (j.is_array()) {
        if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
            fail(path, "firm pair must be [buyer, supplier]");
        return FirmPair{j[0].get<int>(), j[1].get<int>()};
    }
    if (!j.is_object()) fail(path, "expected a firm pair or a country-pair object");
    reject_unknown_keys(
        j, {"buyer_country", "supplier_country", "buyer_category", "supplier_category"}, path);
    for (const char* k : {"buyer_country", "supplier_country"})
        if (!j.contains(k)) fail(path + "." + k, "required");
    if (sc.replicate_n <= 0) fail(path, "country pairs require a replicate block");
    const int L = sc.economy.categories.num_categories;
    int bc = j.value("buyer_category", 0);
    int sc_cat = j.value("supplier_category", L > 1 ? 1 : 0);
    auto country = [&](const char* k) {
        const int c = j.at(k).get<int>();
        if (c < 0 || c >= sc.replicate_n) fail(path + "." + k, "country out of range");
        return c;
    };
    if (bc < 0 || bc >= L) fail(path + ".buyer_category", "category out of range");
    if (sc_cat < 0 || sc_cat >= L) fail(path + ".supplier_category", "category out of range");
    return FirmPair{bc * sc.replicate_n + country("buyer_country"),
                    sc_cat * sc.replicate_n + country("supplier_country")};
}

}  // namespace

std::string tie_policy_name(TiePolicy p) {
    switch (p) {
        case TiePolicy::UniformOverArgmax: return "uniform_over_argmax";
        case TiePolicy::KeepCurrent: return "keep_current";
        case TiePolicy::LowestIndex: return "lowest_index";
    }
    return "keep_current";
}

TiePolicy tie_policy_from_name(const std::string& name) {
    if (name == "uniform_over_argmax") return TiePolicy::UniformOverArgmax;
    if (name == "keep_current") return TiePolicy::KeepCurrent;
    if (name == "lowest_index") return TiePolicy::LowestIndex;
    throw std::invalid_argument(
        "tie policy must be one of uniform_over_argmax, keep_current, lowest_index");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario file not found: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario JSON parse error: " + std::string(e.what()));
    }
    if (!doc.is_object()) fail("$", "scenario must be a JSON object");
    reject_unknown_keys(doc,
                        {"name", "categories", "consumption_shares", "labor_shares",
                         "requirements", "firm_categories", "productivity", "network",
                         "replicate", "risk", "policy", "options"},
                        "$");

    Scenario sc;
    sc.name = doc.value("name", std::string{});

    for (const char* k : {"categories", "consumption_shares", "labor_shares", "requirements"})
        if (!doc.contains(k)) fail(std::string("$.") + k, "required");

    const int L = doc.at("categories").get<int>();
    if (L <= 0) fail("$.categories", "must be positive");
    sc.economy.consumption_shares = parse_vector(doc.at("consumption_shares"),
                                                 "$.consumption_shares");
    sc.economy.labor_shares = parse_vector(doc.at("labor_shares"), "$.labor_shares");
    sc.economy.requirements = parse_matrix(doc.at("requirements"), "$.requirements");
    const int m = sc.economy.firm_count();
    if (std::abs(sc.economy.consumption_shares.sum() - 1.0) > kShareTol)
        fail("$.consumption_shares", "must sum to 1");
    if (sc.economy.labor_shares.size() != m) fail("$.labor_shares", "size must match firm count");
    if (sc.economy.requirements.rows() != m || sc.economy.requirements.cols() != L)
        fail("$.requirements", "must be firm_count x categories");

    sc.economy.categories.num_categories = L;
    if (doc.contains("firm_categories")) {
        const auto& fc = doc.at("firm_categories");
        if (!fc.is_array() || static_cast<int>(fc.size()) != m)
            fail("$.firm_categories", "size must match firm count");
        for (const auto& c : fc) sc.economy.categories.firm_category.push_back(c.get<int>());
    } else {
        if (m != L) fail("$.firm_categories", "required when firm count differs from categories");
        for (int i = 0; i < m; ++i) sc.economy.categories.firm_category.push_back(i);
    }

    sc.economy.productivity =
        doc.contains("productivity")
            ? parse_productivity(doc.at("productivity"), "$.productivity")
            : ProductivityModel::constant();

    try {
        sc.economy.validate();
    } catch (const std::exception& e) {
        fail("$", e.what());
    }

    if (doc.contains("network")) {
        Matrix net = parse_matrix(doc.at("network"), "$.network");
        if (net.rows() != m || net.cols() != m) fail("$.network", "must be firm_count square");
        sc.network = std::move(net);
    }

    if (doc.contains("replicate")) {
        const auto& rep = doc.at("replicate");
        reject_unknown_keys(rep, {"n", "partition"}, "$.replicate");
        if (!rep.contains("n")) fail("$.replicate.n", "required");
        sc.replicate_n = rep.at("n").get<int>();
        if (sc.replicate_n < 1) fail("$.replicate.n", "must be >= 1");
        if (rep.contains("partition")) {
            Partition q;
            for (const auto& block : rep.at("partition")) {
                q.emplace_back();
                for (const auto& c : block) q.back().push_back(c.get<int>());
            }
            if (!is_partition_of(q, sc.replicate_n))
                fail("$.replicate.partition", "not a partition of the countries");
            sc.partition = std::move(q);
        }
    }

    if (doc.contains("risk")) {
        const auto& r = doc.at("risk");
        reject_unknown_keys(r, {"kind", "spatial", "r", "rho"}, "$.risk");
        RiskSpec rs;
        const std::string kind = r.value("kind", "sum");
        if (kind == "min") rs.kind = DisruptionKind::Min;
        else if (kind == "sum") rs.kind = DisruptionKind::Sum;
        else fail("$.risk.kind", "must be \"min\" or \"sum\"");
        const std::string spatial = r.value("spatial", "homogeneous");
        if (spatial == "homogeneous") rs.spatial = RiskSpatial::Homogeneous;
        else if (spatial == "distance_country") rs.spatial = RiskSpatial::DistanceByCountry;
        else if (spatial == "distance_category") rs.spatial = RiskSpatial::DistanceByCategory;
        else fail("$.risk.spatial",
                  "must be \"homogeneous\", \"distance_country\" or \"distance_category\"");
        rs.r = r.value("r", 0.0);
        rs.rho = r.value("rho", 0.0);
        if (rs.r < 0.0 || rs.r > 1.0) fail("$.risk.r", "must be in [0, 1]");
        if (rs.rho < 0.0 || rs.rho >= 1.0) fail("$.risk.rho", "must be in [0, 1)");
        sc.risk = rs;
    }

    if (doc.contains("policy")) {
        const auto& p = doc.at("policy");
        reject_unknown_keys(p, {"prevented", "catalyzed"}, "$.policy");
        TradePolicy policy;
        if (p.contains("prevented"))
            for (std::size_t k = 0; k < p.at("prevented").size(); ++k)
                policy.prevented.push_back(parse_link(
                    p.at("prevented")[k], sc, "$.policy.prevented[" + std::to_string(k) + "]"));
        if (p.contains("catalyzed"))
            for (std::size_t k = 0; k < p.at("catalyzed").size(); ++k)
                policy.catalyzed.push_back(parse_link(
                    p.at("catalyzed")[k], sc, "$.policy.catalyzed[" + std::to_string(k) + "]"));
        sc.policy = std::move(policy);
    }

    if (doc.contains("options")) {
        const auto& o = doc.at("options");
        reject_unknown_keys(o,
                            {"tol", "epsilon", "tie_policy", "seed", "max_rounds", "n_cap",
                             "grid_step", "live_link_cap"},
                            "$.options");
        sc.options.tol = o.value("tol", sc.options.tol);
        sc.options.epsilon = o.value("epsilon", sc.options.epsilon);
        if (o.contains("tie_policy")) {
            try {
                sc.options.tie_policy = tie_policy_from_name(o.at("tie_policy").get<std::string>());
            } catch (const std::exception& e) {
                fail("$.options.tie_policy", e.what());
            }
        }
        sc.options.seed = o.value("seed", sc.options.seed);
        sc.options.max_rounds = o.value("max_rounds", sc.options.max_rounds);
        sc.options.n_cap = o.value("n_cap", sc.options.n_cap);
        sc.options.grid_step = o.value("grid_step", sc.options.grid_step);
        sc.options.live_link_cap = o.value("live_link_cap", sc.options.live_link_cap);
    }
    return sc;
}

}  // namespace prodnet
