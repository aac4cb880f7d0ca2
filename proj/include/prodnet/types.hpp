#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace prodnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Firms are indexed 0..m-1; the household is node 0 of the (m+1)-state flow
// matrix and is never a firm index. Goods categories are 0..L-1; labor is
// tracked separately as category 0 of the input side.
struct CategoryMap {
    int num_categories = 0;                 // L, goods categories only
    std::vector<int> firm_category;         // size m, values in 0..L-1
    std::vector<int> firm_country;          // replication labels; empty if not a replicate

    int firm_count() const { return static_cast<int>(firm_category.size()); }
    bool has_countries() const { return !firm_country.empty(); }

    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> out(num_categories);
        for (int i = 0; i < firm_count(); ++i) out[firm_category[i]].push_back(i);
        return out;
    }

    void validate() const {
        if (num_categories <= 0) throw std::invalid_argument("category count must be positive");
        for (int c : firm_category)
            if (c < 0 || c >= num_categories)
                throw std::invalid_argument("firm category out of range");
        if (!firm_country.empty() && firm_country.size() != firm_category.size())
            throw std::invalid_argument("country labels must cover every firm");
    }
};

enum class ProductivityKind { Constant, HicksNeutral, PowerOfHicksNeutral };

// Power family: lambda_i(a_i) = lambda0_i * hicks(a_i)^theta, where hicks is
// the reciprocal of the entropy weight prod_j a_{i,j}^{a_{i,j}} over
// intermediate inputs. theta = 0 recovers constant productivity, theta = 1
// (with lambda0 = 1) the Hicks-neutral benchmark.
struct ProductivityModel {
    ProductivityKind kind = ProductivityKind::Constant;
    Vector lambda0;     // per firm, > 0; broadcast from size 1 allowed
    double theta = 0.0;

    static ProductivityModel constant(double value = 1.0) {
        ProductivityModel p;
        p.kind = ProductivityKind::Constant;
        p.lambda0 = Vector::Constant(1, value);
        return p;
    }
    static ProductivityModel hicks_neutral() {
        ProductivityModel p;
        p.kind = ProductivityKind::HicksNeutral;
        p.lambda0 = Vector::Constant(1, 1.0);
        p.theta = 1.0;
        return p;
    }
    static ProductivityModel power(double theta, double lambda0 = 1.0) {
        ProductivityModel p;
        p.kind = ProductivityKind::PowerOfHicksNeutral;
        p.lambda0 = Vector::Constant(1, lambda0);
        p.theta = theta;
        return p;
    }

    double base(int firm) const {
        if (lambda0.size() == 0) return 1.0;
        return lambda0.size() == 1 ? lambda0[0] : lambda0[firm];
    }
    double exponent() const {
        switch (kind) {
            case ProductivityKind::Constant: return 0.0;
            case ProductivityKind::HicksNeutral: return 1.0;
            case ProductivityKind::PowerOfHicksNeutral: return theta;
        }
        return 0.0;
    }
    // log lambda_i evaluated at a row of intermediate input shares.
    double log_value(int firm, const Eigen::Ref<const Vector>& row) const;

    void validate(int m) const {
        if (lambda0.size() != 1 && lambda0.size() != m)
            throw std::invalid_argument("lambda0 must have size 1 or m");
        for (Eigen::Index i = 0; i < lambda0.size(); ++i)
            if (!(lambda0[i] > 0.0)) throw std::invalid_argument("lambda0 must be strictly positive");
        if (theta < 0.0) throw std::invalid_argument("productivity exponent must be nonnegative");
    }
};

// Immutable problem instance: who consumes what, what each firm must source
// from each category, and how productivity responds to the input mix.
struct EconomySpec {
    Vector consumption_shares;   // a0, size m, sums to 1
    Vector labor_shares;         // b_{i,0}, size m
    Matrix requirements;         // m x L, b_{i,ell} over goods categories
    ProductivityModel productivity = ProductivityModel::constant();
    CategoryMap categories;

    int firm_count() const { return static_cast<int>(consumption_shares.size()); }

    double epsilon(int i) const {
        return 1.0 - labor_shares[i] - requirements.row(i).sum();
    }
    Vector epsilons() const {
        Vector e(firm_count());
        for (int i = 0; i < firm_count(); ++i) e[i] = epsilon(i);
        return e;
    }

    void validate() const;
};

// Strategy profile: matrix of intermediate input shares a_{i,j}. The labor
// column is pinned to labor_shares and not stored here.
struct ProductionNetwork {
    Matrix shares;   // m x m

    int firm_count() const { return static_cast<int>(shares.rows()); }
};

// (m+1)x(m+1) column-stochastic revenue-routing matrix; node 0 = household.
// Entry (row j, col i) is the share of i's revenue flowing to j.
struct FlowMatrix {
    Matrix values;

    int node_count() const { return static_cast<int>(values.rows()); }
};

constexpr double kShareTol = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr double kCompareTol = 1e-9;

// 0*log(0) := 0 convention used throughout the entropy terms.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace prodnet
