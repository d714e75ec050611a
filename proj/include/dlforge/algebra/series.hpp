#pragma once

#include "dlforge/algebra/polynomial.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlforge {

// A formal variable of a power series. `bound` is exclusive: exponents
// >= bound are dropped (O(v^bound)); nullopt means unbounded.
struct SeriesVariable {
    std::string name;
    int weight = 1;
    std::optional<int> bound;
};

// Truncation geometry shared by every series operation.
struct Truncation {
    // Terms whose weighted total exponent is >= total_bound are dropped.
    std::optional<int> total_bound;
    // Terms whose coefficient monomials have degree > coefficient_degree are
    // dropped. Lets graded generating functions be inverted in place.
    std::optional<int> coefficient_degree;
};

// Multivariate power series with polynomial coefficients, truncated per
// variable, by weighted total degree and/or by coefficient degree.
class TruncatedSeries {
public:
    using Exponents = std::vector<int>;

    TruncatedSeries(RingPtr coefficients, std::vector<SeriesVariable> vars, Truncation truncation = {});

    static TruncatedSeries constant(RingPtr coefficients, const GradedPolynomial& c,
                                    std::vector<SeriesVariable> vars = {}, Truncation truncation = {});
    // The series consisting of the single variable `name` from `vars`.
    static TruncatedSeries variable(RingPtr coefficients, std::vector<SeriesVariable> vars, const std::string& name,
                                    Truncation truncation = {});

    const RingPtr& coefficient_ring() const { return coeffs_; }
    const std::vector<SeriesVariable>& variables() const { return vars_; }
    const Truncation& truncation() const { return trunc_; }
    const std::map<Exponents, GradedPolynomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::optional<std::size_t> variable_index(const std::string& name) const;

    // Coefficient of the monomial with the given exponents (by variable name;
    // missing names mean exponent 0).
    GradedPolynomial coefficient(const std::map<std::string, int>& exps) const;
    void add_term(const Exponents& e, const GradedPolynomial& c);
    // Part of the series proportional to var^power, as a series in the
    // remaining variables.
    TruncatedSeries extract(const std::string& var, int power) const;

    TruncatedSeries operator+(const TruncatedSeries& other) const;
    TruncatedSeries operator-(const TruncatedSeries& other) const;
    TruncatedSeries operator-() const;
    TruncatedSeries operator*(const TruncatedSeries& other) const;
    TruncatedSeries scaled(const Rational& c) const;
    TruncatedSeries scaled(const GradedPolynomial& c) const;
    TruncatedSeries pow(int e) const;
    bool operator==(const TruncatedSeries& other) const;

    // Re-truncates to a tighter geometry.
    TruncatedSeries truncated(const std::map<std::string, int>& var_bounds, Truncation extra = {}) const;

    // Multiplicative inverse; the scalar part of the constant coefficient must
    // be a unit and everything else topologically nilpotent.
    TruncatedSeries inverse() const;

    // Substitutes `inner` for the variable `var` of this series. The inner
    // series must have zero constant term.
    TruncatedSeries compose(const std::string& var, const TruncatedSeries& inner) const;

    // Compositional inverse in `var`: returns b with this(b) = var. Requires
    // no var^0 terms and an invertible linear coefficient.
    TruncatedSeries compositional_inverse(const std::string& var) const;

    // Formal partial derivative; the bound of `var` drops by one.
    TruncatedSeries derivative(const std::string& var) const;

    // Divides by var^power exactly; throws if some term has lower var-degree.
    TruncatedSeries divide_by_power(const std::string& var, int power) const;
    TruncatedSeries multiply_by_power(const std::string& var, int power) const;

    bool is_integral() const;
    void require_integral(const std::string& what) const;

    // Lowest weighted total order among nonzero terms; nullopt for zero.
    std::optional<int> order() const;

    std::string to_string() const;

private:
    bool keeps(const Exponents& e, const GradedPolynomial& c) const;
    GradedPolynomial prune(const Exponents& e, const GradedPolynomial& c) const;
    int weighted(const Exponents& e) const;
    TruncatedSeries reindexed(const std::vector<SeriesVariable>& vars, const Truncation& trunc) const;
    static std::pair<std::vector<SeriesVariable>, Truncation> unify(const TruncatedSeries& a,
                                                                    const TruncatedSeries& b);

    RingPtr coeffs_;
    std::vector<SeriesVariable> vars_;
    Truncation trunc_;
    std::map<Exponents, GradedPolynomial> terms_;
};

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s);

}  // namespace dlforge
