#pragma once

#include "dlforge/algebra/scalar.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dlforge {

struct Generator {
    std::string name;
    int degree = 0;

    bool operator==(const Generator&) const = default;
};

// Exponent vector indexed by generator position, trailing zeros trimmed so
// that equal monomials compare equal.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<int> exps);

    static Monomial generator(std::size_t index, int power = 1);

    int exponent(std::size_t index) const { return index < exps_.size() ? exps_[index] : 0; }
    std::size_t size() const { return exps_.size(); }
    const std::vector<int>& exponents() const { return exps_; }
    bool is_one() const { return exps_.empty(); }
    // Total exponent (number of generator factors with multiplicity).
    int word_length() const;

    Monomial operator*(const Monomial& other) const;
    bool divides(const Monomial& other) const;
    // Requires divides(other).
    Monomial quotient(const Monomial& divisor) const;

    auto operator<=>(const Monomial&) const = default;

private:
    void trim();
    std::vector<int> exps_;
};

class GradedPolynomial;

// lead -> replacement. Nilpotency relations such as v3^2 = 0 have an empty
// replacement.
struct Relation {
    Monomial lead;
    std::vector<std::pair<Monomial, Rational>> replacement;
};

// A graded-commutative polynomial ring over F2 or Q, optionally modulo
// monomial/binomial relations. Immutable; shared between the polynomials
// living in it.
class PolynomialRing {
public:
    PolynomialRing(std::string name, ScalarRing scalars, std::vector<Generator> generators,
                   std::vector<Relation> relations = {}, bool integral = false);

    static std::shared_ptr<const PolynomialRing> make(std::string name, ScalarRing scalars,
                                                      std::vector<Generator> generators,
                                                      std::vector<Relation> relations = {},
                                                      bool integral = false);

    const std::string& name() const { return name_; }
    ScalarRing scalars() const { return scalars_; }
    // Coefficients are meant to lie in a Z-lattice inside the rational span.
    bool integral() const { return integral_; }
    const std::vector<Generator>& generators() const { return generators_; }
    const std::vector<Relation>& relations() const { return relations_; }

    std::optional<std::size_t> index_of(const std::string& name) const;
    std::size_t require_index(const std::string& name) const;
    int degree(const Monomial& m) const;

    // Same scalars, generators and relations.
    bool compatible_with(const PolynomialRing& other) const;

    // Reduces a scalar into canonical form (mod 2 over F2).
    Rational reduce_scalar(const Rational& q) const;

    // Normal form of a term map with respect to the relations. Idempotent.
    std::map<Monomial, Rational> reduce(std::map<Monomial, Rational> terms) const;

private:
    std::string name_;
    ScalarRing scalars_;
    std::vector<Generator> generators_;
    std::vector<Relation> relations_;
    bool integral_;
};

using RingPtr = std::shared_ptr<const PolynomialRing>;

// Element of a polynomial ring: map from monomials to nonzero scalars, kept in
// normal form with respect to the ring's relations.
class GradedPolynomial {
public:
    explicit GradedPolynomial(RingPtr ring);
    GradedPolynomial(RingPtr ring, std::map<Monomial, Rational> terms);

    static GradedPolynomial zero(RingPtr ring) { return GradedPolynomial(std::move(ring)); }
    static GradedPolynomial constant(RingPtr ring, const Rational& c);
    static GradedPolynomial one(RingPtr ring) { return constant(std::move(ring), 1); }
    static GradedPolynomial generator(RingPtr ring, const std::string& name, int power = 1);
    static GradedPolynomial generator(RingPtr ring, std::size_t index, int power = 1);
    static GradedPolynomial monomial(RingPtr ring, const Monomial& m, const Rational& c = 1);

    const RingPtr& ring() const { return ring_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(const Monomial& m) const;
    // Coefficient of the empty monomial.
    Rational constant_term() const { return coefficient(Monomial{}); }

    GradedPolynomial operator+(const GradedPolynomial& other) const;
    GradedPolynomial operator-(const GradedPolynomial& other) const;
    GradedPolynomial operator-() const;
    GradedPolynomial operator*(const GradedPolynomial& other) const;
    GradedPolynomial& operator+=(const GradedPolynomial& other);
    GradedPolynomial& operator-=(const GradedPolynomial& other);
    GradedPolynomial& operator*=(const GradedPolynomial& other) { return *this = *this * other; }
    GradedPolynomial scaled(const Rational& c) const;
    GradedPolynomial pow(int e) const;

    bool operator==(const GradedPolynomial& other) const;

    // Product truncated to monomials of degree <= max_degree.
    GradedPolynomial mul_truncated(const GradedPolynomial& other, int max_degree) const;

    // nullopt for the zero polynomial or an inhomogeneous one.
    std::optional<int> degree() const;
    bool is_homogeneous() const;
    int max_degree() const;
    GradedPolynomial homogeneous_component(int d) const;
    GradedPolynomial truncated(int max_degree) const;

    // Projection onto the span of single generators.
    GradedPolynomial indecomposable_part() const;
    bool is_decomposable() const { return indecomposable_part().is_zero(); }

    bool is_integral() const;
    // Throws IntegralityError naming `what` when a coefficient has a denominator.
    void require_integral(const std::string& what) const;

    // Ring homomorphism sending generator i to images[i].
    GradedPolynomial substitute(const std::vector<GradedPolynomial>& images) const;

    // Canonical text: ascending degree, degree-reverse-lex inside a degree.
    std::string to_string() const;

private:
    void normalize();
    void check_compatible(const GradedPolynomial& other) const;

    RingPtr ring_;
    std::map<Monomial, Rational> terms_;
};

std::ostream& operator<<(std::ostream& os, const GradedPolynomial& p);

// Parses text like "b5 + b1 b4 + b1^2 b3", "2 - 127 v3", "1/2 v3 x^3" against a
// ring's generator names. Throws std::invalid_argument on bad input.
GradedPolynomial parse_polynomial(const RingPtr& ring, const std::string& text);

// Degrees <= max_degree in which some generator lives.
std::set<int> indecomposable_degrees(const std::vector<Generator>& generators, int max_degree);

// Number of generators of each degree; the dimension of the indecomposables
// of a free polynomial algebra in that degree.
int indecomposable_dimension(const std::vector<Generator>& generators, int degree);

// All monomials of exactly the given degree in a ring, in canonical order.
std::vector<Monomial> monomials_of_degree(const PolynomialRing& ring, int degree);

// Printing order used everywhere a canonical listing is needed.
bool canonical_less(const PolynomialRing& ring, const Monomial& a, const Monomial& b);

std::string monomial_to_string(const PolynomialRing& ring, const Monomial& m);

}  // namespace dlforge
