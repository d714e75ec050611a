#pragma once

#include "dlforge/algebra/polynomial.hpp"
#include "dlforge/algebra/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlforge::fgl {

// Formal group law over a torsion-free ring (modelled by its rational span),
// given by its logarithm x + sum_{n >= 2} l_n x^n. Everything is computed to
// total degree < bound.
class FormalGroupLaw {
public:
    // log_coefficients[n] is the coefficient of x^n; [1] must be 1 (or absent).
    FormalGroupLaw(RingPtr ring, std::map<int, GradedPolynomial> log_coefficients, int bound);

    const RingPtr& ring() const { return ring_; }
    int bound() const { return bound_; }
    GradedPolynomial log_coefficient(int n) const;
    const std::map<int, GradedPolynomial>& log_coefficients() const { return log_; }

    // CP^n = (n + 1) l_{n+1}.
    GradedPolynomial cp(int n) const;

    // l(var), l'(var) and the inverse of l, single variable, exclusive bound.
    TruncatedSeries log_series(const std::string& var, int bound) const;
    TruncatedSeries log_derivative(const std::string& var, int bound) const;
    TruncatedSeries exp_series(const std::string& var, int bound) const;

    // x +_F y in variables x, y, total degree < bound; integrality asserted on
    // integral rings.
    const TruncatedSeries& sum_series() const { return sum_; }
    // F(a, b) for series a, b without constant term.
    TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) const;

    // Sum series with per-variable bounds instead of a total bound.
    TruncatedSeries sum_series(const std::string& x, int x_bound, const std::string& y, int y_bound) const;

private:
    RingPtr ring_;
    std::map<int, GradedPolynomial> log_;
    int bound_;
    TruncatedSeries exp_;
    TruncatedSeries sum_;
};

FormalGroupLaw fgl_from_log(const RingPtr& ring, const std::map<int, GradedPolynomial>& log_coefficients, int bound);

// [n]_F(a) = exp(n l(a)) in the variable `var`, a-precision < bound.
TruncatedSeries n_series(const FormalGroupLaw& F, int n, const std::string& var = "a", std::optional<int> bound = {});
// [2]_F(a) / a.
TruncatedSeries bracket2_series(const FormalGroupLaw& F, const std::string& var = "a", std::optional<int> bound = {});

// g(x, a) = x (x +_F a), with x-precision < x_bound and a-precision < a_bound.
TruncatedSeries isogeny_g(const FormalGroupLaw& F, int x_bound, int a_bound);

struct PowerOpResult {
    int n = 0;
    // a-precision of `raw` and `reduced`
    int precision = 0;
    TruncatedSeries k;
    TruncatedSeries k_inverse;
    TruncatedSeries k_inverse_derivative;
    TruncatedSeries log_derivative_at;  // l'(a k^{-1}(y, a))
    TruncatedSeries f_n;
    TruncatedSeries h_n;
    TruncatedSeries bracket2;
    // a^{-2n} (f_n - h_n <2>)
    TruncatedSeries raw;
    // raw in normal form modulo [2]_F(a)
    TruncatedSeries reduced;
    // f_n - h_n <2> agrees with CP^n squared times a^{2n} through a^{2n}
    bool reconstruction_ok = false;
};

// f(P(CP^n)) in S[[a]] / [2]_F(a), to a-precision < precision.
PowerOpResult appendix_pipeline(const FormalGroupLaw& F, int n, int precision = 8);

// Normal form modulo [2]_F(a): on every a^k with k >= 1, integer coefficients
// are reduced to 0/1 using 2 a^k = -(<2>(a) - 2) a^k, repeated to a fixpoint.
// Constant terms are left alone.
TruncatedSeries reduce_mod_two_series(const TruncatedSeries& s, const FormalGroupLaw& F, const std::string& var = "a");

// s is a multiple of <2>(a) with integral cofactor (within truncation).
bool divisible_by_bracket2(const TruncatedSeries& s, const FormalGroupLaw& F, const std::string& var = "a");

struct IsogenyCheck {
    bool ok = false;
    int order = 0;
    std::string detail;
};

// Derivative form of the isogeny F -> Psi^* F at total order < order in (x, a):
// g'(x, a) l'_{Psi^* F}(g(x, a), a) - a l_F'(x) is a multiple of <2>. The
// Psi(CP^m) are the lifts produced by appendix_pipeline.
IsogenyCheck check_isogeny(const FormalGroupLaw& F, int order);

// F(F(x, y), z) = F(x, F(y, z)) through total degree < bound.
bool check_associativity(const FormalGroupLaw& F, int bound);

// Config: a ring and a logarithm.
struct FglConfig {
    std::string name;
    RingPtr ring;
    std::map<int, GradedPolynomial> log;
    int bound = 16;
    FormalGroupLaw build() const { return fgl_from_log(ring, log, bound); }
};

// Lines:
//   name <text>
//   scalars integers|rationals|f2
//   gen <name> deg <int>
//   relation <monomial> = <polynomial>
//   log <power> <coefficient polynomial>
//   bound <int>
// '#' starts a comment.
FglConfig parse_fgl_config(const std::string& text);

// appendix-z-v3, integers, rationals, lazard-log
FglConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace dlforge::fgl
