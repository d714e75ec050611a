#pragma once

#include "dlforge/fgl/formal_group.hpp"

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dlforge::hopf {

// Coefficient of pi_* MU modulo decomposables: 0, 1 or a generator x_n of
// degree 2n.
struct CoeffClass {
    enum class Kind { Zero, One, X };
    Kind kind = Kind::Zero;
    int index = 0;

    static CoeffClass zero() { return {}; }
    static CoeffClass one() { return {Kind::One, 0}; }
    static CoeffClass x(int n);

    int degree() const { return kind == Kind::X ? 2 * index : 0; }
    bool is_zero() const { return kind == Kind::Zero; }
    std::string to_string() const;

    auto operator<=>(const CoeffClass&) const = default;
};

// product mod decomposables: positive times positive is 0
CoeffClass operator*(const CoeffClass& a, const CoeffClass& b);

// F2-sum of classes [c] o b1^{o m} in the quotient.
class HopfClass {
public:
    HopfClass() = default;
    static HopfClass of(const CoeffClass& c, int m);

    const std::set<std::pair<CoeffClass, int>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    HopfClass& operator+=(const HopfClass& o);
    HopfClass operator+(const HopfClass& o) const;
    bool operator==(const HopfClass&) const = default;

    // all terms share one degree; 0 for the zero class
    int degree() const;
    std::string to_string() const;

private:
    std::set<std::pair<CoeffClass, int>> terms_;
};

// P(y) = sum c_i a^i for y of degree 2n, coefficients mod decomposables.
struct PSeries {
    int source_n = 0;
    std::vector<CoeffClass> c;

    CoeffClass at(int i) const;
    PSeries operator+(const PSeries& o) const;
    std::string to_string() const;
};

// How coefficient-ring generators are read as classes x_n. Disabled means no
// coefficient with a generator can be imported.
struct Identification {
    std::map<std::string, int> generator_to_x;
    bool enabled = true;

    static Identification v3_to_x7();
    std::string to_string() const;
};

class ImportError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Reads the a-coefficients of a reduced pipeline result mod decomposables and
// mod 2. Throws ImportError for coefficients outside the identification.
PSeries import_pseries(const TruncatedSeries& reduced, const Identification& id, int source_n,
                       const std::string& var = "a");

// Q-hat^{2k}([1] # ([x] o b1^{o n})) = [c_{k-n}] o b1^{o(k+n)}; 0 for k < n.
HopfClass qhat_on_hurewicz(int k, int source_n, const PSeries& p);

// Q-hat^s b1 = b1 o b_{s/2}; in the quotient only s = 2 survives.
HopfClass qhat_b1(int s);

// [x_n] o b1^{o m} -> sigma x_n, classes with coefficient 1 -> 0. The value is
// the F2-set of indices n.
struct DualClass {
    std::set<int> xs;
    bool is_zero() const { return xs.empty(); }
    std::string to_string() const;
    bool operator==(const DualClass&) const = default;
};
DualClass suspend_to_dual(const HopfClass& h);

// Unnormalised monomial: a product of coefficient classes, o-multiplied with
// b_i for the listed indices.
struct RawHopfTerm {
    std::vector<CoeffClass> coefficients;
    std::vector<int> b_indices;
};

enum class QuotientOrder { KillBFirst, ContractCoefficientsFirst, Interleaved };
HopfClass normalize_raw(const std::vector<RawHopfTerm>& terms, QuotientOrder order);

// b(s + t) = sum [a_ij] o b(s)^{o i} o b(t)^{o j}. Stored as a rule; the one
// executable consequence is at the additive law, where only a_10 = a_01 = 1
// survive and the right side is b(s) # b(t).
struct RavenelWilsonRule {
    std::string statement;
    // nonzero a_ij of the law through total degree < bound
    static std::vector<std::pair<int, int>> nonzero_coefficients(const fgl::FormalGroupLaw& F);
    static bool additive_specialization_holds(const fgl::FormalGroupLaw& F);
};
RavenelWilsonRule ravenel_wilson_rule();

struct ChainOptions {
    int k = 5;
    int source_n = 2;
    bool identification = true;
    int precision = 8;
};

struct ChainStep {
    std::string id;
    std::string value;
    bool imported = false;
};

struct ChainReport {
    std::vector<ChainStep> steps;
    // "sigma x7", "0", or the raw series when identification is off
    std::string endpoint;
    bool identified = true;
};

// appendix pipeline -> import -> Q-hat^{2k} -> suspension.
ChainReport verify_gotcha_chain(const ChainOptions& options = {});

}  // namespace dlforge::hopf
