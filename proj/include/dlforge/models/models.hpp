#pragma once

#include "dlforge/algebra/polynomial.hpp"
#include "dlforge/dl/expression.hpp"
#include "dlforge/dl/normalizer.hpp"
#include "dlforge/dl/substitution.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace dlforge::models {

// A polynomial algebra over F2 with a Dyer-Lashof action. Subclasses give Q^s
// on generators; everything else follows from additivity, the Cartan
// formula and instability, memoised per (s, monomial).
class DLModel {
public:
    DLModel(std::string name, RingPtr ring, int max_degree);
    virtual ~DLModel() = default;
    DLModel(const DLModel&) = delete;
    DLModel& operator=(const DLModel&) = delete;

    const std::string& name() const { return name_; }
    const RingPtr& ring() const { return ring_; }
    // Largest degree the generator list covers.
    int max_degree() const { return max_degree_; }

    GradedPolynomial Q(int s, const GradedPolynomial& p);
    GradedPolynomial Q(int s, const Monomial& m);
    // Sum over p of Q^p(u) Q^{s-p}(v), for spot checks of the action table.
    GradedPolynomial cartan_expand(int s, const GradedPolynomial& u, const GradedPolynomial& v);

    GradedPolynomial parse(const std::string& text) const { return parse_polynomial(ring_, text); }
    GradedPolynomial gen(std::size_t index, int power = 1) const;

    std::size_t table_size() const;

protected:
    // Q^s on generator `index`, called only when s exceeds its degree.
    virtual GradedPolynomial Q_generator(int s, std::size_t index) = 0;
    void require_range(int degree, const std::string& what) const;

private:
    GradedPolynomial compute(int s, const Monomial& m);

    std::string name_;
    RingPtr ring_;
    int max_degree_;
    mutable std::mutex mutex_;
    std::map<std::pair<int, Monomial>, GradedPolynomial> table_;
};

// F2[xi_1, xi_2, ...] with |xi_i| = 2^i - 1.
class DualSteenrod : public DLModel {
public:
    explicit DualSteenrod(int max_degree = 64);

    GradedPolynomial xi(int i, int power = 1) const;
    // Conjugate xi-bar_i from the Milnor recursion; xi-bar_0 = 1.
    const GradedPolynomial& antipode(int i) const;
    // Degree-n component of (1 + xi_1 + xi_2 + ...)^{-1}.
    const GradedPolynomial& inverse_component(int n) const;

    // Q^s xi-bar_i by the case rule (only for s >= |xi_i|, below that
    // instability gives 0).
    GradedPolynomial conjugate_rule(int s, int i);
    // Q^s xi_i through the conjugate: rule on xi-bar_i plus Cartan on the
    // decomposable difference. Used for i >= 2 and exposed for cross-checks
    // where instability would otherwise short-circuit.
    GradedPolynomial generator_route(int s, int i);

protected:
    GradedPolynomial Q_generator(int s, std::size_t index) override;

private:
    int generator_count_;
    std::vector<GradedPolynomial> inverse_;
    std::vector<GradedPolynomial> antipode_;
};

// F2[b_1, b_2, ...] with |b_i| = 2i; the mod 2 homology of MU.
class MUHomology : public DLModel {
public:
    explicit MUHomology(int max_degree = 48);

    GradedPolynomial b(int i, int power = 1) const;
    // Degree-n component of (sum_{n >= 0} b_n)^{-1}.
    const GradedPolynomial& inverse_component(int n) const;
    // Degree-2(n + k) component of the numerator of the generating function.
    GradedPolynomial numerator_component(int k, int n) const;

protected:
    GradedPolynomial Q_generator(int s, std::size_t index) override;

private:
    int generator_count_;
    std::vector<GradedPolynomial> inverse_;
};

// Ring map H_*MU -> H_*H: b_{2^k - 1} -> xi_k^2, other b_i -> 0.
GradedPolynomial map_p(const MUHomology& mu, const DualSteenrod& a, const GradedPolynomial& e);

struct CompatibilityReport {
    bool ok = true;
    int checked = 0;
    std::string first_failure;
};

// p(Q^s u) = Q^s p(u) for all monomials u of H_*MU with 1 <= |u| <= max_degree
// and 0 <= s <= max_s.
CompatibilityReport check_dl_compatibility(MUHomology& mu, DualSteenrod& a, int max_s, int max_degree);

// Value of an operation expression in a model, generators sent to the given
// elements (degrees must match).
GradedPolynomial evaluate_in_model(DLModel& model, const dl::Expr& e, const dl::Context& ctx,
                                   const std::map<std::string, GradedPolynomial>& assignment);
GradedPolynomial evaluate_in_model(DLModel& model, const dl::DLPolynomial& p, const dl::Context& ctx,
                                   const std::map<std::string, GradedPolynomial>& assignment);

struct SourceScan {
    std::string generator;
    int degree = 0;
    int indecomposables = 0;
    int basis_size = 0;
    bool all_decomposable = true;
    std::string witness;
};

struct IndeterminacyScan {
    int target_degree = 0;
    bool degree_matches = true;
    bool all_decomposable = true;
    std::vector<SourceScan> sources;
    std::string suspended_image;
};

// Suspends the one-generator relation `relation` (base generators fixed),
// then evaluates the image with each shifted generator set to each basis
// monomial of the model in its degree (other shifted generators 0, base
// generators at the given values) and checks every value is decomposable.
IndeterminacyScan indeterminacy_scan(DLModel& model, const dl::SubstitutionMap& relation,
                                     const std::map<std::string, GradedPolynomial>& base_values,
                                     int target_degree);

}  // namespace dlforge::models
