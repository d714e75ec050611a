#pragma once

#include "dlforge/dl/expression.hpp"
#include "dlforge/dl/normalizer.hpp"

#include <map>
#include <set>
#include <string>

namespace dlforge::dl {

// Map of free algebras determined by the images of the source generators.
// Source generators without an explicit image go to the generator of the
// same name in the target (maps "under" a base algebra).
class SubstitutionMap {
public:
    SubstitutionMap(std::string name, Context source, Context target);

    // Image given in the expression grammar over the target context; its degree
    // must match the generator's.
    SubstitutionMap& set(const std::string& generator, const std::string& image);
    SubstitutionMap& set(const std::string& generator, ExprPtr image);

    const std::string& name() const { return name_; }
    const Context& source() const { return source_; }
    const Context& target() const { return target_; }
    ExprPtr image(const std::string& generator) const;
    bool has_explicit_image(const std::string& generator) const { return images_.count(generator) > 0; }

    // Substitute the images into an expression over the source.
    ExprPtr apply(const Expr& e) const;
    DLPolynomial evaluate(const std::string& generator, Normalizer& n) const;

    std::string to_string() const;

private:
    std::string name_;
    Context source_;
    Context target_;
    std::map<std::string, ExprPtr> images_;
};

// outer after inner
SubstitutionMap compose_maps(const SubstitutionMap& outer, const SubstitutionMap& inner);
// pointwise sum on the explicitly mapped generators; both maps share source
// and target
SubstitutionMap add_maps(const SubstitutionMap& a, const SubstitutionMap& b);
SubstitutionMap identity_map(const Context& ctx);

// Normal forms agree on every source generator.
bool maps_equal(const SubstitutionMap& a, const SubstitutionMap& b, Normalizer& n);

// Name of the suspended copy of a generator: "y10" of degree 10 becomes
// "y'11", a name without a numeric suffix gets a prime.
std::string suspended_name(const std::string& name, int degree);

// Suspension. Generators in `base` are kept as they are and act as scalars;
// every other generator is renamed and shifted up by one. Q^s is kept, and a
// product containing two or more shifted factors becomes zero, as does a term
// containing none.
ExprPtr suspend_expression(const Expr& e, const Context& ctx, const std::set<std::string>& base);
SubstitutionMap suspend(const SubstitutionMap& m, const std::set<std::string>& base);

}  // namespace dlforge::dl
