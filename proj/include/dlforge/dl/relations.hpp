#pragma once

#include "dlforge/dl/substitution.hpp"

#include <string>
#include <vector>

namespace dlforge::dl {

// Contexts of the free algebras the built-in maps live between.
Context base_context();           // x in degree 2
Context y_context();              // x and the seven y classes
Context relation_source_context();  // x, z30
Context context_with(const std::string& name, int degree);  // x and one more generator

// y_i as operations on x.
SubstitutionMap map_Q();
// z30 to the degree-30 relation among the y_i.
SubstitutionMap map_R();
SubstitutionMap map_mu();
SubstitutionMap map_nu();
SubstitutionMap map_alpha();
SubstitutionMap map_beta();
SubstitutionMap map_qbar();

// Summands of R(z30) over y_context, one per row of the term table.
std::vector<std::string> relation_terms();
std::string relation_expression();

struct NamedIdentity {
    std::string id;
    std::string lhs;
    std::string rhs;
};

// Auxiliary identities over base_context used to cancel the relation by hand.
std::vector<NamedIdentity> relation_identities();

// The indeterminacy form expected for the suspended relation, over the
// suspended y context.
std::string suspended_relation_expected();

}  // namespace dlforge::dl
