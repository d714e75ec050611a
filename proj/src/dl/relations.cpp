#include "dlforge/dl/relations.hpp"

namespace dlforge::dl {

Context base_context()
{
    return Context{{"x", 2}};
}

Context y_context()
{
    return Context{{"x", 2}, {"y5", 5}, {"y7", 7}, {"y9", 9}, {"y13", 13}, {"y8", 8}, {"y10", 10}, {"y12", 12}};
}

Context relation_source_context()
{
    return context_with("z30", 30);
}

Context context_with(const std::string& name, int degree)
{
    Context c = base_context();
    c.add(name, degree);
    return c;
}

SubstitutionMap map_Q()
{
    SubstitutionMap m("Q", y_context(), base_context());
    m.set("y5", "Q3 x")
        .set("y7", "Q5 x")
        .set("y9", "Q7 x")
        .set("y13", "Q11 x")
        .set("y8", "Q6 x + x^4")
        .set("y10", "Q8 x + x^2 Q4 x")
        .set("y12", "Q10 x + (Q4 x)^2");
    return m;
}

std::vector<std::string> relation_terms()
{
    return {
        "Q20 y10",
        "Q18 y12",
        "Q17 y13",
        "x^4 (Q12 y10)",
        "y9^2 (Q4 x)^2",
        "y7^2 Q9 Q5 x",
        "y8^2 Q8 Q4 x",
        "(Q9 y9) (Q4 x)^2",
        "(Q10 y8) (Q4 x)^2",
        "y5^2 Q11 Q7 x",
        "y5^2 Q10 Q8 x",
        "y5^2 x^4 Q6 Q4 x",
    };
}

std::string relation_expression()
{
    std::string out;
    for (const auto& t : relation_terms())
        out += (out.empty() ? "" : " + ") + t;
    return out;
}

SubstitutionMap map_R()
{
    SubstitutionMap m("R", relation_source_context(), y_context());
    m.set("z30", relation_expression());
    return m;
}

SubstitutionMap map_mu()
{
    SubstitutionMap m("mu", y_context(), context_with("y4", 4));
    for (const auto* g : {"y5", "y7", "y9", "y13", "y8", "y12"})
        m.set(g, "0");
    m.set("y10", "Q6 y4");
    return m;
}

SubstitutionMap map_nu()
{
    SubstitutionMap m("nu", relation_source_context(), context_with("z14", 14));
    m.set("z30", "Q16 z14");
    return m;
}

SubstitutionMap map_alpha()
{
    SubstitutionMap m("alpha", relation_source_context(), context_with("z15", 15));
    m.set("z30", "z15^2");
    return m;
}

SubstitutionMap map_beta()
{
    SubstitutionMap m("beta", context_with("z15", 15), context_with("y4", 4));
    m.set("z15", "Q3 x Q6 y4");
    return m;
}

SubstitutionMap map_qbar()
{
    SubstitutionMap m("Qbar", context_with("z14", 14), context_with("y4", 4));
    m.set("z14", "Q10 y4 + x^2 Q6 y4");
    return m;
}

std::vector<NamedIdentity> relation_identities()
{
    return {
        {"adem-20-8", "Q20 Q8 x", "Q18 Q10 x + Q17 Q11 x"},
        {"cartan-20", "Q20 (x^2 Q4 x)",
         "x^4 Q16 Q4 x + (Q3 x)^2 Q14 Q4 x + (Q4 x)^2 Q12 Q4 x + (Q5 x)^2 Q10 Q4 x + (Q6 x)^2 Q8 Q4 x + "
         "(Q7 x)^2 (Q4 x)^2"},
        {"square-18", "Q18 ((Q4 x)^2)", "0"},
        {"adem-16-4", "x^4 Q16 Q4 x", "x^4 Q12 Q8 x"},
        {"adem-14-4", "(Q3 x)^2 Q14 Q4 x", "(Q3 x)^2 Q11 Q7 x + (Q3 x)^2 Q10 Q8 x"},
        {"adem-12-4", "(Q4 x)^2 Q12 Q4 x", "(Q4 x)^2 Q10 Q6 x + (Q4 x)^2 Q9 Q7 x"},
        {"adem-10-4", "(Q5 x)^2 Q10 Q4 x", "(Q5 x)^2 Q9 Q5 x"},
    };
}

std::string suspended_relation_expected()
{
    return "Q20 y'11 + Q18 y'13 + Q17 y'14 + x^4 (Q12 y'11) + (Q9 y'10) (Q4 x)^2 + (Q10 y'9) (Q4 x)^2";
}

}  // namespace dlforge::dl
