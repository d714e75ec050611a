#include "doctest.h"
#include "oracles/binomial_oracle.hpp"

#include "dlforge/dl/normalizer.hpp"
#include "dlforge/dl/parser.hpp"
#include "dlforge/dl/relations.hpp"
#include "dlforge/dl/substitution.hpp"

#include <algorithm>
#include <random>

using namespace dlforge::dl;

namespace {

DLPolynomial nf(Normalizer& n, const std::string& s)
{
    return n.normalize(s);
}

Context xy()
{
    return Context{{"x", 2}, {"y", 4}};
}

}  // namespace

TEST_CASE("parser: words, sums and juxtaposition")
{
    Context ctx{{"x", 2}, {"y4", 4}};
    auto w = parse_expression("Q20 Q8 x", ctx);
    REQUIRE(w->kind == Expr::Kind::Operation);
    CHECK(w->value == 20);
    CHECK(w->children[0]->value == 8);
    CHECK(w->children[0]->children[0]->name == "x");

    auto s = parse_expression("Q10 y4 + x^2 Q6 y4", ctx);
    REQUIRE(s->kind == Expr::Kind::Sum);
    CHECK(s->children.size() == 2);
    CHECK(s->children[1]->kind == Expr::Kind::Product);

    auto p = parse_expression("Q3 x Q6 y4", ctx);
    REQUIRE(p->kind == Expr::Kind::Product);
    CHECK(p->children.size() == 2);
    CHECK(print(*p) == "Q3 x Q6 y4");
}

TEST_CASE("parser: alternative operation spellings")
{
    Context ctx = xy();
    auto a = parse_expression("Q20 x", ctx);
    CHECK(structurally_equal(*a, *parse_expression("Q 20 x", ctx)));
    CHECK(structurally_equal(*a, *parse_expression("Q^20 x", ctx)));
}

TEST_CASE("parser: errors carry positions")
{
    Context ctx = xy();
    try {
        parse_expression("Q3 x + + y", ctx);
        FAIL("expected a parse error");
    }
    catch (const ParseError& e) {
        CHECK(e.position() == 7);
    }
    CHECK_THROWS_AS(parse_expression("Q3 z", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("(x + y", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("Q3", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("x ^ y", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("x $ y", ctx), ParseError);
}

TEST_CASE("parser: round trip")
{
    Context ctx = xy();
    for (const char* text : {"Q20 Q8 x", "x^4 (Q12 y) + (Q4 x)^2 Q9 Q5 x", "Q16 (Q10 y + x^2 Q6 y) + (Q3 x Q6 y)^2",
                             "Q3 (x y)", "((x + y) x)^3", "1 + x", "Q18 ((Q4 x)^2)"}) {
        auto e = parse_expression(text, ctx);
        auto again = parse_expression(print(*e), ctx);
        CHECK_MESSAGE(structurally_equal(*e, *again), text);
        CHECK(print(*again) == print(*e));
    }
}

TEST_CASE("context: declarations")
{
    auto ctx = Context::parse("gen x deg 2\n# comment\ngen y4 deg 4\n");
    CHECK(ctx.size() == 2);
    CHECK(ctx.degree(ctx.require("y4")) == 4);
    CHECK(Context::parse(ctx.to_string()) == ctx);
    CHECK_THROWS(Context::parse("gen x deg 2\ngen x deg 4\n"));
    CHECK_THROWS(Context::parse("gen Q3 deg 2\n"));
    CHECK_THROWS(Context::parse("generator x 2\n"));
}

TEST_CASE("expression degree")
{
    Context ctx = xy();
    CHECK(expression_degree(*parse_expression("Q20 Q8 x", ctx), ctx) == 30);
    CHECK(expression_degree(*parse_expression("x^2 Q4 x", ctx), ctx) == 10);
    CHECK_FALSE(expression_degree(*parse_expression("0", ctx), ctx).has_value());
    CHECK_THROWS_AS(expression_degree(*parse_expression("x + y", ctx), ctx), DegreeError);
}

TEST_CASE("adem_step: worked examples")
{
    CHECK(adem_step(20, 8, 2) == std::vector<AdemTerm>{{18, 10, 1}, {17, 11, 1}});
    CHECK(adem_step(20, 6) == std::vector<AdemTerm>{{16, 10, 1}, {14, 12, 1}, {13, 13, 1}});
    CHECK(adem_step(20, 6, 4) == std::vector<AdemTerm>{{16, 10, 1}});
    CHECK_THROWS_AS(adem_step(4, 2), std::invalid_argument);
}

TEST_CASE("adem_step agrees with the exact binomial oracle")
{
    for (int s = 0; s <= 20; ++s)
        for (int r = 2 * s + 1; r <= 48; ++r) {
            std::vector<std::pair<int, int>> got;
            for (const auto& t : adem_step(r, s))
                got.push_back({t.outer, t.inner});
            CHECK_MESSAGE(got == oracle::adem_pairs(r, s), "r=" << r << " s=" << s);
        }
}

TEST_CASE("normalize: instability and Cartan examples")
{
    Normalizer n(base_context());
    CHECK(nf(n, "Q10 (x^2)") == nf(n, "(Q5 x)^2"));
    CHECK(nf(n, "Q1 x").is_zero());
    CHECK(nf(n, "Q2 x") == nf(n, "x^2"));
    CHECK(nf(n, "Q20 (x^2 Q4 x)") ==
          nf(n, "x^4 Q16 Q4 x + (Q3 x)^2 Q14 Q4 x + (Q4 x)^2 Q12 Q4 x + (Q5 x)^2 Q10 Q4 x + (Q6 x)^2 Q8 Q4 x + "
                "(Q7 x)^2 (Q4 x)^2"));
    CHECK(nf(n, "Q20 (x^2 Q4 x)").is_normal(n.context()));
    CHECK(nf(n, "Q20 Q8 x").to_string(n.context()) == "Q18 Q10 x + Q17 Q11 x");

    Normalizer m(Context{{"y", 4}});
    CHECK(nf(m, "Q20 Q6 y").to_string(m.context()) == "Q16 Q10 y");
}

TEST_CASE("normalize: output is printed canonically and reparses")
{
    Normalizer n(base_context());
    auto p = nf(n, "Q20 (x^2 Q4 x)");
    CHECK(nf(n, p.to_string(n.context())) == p);
    CHECK(nf(n, "x + x").is_zero());
    CHECK(nf(n, "3 x") == nf(n, "x"));
}

TEST_CASE("verify_identity examples")
{
    Normalizer n(base_context());
    CHECK(verify_identity(n, "Q18 ((Q4 x)^2)", "0").holds);
    CHECK(verify_identity(n, "x^4 Q16 Q4 x", "x^4 Q12 Q8 x").holds);
    CHECK(verify_identity(n, "Q2 x", "x^2").holds);
    auto bad = verify_identity(n, "Q20 Q8 x", "Q18 Q10 x");
    CHECK_FALSE(bad.holds);
    CHECK(bad.residual.to_string(n.context()) == "Q17 Q11 x");
    CHECK_THROWS_AS(verify_identity(n, "Q3 x", "x^2"), DegreeError);
}

TEST_CASE("big relation and its auxiliary identities")
{
    Normalizer n(base_context());
    auto Q = map_Q();
    auto R = map_R();
    auto in_x = Q.apply(*R.image("z30"));
    CHECK(n.normalize(*in_x).is_zero());
    CHECK(expression_degree(*in_x, n.context()) == 30);

    for (const auto& id : relation_identities())
        CHECK_MESSAGE(verify_identity(n, id.lhs, id.rhs).holds, id.id);

    auto terms = relation_terms();
    for (std::size_t drop = 0; drop < terms.size(); ++drop) {
        std::string partial;
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (i != drop)
                partial += (partial.empty() ? "" : " + ") + terms[i];
        auto e = Q.apply(*parse_expression(partial, y_context()));
        CHECK_MESSAGE(!n.normalize(*e).is_zero(), terms[drop]);
    }
}

TEST_CASE("min_en_level")
{
    Normalizer n(base_context());
    auto in_x = map_Q().apply(*map_R().image("z30"));
    auto lvl = min_en_level(n, *in_x);
    CHECK(lvl.level == 12);
    CHECK(lvl.r == 20);
    CHECK(lvl.d == 10);

    Normalizer ny(y_context());
    CHECK(min_en_level(ny, *parse_expression("Q20 y10", ny.context())).level == 12);
    CHECK(min_en_level(n, *parse_expression("Q3 x", n.context())).level == 3);
    CHECK(min_en_level(n, *parse_expression("x^2", n.context())).level == 1);

    Normalizer cold(base_context(), {.memoize = false});
    CHECK(min_en_level(cold, *in_x) == lvl);
}

TEST_CASE("strict window rejects operations outside E_n")
{
    auto in_x = map_Q().apply(*map_R().image("z30"));
    Normalizer e11(base_context(), {.strict_level = 11});
    CHECK_THROWS_AS(e11.normalize(*in_x), WindowError);
    Normalizer e12(base_context(), {.strict_level = 12});
    CHECK(e12.normalize(*in_x).is_zero());
}

TEST_CASE("memo on and off agree")
{
    Normalizer warm(base_context());
    Normalizer cold(base_context(), {.memoize = false});
    for (const char* t : {"Q20 (x^2 Q4 x)", "Q24 Q8 Q4 x", "Q16 ((Q3 x)^2 x)"})
        CHECK(warm.normalize(t) == cold.normalize(t));
    CHECK(cold.memo_size() == 0);
    CHECK(warm.memo_size() > 0);
}

namespace {

Context random_context()
{
    return Context{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}, {"f", 6}};
}

ExprPtr random_word(std::mt19937& rng)
{
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    // superscripts in [0, 24], biased to sit near the degree below so that
    // the corpus is not dominated by instability zeros
    std::uniform_int_distribution<int> len(1, 4), gen(0, 5), jitter(-2, 8);
    int g = gen(rng);
    int below = g + 1;
    std::vector<int> ops(static_cast<std::size_t>(len(rng)));
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        *it = std::clamp(below + jitter(rng), 0, 24);
        below += *it;
    }
    return make_word(ops, make_generator(names[g]));
}

ExprPtr random_expression(std::mt19937& rng)
{
    std::uniform_int_distribution<int> shape(0, 9);
    int k = shape(rng);
    if (k < 6)
        return random_word(rng);
    if (k < 8)
        return make_product({random_word(rng), random_word(rng)});
    std::uniform_int_distribution<int> sup(0, 16);
    return make_operation(sup(rng), make_product({random_word(rng), random_word(rng)}));
}

}  // namespace

TEST_CASE("confluence and idempotence on a random corpus")
{
    std::mt19937 rng(20240611);
    Context ctx = random_context();
    Normalizer n(ctx);
    int nonzero = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto e = random_expression(rng);
        auto p = n.normalize(*e);
        auto left = rewrite_expression(*e, ctx, RewriteStrategy::LeftmostFirst);
        auto right = rewrite_expression(*e, ctx, RewriteStrategy::RightmostFirst);
        REQUIRE_MESSAGE(left.result == p, print(*e));
        REQUIRE_MESSAGE(right.result == p, print(*e));
        REQUIRE(p.is_normal(ctx));
        REQUIRE(p.is_homogeneous(ctx));
        REQUIRE(n.normalize(p.to_string(ctx)) == p);
        if (!p.is_zero())
            ++nonzero;
    }
    CHECK(nonzero > 100);
}

TEST_CASE("normalize is additive and multiplicative")
{
    std::mt19937 rng(7);
    Context ctx = random_context();
    Normalizer n(ctx);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_expression(rng), b = random_expression(rng);
        CHECK(n.normalize(*make_product({a, b})) == n.normalize(*a) * n.normalize(*b));
        auto da = expression_degree(*a, ctx), db = expression_degree(*b, ctx);
        if (da && db && *da == *db)
            CHECK(n.normalize(*make_sum({a, b})) == n.normalize(*a) + n.normalize(*b));
    }
}

TEST_CASE("verify_identity is symmetric and transitive")
{
    Normalizer n(base_context());
    const char* a = "Q20 Q8 x";
    const char* b = "Q18 Q10 x + Q17 Q11 x";
    const char* c = "Q18 Q10 x + Q17 Q11 x + Q18 ((Q4 x)^2)";
    CHECK(verify_identity(n, a, b).holds == verify_identity(n, b, a).holds);
    CHECK(verify_identity(n, a, b).holds);
    CHECK(verify_identity(n, b, c).holds);
    CHECK(verify_identity(n, a, c).holds);
}

TEST_CASE("E_n bound: operations inside the window stay inside")
{
    std::mt19937 rng(99);
    Context ctx = random_context();
    Normalizer n(ctx);
    std::uniform_int_distribution<int> level(2, 14);
    for (int trial = 0; trial < 200; ++trial) {
        auto e = random_expression(rng);
        auto lvl = min_en_level(n, *e);
        // every input application satisfies r - d + 2 <= declared, so the
        // trace never needs more
        Normalizer strict(ctx, {.strict_level = lvl.level});
        CHECK_NOTHROW(strict.normalize(*e));
        int k = level(rng);
        Normalizer window(ctx, {.strict_level = k});
        if (lvl.level <= k)
            CHECK_NOTHROW(window.normalize(*e));
        else
            CHECK_THROWS_AS(window.normalize(*e), WindowError);
    }
}

TEST_CASE("suspension of the relation")
{
    auto sR = suspend(map_R(), {"x"});
    CHECK(sR.source().contains("z'31"));
    CHECK(sR.target().contains("y'11"));
    CHECK(sR.target().degree(sR.target().require("y'14")) == 14);
    Normalizer n(sR.target());
    auto got = sR.evaluate("z'31", n);
    auto want = n.normalize(suspended_relation_expected());
    CHECK(got == want);
    CHECK(print(*sR.image("z'31")) ==
          "Q20 y'11 + Q18 y'13 + Q17 y'14 + x^4 Q12 y'11 + Q9 y'10 (Q4 x)^2 + Q10 y'9 (Q4 x)^2");
}

TEST_CASE("suspension keeps operations and kills products")
{
    auto snu = suspend(map_nu(), {"x"});
    CHECK(print(*snu.image("z'31")) == "Q16 z'15");

    SubstitutionMap prod("p", Context{{"z", 8}}, Context{{"y", 4}, {"w", 4}});
    prod.set("z", "y w");
    CHECK(print(*suspend(prod, {}).image("z'")) == "0");
    CHECK(suspended_name("y10", 10) == "y'11");
    CHECK(suspended_name("z", 3) == "z'");
}

TEST_CASE("compose: the second juggling identity")
{
    Context tgt = context_with("y4", 4);
    Normalizer n(tgt);
    auto muR = compose_maps(map_mu(), map_R());
    CHECK(muR.evaluate("z30", n) == n.normalize("Q20 Q6 y4 + x^4 Q12 Q6 y4"));
    auto rhs = add_maps(compose_maps(map_qbar(), map_nu()), compose_maps(map_beta(), map_alpha()));
    CHECK(rhs.evaluate("z30", n) == n.normalize("Q16 (Q10 y4 + x^2 Q6 y4) + (Q3 x Q6 y4)^2"));
    CHECK(maps_equal(muR, rhs, n));
    CHECK(muR.evaluate("z30", n).to_string(tgt) == "Q16 Q10 y4 + x^4 Q12 Q6 y4");

    auto idmu = compose_maps(identity_map(tgt), map_mu());
    CHECK(maps_equal(idmu, map_mu(), n));
    CHECK_THROWS_AS(compose_maps(map_mu(), map_nu()), std::invalid_argument);
}

TEST_CASE("compose is associative")
{
    Normalizer n(context_with("y4", 4));
    auto a = compose_maps(map_mu(), compose_maps(map_R(), identity_map(relation_source_context())));
    auto b = compose_maps(compose_maps(map_mu(), map_R()), identity_map(relation_source_context()));
    CHECK(maps_equal(a, b, n));
}

TEST_CASE("suspension commutes with composition")
{
    std::mt19937 rng(31337);
    Context mid{{"x", 2}, {"u", 3}, {"v", 5}};
    Context top{{"x", 2}, {"w", 9}};
    Context bot{{"x", 2}, {"p", 2}, {"q", 3}};
    std::uniform_int_distribution<int> pick(0, 3);
    const char* u_images[] = {"Q1 p", "q", "Q1 p + q", "Q1 x + q"};
    const char* v_images[] = {"Q3 p", "Q2 q", "x q + p q", "(Q1 p) p + x q"};
    const char* w_images[] = {"Q4 v", "Q6 u + x Q2 v", "u^3 + Q4 v", "Q4 (x u) + u^3"};
    for (int trial = 0; trial < 40; ++trial) {
        SubstitutionMap g("g", mid, bot);
        g.set("u", u_images[pick(rng)]).set("v", v_images[pick(rng)]);
        SubstitutionMap f("f", top, mid);
        f.set("w", w_images[pick(rng)]);
        auto lhs = suspend(compose_maps(g, f), {"x"});
        auto rhs = compose_maps(suspend(g, {"x"}), suspend(f, {"x"}));
        Normalizer n(lhs.target());
        CHECK_MESSAGE(maps_equal(lhs, rhs, n), f.to_string() << g.to_string());
    }
}
