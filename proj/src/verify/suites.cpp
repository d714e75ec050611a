#include "dlforge/verify/suites.hpp"

#include "dlforge/algebra/binomial.hpp"
#include "dlforge/dl/parser.hpp"
#include "dlforge/dl/relations.hpp"
#include "dlforge/fgl/formal_group.hpp"
#include "dlforge/hopf/hopf_ring.hpp"
#include "dlforge/models/models.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#ifndef DLFORGE_VERSION
#define DLFORGE_VERSION "0.0.0"
#endif

namespace dlforge::verify {

std::string tool_version() { return DLFORGE_VERSION; }

std::string to_string(Status s)
{
    switch (s) {
    case Status::Pass:
        return "pass";
    case Status::Fail:
        return "fail";
    case Status::Error:
        return "error";
    }
    return "?";
}

// Shared, lazily built state of one run. Models and normalizers lock
// internally, so checks may share them across threads.
class Workspace {
public:
    explicit Workspace(const RunConfig& c) : config_(c), base_(dl::base_context()) {}

    models::DualSteenrod& steenrod()
    {
        std::call_once(a_once_, [&] { a_ = std::make_unique<models::DualSteenrod>(config_.max_degree); });
        return *a_;
    }
    models::MUHomology& mu()
    {
        std::call_once(mu_once_, [&] { mu_ = std::make_unique<models::MUHomology>(std::min(config_.max_degree, 48)); });
        return *mu_;
    }
    dl::Normalizer& base() { return base_; }

    const fgl::FormalGroupLaw& appendix()
    {
        std::call_once(f_once_, [&] { f_ = std::make_unique<fgl::FormalGroupLaw>(fgl::preset("appendix-z-v3").build()); });
        return *f_;
    }
    const fgl::PowerOpResult& pipeline()
    {
        std::call_once(p_once_, [&] {
            p_ = std::make_unique<fgl::PowerOpResult>(fgl::appendix_pipeline(appendix(), 2, config_.truncation));
        });
        return *p_;
    }

private:
    const RunConfig& config_;
    dl::Normalizer base_;
    std::once_flag a_once_, mu_once_, f_once_, p_once_;
    std::unique_ptr<models::DualSteenrod> a_;
    std::unique_ptr<models::MUHomology> mu_;
    std::unique_ptr<fgl::FormalGroupLaw> f_;
    std::unique_ptr<fgl::PowerOpResult> p_;
};

namespace {

Outcome same(const GradedPolynomial& got, const GradedPolynomial& want)
{
    if (got == want)
        return {true, got.to_string()};
    return {false, "got " + got.to_string() + "; residual " + (got - want).to_string()};
}

Outcome zero(const GradedPolynomial& got)
{
    return {got.is_zero(), got.to_string()};
}

Outcome identity(dl::Normalizer& n, const std::string& lhs, const std::string& rhs)
{
    auto r = dl::verify_identity(n, lhs, rhs);
    if (r.holds)
        return {true, lhs + " = " + rhs};
    return {false, "residual " + r.residual.to_string(n.context())};
}

using Coeffs = std::vector<std::pair<std::map<std::string, int>, std::string>>;

// listed coefficients match; with `only`, nothing else is nonzero
Outcome coefficients(const TruncatedSeries& s, const Coeffs& want, bool only, const std::string& shown)
{
    const auto& R = s.coefficient_ring();
    std::string bad;
    for (const auto& [e, text] : want) {
        auto got = s.coefficient(e);
        if (!(got == parse_polynomial(R, text))) {
            std::string mono;
            for (const auto& [v, k] : e)
                mono += v + "^" + std::to_string(k) + " ";
            bad += "coefficient of " + mono + "is " + got.to_string() + "; ";
        }
    }
    if (only) {
        std::size_t nonzero = 0;
        for (const auto& [e, c] : s.terms())
            nonzero += !c.is_zero();
        if (nonzero != want.size())
            bad += std::to_string(nonzero) + " nonzero terms, expected " + std::to_string(want.size()) + "; ";
    }
    if (!bad.empty())
        return {false, bad + "series " + shown};
    return {true, shown};
}

std::string two(int i)
{
    return (i < 10 ? "0" : "") + std::to_string(i);
}

CheckDefinition check(std::string id, std::string anchor, std::function<Outcome(const CheckEnv&)> f)
{
    return {std::move(id), std::move(anchor), std::move(f), false};
}

CheckDefinition imported(std::string id, std::string anchor, std::string statement)
{
    return {std::move(id), std::move(anchor),
            [statement](const CheckEnv&) { return Outcome{true, "imported, not machine-checked: " + statement}; },
            true};
}

// ---- big relation --------------------------------------------------------

const char* kBigRelation = "big relation among the y classes in degree 30";
const char* kBigTable = "hand cancellation table for the big relation";

Outcome big_relation_sum(const CheckEnv& env)
{
    auto terms = dl::relation_terms();
    if (env.faulted) {
        terms.pop_back();
        env.fault_consumed = true;
    }
    std::string text;
    for (const auto& t : terms)
        text += (text.empty() ? "" : " + ") + t;
    auto e = dl::map_Q().apply(*dl::parse_expression(text, dl::y_context()));
    auto nf = env.ws.base().normalize(*e);
    return {nf.is_zero(), std::to_string(terms.size()) + " terms normalize to " + nf.to_string(env.ws.base().context())};
}

SuiteDefinition big_relation_suite()
{
    SuiteDefinition s{"big-relation", "the relation R(z30) vanishes in the free unstable algebra on x of degree 2",
                      {kBigRelation, kBigTable}, {}};
    s.checks.push_back(check("00-sum", kBigRelation, big_relation_sum));
    int i = 1;
    for (const auto& id : dl::relation_identities())
        s.checks.push_back(check(two(i++) + "-" + id.id, kBigTable,
                                 [id](const CheckEnv& env) { return identity(env.ws.base(), id.lhs, id.rhs); }));
    return s;
}

// ---- E_n level -----------------------------------------------------------

const char* kEn = "E_n requirement of the big relation: Q^r on degree d needs n >= r - d + 2";

dl::ExprPtr relation_in_x()
{
    return dl::map_Q().apply(*dl::map_R().image("z30"));
}

SuiteDefinition en_level_suite()
{
    SuiteDefinition s{"en-level", "E_n bookkeeping along the normalization trace", {kEn}, {}};
    s.checks.push_back(check("00-level", kEn, [](const CheckEnv& env) {
        auto l = dl::min_en_level(env.ws.base(), *relation_in_x());
        return Outcome{l.level == 12, "E" + std::to_string(l.level)};
    }));
    s.checks.push_back(check("01-maximizer", kEn, [](const CheckEnv& env) {
        auto l = dl::min_en_level(env.ws.base(), *relation_in_x());
        return Outcome{l.r == 20 && l.d == 10, "Q" + std::to_string(l.r) + " on degree " + std::to_string(l.d)};
    }));
    s.checks.push_back(check("02-window-11-rejects", kEn, [](const CheckEnv&) {
        dl::Normalizer w(dl::base_context(), {.strict_level = 11});
        try {
            w.normalize(*relation_in_x());
        }
        catch (const dl::WindowError& e) {
            return Outcome{true, e.what()};
        }
        return Outcome{false, "E11 window accepted the relation"};
    }));
    s.checks.push_back(check("03-window-12-accepts", kEn, [](const CheckEnv&) {
        dl::Normalizer w(dl::base_context(), {.strict_level = 12});
        auto nf = w.normalize(*relation_in_x());
        return Outcome{nf.is_zero(), nf.to_string(w.context())};
    }));
    s.checks.push_back(check("04-q20-y10", kEn, [](const CheckEnv&) {
        dl::Normalizer n(dl::y_context());
        auto l = dl::min_en_level(n, *dl::parse_expression("Q20 y10", n.context()));
        return Outcome{l.level == 12, "E" + std::to_string(l.level)};
    }));
    s.checks.push_back(check("05-q3-x", kEn, [](const CheckEnv& env) {
        auto l = dl::min_en_level(env.ws.base(), *dl::parse_expression("Q3 x", dl::base_context()));
        return Outcome{l.level == 3, "E" + std::to_string(l.level)};
    }));
    return s;
}

// ---- Priddy --------------------------------------------------------------

const char* kPriddy = "Priddy's formula for Dyer-Lashof operations on H_*MU";
const char* kPriddyIds = "consequences of the Priddy table";

SuiteDefinition priddy_suite()
{
    SuiteDefinition s{"priddy", "operations on b1, b2 in H_*MU from the generating function", {kPriddy, kPriddyIds}, {}};
    struct Row {
        int s, k;
        const char* value;
    };
    const std::vector<Row> rows{
        {2, 1, "b1^2"},
        {4, 1, "b3 + b1 b2 + b1^3"},
        {6, 1, "b1^4"},
        {8, 1, "b5 + b1 b4 + b2 b3 + b1^2 b3 + b1 b2^2 + b1^3 b2 + b1^5"},
        {10, 1, "b3^2 + b1^2 b2^2 + b1^6"},
        {6, 2, "b5 + b1 b4 + b2 b3 + b1 b2^2"},
        {10, 2, "b1^2 b5 + b1^3 b4 + b1^2 b2 b3 + b1^3 b2^2"},
    };
    int i = 0;
    for (const auto& r : rows)
        s.checks.push_back(check(two(i++) + "-Q" + std::to_string(r.s) + "b" + std::to_string(r.k), kPriddy,
                                 [r](const CheckEnv& env) {
                                     auto& m = env.ws.mu();
                                     return same(m.Q(r.s, m.b(r.k)), m.parse(r.value));
                                 }));
    s.checks.push_back(check(two(i++) + "-Q6b1-is-b1^4", kPriddyIds, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        return zero(m.Q(6, m.b(1)) + m.b(1).pow(4));
    }));
    s.checks.push_back(check(two(i++) + "-Q10b1-is-square", kPriddyIds, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        return zero(m.Q(10, m.b(1)) + m.Q(4, m.b(1)).pow(2));
    }));
    s.checks.push_back(check(two(i++) + "-Q6b2-twisted-square", kPriddyIds, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        return same(m.Q(6, m.b(2)), m.Q(8, m.b(1)) + m.b(1).pow(2) * m.Q(4, m.b(1)));
    }));
    s.checks.push_back(check(two(i++) + "-Q10b2", kPriddyIds, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        return zero(m.Q(10, m.b(2)) + m.b(1).pow(2) * m.Q(6, m.b(2)));
    }));
    s.checks.push_back(check(two(i++) + "-evenness", kPriddy, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        int n = 0;
        for (int k = 1; k <= 8; ++k) {
            if (!(m.Q(2 * k, m.b(k)) == m.b(k, 2)))
                return Outcome{false, "Q" + std::to_string(2 * k) + " b" + std::to_string(k) + " is not the square"};
            for (int j = 1; 2 * k + j <= m.max_degree(); j += 2, ++n)
                if (!m.Q(j, m.b(k)).is_zero())
                    return Outcome{false, "Q" + std::to_string(j) + " b" + std::to_string(k) + " nonzero"};
        }
        return Outcome{true, std::to_string(n) + " odd operations vanish; Q^{2k} b_k = b_k^2 for k <= 8"};
    }));
    return s;
}

// ---- Steinberger ---------------------------------------------------------

const char* kSteinberger = "Steinberger's formulas for Dyer-Lashof operations on the dual Steenrod algebra";
const char* kSteinbergerIds = "Cartan consequences at xi1^2";

SuiteDefinition steinberger_suite()
{
    SuiteDefinition s{"steinberger", "operations on conjugate generators in the dual Steenrod algebra",
                      {kSteinberger, kSteinbergerIds}, {}};
    struct Row {
        int s, i;
        std::function<GradedPolynomial(models::DualSteenrod&)> want;
        const char* shown;
    };
    const std::vector<Row> rows{
        {2, 1, [](auto& a) { return a.antipode(2); }, "xibar2"},
        {3, 1, [](auto& a) { return a.antipode(1).pow(4); }, "xibar1^4"},
        {4, 1, [](auto& a) { return a.antipode(1).pow(2) * a.antipode(2); }, "xibar1^2 xibar2"},
        {5, 1, [](auto& a) { return a.antipode(2).pow(2); }, "xibar2^2"},
        {16, 4, [](auto& a) { return a.antipode(5); }, "xibar5"},
    };
    int k = 0;
    for (const auto& r : rows)
        s.checks.push_back(check(two(k++) + "-Q" + std::to_string(r.s) + "xibar" + std::to_string(r.i), kSteinberger,
                                 [r](const CheckEnv& env) {
                                     auto& a = env.ws.steenrod();
                                     auto got = a.Q(r.s, a.antipode(r.i));
                                     auto o = same(got, r.want(a));
                                     if (o.ok)
                                         o.witness = std::string(r.shown) + " = " + o.witness;
                                     return o;
                                 }));
    s.checks.push_back(check(two(k++) + "-Q6", kSteinbergerIds, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        const auto sq = a.xi(1, 2);
        return zero(a.Q(6, sq) + a.xi(1, 8));
    }));
    s.checks.push_back(check(two(k++) + "-Q8", kSteinbergerIds, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        const auto sq = a.xi(1, 2);
        return zero(a.Q(8, sq) + a.xi(1, 4) * a.Q(4, sq));
    }));
    s.checks.push_back(check(two(k++) + "-Q10", kSteinbergerIds, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        const auto sq = a.xi(1, 2);
        return zero(a.Q(10, sq) + a.Q(4, sq).pow(2));
    }));
    s.checks.push_back(check(two(k++) + "-generating-function", kSteinberger, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        for (int t = 1; t < 32; ++t)
            if (!(a.Q(t, a.xi(1)) == a.inverse_component(t + 1)))
                return Outcome{false, "Q" + std::to_string(t) + " xi1 differs from the inverse series"};
        return Outcome{true, "Q^s xi1 = degree s+1 part of (sum xi_i)^{-1} for s < 32"};
    }));
    s.checks.push_back(check(two(k++) + "-antipode", kSteinberger, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        for (int i = 1; i <= 5; ++i) {
            GradedPolynomial sum(a.ring());
            for (int j = 0; j <= i; ++j)
                sum += (i == j ? GradedPolynomial::one(a.ring()) : a.xi(i - j, 1 << j)) * a.antipode(j);
            if (!sum.is_zero())
                return Outcome{false, "antipode recursion fails at i = " + std::to_string(i)};
        }
        return Outcome{true, "sum_j xi_{i-j}^{2^j} xibar_j = 0 for i <= 5; xibar5 has " +
                                 std::to_string(a.antipode(5).size()) + " terms"};
    }));
    return s;
}

// ---- model compatibility --------------------------------------------------

const char* kMapP = "the map p: H_*MU -> H_*H, b_{2^k-1} -> xi_k^2";

SuiteDefinition model_compat_suite()
{
    SuiteDefinition s{"model-compat", "p commutes with the Dyer-Lashof action", {kMapP}, {}};
    s.checks.push_back(check("00-commutes", kMapP, [](const CheckEnv& env) {
        auto rep = models::check_dl_compatibility(env.ws.mu(), env.ws.steenrod(), 24, 14);
        if (!rep.ok)
            return Outcome{false, rep.first_failure};
        return Outcome{true, std::to_string(rep.checked) + " pairs (s <= 24, monomials of degree <= 14)"};
    }));
    s.checks.push_back(check("01-Q4b1", kMapP, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        auto& a = env.ws.steenrod();
        auto left = models::map_p(m, a, m.Q(4, m.b(1)));
        auto right = a.Q(2, a.xi(1)).pow(2);
        auto o = same(left, right);
        if (o.ok && !(a.Q(4, a.xi(1, 2)) == right))
            return Outcome{false, "Q4(xi1^2) differs from (Q2 xi1)^2"};
        return o;
    }));
    s.checks.push_back(check("02-Q3b1", kMapP, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        auto& a = env.ws.steenrod();
        auto left = models::map_p(m, a, m.Q(3, m.b(1)));
        return Outcome{left.is_zero() && a.Q(3, a.xi(1, 2)).is_zero(), left.to_string()};
    }));
    s.checks.push_back(check("03-Q6b1", kMapP, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        auto& a = env.ws.steenrod();
        return same(models::map_p(m, a, m.Q(6, m.b(1))), a.xi(1, 8));
    }));
    return s;
}

// ---- juggling ------------------------------------------------------------

const char* kSecond = "second juggling identity mu R = Qbar nu + beta alpha";
const char* kIndetForm = "indeterminacy form of the suspended relation";
const char* kFirst = "first juggling: Qbar(z14) = Q10 y4 + x^2 Q6 y4 vanishes at (b1, b2)";

SuiteDefinition secondjuggle_suite()
{
    SuiteDefinition s{"secondjuggle", "composites of substitution maps and the suspended relation", {kSecond, kIndetForm}, {}};
    s.checks.push_back(check("00-maps-equal", kSecond, [](const CheckEnv&) {
        dl::Normalizer n(dl::context_with("y4", 4));
        auto muR = dl::compose_maps(dl::map_mu(), dl::map_R());
        auto rhs = dl::add_maps(dl::compose_maps(dl::map_qbar(), dl::map_nu()),
                                dl::compose_maps(dl::map_beta(), dl::map_alpha()));
        if (dl::maps_equal(muR, rhs, n))
            return Outcome{true, "z30 -> " + muR.evaluate("z30", n).to_string(n.context())};
        auto diff = muR.evaluate("z30", n) + rhs.evaluate("z30", n);
        return Outcome{false, "residual " + diff.to_string(n.context())};
    }));
    s.checks.push_back(check("01-muR", kSecond, [](const CheckEnv&) {
        dl::Normalizer n(dl::context_with("y4", 4));
        auto got = dl::compose_maps(dl::map_mu(), dl::map_R()).evaluate("z30", n);
        auto want = n.normalize("Q20 Q6 y4 + x^4 Q12 Q6 y4");
        return Outcome{got == want, got.to_string(n.context())};
    }));
    s.checks.push_back(check("02-qbar-nu-beta-alpha", kSecond, [](const CheckEnv&) {
        dl::Normalizer n(dl::context_with("y4", 4));
        auto rhs = dl::add_maps(dl::compose_maps(dl::map_qbar(), dl::map_nu()),
                                dl::compose_maps(dl::map_beta(), dl::map_alpha()));
        auto got = rhs.evaluate("z30", n);
        auto want = n.normalize("Q16 (Q10 y4 + x^2 Q6 y4) + (Q3 x Q6 y4)^2");
        return Outcome{got == want, got.to_string(n.context())};
    }));
    s.checks.push_back(check("03-sigma-R", kIndetForm, [](const CheckEnv&) {
        auto sR = dl::suspend(dl::map_R(), {"x"});
        dl::Normalizer n(sR.target());
        auto got = sR.evaluate("z'31", n);
        auto want = n.normalize(dl::suspended_relation_expected());
        if (got == want)
            return Outcome{true, dl::print(*sR.image("z'31"))};
        return Outcome{false, "got " + got.to_string(n.context())};
    }));
    return s;
}

std::map<std::string, GradedPolynomial> at_xi1_squared(models::DualSteenrod& a)
{
    return {{"x", a.xi(1, 2)}};
}

Outcome y_classes_vanish(const CheckEnv& env)
{
    auto& a = env.ws.steenrod();
    auto q = dl::map_Q();
    const auto ctx = dl::base_context();
    auto at = at_xi1_squared(a);
    std::string names;
    for (const auto& e : q.source().entries()) {
        if (e.name == "x")
            continue;
        auto v = models::evaluate_in_model(a, *q.image(e.name), ctx, at);
        if (!v.is_zero())
            return {false, e.name + " -> " + v.to_string()};
        names += (names.empty() ? "" : ", ") + e.name;
    }
    return {true, names + " vanish at x = xi1^2"};
}

Outcome twisted_square_at_b1(const CheckEnv& env)
{
    auto& m = env.ws.mu();
    const auto ctx = dl::base_context();
    std::map<std::string, GradedPolynomial> at{{"x", m.b(1)}};
    auto got = models::evaluate_in_model(m, *dl::parse_expression("Q8 x + x^2 Q4 x", ctx), ctx, at);
    auto o = same(got, m.Q(6, m.b(2)));
    if (o.ok)
        o.witness = "Q6 b2 = Q8 b1 + b1^2 Q4 b1 = " + o.witness;
    return o;
}

Outcome scan_outcome(const models::IndeterminacyScan& scan)
{
    std::string w = "target " + std::to_string(scan.target_degree) + "; image " + scan.suspended_image;
    for (const auto& s : scan.sources)
        w += "; " + s.generator + " (degree " + std::to_string(s.degree) + "): " + std::to_string(s.basis_size) +
             " basis elements, " + std::to_string(s.indecomposables) + " indecomposable" +
             (s.all_decomposable ? "" : ", witness " + s.witness);
    return {scan.degree_matches && scan.all_decomposable, w};
}

SuiteDefinition firstjuggle_suite()
{
    SuiteDefinition s{"firstjuggle-algebra", "algebraic inputs of the first juggling step", {kFirst}, {}};
    s.checks.push_back(check("00-qbar-image", kFirst, [](const CheckEnv&) {
        auto img = dl::print(*dl::map_qbar().image("z14"));
        return Outcome{img == "Q10 y4 + x^2 Q6 y4", "z14 -> " + img};
    }));
    s.checks.push_back(check("01-vanishes-at-b1-b2", kFirst, [](const CheckEnv& env) {
        auto& m = env.ws.mu();
        auto ctx4 = dl::context_with("y4", 4);
        std::map<std::string, GradedPolynomial> at{{"x", m.b(1)}, {"y4", m.b(2)}};
        return zero(models::evaluate_in_model(m, *dl::map_qbar().image("z14"), ctx4, at));
    }));
    s.checks.push_back(check("02-twisted-square", kFirst, twisted_square_at_b1));
    s.checks.push_back(check("03-indeterminacy-degree-15", kFirst, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        return scan_outcome(models::indeterminacy_scan(a, dl::map_qbar(), at_xi1_squared(a), 15));
    }));
    s.checks.push_back(check("04-no-indecomposables-degree-5", kFirst, [](const CheckEnv& env) {
        int d = indecomposable_dimension(env.ws.steenrod().ring()->generators(), 5);
        return Outcome{d == 0, "dimension " + std::to_string(d)};
    }));
    return s;
}

// ---- indeterminacy -------------------------------------------------------

const char* kIndet = "indeterminacy of the secondary operation is decomposable";
const char* kGenDegrees = "generator degrees 2^i - 1 of the dual Steenrod algebra";

SuiteDefinition indeterminacy_suite()
{
    SuiteDefinition s{"indeterminacy", "indecomposability bookkeeping in the dual Steenrod algebra", {kIndet, kGenDegrees}, {}};
    s.checks.push_back(check("00-scan-degree-31", kIndet, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        return scan_outcome(models::indeterminacy_scan(a, dl::map_R(), at_xi1_squared(a), 31));
    }));
    int i = 1;
    for (int d : {5, 11, 13, 14})
        s.checks.push_back(check(two(i++) + "-degree-" + std::to_string(d), kGenDegrees, [d](const CheckEnv& env) {
            int dim = indecomposable_dimension(env.ws.steenrod().ring()->generators(), d);
            return Outcome{dim == 0, "indecomposable dimension " + std::to_string(dim)};
        }));
    s.checks.push_back(check(two(i++) + "-degree-31", kGenDegrees, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        int dim = indecomposable_dimension(a.ring()->generators(), 31);
        bool spanned = !a.xi(5).is_decomposable();
        return Outcome{dim == 1 && spanned, "indecomposable dimension " + std::to_string(dim) + ", spanned by xi5"};
    }));
    return s;
}

// ---- appendix ------------------------------------------------------------

const char* kAppendix = "power operation on CP^2 for the law with log x + v3/2 x^8 over Z[v3]/(v3^2)";

SuiteDefinition appendix_suite()
{
    SuiteDefinition s{"appendix", "intermediates of the power-operation algorithm at n = 2", {kAppendix}, {}};
    auto pipe = [](std::string id, std::function<Outcome(const fgl::PowerOpResult&)> f) {
        return check(std::move(id), kAppendix, [f](const CheckEnv& env) { return f(env.ws.pipeline()); });
    };
    s.checks.push_back(pipe("00-bracket2", [](const auto& r) {
        return coefficients(r.bracket2, {{{}, "2"}, {{{"a", 7}}, "-127 v3"}}, true, r.bracket2.to_string());
    }));
    s.checks.push_back(check("01-g-x3", kAppendix, [](const CheckEnv& env) {
        auto g = fgl::isogeny_g(env.ws.appendix(), 4, 10);
        auto x3 = g.extract("x", 3);
        return coefficients(x3, {{{{"a", 6}}, "-14 v3"}}, true, "x^3 coefficient " + x3.to_string());
    }));
    s.checks.push_back(pipe("02-k", [](const auto& r) {
        auto low = r.k.truncated({{"y", 4}});
        return coefficients(low, {{{{"y", 2}}, "1"}, {{{"y", 2}, {"a", 7}}, "-4 v3"}, {{{"y", 3}, {"a", 7}}, "-14 v3"}},
                            false, low.to_string());
    }));
    s.checks.push_back(pipe("03-k-inverse", [](const auto& r) {
        auto low = r.k_inverse.truncated({{"y", 4}});
        return coefficients(low,
                            {{{{"y", 2}}, "-1"}, {{{"y", 2}, {"a", 7}}, "4 v3"}, {{{"y", 3}}, "2"}, {{{"y", 3}, {"a", 7}}, "-2 v3"}},
                            false, low.to_string());
    }));
    s.checks.push_back(pipe("04-k-inverse-derivative", [](const auto& r) {
        auto low = r.k_inverse_derivative.truncated({{"y", 3}});
        return coefficients(low,
                            {{{{"y", 1}}, "-2"}, {{{"y", 1}, {"a", 7}}, "8 v3"}, {{{"y", 2}}, "6"}, {{{"y", 2}, {"a", 7}}, "-6 v3"}},
                            false, low.to_string());
    }));
    s.checks.push_back(pipe("05-f2", [](const auto& r) {
        return coefficients(r.f_n, {{{}, "6"}, {{{"a", 7}}, "-6 v3"}}, true, r.f_n.to_string());
    }));
    s.checks.push_back(pipe("06-h2", [](const auto& r) { return coefficients(r.h_n, {{{}, "3"}}, true, r.h_n.to_string()); }));
    s.checks.push_back(pipe("07-raw", [](const auto& r) {
        return coefficients(r.raw, {{{{"a", 3}}, "375 v3"}}, true, r.raw.to_string());
    }));
    s.checks.push_back(pipe("08-reduced", [](const auto& r) {
        return coefficients(r.reduced, {{{{"a", 3}}, "v3"}}, true, r.reduced.to_string());
    }));
    s.checks.push_back(pipe("09-reconstruction", [](const auto& r) {
        return Outcome{r.reconstruction_ok, r.reconstruction_ok ? "h_n k^{-1}' l'(a k^{-1}) + f_n recovers the target"
                                                                : "reconstruction differs"};
    }));
    s.checks.push_back(check("10-reduction-divisible", kAppendix, [](const CheckEnv& env) {
        const auto& F = env.ws.appendix();
        const auto& r = env.ws.pipeline();
        bool ok = fgl::divisible_by_bracket2(r.raw - r.reduced, F);
        return Outcome{ok, "raw - reduced = " + (r.raw - r.reduced).to_string() + (ok ? " is" : " is not") +
                               " divisible by <2>"};
    }));
    return s;
}

// ---- hopf chain ----------------------------------------------------------

const char* kHopf = "Hopf ring quotient: Q-hat^10 carries the class of x2 to sigma x7";
const char* kTranslation = "Q-hat^s([1] # x) = Q-hat^s(x) in the quotient";
const char* kSuspension = "suspension commutes with Dyer-Lashof operations";

std::string chain_text(const hopf::ChainReport& c)
{
    std::string out;
    for (const auto& st : c.steps)
        out += (out.empty() ? "" : " | ") + st.id + (st.imported ? " [imported]" : "") + ": " + st.value;
    return out;
}

SuiteDefinition hopf_chain_suite()
{
    SuiteDefinition s{"hopf-chain", "pipeline -> P-series -> Q-hat -> suspension", {kHopf, kTranslation, kSuspension}, {}};
    s.checks.push_back(check("00-endpoint-k5", kHopf, [](const CheckEnv& env) {
        hopf::ChainOptions o;
        o.precision = env.config.truncation;
        auto c = hopf::verify_gotcha_chain(o);
        return Outcome{c.identified && c.endpoint == "sigma x7", "endpoint " + c.endpoint + " | " + chain_text(c)};
    }));
    s.checks.push_back(check("01-endpoint-k4", kHopf, [](const CheckEnv& env) {
        hopf::ChainOptions o;
        o.k = 4;
        o.precision = env.config.truncation;
        auto c = hopf::verify_gotcha_chain(o);
        return Outcome{c.endpoint == "0", "endpoint " + c.endpoint + " (c2 is decomposable)"};
    }));
    s.checks.push_back(check("02-identification-off", kHopf, [](const CheckEnv& env) {
        hopf::ChainOptions o;
        o.identification = false;
        o.precision = env.config.truncation;
        auto c = hopf::verify_gotcha_chain(o);
        return Outcome{!c.identified && c.endpoint == "375 v3 a^3", "surfaced raw " + c.endpoint};
    }));
    s.checks.push_back(check("03-qhat-b1", kHopf, [](const CheckEnv&) {
        auto two = hopf::qhat_b1(2), four = hopf::qhat_b1(4);
        return Outcome{two == hopf::HopfClass::of(hopf::CoeffClass::one(), 2) && four.is_zero(),
                       "Q-hat^2 b1 = " + two.to_string() + ", Q-hat^4 b1 = " + four.to_string()};
    }));
    s.checks.push_back(check("04-rw-additive", kHopf, [](const CheckEnv&) {
        bool add = hopf::RavenelWilsonRule::additive_specialization_holds(fgl::preset("integers").build());
        return Outcome{add, hopf::ravenel_wilson_rule().statement + "; additive law leaves b(s) # b(t)"};
    }));
    s.checks.push_back(imported("05-translation", kTranslation, "Q-hat^s([1] # y) = Q-hat^s(y) mod the quotient"));
    s.checks.push_back(imported("06-suspension", kSuspension, "sigma commutes with Dyer-Lashof operations"));
    return s;
}

// ---- xi5 chain -----------------------------------------------------------

const char* kXi5 = "the secondary operation takes the value xi5 mod decomposables";
const char* kBrackets = "bracket-level juggling of the secondary operation";
const char* kDetection = "<p, i, b_n> = sigma x_n mod decomposables";

SuiteDefinition xi5_suite()
{
    SuiteDefinition s{"xi5-chain", "conjunction of the machine-checkable inputs of the xi5 detection",
                      {kXi5, kSecond, kBrackets, kDetection}, {}};
    auto second = secondjuggle_suite();
    s.checks.push_back(check("1-juggling", kSecond, second.checks.front().run));
    s.checks.push_back(check("2a-y-classes-vanish", kXi5, y_classes_vanish));
    s.checks.push_back(check("2b-twisted-square", kXi5, twisted_square_at_b1));
    s.checks.push_back(check("3a-Q16-xibar4", kXi5, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        auto got = a.Q(16, a.antipode(4));
        auto o = same(got, a.antipode(5));
        if (o.ok)
            o.witness = "xibar5, " + std::to_string(got.size()) + " terms: " + o.witness;
        return o;
    }));
    s.checks.push_back(check("3b-Q16-xi4", kXi5, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        auto ind = a.Q(16, a.xi(4)).indecomposable_part();
        return Outcome{ind == a.xi(5), "indecomposable part " + ind.to_string()};
    }));
    s.checks.push_back(check("4-indeterminacy", kXi5, [](const CheckEnv& env) {
        auto& a = env.ws.steenrod();
        auto big = models::indeterminacy_scan(a, dl::map_R(), at_xi1_squared(a), 31);
        auto small = models::indeterminacy_scan(a, dl::map_qbar(), at_xi1_squared(a), 15);
        std::string dims;
        bool ok = big.degree_matches && big.all_decomposable && small.degree_matches && small.all_decomposable;
        for (int d : {5, 11, 13, 14, 31}) {
            int n = indecomposable_dimension(a.ring()->generators(), d);
            ok = ok && n == (d == 31 ? 1 : 0);
            dims += " " + std::to_string(d) + ":" + std::to_string(n);
        }
        return Outcome{ok, "scans 31 and 15 all decomposable; indecomposable dimensions" + dims};
    }));
    s.checks.push_back(check("5a-hopf-endpoint", kHopf, [](const CheckEnv& env) {
        hopf::ChainOptions o;
        o.precision = env.config.truncation;
        auto c = hopf::verify_gotcha_chain(o);
        return Outcome{c.endpoint == "sigma x7", "endpoint " + c.endpoint};
    }));
    s.checks.push_back(check("5b-p-on-b2", kDetection, [](const CheckEnv& env) {
        // b2 is in the kernel of p, the input of the bracket <p, i, b2>
        auto& m = env.ws.mu();
        auto v = models::map_p(m, env.ws.steenrod(), m.b(2));
        return Outcome{v.is_zero(), "p(b2) = " + v.to_string()};
    }));
    s.checks.push_back(imported("5c-detection-link", kDetection, "<p, i, b2> = sigma x2 mod decomposables"));
    s.checks.push_back(imported("6-bracket-gluing", kBrackets,
                                "the bracket-level gluing of steps 1-5 is assumed, not derived"));
    return s;
}

// ---- properties (only in "all") -------------------------------------------

const char* kProperties = "engine properties";

dl::ExprPtr random_word(std::mt19937& rng)
{
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    std::uniform_int_distribution<int> len(1, 4), gen(0, 5), jitter(-2, 8);
    int g = gen(rng);
    int below = g + 1;
    std::vector<int> ops(static_cast<std::size_t>(len(rng)));
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        *it = std::clamp(below + jitter(rng), 0, 24);
        below += *it;
    }
    return dl::make_word(ops, dl::make_generator(names[g]));
}

dl::ExprPtr random_expression(std::mt19937& rng)
{
    std::uniform_int_distribution<int> shape(0, 9);
    int k = shape(rng);
    if (k < 6)
        return random_word(rng);
    if (k < 8)
        return dl::make_product({random_word(rng), random_word(rng)});
    std::uniform_int_distribution<int> sup(0, 16);
    return dl::make_operation(sup(rng), dl::make_product({random_word(rng), random_word(rng)}));
}

Outcome confluence(const CheckEnv&)
{
    const dl::Context ctx{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}, {"f", 6}};
    dl::Normalizer n(ctx);
    std::mt19937 rng(20240611);
    const int count = 500;
    int nonzero = 0;
    for (int i = 0; i < count; ++i) {
        auto e = random_expression(rng);
        auto p = n.normalize(*e);
        auto left = dl::rewrite_expression(*e, ctx, dl::RewriteStrategy::LeftmostFirst).result;
        auto right = dl::rewrite_expression(*e, ctx, dl::RewriteStrategy::RightmostFirst).result;
        if (!(p == left) || !(p == right))
            return {false, "strategies disagree on " + dl::print(*e)};
        if (!(n.normalize(p.to_string(ctx)) == p))
            return {false, "normal form not idempotent: " + p.to_string(ctx)};
        nonzero += !p.is_zero();
    }
    return {true, std::to_string(count) + " expressions, " + std::to_string(nonzero) + " nonzero, both strategies agree"};
}

Outcome series_round_trips(const CheckEnv&)
{
    auto Q = PolynomialRing::make("Q", ScalarRing::Rationals, {});
    std::mt19937 rng(11);
    std::vector<SeriesVariable> st{{"s", 1, 6}, {"t", 1, 6}};
    for (int trial = 0; trial < 40; ++trial) {
        TruncatedSeries a(Q, st);
        a.add_term({0, 0}, GradedPolynomial::constant(Q, Rational(int(rng() % 5) + 1, int(rng() % 3) + 1)));
        for (int i = 0; i < 6; ++i) {
            int e1 = int(rng() % 4), e2 = int(rng() % 4);
            if (e1 + e2)
                a.add_term({e1, e2}, GradedPolynomial::constant(Q, int(rng() % 7) - 3));
        }
        if (!(a * a.inverse() == TruncatedSeries::constant(Q, GradedPolynomial::one(Q), st)))
            return {false, "a * a^{-1} != 1 for " + a.to_string()};
    }
    std::vector<SeriesVariable> ya{{"y", 1, 7}, {"a", 1, 5}};
    auto y = TruncatedSeries::variable(Q, ya, "y");
    for (int trial = 0; trial < 25; ++trial) {
        TruncatedSeries s = y.scaled(Rational(int(rng() % 3) + 1, int(rng() % 2) + 1));
        for (int i = 0; i < 5; ++i) {
            const int ey = 1 + int(rng() % 5), ea = int(rng() % 4);
            if (ey == 1 && ea == 0)
                continue;  // keep the linear coefficient a unit
            TruncatedSeries t(Q, ya);
            t.add_term({ey, ea}, GradedPolynomial::constant(Q, int(rng() % 5) - 2));
            s = s + t;
        }
        auto inv = s.compositional_inverse("y");
        if (!(s.compose("y", inv) == y) || !(inv.compose("y", s) == y))
            return {false, "compositional inverse fails for " + s.to_string()};
    }
    return {true, "40 multiplicative inverses, 25 compositional inverses compose back"};
}

Outcome binomial_oracle(const CheckEnv&)
{
    using boost::multiprecision::cpp_int;
    int pairs = 0;
    for (int n = 0; n <= 64; ++n) {
        cpp_int c = 1;
        for (int k = 0; k <= n + 2; ++k) {
            int want = k <= n ? static_cast<int>(c % 2) : 0;
            if (binomial_mod2(n, k) != want)
                return {false, "binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") mod 2"};
            ++pairs;
            if (k < n)
                c = c * (n - k) / (k + 1);
        }
    }
    return {true, std::to_string(pairs) + " pairs with n <= 64 agree with exact binomials"};
}

SuiteDefinition properties_suite()
{
    SuiteDefinition s{"properties", "engine properties", {kProperties}, {}};
    s.checks.push_back(check("confluence", kProperties, confluence));
    s.checks.push_back(check("series-round-trips", kProperties, series_round_trips));
    s.checks.push_back(check("fgl-associativity", kProperties, [](const CheckEnv& env) {
        bool ok = fgl::check_associativity(env.ws.appendix(), 13);
        return Outcome{ok, "F(F(x, y), z) = F(x, F(y, z)) below total degree 13"};
    }));
    s.checks.push_back(check("isogeny", kProperties, [](const CheckEnv& env) {
        auto r = fgl::check_isogeny(env.ws.appendix(), 12);
        return Outcome{r.ok, r.detail};
    }));
    s.checks.push_back(check("binomial-oracle", kProperties, binomial_oracle));
    return s;
}

std::vector<SuiteDefinition> build_registry()
{
    std::vector<SuiteDefinition> r{big_relation_suite(), en_level_suite(),     priddy_suite(),
                                   steinberger_suite(),  model_compat_suite(), secondjuggle_suite(),
                                   firstjuggle_suite(),  indeterminacy_suite(), appendix_suite(),
                                   hopf_chain_suite(),   xi5_suite(),          properties_suite()};
    SuiteDefinition all{"all", "every suite plus engine properties", {}, {}};
    for (auto& s : r) {
        for (auto& c : s.checks) {
            c.id = s.name + "." + c.id;
            all.checks.push_back(c);
        }
        for (const auto& a : s.anchors)
            if (std::find(all.anchors.begin(), all.anchors.end(), a) == all.anchors.end())
                all.anchors.push_back(a);
    }
    // properties run only as part of "all"
    r.pop_back();
    r.push_back(std::move(all));
    return r;
}

CheckResult execute(const CheckDefinition& c, Workspace& ws, const RunConfig& config)
{
    CheckResult out{c.id, Status::Error, "", 0, c.anchor, c.imported};
    CheckEnv env{ws, config, config.inject_fault.count("*") > 0 || config.inject_fault.count(c.id) > 0};
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome o = c.run(env);
        out.status = o.ok ? Status::Pass : Status::Fail;
        out.witness = o.witness;
        if (env.faulted && !env.fault_consumed) {
            out.status = Status::Fail;
            out.witness = "injected fault; computed " + o.witness;
        }
    }
    catch (const std::exception& e) {
        out.status = Status::Error;
        out.witness = e.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    if (config.timings)
        out.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return out;
}

}  // namespace

const std::vector<SuiteDefinition>& registry()
{
    static const std::vector<SuiteDefinition> r = build_registry();
    return r;
}

const SuiteDefinition& find_suite(const std::string& name)
{
    for (const auto& s : registry())
        if (s.name == name)
            return s;
    throw UnknownSuite("unknown suite '" + name + "'");
}

std::vector<std::string> suite_names()
{
    std::vector<std::string> out;
    for (const auto& s : registry())
        out.push_back(s.name);
    return out;
}

VerificationReport run_suite(const std::string& name, const RunConfig& config)
{
    const auto& suite = find_suite(name);
    if (config.max_degree < 1 || config.truncation < 1)
        throw ConfigError("max_degree and truncation must be positive");

    Workspace ws(config);
    std::vector<CheckResult> results(suite.checks.size());
    if (config.parallel && suite.checks.size() > 1) {
        const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
        const auto workers = std::min<std::size_t>(hw, suite.checks.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < suite.checks.size();)
                    results[i] = execute(suite.checks[i], ws, config);
            });
        for (auto& t : pool)
            t.join();
    }
    else {
        for (std::size_t i = 0; i < suite.checks.size(); ++i)
            results[i] = execute(suite.checks[i], ws, config);
    }
    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    VerificationReport rep;
    rep.suite = suite.name;
    rep.checks = std::move(results);
    rep.tool_version = tool_version();
    rep.config = config.echo();
    rep.anchors = suite.anchors;
    for (const auto& c : rep.checks)
        if (c.status != Status::Pass)
            rep.overall = Status::Fail;
    bool any_imported = std::any_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.imported; });
    if (any_imported)
        rep.note = "checks flagged imported are stated, not machine-checked; the bracket-level gluing of the "
                   "juggling argument is imported";
    return rep;
}

}  // namespace dlforge::verify
