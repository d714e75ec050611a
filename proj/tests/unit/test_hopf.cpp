#include "doctest.h"

#include "dlforge/hopf/hopf_ring.hpp"

#include <random>

using namespace dlforge;
using namespace dlforge::hopf;

namespace {

TruncatedSeries series(const RingPtr& R, const std::map<int, std::string>& cs, int bound = 8)
{
    TruncatedSeries s(R, {SeriesVariable{"a", 1, bound}});
    for (const auto& [k, c] : cs)
        s.add_term({k}, parse_polynomial(R, c));
    return s;
}

RingPtr appendix_ring() { return fgl::preset("appendix-z-v3").ring; }

PSeries appendix_pseries()
{
    return import_pseries(series(appendix_ring(), {{3, "v3"}}), Identification::v3_to_x7(), 2);
}

}  // namespace

TEST_CASE("coefficient classes")
{
    CHECK((CoeffClass::x(7) * CoeffClass::x(2)).is_zero());
    CHECK(CoeffClass::one() * CoeffClass::x(7) == CoeffClass::x(7));
    CHECK((CoeffClass::zero() * CoeffClass::one()).is_zero());
    CHECK(CoeffClass::x(7).degree() == 14);
    CHECK(HopfClass::of(CoeffClass::x(7), 7).degree() == 28);
    CHECK(HopfClass::of(CoeffClass::zero(), 3).is_zero());
    auto h = HopfClass::of(CoeffClass::x(7), 7);
    CHECK((h + h).is_zero());
}

TEST_CASE("import of the appendix result")
{
    auto p = appendix_pseries();
    CHECK(p.c.size() == 8);
    for (int i = 0; i < 8; ++i)
        CHECK(p.at(i) == (i == 3 ? CoeffClass::x(7) : CoeffClass::zero()));
    CHECK(p.to_string() == "x7 a^3");

    // the raw representative gives the same classes: 375 is odd
    auto raw = import_pseries(series(appendix_ring(), {{3, "375 v3"}}), Identification::v3_to_x7(), 2);
    CHECK(raw.at(3) == CoeffClass::x(7));

    auto Z = fgl::preset("integers").ring;
    auto unit = import_pseries(series(Z, {{0, "1"}}), {}, 0);
    CHECK(unit.at(0) == CoeffClass::one());
    auto zero = import_pseries(series(Z, {}), {}, 0);
    for (const auto& c : zero.c)
        CHECK(c.is_zero());

    Identification off = Identification::v3_to_x7();
    off.enabled = false;
    CHECK_THROWS_AS(import_pseries(series(appendix_ring(), {{3, "v3"}}), off, 2), ImportError);
    CHECK_THROWS_AS(import_pseries(series(appendix_ring(), {{3, "1/2 v3"}}), Identification::v3_to_x7(), 2),
                    ImportError);
    // degree mismatch: v3 at a^2 for a degree-4 source
    CHECK_THROWS_AS(import_pseries(series(appendix_ring(), {{2, "v3"}}), Identification::v3_to_x7(), 2), ImportError);
    // even multiples vanish mod 2
    CHECK(import_pseries(series(appendix_ring(), {{3, "2 v3"}}), Identification::v3_to_x7(), 2).at(3).is_zero());
}

TEST_CASE("qhat on Hurewicz images")
{
    auto p = appendix_pseries();
    CHECK(qhat_on_hurewicz(5, 2, p) == HopfClass::of(CoeffClass::x(7), 7));
    CHECK(qhat_on_hurewicz(4, 2, p).is_zero());
    CHECK(qhat_on_hurewicz(2, 2, p).is_zero());
    CHECK(qhat_on_hurewicz(1, 2, p).is_zero());
    for (int k = 2; k < 10; ++k) {
        auto h = qhat_on_hurewicz(k, 2, p);
        if (!h.is_zero())
            CHECK(h.degree() == 2 * (2 * 2 + (k - 2)) + 2 * (k + 2));
    }

    // additive in the P-series
    PSeries q{2, std::vector<CoeffClass>(8)};
    q.c[4] = CoeffClass::x(8);
    for (int k = 2; k < 10; ++k)
        CHECK(qhat_on_hurewicz(k, 2, p + q) == qhat_on_hurewicz(k, 2, p) + qhat_on_hurewicz(k, 2, q));
}

TEST_CASE("qhat on b1")
{
    CHECK(qhat_b1(2) == HopfClass::of(CoeffClass::one(), 2));
    CHECK(qhat_b1(4).is_zero());
    CHECK_THROWS_AS(qhat_b1(3), std::invalid_argument);
}

TEST_CASE("suspension to the dual")
{
    CHECK(suspend_to_dual(HopfClass::of(CoeffClass::x(7), 7)).to_string() == "sigma x7");
    CHECK(suspend_to_dual(HopfClass::of(CoeffClass::one(), 3)).is_zero());
    CHECK(suspend_to_dual(HopfClass::of(CoeffClass::x(7), 7) + HopfClass::of(CoeffClass::x(7), 3)).is_zero());
    auto a = HopfClass::of(CoeffClass::x(7), 7), b = HopfClass::of(CoeffClass::x(2), 2);
    auto sa = suspend_to_dual(a), sb = suspend_to_dual(b), sab = suspend_to_dual(a + b);
    CHECK(sab.xs == std::set<int>{2, 7});
    CHECK(sa.xs.size() + sb.xs.size() == sab.xs.size());
}

TEST_CASE("quotient rules are order independent")
{
    std::mt19937 rng(5);
    auto rc = [&] {
        switch (rng() % 4) {
        case 0:
            return CoeffClass::zero();
        case 1:
            return CoeffClass::one();
        default:
            return CoeffClass::x(1 + static_cast<int>(rng() % 8));
        }
    };
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<RawHopfTerm> terms;
        for (int t = 0, n = 1 + static_cast<int>(rng() % 4); t < n; ++t) {
            RawHopfTerm r;
            for (int i = 0, k = static_cast<int>(rng() % 3) + 1; i < k; ++i)
                r.coefficients.push_back(rc());
            for (int i = 0, k = static_cast<int>(rng() % 4); i < k; ++i)
                r.b_indices.push_back(rng() % 3 ? 1 : 2 + static_cast<int>(rng() % 3));
            terms.push_back(r);
        }
        auto a = normalize_raw(terms, QuotientOrder::KillBFirst);
        CHECK(a == normalize_raw(terms, QuotientOrder::ContractCoefficientsFirst));
        CHECK(a == normalize_raw(terms, QuotientOrder::Interleaved));
    }
}

TEST_CASE("ravenel-wilson rule at the additive law")
{
    auto rule = ravenel_wilson_rule();
    CHECK(!rule.statement.empty());
    CHECK(RavenelWilsonRule::additive_specialization_holds(fgl::preset("integers").build()));
    CHECK_FALSE(RavenelWilsonRule::additive_specialization_holds(fgl::preset("appendix-z-v3").build()));
}

TEST_CASE("gotcha chain")
{
    auto full = verify_gotcha_chain();
    CHECK(full.identified);
    CHECK(full.endpoint == "sigma x7");
    int imported = 0;
    for (const auto& s : full.steps)
        imported += s.imported;
    CHECK(imported == 2);

    ChainOptions k4;
    k4.k = 4;
    CHECK(verify_gotcha_chain(k4).endpoint == "0");

    ChainOptions off;
    off.identification = false;
    auto r = verify_gotcha_chain(off);
    CHECK_FALSE(r.identified);
    CHECK(r.endpoint == "375 v3 a^3");
}
