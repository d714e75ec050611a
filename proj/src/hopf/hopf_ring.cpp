#include "dlforge/hopf/hopf_ring.hpp"

#include <stdexcept>

namespace dlforge::hopf {

CoeffClass CoeffClass::x(int n)
{
    if (n < 1)
        throw std::invalid_argument("x_n needs n >= 1");
    return {Kind::X, n};
}

std::string CoeffClass::to_string() const
{
    switch (kind) {
    case Kind::Zero:
        return "0";
    case Kind::One:
        return "1";
    case Kind::X:
        return "x" + std::to_string(index);
    }
    return "?";
}

CoeffClass operator*(const CoeffClass& a, const CoeffClass& b)
{
    if (a.is_zero() || b.is_zero())
        return CoeffClass::zero();
    if (a.kind == CoeffClass::Kind::One)
        return b;
    if (b.kind == CoeffClass::Kind::One)
        return a;
    return CoeffClass::zero();
}

HopfClass HopfClass::of(const CoeffClass& c, int m)
{
    if (m < 0)
        throw std::invalid_argument("negative o-power of b1");
    HopfClass h;
    if (!c.is_zero())
        h.terms_.insert({c, m});
    return h;
}

HopfClass& HopfClass::operator+=(const HopfClass& o)
{
    for (const auto& t : o.terms_)
        if (!terms_.erase(t))
            terms_.insert(t);
    return *this;
}

HopfClass HopfClass::operator+(const HopfClass& o) const
{
    HopfClass r = *this;
    r += o;
    return r;
}

int HopfClass::degree() const
{
    if (terms_.empty())
        return 0;
    const auto& [c, m] = *terms_.begin();
    int d = c.degree() + 2 * m;
    for (const auto& [c2, m2] : terms_)
        if (c2.degree() + 2 * m2 != d)
            throw std::logic_error("inhomogeneous Hopf class");
    return d;
}

std::string HopfClass::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& [c, m] : terms_) {
        if (!out.empty())
            out += " + ";
        out += "[" + c.to_string() + "] o b1^o" + std::to_string(m);
    }
    return out;
}

CoeffClass PSeries::at(int i) const
{
    if (i < 0)
        return CoeffClass::zero();
    if (i >= static_cast<int>(c.size()))
        throw std::out_of_range("P-series known only through a^" + std::to_string(c.size() - 1));
    return c[static_cast<std::size_t>(i)];
}

PSeries PSeries::operator+(const PSeries& o) const
{
    if (source_n != o.source_n)
        throw std::invalid_argument("P-series of different source degrees");
    PSeries r{source_n, {}};
    const std::size_t n = std::min(c.size(), o.c.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = c[i];
        const auto& b = o.c[i];
        if (a.is_zero())
            r.c.push_back(b);
        else if (a == b)
            r.c.push_back(CoeffClass::zero());
        else if (b.is_zero())
            r.c.push_back(a);
        else
            throw std::domain_error("sum of two different classes is not a single symbol");
    }
    return r;
}

std::string PSeries::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero())
            continue;
        if (!out.empty())
            out += " + ";
        out += c[i].to_string() + (i ? " a^" + std::to_string(i) : "");
    }
    return out.empty() ? "0" : out;
}

Identification Identification::v3_to_x7()
{
    return Identification{{{"v3", 7}}, true};
}

std::string Identification::to_string() const
{
    if (!enabled)
        return "disabled";
    std::string out;
    for (const auto& [g, n] : generator_to_x) {
        if (!out.empty())
            out += ", ";
        out += g + " -> x" + std::to_string(n);
    }
    return out;
}

PSeries import_pseries(const TruncatedSeries& reduced, const Identification& id, int source_n, const std::string& var)
{
    const auto vi = reduced.variable_index(var);
    if (reduced.variables().size() > 1 || (!vi && !reduced.variables().empty()))
        throw ImportError("import: expected a series in " + var + " only");
    int length = 8;
    if (vi && reduced.variables()[*vi].bound)
        length = *reduced.variables()[*vi].bound;
    PSeries p{source_n, std::vector<CoeffClass>(static_cast<std::size_t>(length))};
    const auto& ring = *reduced.coefficient_ring();

    for (const auto& [e, poly] : reduced.terms()) {
        const int i = e.empty() ? 0 : e[0];
        if (i >= length)
            continue;
        CoeffClass cls;
        for (const auto& [m, q] : poly.terms()) {
            if (!is_integer(q))
                throw ImportError("import: non-integral coefficient in a^" + std::to_string(i));
            if (boost::multiprecision::numerator(q) % 2 == 0)
                continue;
            CoeffClass t;
            if (m.is_one()) {
                t = CoeffClass::one();
            }
            else if (m.word_length() > 1) {
                continue;  // decomposable
            }
            else {
                std::size_t g = 0;
                while (m.exponent(g) == 0)
                    ++g;
                const std::string& name = ring.generators()[g].name;
                if (!id.enabled)
                    throw ImportError("import: no identification for " + name + " (identification disabled)");
                auto it = id.generator_to_x.find(name);
                if (it == id.generator_to_x.end())
                    throw ImportError("import: generator " + name + " outside the identification");
                t = CoeffClass::x(it->second);
            }
            if (cls.is_zero())
                cls = t;
            else if (cls == t)
                cls = CoeffClass::zero();
            else
                throw ImportError("import: a^" + std::to_string(i) + " coefficient is a sum of distinct classes");
        }
        if (!cls.is_zero() && cls.degree() != 2 * (2 * source_n + i))
            throw ImportError("import: " + cls.to_string() + " at a^" + std::to_string(i) + " has the wrong degree");
        p.c[static_cast<std::size_t>(i)] = cls;
    }
    return p;
}

HopfClass qhat_on_hurewicz(int k, int source_n, const PSeries& p)
{
    if (k < source_n)
        return {};
    return HopfClass::of(p.at(k - source_n), k + source_n);
}

HopfClass qhat_b1(int s)
{
    if (s % 2 != 0 || s < 2)
        throw std::invalid_argument("Q-hat^s b1 needs even s >= 2");
    // b1 o b_{s/2}: b_i for i > 1 is killed
    return s == 2 ? HopfClass::of(CoeffClass::one(), 2) : HopfClass{};
}

std::string DualClass::to_string() const
{
    if (xs.empty())
        return "0";
    std::string out;
    for (int n : xs) {
        if (!out.empty())
            out += " + ";
        out += "sigma x" + std::to_string(n);
    }
    return out;
}

DualClass suspend_to_dual(const HopfClass& h)
{
    DualClass d;
    for (const auto& [c, m] : h.terms()) {
        if (c.kind != CoeffClass::Kind::X)
            continue;
        if (!d.xs.erase(c.index))
            d.xs.insert(c.index);
    }
    return d;
}

namespace {

void contract(RawHopfTerm& t)
{
    CoeffClass c = CoeffClass::one();
    for (const auto& f : t.coefficients)
        c = c * f;
    t.coefficients = {c};
}

bool kill_b(RawHopfTerm& t)
{
    for (int i : t.b_indices)
        if (i >= 2)
            return true;
    return false;
}

}  // namespace

HopfClass normalize_raw(const std::vector<RawHopfTerm>& terms, QuotientOrder order)
{
    HopfClass out;
    for (RawHopfTerm t : terms) {
        bool dead = false;
        switch (order) {
        case QuotientOrder::KillBFirst:
            dead = kill_b(t);
            if (!dead)
                contract(t);
            break;
        case QuotientOrder::ContractCoefficientsFirst:
            contract(t);
            dead = kill_b(t);
            break;
        case QuotientOrder::Interleaved: {
            // contract pairwise, checking b between steps
            CoeffClass c = CoeffClass::one();
            for (std::size_t i = 0; i < t.coefficients.size() && !dead; ++i) {
                c = c * t.coefficients[i];
                if (i < t.b_indices.size() && t.b_indices[i] >= 2)
                    dead = true;
            }
            dead = dead || kill_b(t);
            t.coefficients = {c};
            break;
        }
        }
        if (dead)
            continue;
        const CoeffClass c = t.coefficients.empty() ? CoeffClass::one() : t.coefficients.front();
        out += HopfClass::of(c, static_cast<int>(t.b_indices.size()));
    }
    return out;
}

std::vector<std::pair<int, int>> RavenelWilsonRule::nonzero_coefficients(const fgl::FormalGroupLaw& F)
{
    std::vector<std::pair<int, int>> out;
    for (const auto& [e, c] : F.sum_series().terms())
        if (!c.is_zero())
            out.emplace_back(e[0], e[1]);
    return out;
}

bool RavenelWilsonRule::additive_specialization_holds(const fgl::FormalGroupLaw& F)
{
    auto nz = nonzero_coefficients(F);
    if (nz != std::vector<std::pair<int, int>>{{0, 1}, {1, 0}})
        return false;
    const auto one = GradedPolynomial::one(F.ring());
    return F.sum_series().coefficient({{"x", 1}}) == one && F.sum_series().coefficient({{"y", 1}}) == one;
}

RavenelWilsonRule ravenel_wilson_rule()
{
    return {"b(s + t) = #_{i,j} [a_ij] o b(s)^{o i} o b(t)^{o j}"};
}

ChainReport verify_gotcha_chain(const ChainOptions& opt)
{
    ChainReport rep;
    const auto F = fgl::preset("appendix-z-v3").build();
    const auto res = fgl::appendix_pipeline(F, opt.source_n, opt.precision);
    rep.steps.push_back({"pipeline.raw", res.raw.to_string()});
    rep.steps.push_back({"pipeline.reduced", res.reduced.to_string()});

    Identification id = Identification::v3_to_x7();
    id.enabled = opt.identification;
    rep.steps.push_back({"identification", id.to_string()});

    PSeries p;
    try {
        p = import_pseries(res.reduced, id, opt.source_n);
    }
    catch (const ImportError& e) {
        rep.identified = false;
        rep.steps.push_back({"import", e.what()});
        rep.endpoint = res.raw.to_string();
        return rep;
    }
    rep.steps.push_back({"pseries", p.to_string()});

    rep.steps.push_back({"translation", "Q-hat^s([1] # y) = Q-hat^s(y) mod the quotient", true});
    const HopfClass h = qhat_on_hurewicz(opt.k, opt.source_n, p);
    rep.steps.push_back({"qhat", "Q-hat^" + std::to_string(2 * opt.k) + "([x" + std::to_string(opt.source_n) + "] o b1^o" +
                                     std::to_string(opt.source_n) + ") = " + h.to_string()});
    const DualClass d = suspend_to_dual(h);
    rep.steps.push_back({"suspension", "sigma commutes with Dyer-Lashof operations", true});
    rep.steps.push_back({"sigma", d.to_string()});
    rep.endpoint = d.to_string();
    return rep;
}

}  // namespace dlforge::hopf
