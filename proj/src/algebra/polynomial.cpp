#include "dlforge/algebra/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dlforge {

const char* to_string(ScalarRing s)
{
    switch (s) {
    case ScalarRing::F2:
        return "F2";
    case ScalarRing::Rationals:
        return "Q";
    }
    return "?";
}

Rational parse_rational(const std::string& text)
{
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rational(num, den);
    }
    catch (const std::runtime_error&) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
}

std::string to_string(const Rational& q)
{
    return q.str();
}

/******** Monomial ********/

Monomial::Monomial(std::vector<int> exps) : exps_(std::move(exps))
{
    for (int e : exps_)
        if (e < 0)
            throw std::invalid_argument("negative exponent in monomial");
    trim();
}

Monomial Monomial::generator(std::size_t index, int power)
{
    std::vector<int> exps(index + 1, 0);
    exps[index] = power;
    return Monomial(std::move(exps));
}

void Monomial::trim()
{
    while (!exps_.empty() && exps_.back() == 0)
        exps_.pop_back();
}

int Monomial::word_length() const
{
    return std::accumulate(exps_.begin(), exps_.end(), 0);
}

Monomial Monomial::operator*(const Monomial& other) const
{
    const auto& a = exps_.size() >= other.exps_.size() ? exps_ : other.exps_;
    const auto& b = exps_.size() >= other.exps_.size() ? other.exps_ : exps_;
    Monomial result;
    result.exps_ = a;
    for (std::size_t i = 0; i < b.size(); ++i)
        result.exps_[i] += b[i];
    return result;
}

bool Monomial::divides(const Monomial& other) const
{
    if (exps_.size() > other.exps_.size())
        return false;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] > other.exps_[i])
            return false;
    return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const
{
    Monomial result;
    result.exps_ = exps_;
    for (std::size_t i = 0; i < divisor.exps_.size(); ++i) {
        if (i >= result.exps_.size() || result.exps_[i] < divisor.exps_[i])
            throw std::logic_error("Monomial::quotient: not divisible");
        result.exps_[i] -= divisor.exps_[i];
    }
    result.trim();
    return result;
}

/******** PolynomialRing ********/

PolynomialRing::PolynomialRing(std::string name, ScalarRing scalars, std::vector<Generator> generators,
                               std::vector<Relation> relations, bool integral)
    : name_(std::move(name)), scalars_(scalars), generators_(std::move(generators)),
      relations_(std::move(relations)), integral_(integral)
{
    std::set<std::string> seen;
    for (const auto& g : generators_) {
        if (g.degree < 0)
            throw std::invalid_argument("generator '" + g.name + "' has negative degree");
        if (!seen.insert(g.name).second)
            throw std::invalid_argument("duplicate generator name '" + g.name + "'");
    }
    for (const auto& r : relations_) {
        if (r.lead.is_one())
            throw std::invalid_argument("relation with constant lead term");
        int d = degree(r.lead);
        for (const auto& [m, c] : r.replacement)
            if (degree(m) != d)
                throw std::invalid_argument("relation is not homogeneous");
    }
}

RingPtr PolynomialRing::make(std::string name, ScalarRing scalars, std::vector<Generator> generators,
                             std::vector<Relation> relations, bool integral)
{
    return std::make_shared<const PolynomialRing>(std::move(name), scalars, std::move(generators),
                                                  std::move(relations), integral);
}

std::optional<std::size_t> PolynomialRing::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t PolynomialRing::require_index(const std::string& name) const
{
    auto i = index_of(name);
    if (!i)
        throw std::invalid_argument("unknown generator '" + name + "' in ring " + name_);
    return *i;
}

int PolynomialRing::degree(const Monomial& m) const
{
    int d = 0;
    const auto& e = m.exponents();
    if (e.size() > generators_.size())
        throw std::out_of_range("monomial uses a generator outside ring " + name_);
    for (std::size_t i = 0; i < e.size(); ++i)
        d += e[i] * generators_[i].degree;
    return d;
}

bool PolynomialRing::compatible_with(const PolynomialRing& other) const
{
    if (this == &other)
        return true;
    if (scalars_ != other.scalars_ || generators_ != other.generators_ ||
        relations_.size() != other.relations_.size())
        return false;
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].lead != other.relations_[i].lead ||
            relations_[i].replacement != other.relations_[i].replacement)
            return false;
    return true;
}

Rational PolynomialRing::reduce_scalar(const Rational& q) const
{
    if (scalars_ == ScalarRing::Rationals)
        return q;
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    if (den % 2 == 0)
        throw std::domain_error("division by 2 over F2");
    return Rational(num % 2 == 0 ? 0 : 1);
}

std::map<Monomial, Rational> PolynomialRing::reduce(std::map<Monomial, Rational> terms) const
{
    if (relations_.empty())
        return terms;
    std::map<Monomial, Rational> done;
    std::size_t watchdog = 0;
    while (!terms.empty()) {
        if (++watchdog > 10'000'000)
            throw std::logic_error("relation reduction does not terminate in ring " + name_);
        auto node = terms.extract(terms.begin());
        const Monomial& m = node.key();
        const Relation* hit = nullptr;
        for (const auto& r : relations_)
            if (r.lead.divides(m)) {
                hit = &r;
                break;
            }
        if (!hit) {
            Rational& slot = done[m];
            slot = reduce_scalar(slot + node.mapped());
            if (slot == 0)
                done.erase(m);
            continue;
        }
        Monomial rest = m.quotient(hit->lead);
        for (const auto& [rm, rc] : hit->replacement) {
            Rational& slot = terms[rm * rest];
            slot = reduce_scalar(slot + rc * node.mapped());
            if (slot == 0)
                terms.erase(rm * rest);
        }
    }
    return done;
}

/******** GradedPolynomial ********/

GradedPolynomial::GradedPolynomial(RingPtr ring) : ring_(std::move(ring))
{
    if (!ring_)
        throw std::invalid_argument("GradedPolynomial: null ring");
}

GradedPolynomial::GradedPolynomial(RingPtr ring, std::map<Monomial, Rational> terms)
    : ring_(std::move(ring)), terms_(std::move(terms))
{
    if (!ring_)
        throw std::invalid_argument("GradedPolynomial: null ring");
    normalize();
}

GradedPolynomial GradedPolynomial::constant(RingPtr ring, const Rational& c)
{
    std::map<Monomial, Rational> t;
    t[Monomial{}] = c;
    return GradedPolynomial(std::move(ring), std::move(t));
}

GradedPolynomial GradedPolynomial::generator(RingPtr ring, const std::string& name, int power)
{
    std::size_t i = ring->require_index(name);
    return generator(std::move(ring), i, power);
}

GradedPolynomial GradedPolynomial::generator(RingPtr ring, std::size_t index, int power)
{
    if (index >= ring->generators().size())
        throw std::out_of_range("generator index out of range");
    return monomial(std::move(ring), Monomial::generator(index, power));
}

GradedPolynomial GradedPolynomial::monomial(RingPtr ring, const Monomial& m, const Rational& c)
{
    std::map<Monomial, Rational> t;
    t[m] = c;
    return GradedPolynomial(std::move(ring), std::move(t));
}

void GradedPolynomial::normalize()
{
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second = ring_->reduce_scalar(it->second);
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
    if (!ring_->relations().empty())
        terms_ = ring_->reduce(std::move(terms_));
}

void GradedPolynomial::check_compatible(const GradedPolynomial& other) const
{
    if (ring_ == other.ring_)
        return;
    if (ring_->scalars() != other.ring_->scalars())
        throw std::invalid_argument(std::string("mismatched scalar rings: ") + dlforge::to_string(ring_->scalars()) +
                                    " vs " + dlforge::to_string(other.ring_->scalars()));
    if (!ring_->compatible_with(*other.ring_))
        throw std::invalid_argument("mismatched polynomial rings: " + ring_->name() + " vs " + other.ring_->name());
}

Rational GradedPolynomial::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& other)
{
    check_compatible(other);
    for (const auto& [m, c] : other.terms_) {
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = ring_->reduce_scalar(it->second + c);
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& other)
{
    return *this += -other;
}

GradedPolynomial GradedPolynomial::operator+(const GradedPolynomial& other) const
{
    GradedPolynomial r = *this;
    r += other;
    return r;
}

GradedPolynomial GradedPolynomial::operator-(const GradedPolynomial& other) const
{
    GradedPolynomial r = *this;
    r -= other;
    return r;
}

GradedPolynomial GradedPolynomial::operator-() const
{
    return scaled(-1);
}

GradedPolynomial GradedPolynomial::scaled(const Rational& c) const
{
    std::map<Monomial, Rational> t;
    for (const auto& [m, a] : terms_)
        t.emplace(m, a * c);
    return GradedPolynomial(ring_, std::move(t));
}

GradedPolynomial GradedPolynomial::operator*(const GradedPolynomial& other) const
{
    return mul_truncated(other, -1);
}

GradedPolynomial GradedPolynomial::mul_truncated(const GradedPolynomial& other, int max_degree) const
{
    check_compatible(other);
    std::map<Monomial, Rational> t;
    const bool f2 = ring_->scalars() == ScalarRing::F2;
    for (const auto& [m1, c1] : terms_) {
        int d1 = max_degree >= 0 ? ring_->degree(m1) : 0;
        for (const auto& [m2, c2] : other.terms_) {
            if (max_degree >= 0 && d1 + ring_->degree(m2) > max_degree)
                continue;
            Monomial m = m1 * m2;
            if (f2) {
                auto [it, inserted] = t.try_emplace(std::move(m), 1);
                if (!inserted)
                    t.erase(it);
            }
            else {
                t[std::move(m)] += c1 * c2;
            }
        }
    }
    return GradedPolynomial(ring_, std::move(t));
}

GradedPolynomial GradedPolynomial::pow(int e) const
{
    if (e < 0)
        throw std::invalid_argument("negative power of a polynomial");
    GradedPolynomial result = one(ring_);
    GradedPolynomial base = *this;
    while (e > 0) {
        if (e & 1)
            result *= base;
        e >>= 1;
        if (e)
            base *= base;
    }
    return result;
}

bool GradedPolynomial::operator==(const GradedPolynomial& other) const
{
    if (ring_ != other.ring_ && !ring_->compatible_with(*other.ring_))
        return false;
    return terms_ == other.terms_;
}

std::optional<int> GradedPolynomial::degree() const
{
    if (terms_.empty())
        return std::nullopt;
    int d = ring_->degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (ring_->degree(m) != d)
            return std::nullopt;
    return d;
}

bool GradedPolynomial::is_homogeneous() const
{
    return terms_.empty() || degree().has_value();
}

int GradedPolynomial::max_degree() const
{
    int d = -1;
    for (const auto& [m, c] : terms_)
        d = std::max(d, ring_->degree(m));
    return d;
}

GradedPolynomial GradedPolynomial::homogeneous_component(int d) const
{
    std::map<Monomial, Rational> t;
    for (const auto& [m, c] : terms_)
        if (ring_->degree(m) == d)
            t.emplace(m, c);
    GradedPolynomial r(ring_);
    r.terms_ = std::move(t);
    return r;
}

GradedPolynomial GradedPolynomial::truncated(int max_degree) const
{
    GradedPolynomial r(ring_);
    for (const auto& [m, c] : terms_)
        if (ring_->degree(m) <= max_degree)
            r.terms_.emplace(m, c);
    return r;
}

GradedPolynomial GradedPolynomial::indecomposable_part() const
{
    GradedPolynomial r(ring_);
    for (const auto& [m, c] : terms_)
        if (m.word_length() == 1)
            r.terms_.emplace(m, c);
    return r;
}

bool GradedPolynomial::is_integral() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return is_integer(t.second); });
}

void GradedPolynomial::require_integral(const std::string& what) const
{
    if (!is_integral())
        throw IntegralityError(what + " is not integral: " + to_string());
}

GradedPolynomial GradedPolynomial::substitute(const std::vector<GradedPolynomial>& images) const
{
    if (images.empty())
        throw std::invalid_argument("substitute: no images");
    RingPtr target = images.front().ring();
    GradedPolynomial result(target);
    for (const auto& [m, c] : terms_) {
        GradedPolynomial term = constant(target, c);
        const auto& e = m.exponents();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (i >= images.size())
                throw std::out_of_range("substitute: missing image for generator " +
                                        ring_->generators()[i].name);
            term *= images[i].pow(e[i]);
        }
        result += term;
    }
    return result;
}

bool canonical_less(const PolynomialRing& ring, const Monomial& a, const Monomial& b)
{
    int da = ring.degree(a), db = ring.degree(b);
    if (da != db)
        return da < db;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = n; i-- > 0;) {
        int ea = a.exponent(i), eb = b.exponent(i);
        if (ea != eb)
            return ea > eb;
    }
    return false;
}

std::string monomial_to_string(const PolynomialRing& ring, const Monomial& m)
{
    if (m.is_one())
        return "1";
    std::string out;
    const auto& e = m.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        if (!out.empty())
            out += ' ';
        out += ring.generators()[i].name;
        if (e[i] > 1)
            out += '^' + std::to_string(e[i]);
    }
    return out;
}

std::string GradedPolynomial::to_string() const
{
    if (terms_.empty())
        return "0";
    std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(),
              [this](const auto& a, const auto& b) { return canonical_less(*ring_, a.first, b.first); });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        Rational a = c;
        if (!first)
            out += a < 0 ? " - " : " + ";
        else if (a < 0)
            out += "-";
        if (a < 0)
            a = -a;
        std::string mon = m.is_one() ? "" : monomial_to_string(*ring_, m);
        if (mon.empty())
            out += a.str();
        else if (a == 1)
            out += mon;
        else
            out += a.str() + " " + mon;
        first = false;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const GradedPolynomial& p)
{
    return os << p.to_string();
}

namespace {

class PolyLexer {
public:
    explicit PolyLexer(const std::string& s) : s_(s) {}

    void skip()
    {
        while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '*'))
            ++pos_;
    }
    bool done()
    {
        skip();
        return pos_ >= s_.size();
    }
    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    char take() { return s_[pos_++]; }
    std::string number()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }
    std::string identifier()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("polynomial parse error at " + std::to_string(pos_) + ": " + what + " in '" +
                                    s_ + "'");
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

GradedPolynomial parse_polynomial(const RingPtr& ring, const std::string& text)
{
    PolyLexer lex(text);
    GradedPolynomial result(ring);
    if (lex.done())
        lex.fail("empty input");
    bool first = true;
    while (!lex.done()) {
        Rational sign = 1;
        char c = lex.peek();
        if (c == '+' || c == '-') {
            lex.take();
            sign = c == '-' ? -1 : 1;
        }
        else if (!first) {
            lex.fail("expected '+' or '-'");
        }
        first = false;
        Rational coeff = 1;
        bool any = false;
        if (std::isdigit(static_cast<unsigned char>(lex.peek()))) {
            std::string num = lex.number();
            if (lex.peek() == '/') {
                lex.take();
                std::string den = lex.number();
                if (den.empty())
                    lex.fail("missing denominator");
                num += "/" + den;
            }
            coeff = parse_rational(num);
            any = true;
        }
        Monomial m;
        while (!lex.done() && lex.peek() != '+' && lex.peek() != '-') {
            std::string name = lex.identifier();
            if (name.empty())
                lex.fail("expected generator name");
            auto idx = ring->index_of(name);
            if (!idx)
                lex.fail("unknown generator '" + name + "'");
            int power = 1;
            if (lex.peek() == '^') {
                lex.take();
                std::string p = lex.number();
                if (p.empty())
                    lex.fail("expected exponent");
                power = std::stoi(p);
            }
            m = m * Monomial::generator(*idx, power);
            any = true;
        }
        if (!any)
            lex.fail("empty term");
        result += GradedPolynomial::monomial(ring, m, sign * coeff);
    }
    return result;
}

std::set<int> indecomposable_degrees(const std::vector<Generator>& generators, int max_degree)
{
    std::set<int> out;
    for (const auto& g : generators)
        if (g.degree <= max_degree)
            out.insert(g.degree);
    return out;
}

int indecomposable_dimension(const std::vector<Generator>& generators, int degree)
{
    return static_cast<int>(
        std::count_if(generators.begin(), generators.end(), [degree](const Generator& g) { return g.degree == degree; }));
}

namespace {

void enumerate_monomials(const PolynomialRing& ring, std::size_t index, int remaining, std::vector<int>& exps,
                         std::vector<Monomial>& out)
{
    if (remaining == 0) {
        out.emplace_back(exps);
        return;
    }
    if (index >= ring.generators().size())
        return;
    int d = ring.generators()[index].degree;
    if (d == 0) {
        enumerate_monomials(ring, index + 1, remaining, exps, out);
        return;
    }
    for (int e = 0; e * d <= remaining; ++e) {
        exps[index] = e;
        enumerate_monomials(ring, index + 1, remaining - e * d, exps, out);
    }
    exps[index] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(const PolynomialRing& ring, int degree)
{
    std::vector<Monomial> out;
    if (degree < 0)
        return out;
    std::vector<int> exps(ring.generators().size(), 0);
    enumerate_monomials(ring, 0, degree, exps, out);
    std::sort(out.begin(), out.end(), [&ring](const Monomial& a, const Monomial& b) { return canonical_less(ring, a, b); });
    return out;
}

}  // namespace dlforge
