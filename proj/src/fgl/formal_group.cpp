#include "dlforge/fgl/formal_group.hpp"

#include <sstream>
#include <stdexcept>

namespace dlforge::fgl {

namespace {

SeriesVariable var(const std::string& name, std::optional<int> bound = {})
{
    return SeriesVariable{name, 1, bound};
}

TruncatedSeries single(const RingPtr& ring, const std::string& name, int bound)
{
    return TruncatedSeries(ring, {var(name, bound)});
}

void check_integral(const RingPtr& ring, const TruncatedSeries& s, const std::string& what)
{
    if (ring->integral())
        s.require_integral(what);
}

}  // namespace

FormalGroupLaw::FormalGroupLaw(RingPtr ring, std::map<int, GradedPolynomial> log_coefficients, int bound)
    : ring_(std::move(ring)), log_(std::move(log_coefficients)), bound_(bound),
      exp_(ring_, {}), sum_(ring_, {})
{
    if (bound_ < 2)
        throw std::invalid_argument("formal group law: bound must be at least 2");
    for (auto it = log_.begin(); it != log_.end();) {
        if (it->first < 1)
            throw std::invalid_argument("formal group law: logarithm has a term of order " + std::to_string(it->first));
        if (!it->second.ring()->compatible_with(*ring_))
            throw std::invalid_argument("formal group law: coefficient from another ring");
        it = it->second.is_zero() ? log_.erase(it) : std::next(it);
    }
    if (auto it = log_.find(1); it != log_.end() && !(it->second == GradedPolynomial::one(ring_)))
        throw std::invalid_argument("formal group law: logarithm must start with x");
    log_.erase(1);

    exp_ = exp_series("u", bound_);
    std::vector<SeriesVariable> xy{var("x"), var("y")};
    Truncation t{bound_, std::nullopt};
    TruncatedSeries lx = log_series("x", bound_).truncated({}, t);
    TruncatedSeries ly = log_series("y", bound_).truncated({}, t);
    sum_ = exp_.compose("u", lx + ly);
    check_integral(ring_, sum_, "sum series");
}

GradedPolynomial FormalGroupLaw::log_coefficient(int n) const
{
    if (n == 1)
        return GradedPolynomial::one(ring_);
    auto it = log_.find(n);
    return it == log_.end() ? GradedPolynomial(ring_) : it->second;
}

GradedPolynomial FormalGroupLaw::cp(int n) const
{
    return log_coefficient(n + 1).scaled(n + 1);
}

TruncatedSeries FormalGroupLaw::log_series(const std::string& v, int bound) const
{
    TruncatedSeries s = single(ring_, v, bound);
    if (bound > 1)
        s.add_term({1}, GradedPolynomial::one(ring_));
    for (const auto& [n, c] : log_)
        if (n < bound)
            s.add_term({n}, c);
    return s;
}

TruncatedSeries FormalGroupLaw::log_derivative(const std::string& v, int bound) const
{
    return log_series(v, bound + 1).derivative(v);
}

TruncatedSeries FormalGroupLaw::exp_series(const std::string& v, int bound) const
{
    return log_series(v, bound).compositional_inverse(v);
}

TruncatedSeries FormalGroupLaw::add(const TruncatedSeries& a, const TruncatedSeries& b) const
{
    const auto lu = log_series("u", bound_);
    return exp_.compose("u", lu.compose("u", a) + lu.compose("u", b));
}

TruncatedSeries FormalGroupLaw::sum_series(const std::string& x, int x_bound, const std::string& y, int y_bound) const
{
    const int total = x_bound + y_bound - 1;
    TruncatedSeries lx = log_series(x, x_bound);
    TruncatedSeries ly = log_series(y, y_bound);
    TruncatedSeries s = exp_series("u", total).compose("u", lx + ly);
    check_integral(ring_, s, "sum series");
    return s;
}

FormalGroupLaw fgl_from_log(const RingPtr& ring, const std::map<int, GradedPolynomial>& log_coefficients, int bound)
{
    return FormalGroupLaw(ring, log_coefficients, bound);
}

TruncatedSeries n_series(const FormalGroupLaw& F, int n, const std::string& v, std::optional<int> bound)
{
    const int b = bound.value_or(F.bound());
    if (n == 0)
        return single(F.ring(), v, b);
    return F.exp_series("u", b).compose("u", F.log_series(v, b).scaled(n));
}

TruncatedSeries bracket2_series(const FormalGroupLaw& F, const std::string& v, std::optional<int> bound)
{
    const int b = bound.value_or(F.bound());
    return n_series(F, 2, v, b + 1).divide_by_power(v, 1);
}

TruncatedSeries isogeny_g(const FormalGroupLaw& F, int x_bound, int a_bound)
{
    TruncatedSeries sum = F.sum_series("x", x_bound, "a", a_bound);
    TruncatedSeries x = TruncatedSeries::variable(F.ring(), {var("x", x_bound), var("a", a_bound)}, "x");
    return (x * sum).truncated({{"x", x_bound}, {"a", a_bound}});
}

namespace {

GradedPolynomial coeff(const TruncatedSeries& s, const std::string& v, int k)
{
    return s.coefficient({{v, k}});
}

void require_two_regular(const FormalGroupLaw& F)
{
    if (F.ring()->scalars() != ScalarRing::Rationals)
        throw std::domain_error("2 is a zero divisor in " + F.ring()->name() + "; h_n is not determined");
}

}  // namespace

PowerOpResult appendix_pipeline(const FormalGroupLaw& F, int n, int precision)
{
    if (n < 1)
        throw std::invalid_argument("pipeline: n must be positive");
    if (precision < 1)
        throw std::invalid_argument("pipeline: precision must be positive");
    require_two_regular(F);
    const RingPtr& R = F.ring();
    const int W = 2 * n + precision;  // a-precision of f_n
    const int yb = n + 2;

    PowerOpResult out{n, precision,
                      TruncatedSeries(R, {}), TruncatedSeries(R, {}), TruncatedSeries(R, {}),
                      TruncatedSeries(R, {}), TruncatedSeries(R, {}), TruncatedSeries(R, {}),
                      TruncatedSeries(R, {}), TruncatedSeries(R, {}), TruncatedSeries(R, {}), false};

    // g(a y, a) = a^2 k(y, a): x^i a^j -> y^i a^{i+j-2}
    const TruncatedSeries g = isogeny_g(F, yb, W + 2);
    const std::size_t xi = *g.variable_index("x"), ai = *g.variable_index("a");
    TruncatedSeries k(R, {var("y", yb), var("a", W)});
    for (const auto& [e, c] : g.terms()) {
        const int i = e[xi], j = e[ai];
        if (i + j < 2)
            throw std::logic_error("pipeline: g has a term of order below 2");
        if (i + j - 2 < W)
            k.add_term({i, i + j - 2}, c);
    }
    out.k = k;
    out.k_inverse = k.compositional_inverse("y");
    check_integral(R, out.k_inverse, "k inverse");
    out.k_inverse_derivative = out.k_inverse.derivative("y");

    // outer bound large enough that the composition keeps every a-power
    const int xb = (n + W) / 2 + 2;
    TruncatedSeries inner = out.k_inverse.multiply_by_power("a", 1);
    out.log_derivative_at = F.log_derivative("x", xb).compose("x", inner).truncated({{"y", n + 1}, {"a", W}});
    const TruncatedSeries prod = (out.log_derivative_at * out.k_inverse_derivative).truncated({{"y", n + 1}, {"a", W}});
    out.f_n = prod.extract("y", n);
    check_integral(R, out.f_n, "f_n");

    out.bracket2 = bracket2_series(F, "a", W);
    if (!(coeff(out.bracket2, "a", 0) == GradedPolynomial::constant(R, 2)))
        throw std::domain_error("pipeline: <2> does not start with 2");

    // h_n of degree 2n with f_n - h_n <2> = CP^n^2 a^{2n} mod a^{2n+1}
    const GradedPolynomial cpn = F.cp(n);
    std::vector<GradedPolynomial> h;
    for (int i = 0; i <= 2 * n; ++i) {
        GradedPolynomial r = coeff(out.f_n, "a", i);
        if (i == 2 * n)
            r -= cpn * cpn;
        for (int j = 1; j <= i; ++j)
            r -= coeff(out.bracket2, "a", j) * h[static_cast<std::size_t>(i - j)];
        h.push_back(r.scaled(Rational(1, 2)));
    }
    out.h_n = single(R, "a", W);
    for (int i = 0; i <= 2 * n && i < W; ++i)
        out.h_n.add_term({i}, h[static_cast<std::size_t>(i)]);
    check_integral(R, out.h_n, "h_n");

    const TruncatedSeries diff = (out.f_n - out.h_n * out.bracket2).truncated({{"a", W}});
    bool ok = coeff(diff, "a", 2 * n) == cpn * cpn;
    for (int i = 0; i < 2 * n; ++i)
        ok = ok && coeff(diff, "a", i).is_zero();
    out.reconstruction_ok = ok;
    if (!ok)
        throw std::logic_error("pipeline: reconstruction failed for n = " + std::to_string(n));

    out.raw = diff.divide_by_power("a", 2 * n).truncated({{"a", precision}});
    out.reduced = reduce_mod_two_series(out.raw, F, "a");
    return out;
}

TruncatedSeries reduce_mod_two_series(const TruncatedSeries& s, const FormalGroupLaw& F, const std::string& v)
{
    const auto vi = s.variable_index(v);
    if (!vi)
        return s;
    std::optional<int> vb = s.variables()[*vi].bound;
    int reach = vb.value_or(F.bound());
    if (s.truncation().total_bound)
        reach = std::min(reach, *s.truncation().total_bound);
    const TruncatedSeries br = bracket2_series(F, v, reach);
    if (!(br.coefficient({}) == GradedPolynomial::constant(F.ring(), 2)))
        throw std::domain_error("reduce: <2> does not start with 2");

    TruncatedSeries cur = s;
    for (int pass = 0; pass <= reach + 1; ++pass) {
        TruncatedSeries next(s.coefficient_ring(), s.variables(), s.truncation());
        bool changed = false;
        for (const auto& [e, c] : cur.terms()) {
            if (e[*vi] < 1) {
                next.add_term(e, c);
                continue;
            }
            std::map<Monomial, Rational> keep, carry;
            for (const auto& [m, q] : c.terms()) {
                if (!is_integer(q)) {
                    keep[m] = q;
                    continue;
                }
                BigInt z = boost::multiprecision::numerator(q);
                BigInt r = z % 2;
                if (r < 0)
                    r += 2;
                if (r != 0)
                    keep[m] = Rational(r);
                if (z != r)
                    carry[m] = Rational((z - r) / 2);
            }
            next.add_term(e, GradedPolynomial(c.ring(), keep));
            if (carry.empty())
                continue;
            changed = true;
            const GradedPolynomial half(c.ring(), carry);
            // 2 a^k = -(<2> - 2) a^k
            for (const auto& [be, bc] : br.terms()) {
                if (be[0] == 0)
                    continue;
                auto f = e;
                f[*vi] += be[0];
                next.add_term(f, -(half * bc));
            }
        }
        cur = next;
        if (!changed)
            return cur;
    }
    throw std::logic_error("reduce: no fixpoint within truncation");
}

bool divisible_by_bracket2(const TruncatedSeries& s, const FormalGroupLaw& F, const std::string& v)
{
    require_two_regular(F);
    const auto vi = s.variable_index(v);
    int reach = F.bound();
    if (vi && s.variables()[*vi].bound)
        reach = *s.variables()[*vi].bound;
    if (s.truncation().total_bound)
        reach = std::min(reach, *s.truncation().total_bound);
    const TruncatedSeries q = s * bracket2_series(F, v, reach).inverse();
    return q.is_integral();
}

IsogenyCheck check_isogeny(const FormalGroupLaw& F, int order)
{
    IsogenyCheck out;
    out.order = order;
    const RingPtr& R = F.ring();
    const int M = order / 2;
    Truncation t{order, std::nullopt};

    // l'_{Psi^* F}(u, a) = sum Psi(CP^m)(a) u^m with the pipeline lifts
    TruncatedSeries lpsi(R, {var("u", M + 1), var("a", order)}, t);
    lpsi.add_term({0, 0}, GradedPolynomial::one(R));
    for (int m = 1; m <= M; ++m) {
        const auto res = appendix_pipeline(F, m, order);
        for (const auto& [e, c] : res.raw.terms())
            lpsi.add_term({m, e[0]}, c);
    }

    const TruncatedSeries g = isogeny_g(F, order + 1, order + 1).truncated({}, Truncation{order + 1, std::nullopt});
    const TruncatedSeries gp = g.derivative("x");
    const TruncatedSeries comp = lpsi.compose("u", g);
    const TruncatedSeries a = TruncatedSeries::variable(R, {var("x"), var("a")}, "a", t);
    const TruncatedSeries lhs = (gp * comp - a * F.log_derivative("x", order)).truncated({}, Truncation{order, std::nullopt});
    out.ok = divisible_by_bracket2(lhs, F, "a");
    out.detail = out.ok ? "g' l'_Psi(g) - a l' divisible by <2> below total order " + std::to_string(order)
                        : "not divisible: " + lhs.to_string();
    return out;
}

bool check_associativity(const FormalGroupLaw& F, int bound)
{
    const RingPtr& R = F.ring();
    Truncation t{bound, std::nullopt};
    auto sum_in = [&](const std::string& p, const std::string& q) {
        TruncatedSeries lp = F.log_series(p, bound).truncated({}, t);
        TruncatedSeries lq = F.log_series(q, bound).truncated({}, t);
        return F.exp_series("w", bound).compose("w", lp + lq);
    };
    auto variable = [&](const std::string& n) { return TruncatedSeries::variable(R, {var(n)}, n, t); };
    const TruncatedSeries uv = sum_in("u", "v");
    const TruncatedSeries left = uv.compose("u", sum_in("x", "y")).compose("v", variable("z"));
    const TruncatedSeries right = uv.compose("u", variable("x")).compose("v", sum_in("y", "z"));
    return left.truncated({}, t) == right.truncated({}, t);
}

// config

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

FglConfig parse_fgl_config(const std::string& text)
{
    FglConfig cfg;
    cfg.name = "custom";
    std::string scalars = "integers";
    std::vector<Generator> gens;
    std::vector<std::pair<std::string, std::string>> relations;
    std::vector<std::pair<int, std::string>> logs;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest;
        std::getline(ls, rest);
        rest = trim(rest);
        if (key == "name") {
            cfg.name = rest;
        }
        else if (key == "scalars") {
            if (rest != "integers" && rest != "rationals" && rest != "f2")
                fail("unknown scalars '" + rest + "'");
            scalars = rest;
        }
        else if (key == "gen") {
            std::istringstream gs(rest);
            std::string name, deg;
            int d = 0;
            if (!(gs >> name >> deg >> d) || deg != "deg")
                fail("expected 'gen <name> deg <int>'");
            gens.push_back({name, d});
        }
        else if (key == "relation") {
            auto eq = rest.find('=');
            if (eq == std::string::npos)
                fail("expected 'relation <monomial> = <polynomial>'");
            relations.emplace_back(trim(rest.substr(0, eq)), trim(rest.substr(eq + 1)));
        }
        else if (key == "log") {
            std::istringstream gs(rest);
            int p = 0;
            if (!(gs >> p) || p < 1)
                fail("expected 'log <power> <coefficient>'");
            std::string c;
            std::getline(gs, c);
            logs.emplace_back(p, trim(c));
        }
        else if (key == "bound") {
            try {
                cfg.bound = std::stoi(rest);
            }
            catch (const std::exception&) {
                fail("bad bound '" + rest + "'");
            }
        }
        else {
            fail("unknown key '" + key + "'");
        }
    }

    const ScalarRing sr = scalars == "f2" ? ScalarRing::F2 : ScalarRing::Rationals;
    const bool integral = scalars == "integers";
    auto bare = PolynomialRing::make(cfg.name, sr, gens, {}, integral);
    std::vector<Relation> rels;
    for (const auto& [l, r] : relations) {
        auto lead = parse_polynomial(bare, l);
        if (lead.size() != 1 || lead.terms().begin()->second != 1)
            throw std::invalid_argument("config: relation lead '" + l + "' is not a monomial");
        Relation rel;
        rel.lead = lead.terms().begin()->first;
        for (const auto& [m, c] : parse_polynomial(bare, r).terms())
            rel.replacement.emplace_back(m, c);
        rels.push_back(std::move(rel));
    }
    cfg.ring = PolynomialRing::make(cfg.name, sr, gens, rels, integral);
    for (const auto& [p, c] : logs)
        cfg.log.insert_or_assign(p, parse_polynomial(cfg.ring, c));
    return cfg;
}

FglConfig preset(const std::string& name)
{
    if (name == "appendix-z-v3")
        return parse_fgl_config("name appendix-z-v3\nscalars integers\ngen v3 deg 14\nrelation v3^2 = 0\n"
                                "log 8 1/2 v3\nbound 16\n");
    if (name == "integers")
        return parse_fgl_config("name integers\nscalars integers\nbound 16\n");
    if (name == "rationals") {
        // log(1 + x), the multiplicative law
        std::string text = "name rationals\nscalars rationals\nbound 12\n";
        for (int n = 2; n < 12; ++n)
            text += "log " + std::to_string(n) + " " + (n % 2 ? "" : "-") + "1/" + std::to_string(n) + "\n";
        return parse_fgl_config(text);
    }
    if (name == "lazard-log") {
        // generic logarithm x + m1 x^2 + ... + m7 x^8
        std::string text = "name lazard-log\nscalars rationals\nbound 9\n";
        for (int i = 1; i <= 7; ++i)
            text += "gen m" + std::to_string(i) + " deg " + std::to_string(2 * i) + "\nlog " + std::to_string(i + 1) +
                    " m" + std::to_string(i) + "\n";
        return parse_fgl_config(text);
    }
    throw std::invalid_argument("unknown ring preset '" + name + "'");
}

std::vector<std::string> preset_names()
{
    return {"appendix-z-v3", "integers", "rationals", "lazard-log"};
}

}  // namespace dlforge::fgl
