#include "dlforge/models/models.hpp"
#include "dlforge/algebra/binomial.hpp"

#include <set>
#include <stdexcept>

namespace dlforge::models {

DLModel::DLModel(std::string name, RingPtr ring, int max_degree)
    : name_(std::move(name)), ring_(std::move(ring)), max_degree_(max_degree)
{
    if (ring_->scalars() != ScalarRing::F2)
        throw std::invalid_argument(name_ + ": models live over F2");
}

GradedPolynomial DLModel::gen(std::size_t index, int power) const
{
    return GradedPolynomial::generator(ring_, index, power);
}

std::size_t DLModel::table_size() const
{
    std::lock_guard lock(mutex_);
    return table_.size();
}

void DLModel::require_range(int degree, const std::string& what) const
{
    if (degree > max_degree_)
        throw std::out_of_range(name_ + ": " + what + " needs degree " + std::to_string(degree) +
                                ", model built up to " + std::to_string(max_degree_));
}

GradedPolynomial DLModel::Q(int s, const GradedPolynomial& p)
{
    if (!p.ring()->compatible_with(*ring_))
        throw std::invalid_argument(name_ + ": element from another ring");
    GradedPolynomial out(ring_);
    for (const auto& [m, c] : p.terms())
        out += Q(s, m);
    return out;
}

GradedPolynomial DLModel::Q(int s, const Monomial& m)
{
    if (s < 0)
        return GradedPolynomial(ring_);
    const auto key = std::make_pair(s, m);
    {
        std::lock_guard lock(mutex_);
        if (auto it = table_.find(key); it != table_.end())
            return it->second;
    }
    GradedPolynomial r = compute(s, m);
    std::lock_guard lock(mutex_);
    table_.emplace(key, r);
    return r;
}

GradedPolynomial DLModel::compute(int s, const Monomial& m)
{
    const int d = ring_->degree(m);
    if (s < d)
        return GradedPolynomial(ring_);
    const auto mono = GradedPolynomial::monomial(ring_, m);
    if (s == d)
        return mono * mono;
    require_range(s + d, "Q" + std::to_string(s) + " " + monomial_to_string(*ring_, m));

    const auto& e = m.exponents();
    std::size_t first = 0;
    while (e[first] == 0)
        ++first;
    if (m.word_length() == 1)
        return Q_generator(s, first);

    bool square = true;
    for (int x : e)
        square = square && x % 2 == 0;
    if (square) {
        if (s % 2)
            return GradedPolynomial(ring_);
        std::vector<int> half(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            half[i] = e[i] / 2;
        return Q(s / 2, Monomial(half)).pow(2);
    }

    const Monomial u = Monomial::generator(first);
    const Monomial v = m.quotient(u);
    const int du = ring_->degree(u), dv = ring_->degree(v);
    GradedPolynomial out(ring_);
    for (int p = du; p <= s - dv; ++p)
        out += Q(p, u) * Q(s - p, v);
    return out;
}

GradedPolynomial DLModel::cartan_expand(int s, const GradedPolynomial& u, const GradedPolynomial& v)
{
    GradedPolynomial out(ring_);
    for (int p = 0; p <= s; ++p)
        out += Q(p, u) * Q(s - p, v);
    return out;
}

// dual Steenrod algebra

namespace {

int xi_count(int max_degree)
{
    int g = 0;
    while ((1 << (g + 1)) - 1 <= max_degree)
        ++g;
    return g;
}

RingPtr xi_ring(int count)
{
    std::vector<Generator> gens;
    for (int i = 1; i <= count; ++i)
        gens.push_back({"xi" + std::to_string(i), (1 << i) - 1});
    return PolynomialRing::make("dual Steenrod", ScalarRing::F2, gens);
}

RingPtr b_ring(int count)
{
    std::vector<Generator> gens;
    for (int i = 1; i <= count; ++i)
        gens.push_back({"b" + std::to_string(i), 2 * i});
    return PolynomialRing::make("H_*MU", ScalarRing::F2, gens);
}

}  // namespace

DualSteenrod::DualSteenrod(int max_degree)
    : DLModel("dual-steenrod", xi_ring(xi_count(max_degree)), max_degree), generator_count_(xi_count(max_degree))
{
    if (generator_count_ < 1)
        throw std::invalid_argument("dual-steenrod: max degree too small");
    inverse_.reserve(static_cast<std::size_t>(max_degree) + 1);
    inverse_.push_back(GradedPolynomial::one(ring()));
    for (int n = 1; n <= max_degree; ++n) {
        GradedPolynomial c(ring());
        for (int i = 1; i <= generator_count_ && (1 << i) - 1 <= n; ++i)
            c += xi(i) * inverse_[static_cast<std::size_t>(n - (1 << i) + 1)];
        inverse_.push_back(std::move(c));
    }
    antipode_.push_back(GradedPolynomial::one(ring()));
    for (int i = 1; i <= generator_count_; ++i) {
        GradedPolynomial c(ring());
        for (int j = 0; j < i; ++j)
            c += xi(i - j, 1 << j) * antipode_[static_cast<std::size_t>(j)];
        antipode_.push_back(std::move(c));
    }
}

GradedPolynomial DualSteenrod::xi(int i, int power) const
{
    if (i < 1 || i > generator_count_)
        throw std::out_of_range("dual-steenrod: no xi" + std::to_string(i));
    return gen(static_cast<std::size_t>(i - 1), power);
}

const GradedPolynomial& DualSteenrod::antipode(int i) const
{
    return antipode_.at(static_cast<std::size_t>(i));
}

const GradedPolynomial& DualSteenrod::inverse_component(int n) const
{
    require_range(n, "inverse series");
    return inverse_.at(static_cast<std::size_t>(n));
}

GradedPolynomial DualSteenrod::conjugate_rule(int s, int i)
{
    const int period = 1 << i;
    if (s < period - 1)
        return GradedPolynomial(ring());
    const int r = s % period;
    if (r != 0 && r != period - 1)
        return GradedPolynomial(ring());
    // Q^t xi1 is the degree t+1 part of the inverse series
    return inverse_component(s + period - 1);
}

GradedPolynomial DualSteenrod::generator_route(int s, int i)
{
    GradedPolynomial rest = xi(i) + antipode(i);
    return conjugate_rule(s, i) + Q(s, rest);
}

GradedPolynomial DualSteenrod::Q_generator(int s, std::size_t index)
{
    const int i = static_cast<int>(index) + 1;
    if (i == 1)
        return inverse_component(s + 1);
    return generator_route(s, i);
}

// H_*MU

MUHomology::MUHomology(int max_degree)
    : DLModel("h-mu", b_ring(max_degree / 2), max_degree), generator_count_(max_degree / 2)
{
    if (generator_count_ < 1)
        throw std::invalid_argument("h-mu: max degree too small");
    inverse_.push_back(GradedPolynomial::one(ring()));
    for (int n = 1; n <= max_degree; ++n) {
        GradedPolynomial c(ring());
        if (n % 2 == 0)
            for (int i = 1; 2 * i <= n; ++i)
                c += b(i) * inverse_[static_cast<std::size_t>(n - 2 * i)];
        inverse_.push_back(std::move(c));
    }
}

GradedPolynomial MUHomology::b(int i, int power) const
{
    if (i == 0)
        return GradedPolynomial::one(ring());
    if (i < 0 || i > generator_count_)
        throw std::out_of_range("h-mu: no b" + std::to_string(i));
    return gen(static_cast<std::size_t>(i - 1), power);
}

const GradedPolynomial& MUHomology::inverse_component(int n) const
{
    require_range(n, "inverse series");
    return inverse_.at(static_cast<std::size_t>(n));
}

GradedPolynomial MUHomology::numerator_component(int k, int n) const
{
    require_range(2 * (n + k), "numerator");
    GradedPolynomial out(ring());
    for (int u = 0; u <= k; ++u)
        if (binomial_mod2_signed(n - k + u - 1, u))
            out += b(n + u) * b(k - u);
    return out;
}

GradedPolynomial MUHomology::Q_generator(int s, std::size_t index)
{
    const int k = static_cast<int>(index) + 1;
    const int target = 2 * k + s;
    require_range(target, "Q" + std::to_string(s) + " b" + std::to_string(k));
    GradedPolynomial out(ring());
    for (int n = k; 2 * (n + k) <= target; ++n)
        out += numerator_component(k, n) * inverse_component(target - 2 * (n + k));
    // the whole series is even, so an odd total degree can only give 0
    if (target % 2 && !out.is_zero())
        throw std::logic_error("h-mu: odd component of the generating function");
    return out;
}

GradedPolynomial map_p(const MUHomology& mu, const DualSteenrod& a, const GradedPolynomial& e)
{
    std::vector<GradedPolynomial> images;
    for (std::size_t i = 0; i < mu.ring()->generators().size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        int k = 0;
        while ((1 << k) - 1 < n)
            ++k;
        if ((1 << k) - 1 == n && k <= static_cast<int>(a.ring()->generators().size()))
            images.push_back(a.xi(k, 2));
        else
            images.push_back(GradedPolynomial(a.ring()));
    }
    return e.substitute(images);
}

CompatibilityReport check_dl_compatibility(MUHomology& mu, DualSteenrod& a, int max_s, int max_degree)
{
    CompatibilityReport rep;
    for (int d = 1; d <= max_degree; ++d)
        for (const auto& m : monomials_of_degree(*mu.ring(), d))
            for (int s = 0; s <= max_s; ++s) {
                const auto u = GradedPolynomial::monomial(mu.ring(), m);
                const auto lhs = map_p(mu, a, mu.Q(s, m));
                const auto rhs = a.Q(s, map_p(mu, a, u));
                ++rep.checked;
                if (!(lhs == rhs) && rep.ok) {
                    rep.ok = false;
                    rep.first_failure = "Q" + std::to_string(s) + " " + u.to_string() + ": p(Qu) = " +
                                        lhs.to_string() + ", Q p(u) = " + rhs.to_string();
                }
            }
    return rep;
}

namespace {

void check_assignment(const DLModel& model, const dl::Context& ctx,
                      const std::map<std::string, GradedPolynomial>& assignment)
{
    for (const auto& [name, value] : assignment) {
        if (!value.ring()->compatible_with(*model.ring()))
            throw std::invalid_argument(model.name() + ": value of " + name + " is in another ring");
        if (value.is_zero())
            continue;
        const int want = ctx.degree(ctx.require(name));
        auto got = value.degree();
        if (!got || *got != want)
            throw dl::DegreeError(model.name() + ": value of " + name + " is not homogeneous of degree " +
                                  std::to_string(want));
    }
}

const GradedPolynomial& lookup(const std::map<std::string, GradedPolynomial>& assignment, const std::string& name)
{
    auto it = assignment.find(name);
    if (it == assignment.end())
        throw std::invalid_argument("no value for generator '" + name + "'");
    return it->second;
}

GradedPolynomial eval(DLModel& model, const dl::Expr& e, const std::map<std::string, GradedPolynomial>& assignment)
{
    using K = dl::Expr::Kind;
    switch (e.kind) {
    case K::Constant:
        return GradedPolynomial::constant(model.ring(), e.value);
    case K::Generator:
        return lookup(assignment, e.name);
    case K::Operation:
        return model.Q(e.value, eval(model, *e.children.front(), assignment));
    case K::Power:
        return eval(model, *e.children.front(), assignment).pow(e.value);
    case K::Sum: {
        GradedPolynomial out(model.ring());
        for (const auto& c : e.children)
            out += eval(model, *c, assignment);
        return out;
    }
    case K::Product: {
        GradedPolynomial out = GradedPolynomial::one(model.ring());
        for (const auto& c : e.children)
            out *= eval(model, *c, assignment);
        return out;
    }
    }
    return GradedPolynomial(model.ring());
}

}  // namespace

GradedPolynomial evaluate_in_model(DLModel& model, const dl::Expr& e, const dl::Context& ctx,
                                   const std::map<std::string, GradedPolynomial>& assignment)
{
    check_assignment(model, ctx, assignment);
    dl::expression_degree(e, ctx);
    return eval(model, e, assignment);
}

GradedPolynomial evaluate_in_model(DLModel& model, const dl::DLPolynomial& p, const dl::Context& ctx,
                                   const std::map<std::string, GradedPolynomial>& assignment)
{
    check_assignment(model, ctx, assignment);
    GradedPolynomial out(model.ring());
    for (const auto& m : p.terms()) {
        GradedPolynomial term = GradedPolynomial::one(model.ring());
        for (const auto& [w, exp] : m.factors()) {
            GradedPolynomial v = lookup(assignment, ctx.at(w.gen).name);
            for (auto it = w.ops.rbegin(); it != w.ops.rend(); ++it)
                v = model.Q(*it, v);
            term *= v.pow(exp);
        }
        out += term;
    }
    return out;
}

IndeterminacyScan indeterminacy_scan(DLModel& model, const dl::SubstitutionMap& relation,
                                     const std::map<std::string, GradedPolynomial>& base_values,
                                     int target_degree)
{
    std::set<std::string> base;
    for (const auto& [name, v] : base_values)
        base.insert(name);
    const auto sigma = dl::suspend(relation, base);

    std::string source;
    for (const auto& e : sigma.source().entries())
        if (!base.count(e.name)) {
            if (!source.empty())
                throw std::invalid_argument("indeterminacy scan: relation has more than one free generator");
            source = e.name;
        }
    if (source.empty())
        throw std::invalid_argument("indeterminacy scan: relation has no free generator");

    IndeterminacyScan scan;
    scan.target_degree = target_degree;
    const auto image = sigma.image(source);
    scan.suspended_image = dl::print(*image);
    const auto& tctx = sigma.target();
    auto deg = dl::expression_degree(*image, tctx);
    scan.degree_matches = sigma.source().degree(sigma.source().require(source)) == target_degree &&
                          (!deg || *deg == target_degree);

    std::set<std::string> shifted;
    for (const auto& g : dl::generator_names(*image))
        if (!base.count(g))
            shifted.insert(g);

    for (const auto& g : shifted) {
        SourceScan src;
        src.generator = g;
        src.degree = tctx.degree(tctx.require(g));
        src.indecomposables = indecomposable_dimension(model.ring()->generators(), src.degree);
        const auto basis = monomials_of_degree(*model.ring(), src.degree);
        src.basis_size = static_cast<int>(basis.size());
        for (const auto& m : basis) {
            std::map<std::string, GradedPolynomial> values = base_values;
            for (const auto& h : shifted)
                values.emplace(h, GradedPolynomial(model.ring()));
            values.insert_or_assign(g, GradedPolynomial::monomial(model.ring(), m));
            const auto v = evaluate_in_model(model, *image, tctx, values);
            if (!v.is_decomposable() && src.all_decomposable) {
                src.all_decomposable = false;
                src.witness = g + " = " + monomial_to_string(*model.ring(), m) + " gives " + v.to_string();
            }
        }
        scan.all_decomposable = scan.all_decomposable && src.all_decomposable;
        scan.sources.push_back(std::move(src));
    }
    return scan;
}

}  // namespace dlforge::models
