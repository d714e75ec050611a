#include "dlforge/algebra/series.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dlforge {

namespace {

std::optional<int> min_bound(std::optional<int> a, std::optional<int> b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

}  // namespace

TruncatedSeries::TruncatedSeries(RingPtr coefficients, std::vector<SeriesVariable> vars, Truncation truncation)
    : coeffs_(std::move(coefficients)), vars_(std::move(vars)), trunc_(truncation)
{
    if (!coeffs_)
        throw std::invalid_argument("TruncatedSeries: null coefficient ring");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].weight <= 0)
            throw std::invalid_argument("series variable '" + vars_[i].name + "' needs positive weight");
        for (std::size_t j = 0; j < i; ++j)
            if (vars_[j].name == vars_[i].name)
                throw std::invalid_argument("duplicate series variable '" + vars_[i].name + "'");
    }
}

TruncatedSeries TruncatedSeries::constant(RingPtr coefficients, const GradedPolynomial& c,
                                          std::vector<SeriesVariable> vars, Truncation truncation)
{
    TruncatedSeries s(std::move(coefficients), std::move(vars), truncation);
    s.add_term(Exponents(s.vars_.size(), 0), c);
    return s;
}

TruncatedSeries TruncatedSeries::variable(RingPtr coefficients, std::vector<SeriesVariable> vars,
                                          const std::string& name, Truncation truncation)
{
    TruncatedSeries s(coefficients, std::move(vars), truncation);
    auto idx = s.variable_index(name);
    if (!idx)
        throw std::invalid_argument("unknown series variable '" + name + "'");
    Exponents e(s.vars_.size(), 0);
    e[*idx] = 1;
    s.add_term(e, GradedPolynomial::one(coefficients));
    return s;
}

std::optional<std::size_t> TruncatedSeries::variable_index(const std::string& name) const
{
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name)
            return i;
    return std::nullopt;
}

int TruncatedSeries::weighted(const Exponents& e) const
{
    int w = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        w += e[i] * vars_[i].weight;
    return w;
}

bool TruncatedSeries::keeps(const Exponents& e, const GradedPolynomial& c) const
{
    if (c.is_zero())
        return false;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (vars_[i].bound && e[i] >= *vars_[i].bound)
            return false;
    if (trunc_.total_bound && weighted(e) >= *trunc_.total_bound)
        return false;
    return true;
}

GradedPolynomial TruncatedSeries::prune(const Exponents&, const GradedPolynomial& c) const
{
    if (trunc_.coefficient_degree)
        return c.truncated(*trunc_.coefficient_degree);
    return c;
}

void TruncatedSeries::add_term(const Exponents& e, const GradedPolynomial& c)
{
    if (e.size() != vars_.size())
        throw std::invalid_argument("exponent vector does not match series variables");
    GradedPolynomial pc = prune(e, c);
    if (!keeps(e, pc))
        return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, std::move(pc));
        return;
    }
    it->second += pc;
    if (it->second.is_zero())
        terms_.erase(it);
}

GradedPolynomial TruncatedSeries::coefficient(const std::map<std::string, int>& exps) const
{
    Exponents e(vars_.size(), 0);
    for (const auto& [name, p] : exps) {
        auto idx = variable_index(name);
        if (!idx) {
            if (p != 0)
                return GradedPolynomial::zero(coeffs_);
            continue;
        }
        e[*idx] = p;
    }
    auto it = terms_.find(e);
    return it == terms_.end() ? GradedPolynomial::zero(coeffs_) : it->second;
}

TruncatedSeries TruncatedSeries::extract(const std::string& var, int power) const
{
    auto idx = variable_index(var);
    if (!idx)
        throw std::invalid_argument("unknown series variable '" + var + "'");
    std::vector<SeriesVariable> rest;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (i != *idx)
            rest.push_back(vars_[i]);
    Truncation t = trunc_;
    if (t.total_bound)
        t.total_bound = *t.total_bound - power * vars_[*idx].weight;
    TruncatedSeries out(coeffs_, rest, t);
    for (const auto& [e, c] : terms_) {
        if (e[*idx] != power)
            continue;
        Exponents r;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (i != *idx)
                r.push_back(e[i]);
        out.add_term(r, c);
    }
    return out;
}

std::pair<std::vector<SeriesVariable>, Truncation> TruncatedSeries::unify(const TruncatedSeries& a,
                                                                          const TruncatedSeries& b)
{
    if (!a.coeffs_->compatible_with(*b.coeffs_))
        throw std::invalid_argument("incompatible truncation geometry: coefficient rings " + a.coeffs_->name() +
                                    " and " + b.coeffs_->name());
    std::vector<SeriesVariable> vars = a.vars_;
    for (const auto& v : b.vars_) {
        auto it = std::find_if(vars.begin(), vars.end(), [&](const SeriesVariable& w) { return w.name == v.name; });
        if (it == vars.end()) {
            vars.push_back(v);
            continue;
        }
        if (it->weight != v.weight)
            throw std::invalid_argument("incompatible truncation geometry: variable '" + v.name +
                                        "' has two weights");
        it->bound = min_bound(it->bound, v.bound);
    }
    Truncation t;
    t.total_bound = min_bound(a.trunc_.total_bound, b.trunc_.total_bound);
    t.coefficient_degree = min_bound(a.trunc_.coefficient_degree, b.trunc_.coefficient_degree);
    return {vars, t};
}

TruncatedSeries TruncatedSeries::reindexed(const std::vector<SeriesVariable>& vars, const Truncation& trunc) const
{
    std::vector<std::size_t> where(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find_if(vars.begin(), vars.end(), [&](const SeriesVariable& w) { return w.name == vars_[i].name; });
        if (it == vars.end())
            throw std::logic_error("reindexed: variable dropped");
        where[i] = static_cast<std::size_t>(it - vars.begin());
    }
    TruncatedSeries out(coeffs_, vars, trunc);
    for (const auto& [e, c] : terms_) {
        Exponents r(vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i)
            r[where[i]] = e[i];
        out.add_term(r, c);
    }
    return out;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& other) const
{
    auto [vars, t] = unify(*this, other);
    TruncatedSeries out = reindexed(vars, t);
    TruncatedSeries rhs = other.reindexed(vars, t);
    for (const auto& [e, c] : rhs.terms_)
        out.add_term(e, c);
    return out;
}

TruncatedSeries TruncatedSeries::operator-() const
{
    return scaled(Rational(-1));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& other) const
{
    return *this + (-other);
}

TruncatedSeries TruncatedSeries::scaled(const Rational& c) const
{
    TruncatedSeries out(coeffs_, vars_, trunc_);
    for (const auto& [e, p] : terms_)
        out.add_term(e, p.scaled(c));
    return out;
}

TruncatedSeries TruncatedSeries::scaled(const GradedPolynomial& c) const
{
    TruncatedSeries out(coeffs_, vars_, trunc_);
    for (const auto& [e, p] : terms_)
        out.add_term(e, trunc_.coefficient_degree ? p.mul_truncated(c, *trunc_.coefficient_degree) : p * c);
    return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& other) const
{
    auto [vars, t] = unify(*this, other);
    TruncatedSeries a = reindexed(vars, t);
    TruncatedSeries b = other.reindexed(vars, t);
    TruncatedSeries out(coeffs_, vars, t);
    Exponents e(vars.size());
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            // Cheap geometric rejection before multiplying coefficients.
            bool dropped = false;
            for (std::size_t i = 0; i < e.size() && !dropped; ++i)
                dropped = vars[i].bound && e[i] >= *vars[i].bound;
            if (dropped || (t.total_bound && out.weighted(e) >= *t.total_bound))
                continue;
            out.add_term(e, t.coefficient_degree ? ca.mul_truncated(cb, *t.coefficient_degree) : ca * cb);
        }
    }
    return out;
}

TruncatedSeries TruncatedSeries::pow(int e) const
{
    if (e < 0)
        throw std::invalid_argument("negative power of a series; use inverse()");
    TruncatedSeries result = constant(coeffs_, GradedPolynomial::one(coeffs_), vars_, trunc_);
    TruncatedSeries base = *this;
    while (e > 0) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return result;
}

bool TruncatedSeries::operator==(const TruncatedSeries& other) const
{
    auto [vars, t] = unify(*this, other);
    return reindexed(vars, t).terms_ == other.reindexed(vars, t).terms_;
}

TruncatedSeries TruncatedSeries::truncated(const std::map<std::string, int>& var_bounds, Truncation extra) const
{
    std::vector<SeriesVariable> vars = vars_;
    for (const auto& [name, b] : var_bounds) {
        auto it = std::find_if(vars.begin(), vars.end(), [&](const SeriesVariable& w) { return w.name == name; });
        if (it == vars.end())
            throw std::invalid_argument("unknown series variable '" + name + "'");
        it->bound = min_bound(it->bound, b);
    }
    Truncation t;
    t.total_bound = min_bound(trunc_.total_bound, extra.total_bound);
    t.coefficient_degree = min_bound(trunc_.coefficient_degree, extra.coefficient_degree);
    return reindexed(vars, t);
}

std::optional<int> TruncatedSeries::order() const
{
    std::optional<int> best;
    for (const auto& [e, c] : terms_) {
        int w = weighted(e);
        if (!best || w < *best)
            best = w;
    }
    return best;
}

TruncatedSeries TruncatedSeries::inverse() const
{
    Exponents zero(vars_.size(), 0);
    auto it = terms_.find(zero);
    Rational c0 = it == terms_.end() ? Rational(0) : it->second.constant_term();
    if (c0 == 0)
        throw std::domain_error("series_invert: constant term is not a unit");
    Rational inv_c0 = coeffs_->reduce_scalar(Rational(1) / c0);

    TruncatedSeries one = constant(coeffs_, GradedPolynomial::one(coeffs_), vars_, trunc_);
    // a = c0 (1 - u)  =>  a^{-1} = c0^{-1} (1 + u + u^2 + ...)
    TruncatedSeries u = one - scaled(inv_c0);

    int cap = 64;
    for (const auto& v : vars_)
        if (v.bound)
            cap += *v.bound;
    if (trunc_.total_bound)
        cap += *trunc_.total_bound;
    if (trunc_.coefficient_degree)
        cap += *trunc_.coefficient_degree;

    TruncatedSeries acc = one;
    TruncatedSeries power = one;
    for (int k = 1;; ++k) {
        power = power * u;
        if (power.is_zero())
            break;
        if (k > cap)
            throw std::domain_error("series_invert: constant term is not a unit (series does not converge)");
        acc = acc + power;
    }
    return acc.scaled(inv_c0);
}

TruncatedSeries TruncatedSeries::compose(const std::string& var, const TruncatedSeries& inner) const
{
    auto idx = variable_index(var);
    if (!idx)
        throw std::invalid_argument("compose: outer series has no variable '" + var + "'");
    if (!inner.coefficient({}).is_zero())
        throw std::domain_error("compose: inner series has nonzero constant term");

    // Outer without the substituted variable, as the frame for the result.
    std::vector<SeriesVariable> rest;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (i != *idx)
            rest.push_back(vars_[i]);
    Truncation rest_trunc = trunc_;
    TruncatedSeries frame(coeffs_, rest, rest_trunc);
    auto [vars, t] = unify(frame, inner);

    std::optional<int> reach = vars_[*idx].bound;
    if (trunc_.total_bound) {
        int w = vars_[*idx].weight;
        reach = min_bound(reach, (*trunc_.total_bound + w - 1) / w);
    }
    // outer terms at var^reach and beyond are unknown; their images only need a
    // total bound when no per-variable bound already kills them
    auto o = inner.order();
    if (reach && o) {
        bool killed = false;
        for (const auto& v : vars) {
            if (!v.bound)
                continue;
            auto vi = inner.variable_index(v.name);
            if (!vi)
                continue;
            int low = std::numeric_limits<int>::max();
            for (const auto& [e, c] : inner.terms_)
                low = std::min(low, e[*vi]);
            if (low > 0 && static_cast<long>(low) * *reach >= *v.bound)
                killed = true;
        }
        if (!killed)
            t.total_bound = min_bound(t.total_bound, *reach * *o);
    }

    // Group the outer series by the exponent of `var`.
    std::map<int, TruncatedSeries> by_power;
    for (const auto& [e, c] : terms_) {
        Exponents r;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (i != *idx)
                r.push_back(e[i]);
        auto [pos, inserted] = by_power.try_emplace(e[*idx], coeffs_, rest, Truncation{});
        pos->second.add_term(r, c);
    }

    TruncatedSeries result(coeffs_, vars, t);
    TruncatedSeries in = inner.reindexed(vars, t);
    TruncatedSeries power = constant(coeffs_, GradedPolynomial::one(coeffs_), vars, t);
    int current = 0;
    for (const auto& [p, coeff] : by_power) {
        while (current < p) {
            power = power * in;
            ++current;
        }
        if (power.is_zero())
            break;
        result = result + coeff.reindexed(vars, t) * power;
    }
    return result;
}

TruncatedSeries TruncatedSeries::compositional_inverse(const std::string& var) const
{
    auto idx = variable_index(var);
    if (!idx)
        throw std::invalid_argument("compositional inverse: no variable '" + var + "'");
    if (!vars_[*idx].bound && !trunc_.total_bound)
        throw std::invalid_argument("compositional inverse needs a truncation bound on '" + var + "'");
    for (const auto& [e, c] : terms_)
        if (e[*idx] == 0)
            throw std::domain_error("compositional inverse: series has terms free of '" + var + "'");

    TruncatedSeries linear = extract(var, 1);
    TruncatedSeries linear_inv = linear;
    try {
        linear_inv = linear.inverse();
    }
    catch (const std::domain_error&) {
        throw std::domain_error("compositional inverse: linear coefficient is not a unit");
    }
    TruncatedSeries v = variable(coeffs_, vars_, var, trunc_);
    TruncatedSeries b = v * linear_inv.reindexed(vars_, trunc_);

    int cap = 8 + vars_[*idx].bound.value_or(0) + trunc_.total_bound.value_or(0);
    for (int iter = 0; iter < cap; ++iter) {
        TruncatedSeries back = compose(var, b);
        TruncatedSeries err = v - back;
        if (err.is_zero())
            return b.truncated({}, {});
        b = b + err * linear_inv;
    }
    throw std::domain_error("compositional inverse did not converge");
}

TruncatedSeries TruncatedSeries::derivative(const std::string& var) const
{
    auto idx = variable_index(var);
    if (!idx)
        throw std::invalid_argument("derivative: no variable '" + var + "'");
    std::vector<SeriesVariable> vars = vars_;
    if (vars[*idx].bound)
        vars[*idx].bound = std::max(0, *vars[*idx].bound - 1);
    Truncation t = trunc_;
    if (t.total_bound)
        t.total_bound = *t.total_bound - vars[*idx].weight;
    TruncatedSeries out(coeffs_, vars, t);
    for (const auto& [e, c] : terms_) {
        if (e[*idx] == 0)
            continue;
        Exponents r = e;
        r[*idx] -= 1;
        out.add_term(r, c.scaled(e[*idx]));
    }
    return out;
}

TruncatedSeries TruncatedSeries::divide_by_power(const std::string& var, int power) const
{
    auto idx = variable_index(var);
    if (!idx)
        throw std::invalid_argument("divide_by_power: no variable '" + var + "'");
    std::vector<SeriesVariable> vars = vars_;
    if (vars[*idx].bound)
        vars[*idx].bound = *vars[*idx].bound - power;
    Truncation t = trunc_;
    if (t.total_bound)
        t.total_bound = *t.total_bound - power * vars[*idx].weight;
    TruncatedSeries out(coeffs_, vars, t);
    for (const auto& [e, c] : terms_) {
        if (e[*idx] < power)
            throw std::domain_error("exact division by " + var + "^" + std::to_string(power) + " leaves a remainder");
        Exponents r = e;
        r[*idx] -= power;
        out.add_term(r, c);
    }
    return out;
}

TruncatedSeries TruncatedSeries::multiply_by_power(const std::string& var, int power) const
{
    auto idx = variable_index(var);
    if (!idx)
        throw std::invalid_argument("multiply_by_power: no variable '" + var + "'");
    std::vector<SeriesVariable> vars = vars_;
    if (vars[*idx].bound)
        vars[*idx].bound = *vars[*idx].bound + power;
    Truncation t = trunc_;
    if (t.total_bound)
        t.total_bound = *t.total_bound + power * vars[*idx].weight;
    TruncatedSeries out(coeffs_, vars, t);
    for (const auto& [e, c] : terms_) {
        Exponents r = e;
        r[*idx] += power;
        out.add_term(r, c);
    }
    return out;
}

bool TruncatedSeries::is_integral() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_integral(); });
}

void TruncatedSeries::require_integral(const std::string& what) const
{
    if (!is_integral())
        throw IntegralityError(what + " is not integral: " + to_string());
}

std::string TruncatedSeries::to_string() const
{
    if (terms_.empty())
        return "0";
    std::vector<std::pair<Exponents, const GradedPolynomial*>> sorted;
    for (const auto& [e, c] : terms_)
        sorted.emplace_back(e, &c);
    std::stable_sort(sorted.begin(), sorted.end(), [this](const auto& a, const auto& b) {
        int wa = weighted(a.first), wb = weighted(b.first);
        if (wa != wb)
            return wa < wb;
        return a.first > b.first;
    });
    std::string out;
    for (const auto& [e, c] : sorted) {
        std::string mon;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (!mon.empty())
                mon += ' ';
            mon += vars_[i].name;
            if (e[i] > 1)
                mon += '^' + std::to_string(e[i]);
        }
        std::string coeff = c->to_string();
        bool compound = c->size() > 1;
        if (!out.empty())
            out += " + ";
        if (mon.empty())
            out += compound ? "(" + coeff + ")" : coeff;
        else if (coeff == "1")
            out += mon;
        else
            out += (compound ? "(" + coeff + ")" : coeff) + " " + mon;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s)
{
    return os << s.to_string();
}

}  // namespace dlforge
