#include "dlforge/dl/normalizer.hpp"
#include "dlforge/algebra/binomial.hpp"
#include "dlforge/dl/parser.hpp"

#include <algorithm>
#include <functional>

namespace dlforge::dl {

int Word::degree(const Context& ctx) const
{
    int d = ctx.degree(gen);
    for (int s : ops)
        d += s;
    return d;
}

bool Word::is_admissible() const
{
    for (std::size_t i = 0; i + 1 < ops.size(); ++i)
        if (ops[i] > 2 * ops[i + 1])
            return false;
    return true;
}

bool Word::has_strict_excess(const Context& ctx) const
{
    int below = ctx.degree(gen);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (*it <= below)
            return false;
        below += *it;
    }
    return true;
}

std::strong_ordering Word::operator<=>(const Word& o) const
{
    if (auto c = ops.size() <=> o.ops.size(); c != 0)
        return c;
    if (auto c = ops <=> o.ops; c != 0)
        return c;
    return gen <=> o.gen;
}

std::string word_to_string(const Word& w, const Context& ctx)
{
    std::string out;
    for (int s : w.ops)
        out += "Q" + std::to_string(s) + " ";
    return out + ctx.at(w.gen).name;
}

DLMonomial DLMonomial::of(const Word& w, int exponent)
{
    DLMonomial m;
    if (exponent > 0)
        m.factors_.push_back({w, exponent});
    return m;
}

int DLMonomial::degree(const Context& ctx) const
{
    int d = 0;
    for (const auto& [w, e] : factors_)
        d += w.degree(ctx) * e;
    return d;
}

int DLMonomial::word_length() const
{
    int n = 0;
    for (const auto& f : factors_)
        n += f.second;
    return n;
}

bool DLMonomial::is_square() const
{
    return !factors_.empty() && std::all_of(factors_.begin(), factors_.end(), [](const auto& f) { return f.second % 2 == 0; });
}

DLMonomial DLMonomial::square_root() const
{
    DLMonomial r;
    for (const auto& [w, e] : factors_) {
        if (e % 2 != 0)
            throw std::logic_error("square_root of a non-square monomial");
        r.factors_.push_back({w, e / 2});
    }
    return r;
}

DLMonomial DLMonomial::operator*(const DLMonomial& o) const
{
    DLMonomial r;
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() || b != o.factors_.end()) {
        if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first))
            r.factors_.push_back(*a++);
        else if (a == factors_.end() || b->first < a->first)
            r.factors_.push_back(*b++);
        else {
            r.factors_.push_back({a->first, a->second + b->second});
            ++a;
            ++b;
        }
    }
    return r;
}

DLMonomial DLMonomial::pow(int e) const
{
    if (e < 0)
        throw std::invalid_argument("negative exponent");
    if (e == 0)
        return {};
    DLMonomial r = *this;
    for (auto& f : r.factors_)
        f.second *= e;
    return r;
}

bool DLMonomial::operator<(const DLMonomial& o) const
{
    auto a = factors_.rbegin(), b = o.factors_.rbegin();
    for (; a != factors_.rend() && b != o.factors_.rend(); ++a, ++b) {
        if (a->first != b->first)
            return b->first < a->first;
        if (a->second != b->second)
            return a->second > b->second;
    }
    return a != factors_.rend() && b == o.factors_.rend();
}

std::string DLMonomial::to_string(const Context& ctx) const
{
    if (factors_.empty())
        return "1";
    std::string out;
    for (const auto& [w, e] : factors_) {
        if (!out.empty())
            out += ' ';
        std::string body = word_to_string(w, ctx);
        if (e == 1)
            out += body;
        else if (w.ops.empty())
            out += body + "^" + std::to_string(e);
        else
            out += "(" + body + ")^" + std::to_string(e);
    }
    return out;
}

DLPolynomial DLPolynomial::one()
{
    return of(DLMonomial{});
}

DLPolynomial DLPolynomial::of(const DLMonomial& m)
{
    DLPolynomial p;
    p.terms_.insert(m);
    return p;
}

DLPolynomial DLPolynomial::generator(int gen)
{
    return of(DLMonomial::of(Word{{}, gen}));
}

DLPolynomial& DLPolynomial::operator+=(const DLMonomial& m)
{
    auto [it, inserted] = terms_.insert(m);
    if (!inserted)
        terms_.erase(it);
    return *this;
}

DLPolynomial& DLPolynomial::operator+=(const DLPolynomial& o)
{
    for (const auto& m : o.terms_)
        *this += m;
    return *this;
}

DLPolynomial DLPolynomial::operator+(const DLPolynomial& o) const
{
    DLPolynomial r = *this;
    r += o;
    return r;
}

DLPolynomial DLPolynomial::operator*(const DLMonomial& m) const
{
    DLPolynomial r;
    for (const auto& t : terms_)
        r += t * m;
    return r;
}

DLPolynomial DLPolynomial::operator*(const DLPolynomial& o) const
{
    DLPolynomial r;
    for (const auto& a : terms_)
        for (const auto& b : o.terms_)
            r += a * b;
    return r;
}

DLPolynomial DLPolynomial::pow(int e) const
{
    if (e < 0)
        throw std::invalid_argument("negative exponent");
    DLPolynomial result = one();
    DLPolynomial base = *this;
    while (e > 0) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e > 0)
            base = base * base;
    }
    return result;
}

std::optional<int> DLPolynomial::degree(const Context& ctx) const
{
    if (terms_.empty())
        return std::nullopt;
    int d = terms_.begin()->degree(ctx);
    for (const auto& m : terms_)
        if (m.degree(ctx) != d)
            throw DegreeError("polynomial is not homogeneous");
    return d;
}

bool DLPolynomial::is_homogeneous(const Context& ctx) const
{
    if (terms_.empty())
        return true;
    int d = terms_.begin()->degree(ctx);
    return std::all_of(terms_.begin(), terms_.end(), [&](const DLMonomial& m) { return m.degree(ctx) == d; });
}

DLPolynomial DLPolynomial::indecomposable_part() const
{
    DLPolynomial r;
    for (const auto& m : terms_)
        if (m.word_length() == 1)
            r += m;
    return r;
}

bool DLPolynomial::is_normal(const Context& ctx) const
{
    for (const auto& m : terms_)
        for (const auto& f : m.factors())
            if (!f.first.is_basis(ctx))
                return false;
    return true;
}

std::string DLPolynomial::to_string(const Context& ctx) const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& m : terms_) {
        if (!out.empty())
            out += " + ";
        out += m.to_string(ctx);
    }
    return out;
}

std::vector<AdemTerm> adem_step(int r, int s, std::optional<int> degree)
{
    if (r <= 2 * s)
        throw std::invalid_argument("adem_step: Q" + std::to_string(r) + " Q" + std::to_string(s) +
                                    " is already admissible");
    std::vector<AdemTerm> out;
    for (int i = (r + 1) / 2; i <= r - s - 1; ++i) {
        if (!binomial_mod2(i - s - 1, 2 * i - r))
            continue;
        int outer = r + s - i;
        if (degree) {
            if (i < *degree || outer < *degree + i)
                continue;
        }
        out.push_back({outer, i, 1});
    }
    return out;
}

bool en_level_less(const EnLevel& a, const EnLevel& b)
{
    if (a.level != b.level)
        return a.level < b.level;
    if (a.r != b.r)
        return a.r < b.r;
    return a.d < b.d;
}

namespace {

void merge(EnLevel& into, const EnLevel& from)
{
    if (en_level_less(into, from))
        into = from;
}

}  // namespace

Normalizer::Normalizer(Context ctx, NormalizerOptions options) : ctx_(std::move(ctx)), opts_(options) {}

std::size_t Normalizer::memo_size() const
{
    std::lock_guard lock(mutex_);
    return memo_.size();
}

std::uint64_t Normalizer::steps() const
{
    return steps_.load();
}

void Normalizer::tick()
{
    if (++steps_ > opts_.step_limit)
        throw std::runtime_error("normalizer step limit exceeded");
}

void Normalizer::record(EnLevel& best, int r, int d)
{
    EnLevel here{r - d + 2, r, d};
    if (opts_.strict_level && here.level > *opts_.strict_level)
        throw WindowError("Q" + std::to_string(r) + " on a class of degree " + std::to_string(d) + " needs E_" +
                          std::to_string(here.level) + ", outside the declared E_" +
                          std::to_string(*opts_.strict_level) + " window");
    merge(best, here);
}

DLPolynomial Normalizer::normalize(const Expr& e)
{
    return eval(e).first;
}

DLPolynomial Normalizer::normalize(const std::string& text)
{
    return normalize(*parse_expression(text, ctx_));
}

std::pair<DLPolynomial, EnLevel> Normalizer::normalize_traced(const Expr& e)
{
    return eval(e);
}

DLPolynomial Normalizer::apply(int s, const DLPolynomial& p)
{
    return apply_traced(s, p).first;
}

Normalizer::Result Normalizer::eval(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Constant:
        return {e.value % 2 ? DLPolynomial::one() : DLPolynomial{}, EnLevel{}};
    case Expr::Kind::Generator:
        return {DLPolynomial::generator(ctx_.require(e.name)), EnLevel{}};
    case Expr::Kind::Sum: {
        Result acc;
        for (const auto& c : e.children) {
            auto r = eval(*c);
            acc.first += r.first;
            merge(acc.second, r.second);
        }
        return acc;
    }
    case Expr::Kind::Product: {
        Result acc{DLPolynomial::one(), EnLevel{}};
        for (const auto& c : e.children) {
            auto r = eval(*c);
            acc.first = acc.first * r.first;
            merge(acc.second, r.second);
        }
        return acc;
    }
    case Expr::Kind::Power: {
        auto r = eval(*e.children.front());
        return {r.first.pow(e.value), r.second};
    }
    case Expr::Kind::Operation: {
        auto inner = eval(*e.children.front());
        auto r = apply_traced(e.value, inner.first);
        merge(r.second, inner.second);
        return r;
    }
    }
    return {};
}

Normalizer::Result Normalizer::apply_traced(int s, const DLPolynomial& p)
{
    Result acc;
    for (const auto& m : p.terms()) {
        auto r = apply_monomial(s, m);
        acc.first += r.first;
        merge(acc.second, r.second);
    }
    return acc;
}

Normalizer::Result Normalizer::apply_monomial(int s, const DLMonomial& m)
{
    if (s < 0)
        throw std::invalid_argument("negative Dyer-Lashof superscript");
    if (opts_.memoize) {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find({s, m}); it != memo_.end())
            return it->second;
    }
    Result r = compute_monomial(s, m);
    if (opts_.memoize) {
        std::lock_guard lock(mutex_);
        memo_.emplace(std::make_pair(s, m), r);
    }
    return r;
}

Normalizer::Result Normalizer::compute_monomial(int s, const DLMonomial& m)
{
    tick();
    const int d = m.degree(ctx_);
    Result out;
    record(out.second, s, d);
    if (m.is_one()) {
        if (s == 0)
            out.first = DLPolynomial::one();
        return out;
    }
    if (s < d)
        return out;
    if (s == d) {
        out.first = DLPolynomial::of(m * m);
        return out;
    }
    const auto& fs = m.factors();
    if (fs.size() == 1 && fs.front().second == 1) {
        auto r = apply_word(s, fs.front().first);
        merge(r.second, out.second);
        return r;
    }
    if (m.is_square()) {
        if (s % 2 != 0)
            return out;
        auto r = apply_monomial(s / 2, m.square_root());
        out.first = r.first.pow(2);
        merge(out.second, r.second);
        return out;
    }
    // Cartan on u * v with u the first word
    DLMonomial u = DLMonomial::of(fs.front().first);
    DLMonomial v;
    {
        std::vector<std::pair<Word, int>> rest(fs.begin(), fs.end());
        DLMonomial acc;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            int e = rest[i].second - (i == 0 ? 1 : 0);
            if (e > 0)
                acc = acc * DLMonomial::of(rest[i].first, e);
        }
        v = acc;
    }
    const int du = u.degree(ctx_), dv = v.degree(ctx_);
    for (int p = du; p <= s - dv; ++p) {
        auto a = apply_monomial(p, u);
        if (a.first.is_zero()) {
            merge(out.second, a.second);
            continue;
        }
        auto b = apply_monomial(s - p, v);
        out.first += a.first * b.first;
        merge(out.second, a.second);
        merge(out.second, b.second);
    }
    return out;
}

Normalizer::Result Normalizer::apply_word(int s, const Word& w)
{
    Result out;
    if (w.ops.empty() || s <= 2 * w.ops.front()) {
        Word nw = w;
        nw.ops.insert(nw.ops.begin(), s);
        out.first = DLPolynomial::of(DLMonomial::of(nw));
        return out;
    }
    const int r = w.ops.front();
    Word below{std::vector<int>(w.ops.begin() + 1, w.ops.end()), w.gen};
    const DLMonomial below_m = DLMonomial::of(below);
    const int before = w.degree(ctx_) + s;
    for (const auto& t : adem_step(s, r)) {
        auto inner = apply_monomial(t.inner, below_m);
        merge(out.second, inner.second);
        if (inner.first.is_zero())
            continue;
        auto outer = apply_traced(t.outer, inner.first);
        merge(out.second, outer.second);
        if (auto d = outer.first.degree(ctx_); d && *d != before)
            throw std::logic_error("Adem rewrite changed degree");
        out.first += outer.first;
    }
    return out;
}

IdentityCheck verify_identity(Normalizer& n, const Expr& lhs, const Expr& rhs)
{
    auto dl = expression_degree(lhs, n.context());
    auto dr = expression_degree(rhs, n.context());
    if (dl && dr && *dl != *dr)
        throw DegreeError("identity sides have degrees " + std::to_string(*dl) + " and " + std::to_string(*dr));
    DLPolynomial residual = n.normalize(lhs) + n.normalize(rhs);
    return {residual.is_zero(), residual};
}

IdentityCheck verify_identity(Normalizer& n, const std::string& lhs, const std::string& rhs)
{
    return verify_identity(n, *parse_expression(lhs, n.context()), *parse_expression(rhs, n.context()));
}

EnLevel min_en_level(Normalizer& n, const Expr& e)
{
    return n.normalize_traced(e).second;
}

// ---- raw tree rewriter ----

namespace {

// s < 0: a bare generator; otherwise Q^s applied to the product `inner`.
struct RFactor {
    int s = -1;
    int gen = 0;
    std::vector<RFactor> inner;
};

using RMono = std::vector<RFactor>;

int compare(const RFactor& a, const RFactor& b);

int compare(const RMono& a, const RMono& b)
{
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (int c = compare(a[i], b[i]); c != 0)
            return c;
    return a.size() < b.size() ? -1 : a.size() > b.size() ? 1 : 0;
}

int compare(const RFactor& a, const RFactor& b)
{
    if (a.s != b.s)
        return a.s < b.s ? -1 : 1;
    if (a.s < 0)
        return a.gen < b.gen ? -1 : a.gen > b.gen ? 1 : 0;
    return compare(a.inner, b.inner);
}

struct RMonoLess {
    bool operator()(const RMono& a, const RMono& b) const { return compare(a, b) < 0; }
};

using RPoly = std::set<RMono, RMonoLess>;

void canonical(RMono& m)
{
    std::sort(m.begin(), m.end(), [](const RFactor& a, const RFactor& b) { return compare(a, b) < 0; });
}

RFactor make_op(int s, RMono inner)
{
    canonical(inner);
    return RFactor{s, 0, std::move(inner)};
}

void toggle(RPoly& p, RMono m)
{
    canonical(m);
    auto [it, inserted] = p.insert(std::move(m));
    if (!inserted)
        p.erase(it);
}

int degree(const RMono& m, const Context& ctx);

int degree(const RFactor& f, const Context& ctx)
{
    if (f.s < 0)
        return ctx.degree(f.gen);
    return f.s + degree(f.inner, ctx);
}

int degree(const RMono& m, const Context& ctx)
{
    int d = 0;
    for (const auto& f : m)
        d += degree(f, ctx);
    return d;
}

bool is_redex(const RFactor& f, const Context& ctx)
{
    if (f.s < 0)
        return false;
    if (f.inner.empty() || f.inner.size() >= 2)
        return true;
    if (f.s <= degree(f.inner, ctx))
        return true;
    const RFactor& g = f.inner.front();
    return g.s >= 0 && f.s > 2 * g.s;
}

void collect_redexes(const RMono& m, const Context& ctx, std::vector<int>& path, std::vector<std::vector<int>>& out)
{
    for (std::size_t k = 0; k < m.size(); ++k) {
        path.push_back(static_cast<int>(k));
        if (is_redex(m[k], ctx))
            out.push_back(path);
        if (m[k].s >= 0)
            collect_redexes(m[k].inner, ctx, path, out);
        path.pop_back();
    }
}

// The factor as a sum of products after one rule application.
std::vector<RMono> rewrite_factor(const RFactor& f, const Context& ctx)
{
    std::vector<RMono> out;
    if (f.inner.empty()) {
        if (f.s == 0)
            out.push_back({});
        return out;
    }
    const int d = degree(f.inner, ctx);
    if (f.s < d)
        return out;
    if (f.s == d) {
        RMono sq = f.inner;
        sq.insert(sq.end(), f.inner.begin(), f.inner.end());
        out.push_back(std::move(sq));
        return out;
    }
    if (f.inner.size() >= 2) {
        RMono u{f.inner.front()};
        RMono v(f.inner.begin() + 1, f.inner.end());
        for (int p = 0; p <= f.s; ++p)
            out.push_back({make_op(p, u), make_op(f.s - p, v)});
        return out;
    }
    const RFactor& g = f.inner.front();
    for (const auto& t : adem_step(f.s, g.s))
        out.push_back({make_op(t.outer, {make_op(t.inner, g.inner)})});
    return out;
}

std::vector<RMono> rewrite_at(const RMono& m, const std::vector<int>& path, std::size_t depth, const Context& ctx)
{
    const std::size_t k = static_cast<std::size_t>(path[depth]);
    std::vector<RMono> pieces;
    if (depth + 1 == path.size()) {
        pieces = rewrite_factor(m[k], ctx);
    }
    else {
        for (auto& inner : rewrite_at(m[k].inner, path, depth + 1, ctx))
            pieces.push_back({make_op(m[k].s, std::move(inner))});
    }
    std::vector<RMono> out;
    for (auto& piece : pieces) {
        RMono r;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (i != k)
                r.push_back(m[i]);
        r.insert(r.end(), piece.begin(), piece.end());
        canonical(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RMono> to_raw(const Expr& e, const Context& ctx)
{
    switch (e.kind) {
    case Expr::Kind::Constant:
        if (e.value % 2)
            return {RMono{}};
        return {};
    case Expr::Kind::Generator:
        return {RMono{RFactor{-1, ctx.require(e.name), {}}}};
    case Expr::Kind::Sum: {
        std::vector<RMono> out;
        for (const auto& c : e.children)
            for (auto& m : to_raw(*c, ctx))
                out.push_back(std::move(m));
        return out;
    }
    case Expr::Kind::Product:
    case Expr::Kind::Power: {
        std::vector<RMono> acc{RMono{}};
        auto times = [&](const std::vector<RMono>& rhs) {
            std::vector<RMono> next;
            for (const auto& a : acc)
                for (const auto& b : rhs) {
                    RMono m = a;
                    m.insert(m.end(), b.begin(), b.end());
                    next.push_back(std::move(m));
                }
            acc = std::move(next);
        };
        if (e.kind == Expr::Kind::Product) {
            for (const auto& c : e.children)
                times(to_raw(*c, ctx));
        }
        else {
            auto base = to_raw(*e.children.front(), ctx);
            for (int i = 0; i < e.value; ++i)
                times(base);
        }
        return acc;
    }
    case Expr::Kind::Operation: {
        std::vector<RMono> out;
        for (auto& m : to_raw(*e.children.front(), ctx))
            out.push_back({make_op(e.value, std::move(m))});
        return out;
    }
    }
    return {};
}

Word to_word(const RFactor& f)
{
    if (f.s < 0)
        return Word{{}, f.gen};
    if (f.inner.size() != 1)
        throw std::logic_error("rewriter left a product under an operation");
    Word w = to_word(f.inner.front());
    w.ops.insert(w.ops.begin(), f.s);
    return w;
}

}  // namespace

RewriteOutcome rewrite_expression(const Expr& e, const Context& ctx, RewriteStrategy strategy,
                                  std::uint64_t step_limit)
{
    RPoly current;
    for (auto& m : to_raw(e, ctx))
        toggle(current, std::move(m));

    std::uint64_t steps = 0;
    RPoly done;
    while (!current.empty()) {
        RMono m = *current.begin();
        current.erase(current.begin());
        std::vector<std::vector<int>> redexes;
        std::vector<int> path;
        collect_redexes(m, ctx, path, redexes);
        if (redexes.empty()) {
            toggle(done, std::move(m));
            continue;
        }
        if (++steps > step_limit)
            throw std::runtime_error("rewriter step limit exceeded");
        const auto& chosen = strategy == RewriteStrategy::LeftmostFirst ? redexes.front() : redexes.back();
        const int before = degree(m, ctx);
        for (auto& r : rewrite_at(m, chosen, 0, ctx)) {
            if (degree(r, ctx) != before)
                throw std::logic_error("rewrite step changed degree");
            // a term already finished may be cancelled by a new one
            if (auto it = done.find(r); it != done.end()) {
                done.erase(it);
                continue;
            }
            toggle(current, std::move(r));
        }
    }

    DLPolynomial result;
    for (const auto& m : done) {
        DLMonomial dm;
        for (const auto& f : m)
            dm = dm * DLMonomial::of(to_word(f));
        result += dm;
    }
    return {result, steps};
}

}  // namespace dlforge::dl
