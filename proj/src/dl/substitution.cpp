#include "dlforge/dl/substitution.hpp"
#include "dlforge/dl/parser.hpp"

#include <cctype>

namespace dlforge::dl {

SubstitutionMap::SubstitutionMap(std::string name, Context source, Context target)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target))
{
}

SubstitutionMap& SubstitutionMap::set(const std::string& generator, const std::string& image)
{
    return set(generator, parse_expression(image, target_));
}

SubstitutionMap& SubstitutionMap::set(const std::string& generator, ExprPtr image)
{
    const int want = source_.degree(source_.require(generator));
    for (const auto& g : generator_names(*image))
        target_.require(g);
    auto got = expression_degree(*image, target_);
    if (got && *got != want)
        throw DegreeError(name_ + ": image of " + generator + " has degree " + std::to_string(*got) +
                          ", expected " + std::to_string(want));
    images_[generator] = std::move(image);
    return *this;
}

ExprPtr SubstitutionMap::image(const std::string& generator) const
{
    source_.require(generator);
    if (auto it = images_.find(generator); it != images_.end())
        return it->second;
    if (!target_.contains(generator))
        throw std::invalid_argument(name_ + ": no image for generator '" + generator + "'");
    return make_generator(generator);
}

ExprPtr SubstitutionMap::apply(const Expr& e) const
{
    switch (e.kind) {
    case Expr::Kind::Constant:
        return make_constant(e.value);
    case Expr::Kind::Generator:
        return image(e.name);
    case Expr::Kind::Operation:
        return make_operation(e.value, apply(*e.children.front()));
    case Expr::Kind::Power:
        return make_power(apply(*e.children.front()), e.value);
    case Expr::Kind::Sum:
    case Expr::Kind::Product: {
        std::vector<ExprPtr> kids;
        for (const auto& c : e.children)
            kids.push_back(apply(*c));
        return e.kind == Expr::Kind::Sum ? make_sum(std::move(kids)) : make_product(std::move(kids));
    }
    }
    return make_constant(0);
}

DLPolynomial SubstitutionMap::evaluate(const std::string& generator, Normalizer& n) const
{
    if (!(n.context() == target_))
        throw std::invalid_argument(name_ + ": normalizer context differs from the map's target");
    return n.normalize(*image(generator));
}

std::string SubstitutionMap::to_string() const
{
    std::string out;
    for (const auto& e : source_.entries()) {
        auto img = image(e.name);
        out += name_ + "(" + e.name + ") = " + print(*img) + "\n";
    }
    return out;
}

SubstitutionMap compose_maps(const SubstitutionMap& outer, const SubstitutionMap& inner)
{
    if (!(inner.target() == outer.source()))
        throw std::invalid_argument("compose: target of " + inner.name() + " is not the source of " + outer.name());
    SubstitutionMap r(outer.name() + " " + inner.name(), inner.source(), outer.target());
    for (const auto& e : inner.source().entries()) {
        if (!inner.has_explicit_image(e.name) && !outer.has_explicit_image(e.name) && r.target().contains(e.name))
            continue;
        r.set(e.name, outer.apply(*inner.image(e.name)));
    }
    return r;
}

SubstitutionMap add_maps(const SubstitutionMap& a, const SubstitutionMap& b)
{
    if (!(a.source() == b.source()) || !(a.target() == b.target()))
        throw std::invalid_argument("add: " + a.name() + " and " + b.name() + " have different contexts");
    SubstitutionMap r(a.name() + " + " + b.name(), a.source(), a.target());
    // generators both maps fix stay fixed: maps under a base algebra
    for (const auto& e : a.source().entries()) {
        if (!a.has_explicit_image(e.name) && !b.has_explicit_image(e.name))
            continue;
        r.set(e.name, make_sum({a.image(e.name), b.image(e.name)}));
    }
    return r;
}

SubstitutionMap identity_map(const Context& ctx)
{
    return SubstitutionMap("id", ctx, ctx);
}

bool maps_equal(const SubstitutionMap& a, const SubstitutionMap& b, Normalizer& n)
{
    if (!(a.source() == b.source()) || !(a.target() == b.target()))
        return false;
    for (const auto& e : a.source().entries())
        if (!(a.evaluate(e.name, n) + b.evaluate(e.name, n)).is_zero())
            return false;
    return true;
}

std::string suspended_name(const std::string& name, int degree)
{
    std::size_t cut = name.size();
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1])))
        --cut;
    if (cut == name.size() || cut == 0)
        return name + "'";
    return name.substr(0, cut) + "'" + std::to_string(degree + 1);
}

namespace {

using Term = std::vector<ExprPtr>;

std::vector<Term> distribute(const ExprPtr& e)
{
    switch (e->kind) {
    case Expr::Kind::Sum: {
        std::vector<Term> out;
        for (const auto& c : e->children)
            for (auto& t : distribute(c))
                out.push_back(std::move(t));
        return out;
    }
    case Expr::Kind::Product: {
        std::vector<Term> acc{Term{}};
        for (const auto& c : e->children) {
            std::vector<Term> next;
            for (const auto& a : acc)
                for (const auto& b : distribute(c)) {
                    Term t = a;
                    t.insert(t.end(), b.begin(), b.end());
                    next.push_back(std::move(t));
                }
            acc = std::move(next);
        }
        return acc;
    }
    case Expr::Kind::Power: {
        const auto& base = e->children.front();
        if (base->kind != Expr::Kind::Sum && base->kind != Expr::Kind::Product)
            return {Term{e}};
        std::vector<ExprPtr> copies(static_cast<std::size_t>(e->value), base);
        return distribute(make_product(std::move(copies)));
    }
    default:
        return {Term{e}};
    }
}

bool involves_shifted(const Expr& e, const std::set<std::string>& base)
{
    for (const auto& g : generator_names(e))
        if (!base.count(g))
            return true;
    return false;
}

}  // namespace

ExprPtr suspend_expression(const Expr& e, const Context& ctx, const std::set<std::string>& base)
{
    std::vector<ExprPtr> kept;
    for (const auto& term : distribute(std::make_shared<const Expr>(e))) {
        int constant = 1;
        int shifted = 0;
        for (const auto& f : term) {
            if (f->kind == Expr::Kind::Constant)
                constant *= f->value % 2;
            else if (involves_shifted(*f, base))
                shifted += f->kind == Expr::Kind::Power ? f->value : 1;
        }
        if (constant == 0 || shifted != 1)
            continue;
        std::vector<ExprPtr> factors;
        bool dead = false;
        for (const auto& f : term) {
            if (f->kind == Expr::Kind::Constant)
                continue;
            if (!involves_shifted(*f, base)) {
                factors.push_back(f);
                continue;
            }
            const Expr& g = f->kind == Expr::Kind::Power ? *f->children.front() : *f;
            if (g.kind == Expr::Kind::Generator) {
                factors.push_back(make_generator(suspended_name(g.name, ctx.degree(ctx.require(g.name)))));
            }
            else {
                ExprPtr arg = suspend_expression(*g.children.front(), ctx, base);
                if (arg->kind == Expr::Kind::Constant && arg->value % 2 == 0) {
                    dead = true;
                    break;
                }
                factors.push_back(make_operation(g.value, arg));
            }
        }
        if (!dead)
            kept.push_back(make_product(std::move(factors)));
    }
    if (kept.empty())
        return make_constant(0);
    return make_sum(std::move(kept));
}

namespace {

Context suspend_context(const Context& ctx, const std::set<std::string>& base)
{
    Context out;
    for (const auto& e : ctx.entries()) {
        if (base.count(e.name))
            out.add(e.name, e.degree);
        else
            out.add(suspended_name(e.name, e.degree), e.degree + 1);
    }
    return out;
}

}  // namespace

SubstitutionMap suspend(const SubstitutionMap& m, const std::set<std::string>& base)
{
    SubstitutionMap r("sigma " + m.name(), suspend_context(m.source(), base), suspend_context(m.target(), base));
    for (const auto& e : m.source().entries()) {
        if (base.count(e.name))
            continue;
        r.set(suspended_name(e.name, e.degree), suspend_expression(*m.image(e.name), m.target(), base));
    }
    return r;
}

}  // namespace dlforge::dl
