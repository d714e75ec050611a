#include "dlforge/dl/expression.hpp"
#include "dlforge/dl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace dlforge::dl {

namespace {

bool looks_like_operation(const std::string& name)
{
    if (name.empty() || name[0] != 'Q')
        return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool valid_identifier(const std::string& name)
{
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    });
}

}  // namespace

Context::Context(std::initializer_list<Entry> entries)
{
    for (const auto& e : entries)
        add(e.name, e.degree);
}

int Context::add(const std::string& name, int degree)
{
    if (!valid_identifier(name))
        throw std::invalid_argument("invalid generator name '" + name + "'");
    if (looks_like_operation(name))
        throw std::invalid_argument("generator name '" + name + "' clashes with operation syntax");
    if (degree < 0)
        throw std::invalid_argument("generator '" + name + "' has negative degree");
    if (contains(name))
        throw std::invalid_argument("duplicate generator '" + name + "'");
    entries_.push_back({name, degree});
    return static_cast<int>(entries_.size()) - 1;
}

std::optional<int> Context::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name)
            return static_cast<int>(i);
    return std::nullopt;
}

int Context::require(const std::string& name) const
{
    auto i = index_of(name);
    if (!i)
        throw std::invalid_argument("unknown generator '" + name + "'");
    return *i;
}

Context Context::parse(const std::string& text)
{
    Context ctx;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream words(line);
        std::string kw, name, degkw;
        if (!(words >> kw))
            continue;
        int degree = 0;
        if (kw != "gen" || !(words >> name >> degkw >> degree) || degkw != "deg")
            throw std::invalid_argument("context line " + std::to_string(lineno) +
                                        ": expected 'gen <name> deg <int>'");
        std::string extra;
        if (words >> extra)
            throw std::invalid_argument("context line " + std::to_string(lineno) + ": trailing text '" + extra + "'");
        ctx.add(name, degree);
    }
    return ctx;
}

std::string Context::to_string() const
{
    std::string out;
    for (const auto& e : entries_)
        out += "gen " + e.name + " deg " + std::to_string(e.degree) + "\n";
    return out;
}

ExprPtr make_constant(int value)
{
    return std::make_shared<const Expr>(Expr{Expr::Kind::Constant, value, {}, {}});
}

ExprPtr make_generator(std::string name)
{
    return std::make_shared<const Expr>(Expr{Expr::Kind::Generator, 0, std::move(name), {}});
}

ExprPtr make_operation(int s, ExprPtr arg)
{
    if (s < 0)
        throw std::invalid_argument("negative Dyer-Lashof superscript");
    return std::make_shared<const Expr>(Expr{Expr::Kind::Operation, s, {}, {std::move(arg)}});
}

ExprPtr make_sum(std::vector<ExprPtr> terms)
{
    if (terms.empty())
        return make_constant(0);
    if (terms.size() == 1)
        return terms.front();
    return std::make_shared<const Expr>(Expr{Expr::Kind::Sum, 0, {}, std::move(terms)});
}

ExprPtr make_product(std::vector<ExprPtr> factors)
{
    if (factors.empty())
        return make_constant(1);
    if (factors.size() == 1)
        return factors.front();
    return std::make_shared<const Expr>(Expr{Expr::Kind::Product, 0, {}, std::move(factors)});
}

ExprPtr make_power(ExprPtr base, int exponent)
{
    if (exponent < 0)
        throw std::invalid_argument("negative exponent");
    return std::make_shared<const Expr>(Expr{Expr::Kind::Power, exponent, {}, {std::move(base)}});
}

ExprPtr make_word(const std::vector<int>& ops, ExprPtr arg)
{
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
        arg = make_operation(*it, std::move(arg));
    return arg;
}

bool structurally_equal(const Expr& a, const Expr& b)
{
    if (a.kind != b.kind || a.value != b.value || a.name != b.name || a.children.size() != b.children.size())
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(*a.children[i], *b.children[i]))
            return false;
    return true;
}

namespace {

std::string print_factor(const Expr& e);

std::string print_operation_argument(const Expr& e)
{
    if (e.kind == Expr::Kind::Sum || e.kind == Expr::Kind::Product)
        return "(" + print(e) + ")";
    return print_factor(e);
}

std::string print_factor(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Constant:
        return std::to_string(e.value);
    case Expr::Kind::Generator:
        return e.name;
    case Expr::Kind::Power: {
        const Expr& base = *e.children.front();
        if (base.kind == Expr::Kind::Generator)
            return base.name + "^" + std::to_string(e.value);
        return "(" + print(base) + ")^" + std::to_string(e.value);
    }
    case Expr::Kind::Operation:
        return "Q" + std::to_string(e.value) + " " + print_operation_argument(*e.children.front());
    case Expr::Kind::Sum:
    case Expr::Kind::Product:
        return "(" + print(e) + ")";
    }
    return "?";
}

}  // namespace

std::string print(const Expr& e)
{
    std::string out;
    switch (e.kind) {
    case Expr::Kind::Sum:
        for (const auto& c : e.children) {
            if (!out.empty())
                out += " + ";
            out += c->kind == Expr::Kind::Sum ? "(" + print(*c) + ")" : print(*c);
        }
        return out;
    case Expr::Kind::Product:
        for (const auto& c : e.children) {
            if (!out.empty())
                out += ' ';
            out += print_factor(*c);
        }
        return out;
    default:
        return print_factor(e);
    }
}

std::optional<int> expression_degree(const Expr& e, const Context& ctx)
{
    switch (e.kind) {
    case Expr::Kind::Constant:
        if (e.value % 2 == 0)
            return std::nullopt;
        return 0;
    case Expr::Kind::Generator:
        return ctx.degree(ctx.require(e.name));
    case Expr::Kind::Operation: {
        auto d = expression_degree(*e.children.front(), ctx);
        if (!d)
            return std::nullopt;
        return *d + e.value;
    }
    case Expr::Kind::Power: {
        auto d = expression_degree(*e.children.front(), ctx);
        if (!d)
            return e.value == 0 ? std::optional<int>(0) : std::nullopt;
        return *d * e.value;
    }
    case Expr::Kind::Product: {
        int total = 0;
        for (const auto& c : e.children) {
            auto d = expression_degree(*c, ctx);
            if (!d)
                return std::nullopt;
            total += *d;
        }
        return total;
    }
    case Expr::Kind::Sum: {
        std::optional<int> result;
        for (const auto& c : e.children) {
            auto d = expression_degree(*c, ctx);
            if (!d)
                continue;
            if (result && *result != *d)
                throw DegreeError("inhomogeneous sum: degrees " + std::to_string(*result) + " and " +
                                  std::to_string(*d) + " in '" + print(e) + "'");
            result = d;
        }
        return result;
    }
    }
    return std::nullopt;
}

namespace {

void collect_names(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen)
{
    if (e.kind == Expr::Kind::Generator && seen.insert(e.name).second)
        out.push_back(e.name);
    for (const auto& c : e.children)
        collect_names(*c, out, seen);
}

}  // namespace

std::vector<std::string> generator_names(const Expr& e)
{
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_names(e, out, seen);
    return out;
}

}  // namespace dlforge::dl
