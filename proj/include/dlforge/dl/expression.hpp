#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlforge::dl {

// Generator names and degrees an expression is resolved against.
class Context {
public:
    struct Entry {
        std::string name;
        int degree;
        bool operator==(const Entry&) const = default;
    };

    Context() = default;
    Context(std::initializer_list<Entry> entries);

    // Returns the index of the new generator; rejects duplicates and names
    // that would lex as an operation symbol.
    int add(const std::string& name, int degree);
    std::optional<int> index_of(const std::string& name) const;
    int require(const std::string& name) const;
    const Entry& at(int index) const { return entries_.at(static_cast<std::size_t>(index)); }
    int degree(int index) const { return at(index).degree; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    bool contains(const std::string& name) const { return index_of(name).has_value(); }

    bool operator==(const Context&) const = default;

    // "gen x deg 2" per line, '#' comments.
    static Context parse(const std::string& text);
    std::string to_string() const;

private:
    std::vector<Entry> entries_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable abstract syntax tree over generators, Q^s, sums, products and
// integer powers.
struct Expr {
    enum class Kind { Constant, Generator, Operation, Sum, Product, Power };

    Kind kind;
    // Constant value, superscript s of Q^s, or exponent of a power.
    int value = 0;
    std::string name;
    std::vector<ExprPtr> children;
};

ExprPtr make_constant(int value);
ExprPtr make_generator(std::string name);
ExprPtr make_operation(int s, ExprPtr arg);
ExprPtr make_sum(std::vector<ExprPtr> terms);
ExprPtr make_product(std::vector<ExprPtr> factors);
ExprPtr make_power(ExprPtr base, int exponent);
// Q^{s_1} ... Q^{s_k} applied to `arg`, outermost first.
ExprPtr make_word(const std::vector<int>& ops, ExprPtr arg);

bool structurally_equal(const Expr& a, const Expr& b);

// Canonical printing in the expression grammar; parse(print(e)) reproduces e.
std::string print(const Expr& e);

// Degree of a homogeneous expression; nullopt when the expression is the
// constant 0 (which has every degree). Throws on inhomogeneous sums or unknown
// generators.
std::optional<int> expression_degree(const Expr& e, const Context& ctx);

// Names of all generators occurring in e.
std::vector<std::string> generator_names(const Expr& e);

class DegreeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace dlforge::dl
