#pragma once

#include "dlforge/dl/expression.hpp"

#include <atomic>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dlforge::dl {

// Q^{ops[0]} Q^{ops[1]} ... applied to generator `gen` (index into a Context).
struct Word {
    std::vector<int> ops;
    int gen = 0;

    int degree(const Context& ctx) const;
    // s_i <= 2 s_{i+1} throughout.
    bool is_admissible() const;
    // every operation strictly exceeds the degree of the class below it
    bool has_strict_excess(const Context& ctx) const;
    bool is_basis(const Context& ctx) const { return is_admissible() && has_strict_excess(ctx); }

    std::strong_ordering operator<=>(const Word& o) const;
    bool operator==(const Word& o) const = default;
};

std::string word_to_string(const Word& w, const Context& ctx);

// Product of words with positive exponents, sorted by word.
class DLMonomial {
public:
    DLMonomial() = default;
    static DLMonomial of(const Word& w, int exponent = 1);

    const std::vector<std::pair<Word, int>>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }
    int degree(const Context& ctx) const;
    int word_length() const;
    // every exponent even
    bool is_square() const;
    DLMonomial square_root() const;
    DLMonomial operator*(const DLMonomial& o) const;
    DLMonomial pow(int e) const;

    bool operator==(const DLMonomial&) const = default;
    // Print order: compare from the largest word down, larger word first.
    bool operator<(const DLMonomial& o) const;

    std::string to_string(const Context& ctx) const;

private:
    std::vector<std::pair<Word, int>> factors_;
};

// F_2-linear combination of DLMonomials.
class DLPolynomial {
public:
    DLPolynomial() = default;
    static DLPolynomial one();
    static DLPolynomial of(const DLMonomial& m);
    static DLPolynomial generator(int gen);

    bool is_zero() const { return terms_.empty(); }
    const std::set<DLMonomial>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    DLPolynomial& operator+=(const DLPolynomial& o);
    DLPolynomial& operator+=(const DLMonomial& m);
    DLPolynomial operator+(const DLPolynomial& o) const;
    DLPolynomial operator*(const DLPolynomial& o) const;
    DLPolynomial operator*(const DLMonomial& m) const;
    DLPolynomial pow(int e) const;
    bool operator==(const DLPolynomial&) const = default;

    std::optional<int> degree(const Context& ctx) const;
    bool is_homogeneous(const Context& ctx) const;
    // monomials that are single words to the first power
    DLPolynomial indecomposable_part() const;
    bool is_decomposable() const { return indecomposable_part().is_zero(); }
    // all words basis words
    bool is_normal(const Context& ctx) const;

    std::string to_string(const Context& ctx) const;

private:
    std::set<DLMonomial> terms_;
};

// One term Q^{outer} Q^{inner} of an Adem expansion.
struct AdemTerm {
    int outer;
    int inner;
    int coefficient;
    bool operator==(const AdemTerm&) const = default;
};

// Q^r Q^s for r > 2s as a sum of Q^{r+s-i} Q^i with nonzero coefficient
// binom(i-s-1, 2i-r) mod 2. With a degree the terms that vanish by
// instability on a class of that degree are dropped.
std::vector<AdemTerm> adem_step(int r, int s, std::optional<int> degree = std::nullopt);

// An application Q^r to a class of degree d needs an E_n structure with
// n >= r - d + 2.
struct EnLevel {
    int level = 1;
    int r = -1;
    int d = -1;
    bool operator==(const EnLevel&) const = default;
};
// larger level; ties broken by larger r then larger d
bool en_level_less(const EnLevel& a, const EnLevel& b);

class WindowError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct NormalizerOptions {
    bool memoize = true;
    // reject any application beyond the declared E_n window
    std::optional<int> strict_level;
    std::uint64_t step_limit = 1'000'000;
};

class Normalizer {
public:
    explicit Normalizer(Context ctx, NormalizerOptions options = {});
    Normalizer(const Normalizer&) = delete;
    Normalizer& operator=(const Normalizer&) = delete;

    const Context& context() const { return ctx_; }
    const NormalizerOptions& options() const { return opts_; }

    DLPolynomial normalize(const Expr& e);
    DLPolynomial normalize(const std::string& text);
    // Q^s of a polynomial already in normal form
    DLPolynomial apply(int s, const DLPolynomial& p);

    // Normal form together with the largest E_n requirement met on the way.
    std::pair<DLPolynomial, EnLevel> normalize_traced(const Expr& e);

    std::size_t memo_size() const;
    std::uint64_t steps() const;

private:
    using Result = std::pair<DLPolynomial, EnLevel>;

    Result eval(const Expr& e);
    Result apply_traced(int s, const DLPolynomial& p);
    Result apply_monomial(int s, const DLMonomial& m);
    Result compute_monomial(int s, const DLMonomial& m);
    Result apply_word(int s, const Word& w);
    void record(EnLevel& best, int r, int d);
    void tick();

    Context ctx_;
    NormalizerOptions opts_;
    mutable std::mutex mutex_;
    std::map<std::pair<int, DLMonomial>, Result> memo_;
    std::atomic<std::uint64_t> steps_{0};
};

struct IdentityCheck {
    bool holds;
    DLPolynomial residual;
};

// Degree mismatch between two nonzero sides throws DegreeError.
IdentityCheck verify_identity(Normalizer& n, const Expr& lhs, const Expr& rhs);
IdentityCheck verify_identity(Normalizer& n, const std::string& lhs, const std::string& rhs);

EnLevel min_en_level(Normalizer& n, const Expr& e);

// Independent rewriter over raw operation trees, used to cross-check the
// normalizer. Applies instability, Cartan and Adem one redex at a time.
enum class RewriteStrategy { LeftmostFirst, RightmostFirst };

struct RewriteOutcome {
    DLPolynomial result;
    std::uint64_t steps;
};

RewriteOutcome rewrite_expression(const Expr& e, const Context& ctx, RewriteStrategy strategy,
                                  std::uint64_t step_limit = 1'000'000);

}  // namespace dlforge::dl
