#include "dlforge/dl/parser.hpp"

#include <cctype>
#include <climits>
#include <vector>

namespace dlforge::dl {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("syntax error at position " + std::to_string(position) + ": " + message),
      position_(position)
{
}

namespace {

struct Token {
    enum class Kind { Identifier, Operation, Integer, Plus, Caret, LParen, RParen, End };
    Kind kind;
    std::string text;
    int value = 0;
    std::size_t pos = 0;
};

int to_int(const std::string& digits, std::size_t pos)
{
    if (digits.size() > 9)
        throw ParseError("integer too large: " + digits, pos);
    return std::stoi(digits);
}

std::vector<Token> tokenize(const std::string& s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            std::string digits = s.substr(start, i - start);
            out.push_back({Token::Kind::Integer, digits, to_int(digits, start), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && is_ident_char(s[i]))
                ++i;
            std::string word = s.substr(start, i - start);
            if (word == "Q") {
                out.push_back({Token::Kind::Operation, word, -1, start});
            }
            else if (word[0] == 'Q' && word.find_first_not_of("0123456789", 1) == std::string::npos) {
                out.push_back({Token::Kind::Operation, word, to_int(word.substr(1), start + 1), start});
            }
            else {
                out.push_back({Token::Kind::Identifier, word, 0, start});
            }
            continue;
        }
        switch (c) {
        case '+':
            out.push_back({Token::Kind::Plus, "+", 0, start});
            break;
        case '^':
            out.push_back({Token::Kind::Caret, "^", 0, start});
            break;
        case '(':
            out.push_back({Token::Kind::LParen, "(", 0, start});
            break;
        case ')':
            out.push_back({Token::Kind::RParen, ")", 0, start});
            break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        ++i;
    }
    out.push_back({Token::Kind::End, "", 0, s.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const Context* ctx) : toks_(std::move(tokens)), ctx_(ctx) {}

    ExprPtr parse()
    {
        ExprPtr e = expr();
        if (peek().kind != Token::Kind::End)
            throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    bool starts_factor() const
    {
        auto k = peek().kind;
        return k == Token::Kind::Identifier || k == Token::Kind::Operation || k == Token::Kind::Integer ||
               k == Token::Kind::LParen;
    }

    ExprPtr expr()
    {
        std::vector<ExprPtr> terms{term()};
        while (peek().kind == Token::Kind::Plus) {
            take();
            terms.push_back(term());
        }
        return make_sum(std::move(terms));
    }

    ExprPtr term()
    {
        if (!starts_factor())
            throw ParseError(peek().kind == Token::Kind::End ? "unexpected end of input"
                                                             : "expected a factor before '" + peek().text + "'",
                             peek().pos);
        std::vector<ExprPtr> factors;
        while (starts_factor())
            factors.push_back(factor());
        return make_product(std::move(factors));
    }

    int exponent()
    {
        const Token& t = take();
        if (t.kind != Token::Kind::Integer)
            throw ParseError("expected integer exponent after '^'", t.pos);
        return t.value;
    }

    ExprPtr factor()
    {
        const Token& t = take();
        switch (t.kind) {
        case Token::Kind::Integer:
            return make_constant(t.value);
        case Token::Kind::Identifier: {
            if (ctx_ && !ctx_->contains(t.text))
                throw ParseError("unknown generator '" + t.text + "'", t.pos);
            ExprPtr g = make_generator(t.text);
            if (peek().kind == Token::Kind::Caret) {
                take();
                return make_power(g, exponent());
            }
            return g;
        }
        case Token::Kind::Operation: {
            int s = t.value;
            if (s < 0) {
                if (peek().kind == Token::Kind::Caret)
                    take();
                const Token& n = take();
                if (n.kind != Token::Kind::Integer)
                    throw ParseError("expected superscript after 'Q'", n.pos);
                s = n.value;
            }
            if (!starts_factor())
                throw ParseError("operation Q" + std::to_string(s) + " has no argument", peek().pos);
            return make_operation(s, factor());
        }
        case Token::Kind::LParen: {
            ExprPtr inner = expr();
            const Token& close = take();
            if (close.kind != Token::Kind::RParen)
                throw ParseError("expected ')'", close.pos);
            if (peek().kind == Token::Kind::Caret) {
                take();
                return make_power(inner, exponent());
            }
            return inner;
        }
        default:
            throw ParseError("unexpected '" + t.text + "'", t.pos);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Context* ctx_;
};

}  // namespace

ExprPtr parse_expression(const std::string& text, const Context* ctx)
{
    return Parser(tokenize(text), ctx).parse();
}

}  // namespace dlforge::dl
