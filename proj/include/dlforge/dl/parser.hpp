#pragma once

#include "dlforge/dl/expression.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlforge::dl {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Grammar (whitespace insignificant except as a separator):
//
//   expr   := term ('+' term)*
//   term   := factor+                      juxtaposition is product
//   factor := gen | gen '^' int | 'Q' int factor | '(' expr ')' ['^' int] | int
//
// "Q20", "Q 20" and "Q^20" all denote the operation Q^20. When `ctx` is given
// every generator must be declared in it.
ExprPtr parse_expression(const std::string& text, const Context* ctx = nullptr);

inline ExprPtr parse_expression(const std::string& text, const Context& ctx)
{
    return parse_expression(text, &ctx);
}

}  // namespace dlforge::dl
