#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "radflow/expr.hpp"

namespace radflow::expr {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

struct ParseOptions {
  // Names bound to expressions; takes precedence over reserved names, so
  // binding "p" to an EOS pressure makes p mean that pressure.
  std::unordered_map<std::string, Expr> symbols;
  // Unknown bare identifiers become parameters instead of an error.
  bool unknown_as_param = false;
};

// Grammar:
//   sum     := product (('+'|'-') product)*
//   product := unary (('*'|'/') unary)*
//   unary   := ('+'|'-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' args ')' | name '{' ints '}' '(' args ')'
//            | 'diff' '(' sum (',' name)+ ')' | '(' sum ')'
// Reserved names: t r U rho S p n q k eps (and rhot). diff in t or r is the
// total derivative, in a field or parameter the partial derivative.
Expr parse(std::string_view text, const ParseOptions& opt = {});

} // namespace radflow::expr
