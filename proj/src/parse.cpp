#include "radflow/parse.hpp"

#include <cctype>
#include <vector>

namespace radflow::expr {

namespace {

class Parser {
public:
  Parser(std::string_view s, const ParseOptions& o) : s_(s), opt_(o) {}

  Expr run() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+')) {
        e = e + product();
      } else if (eat('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) {
        e = e * unary();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) fail_at("division by zero", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (eat('^')) {
      const std::size_t at = pos_;
      Expr ex = unary();
      try {
        return pow(b, ex);
      } catch (const std::exception& err) {
        fail_at(err.what(), at);
      }
    }
    return b;
  }

  Rational number() {
    skip();
    const std::size_t start = pos_;
    Rational v(0);
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * Rational(10) + Rational(s_[pos_++] - '0');
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      Rational scale(1, 10);
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v += scale * Rational(s_[pos_++] - '0');
        scale /= Rational(10);
      }
    }
    if (pos_ + 1 < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      int sign = 1;
      if (s_[p] == '+' || s_[p] == '-') sign = s_[p++] == '-' ? -1 : 1;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        int ex = 0;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ex = ex * 10 + (s_[p++] - '0');
        pos_ = p;
        v *= Rational(10).pow(sign * ex);
      }
    }
    if (pos_ == start) fail("expected number");
    return v;
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<Expr> args() {
    std::vector<Expr> out;
    expect('(');
    if (eat(')')) return out;
    do {
      out.push_back(sum());
    } while (eat(','));
    expect(')');
    return out;
  }

  static std::optional<Field> field_of(const std::string& n) {
    if (n == "U") return Field::U;
    if (n == "rho") return Field::Rho;
    if (n == "S") return Field::S;
    if (n == "p") return Field::P;
    if (n == "rhot") return Field::RhoTilde;
    return std::nullopt;
  }

  Expr name_value(const std::string& n, std::size_t at) {
    if (auto it = opt_.symbols.find(n); it != opt_.symbols.end()) return it->second;
    if (n == "t") return t();
    if (n == "r") return r();
    if (auto f = field_of(n)) return jet(*f);
    if (n == "n" || n == "q" || n == "k" || n == "eps") return param(n);
    if (opt_.unknown_as_param) return param(n);
    fail_at("unknown identifier '" + n + "'", at);
  }

  Expr diff_call() {
    expect('(');
    Expr e = sum();
    int count = 0;
    while (eat(',')) {
      const std::size_t at = (skip(), pos_);
      std::string v = ident();
      if (v.empty()) fail("expected variable name");
      ++count;
      if (v == "t") {
        e = Dt(e);
      } else if (v == "r") {
        e = Dr(e);
      } else {
        Expr x = name_value(v, at);
        auto id = x.as_atom();
        if (!id) fail_at("cannot differentiate with respect to '" + v + "'", at);
        const AtomKind k = atom_kind(*id);
        if (k != AtomKind::Param && k != AtomKind::Jet) fail_at("cannot differentiate with respect to '" + v + "'", at);
        e = partial(e, *id);
      }
    }
    if (count == 0) fail("diff needs at least one variable");
    expect(')');
    return e;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(number());
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t at = pos_;
      std::string n = ident();
      skip();
      if (n == "diff" && pos_ < s_.size() && s_[pos_] == '(') return diff_call();
      std::vector<int> deriv;
      if (pos_ < s_.size() && s_[pos_] == '{') {
        ++pos_;
        do {
          skip();
          const std::size_t st = pos_;
          int v = 0;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
          if (pos_ == st) fail("expected derivative order");
          deriv.push_back(v);
        } while (eat(','));
        expect('}');
        skip();
        if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '(' after derivative index");
      }
      if (pos_ < s_.size() && s_[pos_] == '(') {
        std::vector<Expr> a = args();
        try {
          if (deriv.empty()) {
            if (n == "exp" && a.size() == 1) return exp(a[0]);
            if ((n == "ln" || n == "log") && a.size() == 1) return log(a[0]);
            if (n == "sqrt" && a.size() == 1) return sqrt(a[0]);
          }
          if (n == "diff" || field_of(n) || n == "t" || n == "r")
            fail_at("'" + n + "' is not a function", at);
          if (!deriv.empty() && deriv.size() != a.size())
            fail_at("derivative index does not match argument count", at);
          return func(n, std::move(a), std::move(deriv));
        } catch (const ParseError&) {
          throw;
        } catch (const std::exception& err) {
          fail_at(err.what(), at);
        }
      }
      if (!deriv.empty()) fail("expected '(' after derivative index");
      return name_value(n, at);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse(std::string_view text, const ParseOptions& opt) { return Parser(text, opt).run(); }

} // namespace radflow::expr
