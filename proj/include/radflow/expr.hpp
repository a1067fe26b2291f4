#pragma once

// Jet-space expressions in canonical expanded form.
//
// An Expr is a finite sum of terms c * x1^e1 * ... * xk^ek over interned
// atoms x. Two expressions built from the same atoms are equal iff their
// canonical term lists are identical, which makes zero testing a structural
// check. Atoms are independent variables, parameters, jet coordinates,
// opaque function symbols (with argument expressions and a derivative
// multi-index), exp/ln of an expression, and powers of irreducible sums.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "radflow/rational.hpp"

namespace radflow::expr {

enum class Field : std::uint8_t { U, Rho, S, P, RhoTilde };
const char* field_name(Field f);

enum class AtomKind : std::uint8_t { Var, Param, Jet, Func, Exp, Log, Base, Number };
enum class Var : std::uint8_t { T, R };

using AtomId = std::uint32_t;

class Expr;

/// Exponent c + s, where s is a parameter-only expression without constant
/// term, interned as a small id (0 = none).
struct Exponent {
  Rational c{1};
  std::uint32_t sym = 0;

  bool is_zero() const { return c.is_zero() && sym == 0; }
  bool is_one() const { return c.is_one() && sym == 0; }
  bool is_integer() const { return sym == 0 && c.is_integer(); }
  Expr to_expr() const;
  static Exponent from_expr(const Expr& e);

  friend bool operator==(const Exponent&, const Exponent&) = default;
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    if (auto o = a.c <=> b.c; o != 0) return o;
    return a.sym <=> b.sym;
  }
};

Exponent operator+(const Exponent& a, const Exponent& b);
Exponent operator*(const Exponent& a, const Exponent& b);

struct Factor {
  AtomId atom;
  Exponent e;
  friend bool operator==(const Factor&, const Factor&) = default;
};
using Monomial = std::vector<Factor>;

struct Term {
  Monomial mono;
  Rational coef;
};

int compare(const Monomial& a, const Monomial& b);

class Expr {
public:
  Expr();
  Expr(Rational c); // NOLINT(implicit)
  Expr(std::int64_t c) : Expr(Rational(c)) {} // NOLINT(implicit)
  Expr(int c) : Expr(Rational(c)) {}          // NOLINT(implicit)

  static Expr atom(AtomId a, Exponent e = {});
  static Expr from_terms(std::vector<Term> terms); // normalizes

  const std::vector<Term>& terms() const;
  std::size_t size() const { return terms().size(); }
  bool is_zero() const { return terms().empty(); }
  bool is_constant() const;
  std::optional<Rational> constant_value() const;
  /// If the expression is a single atom to the first power with coefficient 1.
  std::optional<AtomId> as_atom() const;
  std::size_t hash() const;
  /// Total number of factors and terms, recursing into atom arguments once.
  std::size_t node_count() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }

  struct Node;

private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Atom {
  AtomKind kind = AtomKind::Param;
  std::string name;
  Field field = Field::U;
  Var var = Var::T;
  int tord = 0, rord = 0;
  std::vector<Expr> args;
  std::vector<int> deriv;
  Rational number;

  std::vector<AtomId> leaves; // sorted Var/Param/Jet atoms this atom depends on
  int max_tord = 0;           // highest t-order of any jet inside
  std::size_t hash = 0;
};

const Atom& atom(AtomId id);
AtomKind atom_kind(AtomId id);

// ---- constructors -------------------------------------------------------

Expr var(Var v);
inline Expr t() { return var(Var::T); }
inline Expr r() { return var(Var::R); }
Expr param(const std::string& name);
Expr placeholder(int i); // "#i", used in function rules
Expr jet(Field f, int tord = 0, int rord = 0);
AtomId var_id(Var v);
AtomId param_id(const std::string& name);
AtomId jet_id(Field f, int tord, int rord);

/// Opaque function symbol with derivative multi-index (empty = underived).
/// Registered rules are applied automatically and may return a non-atom.
Expr func(const std::string& name, std::vector<Expr> args, std::vector<int> deriv = {});
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, const Rational& exponent);
Expr pow(const Expr& base, const Exponent& exponent);
Expr sqrt(const Expr& a);

/// Rule set for a named function: slot_rules[k], when present, is the
/// partial derivative in slot k written in placeholders #0..#(arity-1).
/// Auto rules are applied on construction; manual rules only by apply_rules.
void define_function(const std::string& name, std::vector<std::optional<Expr>> slot_rules,
                     bool automatic = true);
bool has_function_rules(const std::string& name);
/// Apply manual rules of `name` until no reducible derivative is left.
Expr apply_rules(const Expr& e, const std::string& name);

// ---- calculus -----------------------------------------------------------

/// Partial derivative with respect to a leaf atom (Var, Param or Jet).
Expr partial(const Expr& e, AtomId leaf);
/// Total derivative D_z (applied `times` times).
Expr total_derivative(const Expr& e, Var v, int times = 1);
inline Expr Dr(const Expr& e) { return total_derivative(e, Var::R); }
inline Expr Dt(const Expr& e) { return total_derivative(e, Var::T); }

/// Higher Euler operator E_v^{(i)} on expressions free of t-derivatives.
Expr euler_operator(const Expr& e, Field v, int order = 0);

// ---- structure ----------------------------------------------------------

bool depends_on(const Expr& e, AtomId leaf);
/// Highest r-order of jets of field f appearing (-1 if none), and any t-jets.
int max_rord(const Expr& e, Field f);
int max_tord(const Expr& e);
std::vector<AtomId> atoms_of(const Expr& e); // sorted, top level only

/// Replace atoms; fn returns nullopt to keep an atom. Recurses into atom
/// arguments so nested occurrences are replaced as well.
using AtomMap = std::function<std::optional<Expr>(AtomId)>;
Expr map_atoms(const Expr& e, const AtomMap& fn);
Expr substitute(const Expr& e, const std::unordered_map<AtomId, Expr>& m);

/// Split e = sum_k key_k * coef_k, where key_k collects the factors selected
/// by pred. Keys are returned as monomial expressions.
std::vector<std::pair<Expr, Expr>> split_by(const Expr& e, const std::function<bool(AtomId)>& pred);

/// Multiply through by the highest negative power of every irreducible sum
/// appearing, so that rational cancellations become polynomial ones.
Expr clear_denominators(const Expr& e);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

} // namespace radflow::expr

template <> struct std::hash<radflow::expr::Expr> {
  std::size_t operator()(const radflow::expr::Expr& e) const { return e.hash(); }
};
