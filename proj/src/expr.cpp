#include "radflow/expr.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace radflow::expr {

struct Expr::Node {
  std::vector<Term> terms;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

// ---- atom table -----------------------------------------------------------

constexpr std::size_t kChunkBits = 12;
constexpr std::size_t kChunk = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = std::size_t{1} << 14;

struct AtomTable {
  std::mutex mu;
  std::array<Atom*, kMaxChunks> chunks{};
  std::uint32_t count = 0;
  std::unordered_multimap<std::size_t, AtomId> index;

  ~AtomTable() {
    for (Atom* c : chunks) delete[] c;
  }
};

AtomTable& table() {
  static AtomTable* t = new AtomTable; // leaked on purpose: atoms outlive static Exprs
  return *t;
}

bool same_key(const Atom& a, const Atom& b) {
  return a.kind == b.kind && a.name == b.name && a.field == b.field && a.var == b.var &&
         a.tord == b.tord && a.rord == b.rord && a.deriv == b.deriv && a.number == b.number &&
         a.args == b.args;
}

std::size_t key_hash(const Atom& a) {
  std::size_t h = static_cast<std::size_t>(a.kind) * 31 + 7;
  h = mix(h, std::hash<std::string>{}(a.name));
  h = mix(h, static_cast<std::size_t>(a.field) * 131 + static_cast<std::size_t>(a.var));
  h = mix(h, static_cast<std::size_t>(a.tord) * 1009 + static_cast<std::size_t>(a.rord));
  for (const auto& e : a.args) h = mix(h, e.hash());
  for (int d : a.deriv) h = mix(h, static_cast<std::size_t>(d));
  h = mix(h, a.number.hash());
  return h;
}

Expr sym_expr(std::uint32_t id);

AtomId intern(Atom a) {
  a.hash = key_hash(a);
  const bool leaf = a.kind == AtomKind::Var || a.kind == AtomKind::Param || a.kind == AtomKind::Jet;
  if (!leaf) {
    std::vector<AtomId> lv;
    int mt = 0;
    for (const auto& arg : a.args) {
      for (const auto& term : arg.terms())
        for (const auto& f : term.mono) {
          const Atom& sub = atom(f.atom);
          lv.insert(lv.end(), sub.leaves.begin(), sub.leaves.end());
          mt = std::max(mt, sub.max_tord);
          if (f.e.sym)
            for (const auto& st : sym_expr(f.e.sym).terms())
              for (const auto& sf : st.mono) lv.push_back(sf.atom);
        }
    }
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    a.leaves = std::move(lv);
    a.max_tord = mt;
  } else {
    a.max_tord = a.kind == AtomKind::Jet ? a.tord : 0;
  }
  AtomTable& tb = table();
  std::lock_guard lock(tb.mu);
  auto [lo, hi] = tb.index.equal_range(a.hash);
  for (auto it = lo; it != hi; ++it)
    if (same_key(atom(it->second), a)) return it->second;
  const AtomId id = tb.count;
  const std::size_t chunk = id >> kChunkBits;
  if (chunk >= kMaxChunks) throw std::length_error("atom table exhausted");
  if (!tb.chunks[chunk]) tb.chunks[chunk] = new Atom[kChunk];
  if (leaf) a.leaves = {id};
  tb.chunks[chunk][id & (kChunk - 1)] = std::move(a);
  tb.index.emplace(tb.chunks[chunk][id & (kChunk - 1)].hash, id);
  ++tb.count;
  return id;
}

// ---- symbolic exponent table ----------------------------------------------

struct SymTable {
  std::mutex mu;
  std::deque<Expr> syms{Expr()};
  std::unordered_map<Expr, std::uint32_t> index;
};

SymTable& symtab() {
  static SymTable* s = new SymTable;
  return *s;
}

std::uint32_t intern_sym(const Expr& e) {
  if (e.is_zero()) return 0;
  SymTable& s = symtab();
  std::lock_guard lock(s.mu);
  if (auto it = s.index.find(e); it != s.index.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(s.syms.size());
  s.syms.push_back(e);
  s.index.emplace(e, id);
  return id;
}

Expr sym_expr(std::uint32_t id) {
  if (id == 0) return Expr();
  SymTable& s = symtab();
  std::lock_guard lock(s.mu);
  return s.syms[id];
}

// ---- canonical sums -------------------------------------------------------

Monomial mul_mono(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].atom < b[j].atom) {
      out.push_back(a[i++]);
    } else if (b[j].atom < a[i].atom) {
      out.push_back(b[j++]);
    } else {
      Exponent e = a[i].e + b[j].e;
      if (!e.is_zero()) out.push_back({a[i].atom, e});
      ++i;
      ++j;
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return out;
}

bool needs_fixup(const Monomial& m) {
  int exps = 0;
  for (const auto& f : m) {
    switch (atom(f.atom).kind) {
    case AtomKind::Exp:
      if (++exps > 1 || !f.e.is_one()) return true;
      break;
    case AtomKind::Base:
      if (f.e.is_integer() && f.e.c.sign() > 0) return true;
      break;
    case AtomKind::Number:
      if (f.e.sym == 0 && (f.e.c.is_integer() || f.e.c > Rational(1) || f.e.c.sign() < 0))
        return true;
      break;
    default:
      break;
    }
  }
  return false;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Expr ipow(const Expr& b, std::int64_t k) {
  Expr acc(1), base = b;
  while (k) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return acc;
}

Expr fixup(const Monomial& m, const Rational& c0);

class Accum {
public:
  void push(Monomial m, const Rational& c) {
    if (c.is_zero()) return;
    if (needs_fixup(m)) {
      Expr f = fixup(m, c);
      for (const auto& t : f.terms()) v_.push_back(t);
      return;
    }
    v_.push_back({std::move(m), c});
  }
  void push_expr(const Expr& e, const Rational& s = Rational(1)) {
    if (s.is_zero()) return;
    for (const auto& t : e.terms()) v_.push_back({t.mono, t.coef * s});
  }
  void reserve(std::size_t n) { v_.reserve(n); }
  Expr finish() { return Expr::from_terms(std::move(v_)); }
  std::vector<Term>& raw() { return v_; }

private:
  std::vector<Term> v_;
};

Expr fixup(const Monomial& m, const Rational& c0) {
  Monomial rest;
  Rational c = c0;
  Expr extra(1);
  Expr exp_sum;
  bool has_exp = false;
  for (const auto& f : m) {
    const Atom& a = atom(f.atom);
    if (a.kind == AtomKind::Exp) {
      has_exp = true;
      exp_sum += f.e.to_expr() * a.args[0];
      continue;
    }
    if (a.kind == AtomKind::Base && f.e.is_integer() && f.e.c.sign() > 0) {
      extra = extra * ipow(a.args[0], f.e.c.num());
      continue;
    }
    if (a.kind == AtomKind::Number && f.e.sym == 0 &&
        (f.e.c.is_integer() || f.e.c > Rational(1) || f.e.c.sign() < 0)) {
      const std::int64_t fl = floor_div(f.e.c.num(), f.e.c.den());
      c *= a.number.pow(fl);
      Rational frac = f.e.c - Rational(fl);
      if (!frac.is_zero()) rest.push_back({f.atom, Exponent{frac, 0}});
      continue;
    }
    rest.push_back(f);
  }
  std::vector<Term> one;
  one.push_back({std::move(rest), c});
  Expr res = Expr::from_terms(std::move(one));
  if (has_exp) res = res * exp(exp_sum);
  return res * extra;
}

std::size_t term_hash(const Term& t) {
  std::size_t h = t.coef.hash();
  for (const auto& f : t.mono) {
    h = mix(h, f.atom);
    h = mix(h, f.e.c.hash() * 17 + f.e.sym);
  }
  return h;
}

} // namespace

// ---- Exponent ---------------------------------------------------------------

Expr Exponent::to_expr() const { return sym == 0 ? Expr(c) : Expr(c) + sym_expr(sym); }

Exponent Exponent::from_expr(const Expr& e) {
  Exponent out{Rational(0), 0};
  std::vector<Term> rest;
  for (const auto& t : e.terms()) {
    if (t.mono.empty()) {
      out.c = t.coef;
      continue;
    }
    for (const auto& f : t.mono)
      if (atom(f.atom).kind != AtomKind::Param || f.e.sym != 0)
        throw std::invalid_argument("symbolic exponent must be a Laurent polynomial in parameters: " +
                                    to_string(e));
    rest.push_back(t);
  }
  if (!rest.empty()) out.sym = intern_sym(Expr::from_terms(std::move(rest)));
  return out;
}

Exponent operator+(const Exponent& a, const Exponent& b) {
  if (a.sym == 0 && b.sym == 0) return Exponent{a.c + b.c, 0};
  return Exponent::from_expr(a.to_expr() + b.to_expr());
}

Exponent operator*(const Exponent& a, const Exponent& b) {
  if (a.sym == 0 && b.sym == 0) return Exponent{a.c * b.c, 0};
  return Exponent::from_expr(a.to_expr() * b.to_expr());
}

int compare(const Monomial& a, const Monomial& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].atom != b[i].atom) return a[i].atom < b[i].atom ? -1 : 1;
    if (auto o = a[i].e <=> b[i].e; o != 0) return o < 0 ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// ---- Expr -----------------------------------------------------------------

namespace {
const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto z = std::make_shared<const Expr::Node>();
  return z;
}
} // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(Rational c) : node_(zero_node()) {
  if (c.is_zero()) return;
  auto n = std::make_shared<Node>();
  n->terms.push_back({{}, c});
  n->hash = mix(0x12345, term_hash(n->terms[0]));
  node_ = std::move(n);
}

Expr Expr::atom(AtomId a, Exponent e) {
  if (e.is_zero()) return Expr(1);
  Monomial m{{a, e}};
  if (needs_fixup(m)) return fixup(m, Rational(1));
  auto n = std::make_shared<Node>();
  n->terms.push_back({std::move(m), Rational(1)});
  n->hash = mix(0x12345, term_hash(n->terms[0]));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::from_terms(std::vector<Term> v) {
  // Callers in this file guarantee fixed-up monomials only via Accum; for
  // external callers we re-check.
  bool any_fix = false;
  for (const auto& t : v)
    if (needs_fixup(t.mono)) {
      any_fix = true;
      break;
    }
  if (any_fix) {
    Accum acc;
    for (auto& t : v) acc.push(std::move(t.mono), t.coef);
    return acc.finish();
  }
  std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return compare(a.mono, b.mono) < 0; });
  std::vector<Term> out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && compare(out.back().mono, t.mono) == 0) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
  if (out.empty()) return Expr();
  auto n = std::make_shared<Node>();
  n->terms = std::move(out);
  std::size_t h = 0x12345;
  for (const auto& t : n->terms) h = mix(h, term_hash(t));
  n->hash = h;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

const std::vector<Term>& Expr::terms() const { return node_->terms; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_constant() const {
  return terms().empty() || (terms().size() == 1 && terms()[0].mono.empty());
}

std::optional<Rational> Expr::constant_value() const {
  if (terms().empty()) return Rational(0);
  if (terms().size() == 1 && terms()[0].mono.empty()) return terms()[0].coef;
  return std::nullopt;
}

std::optional<AtomId> Expr::as_atom() const {
  if (terms().size() != 1) return std::nullopt;
  const Term& t = terms()[0];
  if (!t.coef.is_one() || t.mono.size() != 1 || !t.mono[0].e.is_one()) return std::nullopt;
  return t.mono[0].atom;
}

std::size_t Expr::node_count() const {
  std::size_t n = 0;
  for (const auto& t : terms()) n += 1 + t.mono.size();
  return n;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  const auto& x = a.terms();
  const auto& y = b.terms();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i].coef != y[i].coef || x[i].mono != y[i].mono) return false;
  return true;
}

namespace {
Expr scale(const Expr& e, const Rational& s) {
  if (s.is_zero() || e.is_zero()) return Expr();
  if (s.is_one()) return e;
  std::vector<Term> v = e.terms();
  for (auto& t : v) t.coef *= s;
  return Expr::from_terms(std::move(v));
}
} // namespace

Expr Expr::operator-() const { return scale(*this, Rational(-1)); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const int c = compare(x[i].mono, y[j].mono);
    if (c < 0) {
      out.push_back(x[i++]);
    } else if (c > 0) {
      out.push_back(y[j++]);
    } else {
      Rational s = x[i].coef + y[j].coef;
      if (!s.is_zero()) out.push_back({x[i].mono, s});
      ++i;
      ++j;
    }
  }
  while (i < x.size()) out.push_back(x[i++]);
  while (j < y.size()) out.push_back(y[j++]);
  return Expr::from_terms(std::move(out));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (auto c = a.constant_value()) return scale(b, *c);
  if (auto c = b.constant_value()) return scale(a, *c);
  Accum acc;
  acc.reserve(a.size() * b.size());
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) acc.push(mul_mono(x.mono, y.mono), x.coef * y.coef);
  return acc.finish();
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero expression");
  if (auto c = b.constant_value()) return scale(a, c->reciprocal());
  return a * pow(b, Rational(-1));
}

// ---- constructors -----------------------------------------------------------

const Atom& atom(AtomId id) { return table().chunks[id >> kChunkBits][id & (kChunk - 1)]; }
AtomKind atom_kind(AtomId id) { return atom(id).kind; }

const char* field_name(Field f) {
  switch (f) {
  case Field::U: return "U";
  case Field::Rho: return "rho";
  case Field::S: return "S";
  case Field::P: return "p";
  case Field::RhoTilde: return "rhot";
  }
  return "?";
}

AtomId var_id(Var v) {
  Atom a;
  a.kind = AtomKind::Var;
  a.var = v;
  a.name = v == Var::T ? "t" : "r";
  return intern(std::move(a));
}

Expr var(Var v) { return Expr::atom(var_id(v)); }

AtomId param_id(const std::string& name) {
  Atom a;
  a.kind = AtomKind::Param;
  a.name = name;
  return intern(std::move(a));
}

Expr param(const std::string& name) { return Expr::atom(param_id(name)); }
Expr placeholder(int i) { return param("#" + std::to_string(i)); }

AtomId jet_id(Field f, int tord, int rord) {
  if (tord < 0 || rord < 0) throw std::invalid_argument("negative jet order");
  Atom a;
  a.kind = AtomKind::Jet;
  a.field = f;
  a.tord = tord;
  a.rord = rord;
  return intern(std::move(a));
}

Expr jet(Field f, int tord, int rord) { return Expr::atom(jet_id(f, tord, rord)); }

namespace {

struct FunctionDef {
  std::vector<std::optional<Expr>> rules;
  bool automatic = true;
};

struct Registry {
  std::mutex mu;
  std::unordered_map<std::string, FunctionDef> defs;
};

Registry& registry() {
  static Registry* r = new Registry;
  return *r;
}

std::optional<FunctionDef> lookup_def(const std::string& name) {
  Registry& rg = registry();
  std::lock_guard lock(rg.mu);
  auto it = rg.defs.find(name);
  if (it == rg.defs.end()) return std::nullopt;
  return it->second;
}

// Reduce a function derivative through its rule for slot k.
Expr reduce_with_rule(const FunctionDef& def, std::size_t k, const std::vector<Expr>& args,
                      const std::vector<int>& deriv) {
  Expr e = *def.rules[k];
  for (std::size_t j = 0; j < deriv.size(); ++j) {
    const int times = deriv[j] - (j == k ? 1 : 0);
    const AtomId ph = param_id("#" + std::to_string(j));
    for (int i = 0; i < times; ++i) e = partial(e, ph);
  }
  std::unordered_map<AtomId, Expr> m;
  for (std::size_t j = 0; j < args.size(); ++j) m.emplace(param_id("#" + std::to_string(j)), args[j]);
  return substitute(e, m);
}

Expr make_func_raw(const std::string& name, std::vector<Expr> args, std::vector<int> deriv) {
  Atom a;
  a.kind = AtomKind::Func;
  a.name = name;
  a.args = std::move(args);
  a.deriv = std::move(deriv);
  return Expr::atom(intern(std::move(a)));
}

Expr make_func(const std::string& name, std::vector<Expr> args, std::vector<int> deriv, bool force_rules) {
  if (deriv.empty()) deriv.assign(args.size(), 0);
  if (deriv.size() != args.size()) throw std::invalid_argument("derivative index arity mismatch for " + name);
  for (int d : deriv)
    if (d < 0) throw std::invalid_argument("negative derivative order");
  if (auto def = lookup_def(name); def && (def->automatic || force_rules)) {
    if (def->rules.size() != args.size())
      throw std::invalid_argument("function " + name + " expects " + std::to_string(def->rules.size()) +
                                  " arguments");
    for (std::size_t k = 0; k < deriv.size(); ++k)
      if (deriv[k] > 0 && def->rules[k]) return reduce_with_rule(*def, k, args, deriv);
  }
  return make_func_raw(name, std::move(args), std::move(deriv));
}

} // namespace

Expr func(const std::string& name, std::vector<Expr> args, std::vector<int> deriv) {
  return make_func(name, std::move(args), std::move(deriv), false);
}

void define_function(const std::string& name, std::vector<std::optional<Expr>> slot_rules, bool automatic) {
  Registry& rg = registry();
  std::lock_guard lock(rg.mu);
  rg.defs[name] = FunctionDef{std::move(slot_rules), automatic};
}

bool has_function_rules(const std::string& name) { return lookup_def(name).has_value(); }

Expr apply_rules(const Expr& e, const std::string& name) {
  Expr cur = e;
  for (int iter = 0; iter < 64; ++iter) {
    bool changed = false;
    Expr next = map_atoms(cur, [&](AtomId id) -> std::optional<Expr> {
      const Atom& a = atom(id);
      if (a.kind != AtomKind::Func || a.name != name) return std::nullopt;
      bool reducible = false;
      auto def = lookup_def(name);
      for (std::size_t k = 0; def && k < a.deriv.size(); ++k)
        if (a.deriv[k] > 0 && def->rules[k]) reducible = true;
      if (!reducible) return std::nullopt;
      changed = true;
      return make_func(a.name, a.args, a.deriv, true);
    });
    cur = next;
    if (!changed) return cur;
  }
  throw std::runtime_error("rule application for " + name + " did not terminate");
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr(1);
  Atom at;
  at.kind = AtomKind::Exp;
  at.args = {a};
  return Expr::atom(intern(std::move(at)));
}

namespace {

Expr log_atom(const Expr& a) {
  Atom at;
  at.kind = AtomKind::Log;
  at.args = {a};
  return Expr::atom(intern(std::move(at)));
}

Expr number_atom(const Rational& base, const Exponent& e) {
  Atom at;
  at.kind = AtomKind::Number;
  at.number = base;
  return Expr::atom(intern(std::move(at)), e);
}

// Prime factorization for moderately sized integers; nullopt if too large.
std::optional<std::vector<std::pair<std::int64_t, int>>> factorize(std::int64_t v) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (v > 1'000'000'000'000LL) return std::nullopt;
  for (std::int64_t p = 2; p * p <= v; ++p) {
    int k = 0;
    while (v % p == 0) {
      v /= p;
      ++k;
    }
    if (k) out.emplace_back(p, k);
  }
  if (v > 1) out.emplace_back(v, 1);
  return out;
}

Expr rational_pow(const Rational& c, const Exponent& e) {
  if (e.is_zero() || c.is_one()) return Expr(1);
  if (e.is_integer()) return Expr(c.pow(e.c.num()));
  if (c.is_zero()) {
    if (e.sym == 0 && e.c.sign() > 0) return Expr();
    throw std::domain_error("zero to a non-positive power");
  }
  if (c.sign() < 0) {
    if (e.sym == 0 && e.c.den() % 2 == 1) {
      Expr mag = rational_pow(-c, e);
      return e.c.num() % 2 == 0 ? mag : -mag;
    }
    throw std::domain_error("negative base " + c.str() + " with non-integer exponent");
  }
  Expr out(1);
  auto emit = [&](std::int64_t v, int sign) {
    auto fac = factorize(v);
    if (!fac) {
      out = out * number_atom(Rational(v), sign > 0 ? e : e * Exponent{Rational(-1), 0});
      return;
    }
    for (auto [p, k] : *fac) {
      Exponent pe = e * Exponent{Rational(k * sign), 0};
      out = out * number_atom(Rational(p), pe);
    }
  };
  if (e.sym != 0) {
    // symbolic exponents keep negative powers inside the exponent
    emit(c.num(), 1);
    if (c.den() != 1) emit(c.den(), -1);
    return out;
  }
  emit(c.num(), 1);
  if (c.den() != 1) emit(c.den(), -1);
  return out;
}

AtomId base_atom(const Expr& p) {
  Atom at;
  at.kind = AtomKind::Base;
  at.args = {p};
  return intern(std::move(at));
}

} // namespace

Expr pow(const Expr& base, const Exponent& e) {
  if (e.is_zero()) return Expr(1);
  if (e.is_one()) return base;
  if (base.is_zero()) {
    if (e.sym == 0 && e.c.sign() > 0) return Expr();
    throw std::domain_error("zero expression raised to a non-positive power");
  }
  if (e.is_integer() && e.c.sign() > 0) return ipow(base, e.c.num());
  if (base.size() == 1) {
    const Term& t = base.terms()[0];
    Monomial m;
    m.reserve(t.mono.size());
    for (const auto& f : t.mono) {
      Exponent ne = f.e * e;
      if (!ne.is_zero()) m.push_back({f.atom, ne});
    }
    Accum acc;
    acc.push(std::move(m), Rational(1));
    return acc.finish() * rational_pow(t.coef, e);
  }
  // Irreducible sum: pull out the monomial content and the leading
  // coefficient so that equal bases share one atom.
  const auto& ts = base.terms();
  Monomial content;
  for (const auto& f : ts[0].mono) {
    if (f.e.sym != 0) continue;
    Rational lo = f.e.c;
    bool everywhere = true;
    for (std::size_t i = 1; i < ts.size() && everywhere; ++i) {
      auto it = std::find_if(ts[i].mono.begin(), ts[i].mono.end(), [&](const Factor& g) { return g.atom == f.atom; });
      if (it == ts[i].mono.end() || it->e.sym != 0) {
        everywhere = false;
      } else {
        lo = std::min(lo, it->e.c);
      }
    }
    if (everywhere && !lo.is_zero()) content.push_back({f.atom, Exponent{lo, 0}});
  }
  if (!content.empty()) {
    Expr g = Expr::from_terms({Term{content, Rational(1)}});
    Expr rest = base * pow(g, Rational(-1));
    return pow(g, e) * pow(rest, e);
  }
  const Rational lead = ts[0].coef;
  const Rational norm = e.is_integer() || lead.sign() > 0 ? lead : -lead;
  Expr p = scale(base, norm.reciprocal());
  return Expr::atom(base_atom(p), e) * rational_pow(norm, e);
}

Expr pow(const Expr& base, const Rational& e) { return pow(base, Exponent{e, 0}); }
Expr pow(const Expr& base, const Expr& e) { return pow(base, Exponent::from_expr(e)); }
Expr sqrt(const Expr& a) { return pow(a, Rational(1, 2)); }

Expr log(const Expr& a) {
  if (a.is_zero()) throw std::domain_error("log of zero");
  if (a.size() != 1) return log_atom(a);
  const Term& t = a.terms()[0];
  Expr out;
  if (!t.coef.is_one()) {
    if (t.coef.sign() < 0) throw std::domain_error("log of a negative coefficient");
    out += log_atom(Expr(t.coef));
  }
  for (const auto& f : t.mono) {
    const Atom& at = atom(f.atom);
    Expr l = at.kind == AtomKind::Exp      ? at.args[0]
             : at.kind == AtomKind::Number ? log_atom(Expr(at.number))
                                           : log_atom(Expr::atom(f.atom));
    out += f.e.to_expr() * l;
  }
  return out;
}

// ---- calculus ---------------------------------------------------------------

namespace {

struct DerivCache {
  std::mutex mu;
  std::unordered_map<std::uint64_t, Expr> total;
  std::unordered_map<std::uint64_t, Expr> part;
};

DerivCache& dcache() {
  static DerivCache* c = new DerivCache;
  return *c;
}

std::vector<int> bump(std::vector<int> d, std::size_t k) {
  ++d[k];
  return d;
}

Expr atom_total(AtomId id, Var v) {
  const Atom& a = atom(id);
  switch (a.kind) {
  case AtomKind::Var: return a.var == v ? Expr(1) : Expr();
  case AtomKind::Param:
  case AtomKind::Number: return Expr();
  case AtomKind::Jet: return jet(a.field, a.tord + (v == Var::T), a.rord + (v == Var::R));
  default: break;
  }
  const std::uint64_t key = (static_cast<std::uint64_t>(id) << 1) | (v == Var::R ? 1u : 0u);
  {
    DerivCache& c = dcache();
    std::lock_guard lock(c.mu);
    if (auto it = c.total.find(key); it != c.total.end()) return it->second;
  }
  Expr out;
  switch (a.kind) {
  case AtomKind::Func:
    for (std::size_t k = 0; k < a.args.size(); ++k) {
      Expr da = total_derivative(a.args[k], v);
      if (!da.is_zero()) out += func(a.name, a.args, bump(a.deriv, k)) * da;
    }
    break;
  case AtomKind::Exp: out = Expr::atom(id) * total_derivative(a.args[0], v); break;
  case AtomKind::Log: out = total_derivative(a.args[0], v) / a.args[0]; break;
  case AtomKind::Base: out = total_derivative(a.args[0], v); break;
  default: break;
  }
  DerivCache& c = dcache();
  std::lock_guard lock(c.mu);
  c.total.emplace(key, out);
  return out;
}

Expr atom_partial(AtomId id, AtomId leaf) {
  if (id == leaf) return Expr(1);
  const Atom& a = atom(id);
  if (a.kind == AtomKind::Var || a.kind == AtomKind::Param || a.kind == AtomKind::Jet ||
      a.kind == AtomKind::Number)
    return Expr();
  if (!std::binary_search(a.leaves.begin(), a.leaves.end(), leaf)) return Expr();
  const std::uint64_t key = (static_cast<std::uint64_t>(id) << 32) | leaf;
  {
    DerivCache& c = dcache();
    std::lock_guard lock(c.mu);
    if (auto it = c.part.find(key); it != c.part.end()) return it->second;
  }
  Expr out;
  switch (a.kind) {
  case AtomKind::Func:
    for (std::size_t k = 0; k < a.args.size(); ++k) {
      Expr da = partial(a.args[k], leaf);
      if (!da.is_zero()) out += func(a.name, a.args, bump(a.deriv, k)) * da;
    }
    break;
  case AtomKind::Exp: out = Expr::atom(id) * partial(a.args[0], leaf); break;
  case AtomKind::Log: out = partial(a.args[0], leaf) / a.args[0]; break;
  case AtomKind::Base: out = partial(a.args[0], leaf); break;
  default: break;
  }
  DerivCache& c = dcache();
  std::lock_guard lock(c.mu);
  c.part.emplace(key, out);
  return out;
}

// d/dz of a sum given the derivative of each atom.
template <class AtomDeriv, class SymDeriv>
Expr differentiate(const Expr& e, AtomDeriv&& datom, SymDeriv&& dsym) {
  Accum acc;
  std::unordered_map<AtomId, Expr> memo;
  for (const auto& t : e.terms()) {
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      const Factor& f = t.mono[i];
      auto it = memo.find(f.atom);
      if (it == memo.end()) it = memo.emplace(f.atom, datom(f.atom)).first;
      const Expr& d = it->second;
      Expr ds = f.e.sym ? dsym(f.e.sym) : Expr();
      if (d.is_zero() && ds.is_zero()) continue;
      Monomial m = t.mono;
      if (!d.is_zero()) {
        Exponent em = f.e + Exponent{Rational(-1), 0};
        if (em.is_zero()) {
          m.erase(m.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          m[i].e = em;
        }
        if (f.e.sym == 0) {
          for (const auto& dt : d.terms()) acc.push(mul_mono(m, dt.mono), dt.coef * t.coef * f.e.c);
        } else {
          Expr mt = Expr::from_terms({Term{m, t.coef}}) * f.e.to_expr() * d;
          acc.push_expr(mt);
        }
      }
      if (!ds.is_zero()) {
        // x^E with E depending on the variable: x^E ln(x) dE
        Expr mt = Expr::from_terms({Term{t.mono, t.coef}}) * log(Expr::atom(f.atom)) * ds;
        acc.push_expr(mt);
      }
    }
  }
  return acc.finish();
}

} // namespace

Expr partial(const Expr& e, AtomId leaf) {
  const bool is_param = atom(leaf).kind == AtomKind::Param;
  return differentiate(
      e, [&](AtomId id) { return atom_partial(id, leaf); },
      [&](std::uint32_t sym) { return is_param ? partial(sym_expr(sym), leaf) : Expr(); });
}

Expr total_derivative(const Expr& e, Var v, int times) {
  Expr cur = e;
  for (int i = 0; i < times && !cur.is_zero(); ++i)
    cur = differentiate(
        cur, [&](AtomId id) { return atom_total(id, v); }, [](std::uint32_t) { return Expr(); });
  return cur;
}

bool depends_on(const Expr& e, AtomId leaf) {
  for (const auto& t : e.terms())
    for (const auto& f : t.mono) {
      const auto& lv = atom(f.atom).leaves;
      if (std::binary_search(lv.begin(), lv.end(), leaf)) return true;
      if (f.e.sym && depends_on(sym_expr(f.e.sym), leaf)) return true;
    }
  return false;
}

int max_rord(const Expr& e, Field fld) {
  int m = -1;
  for (const auto& t : e.terms())
    for (const auto& f : t.mono)
      for (AtomId l : atom(f.atom).leaves) {
        const Atom& a = atom(l);
        if (a.kind == AtomKind::Jet && a.field == fld && a.tord == 0) m = std::max(m, a.rord);
      }
  return m;
}

int max_tord(const Expr& e) {
  int m = 0;
  for (const auto& t : e.terms())
    for (const auto& f : t.mono) m = std::max(m, atom(f.atom).max_tord);
  return m;
}

std::vector<AtomId> atoms_of(const Expr& e) {
  std::vector<AtomId> out;
  for (const auto& t : e.terms())
    for (const auto& f : t.mono) out.push_back(f.atom);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {
std::int64_t binom(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
} // namespace

Expr euler_operator(const Expr& e, Field v, int order) {
  if (max_tord(e) > 0) throw std::invalid_argument("euler_operator: expression contains t-derivatives");
  const int top = max_rord(e, v);
  if (top < order) return Expr();
  // Horner form of sum_j binom(order+j, order) (-D_r)^j dE/dv_(order+j)
  Expr acc;
  for (int j = top - order; j >= 0; --j) {
    Expr pj = partial(e, jet_id(v, 0, order + j));
    acc = pj * Expr(Rational(binom(order + j, order))) - Dr(acc);
  }
  return acc;
}

// ---- rewriting ----------------------------------------------------------------

namespace {

struct Mapper {
  const AtomMap& fn;
  std::unordered_map<AtomId, std::optional<Expr>> memo;

  std::optional<Expr> resolve(AtomId id) {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    std::optional<Expr> r = fn(id);
    if (!r) {
      const Atom& a = atom(id);
      if (!a.args.empty()) {
        std::vector<Expr> nargs;
        bool changed = false;
        for (const auto& x : a.args) {
          Expr y = run(x);
          changed = changed || !(y == x);
          nargs.push_back(std::move(y));
        }
        if (changed) {
          switch (a.kind) {
          case AtomKind::Func: r = func(a.name, std::move(nargs), a.deriv); break;
          case AtomKind::Exp: r = exp(nargs[0]); break;
          case AtomKind::Log: r = log(nargs[0]); break;
          case AtomKind::Base: r = nargs[0]; break;
          default: break;
          }
        }
      }
    }
    memo.emplace(id, r);
    return r;
  }

  std::unordered_map<std::uint32_t, std::optional<Exponent>> sym_memo;

  // New exponent when parameters inside a symbolic exponent are replaced.
  std::optional<Exponent> resolve_sym(std::uint32_t sym) {
    if (sym == 0) return std::nullopt;
    if (auto it = sym_memo.find(sym); it != sym_memo.end()) return it->second;
    std::optional<Exponent> out;
    Expr s = sym_expr(sym);
    Expr m = run(s);
    if (!(m == s)) out = Exponent::from_expr(m);
    sym_memo.emplace(sym, out);
    return out;
  }

  Expr run(const Expr& e) {
    Accum acc;
    for (const auto& t : e.terms()) {
      bool changed = false;
      for (const auto& f : t.mono)
        if (resolve(f.atom) || resolve_sym(f.e.sym)) {
          changed = true;
          break;
        }
      if (!changed) {
        acc.raw().push_back(t);
        continue;
      }
      Monomial kept;
      Expr prod(t.coef);
      for (const auto& f : t.mono) {
        auto rep = resolve(f.atom);
        Exponent ex = f.e;
        if (auto ns = resolve_sym(f.e.sym)) ex = Exponent{f.e.c, 0} + *ns;
        if (rep) {
          prod = prod * pow(*rep, ex);
        } else if (!(ex == f.e)) {
          prod = prod * Expr::atom(f.atom, ex);
        } else {
          kept.push_back(f);
        }
      }
      prod = prod * Expr::from_terms({Term{kept, Rational(1)}});
      acc.push_expr(prod);
    }
    return acc.finish();
  }
};

} // namespace

Expr map_atoms(const Expr& e, const AtomMap& fn) {
  Mapper m{fn, {}, {}};
  return m.run(e);
}

Expr substitute(const Expr& e, const std::unordered_map<AtomId, Expr>& m) {
  if (m.empty()) return e;
  return map_atoms(e, [&](AtomId id) -> std::optional<Expr> {
    if (auto it = m.find(id); it != m.end()) return it->second;
    return std::nullopt;
  });
}

std::vector<std::pair<Expr, Expr>> split_by(const Expr& e, const std::function<bool(AtomId)>& pred) {
  struct Less {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
  };
  std::map<Monomial, std::vector<Term>, Less> groups;
  for (const auto& t : e.terms()) {
    Monomial key, rest;
    for (const auto& f : t.mono) (pred(f.atom) ? key : rest).push_back(f);
    groups[key].push_back({std::move(rest), t.coef});
  }
  std::vector<std::pair<Expr, Expr>> out;
  for (auto& [k, v] : groups)
    out.emplace_back(Expr::from_terms({Term{k, Rational(1)}}), Expr::from_terms(std::move(v)));
  return out;
}

Expr clear_denominators(const Expr& e) {
  std::map<AtomId, Rational> worst;
  for (const auto& t : e.terms())
    for (const auto& f : t.mono)
      if (atom(f.atom).kind == AtomKind::Base && f.e.is_integer() && f.e.c.sign() < 0) {
        auto& w = worst[f.atom];
        w = std::min(w, f.e.c);
      }
  if (worst.empty()) return e;
  Monomial m;
  for (const auto& [id, ex] : worst) m.push_back({id, Exponent{-ex, 0}});
  Accum acc;
  for (const auto& t : e.terms()) acc.push(mul_mono(t.mono, m), t.coef);
  return acc.finish();
}

// ---- printing ---------------------------------------------------------------

namespace {

std::string atom_string(AtomId id);

std::string exponent_string(const Exponent& e) {
  if (e.sym == 0 && e.c.is_integer() && e.c.sign() > 0) return e.c.str();
  return "(" + to_string(e.to_expr()) + ")";
}

std::string atom_string(AtomId id) {
  const Atom& a = atom(id);
  std::ostringstream os;
  switch (a.kind) {
  case AtomKind::Var:
  case AtomKind::Param: return a.name;
  case AtomKind::Jet: {
    if (a.tord == 0 && a.rord == 0) return field_name(a.field);
    os << "diff(" << field_name(a.field);
    for (int i = 0; i < a.tord; ++i) os << ",t";
    for (int i = 0; i < a.rord; ++i) os << ",r";
    os << ")";
    return os.str();
  }
  case AtomKind::Func: {
    os << a.name;
    if (std::any_of(a.deriv.begin(), a.deriv.end(), [](int d) { return d != 0; })) {
      os << "{";
      for (std::size_t i = 0; i < a.deriv.size(); ++i) os << (i ? "," : "") << a.deriv[i];
      os << "}";
    }
    os << "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? "," : "") << to_string(a.args[i]);
    os << ")";
    return os.str();
  }
  case AtomKind::Exp: return "exp(" + to_string(a.args[0]) + ")";
  case AtomKind::Log: return "ln(" + to_string(a.args[0]) + ")";
  case AtomKind::Base: return "(" + to_string(a.args[0]) + ")";
  case AtomKind::Number: return "(" + a.number.str() + ")";
  }
  return "?";
}

} // namespace

std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    Rational c = t.coef;
    if (!first) {
      out += c.sign() < 0 ? " - " : " + ";
      if (c.sign() < 0) c = -c;
    } else if (c.sign() < 0 && !t.mono.empty()) {
      out += "-";
      c = -c;
    }
    first = false;
    std::string body;
    for (const auto& f : t.mono) {
      if (!body.empty()) body += "*";
      body += atom_string(f.atom);
      if (!f.e.is_one()) body += "^" + exponent_string(f.e);
    }
    if (t.mono.empty()) {
      out += c.str();
    } else if (c.is_one()) {
      out += body;
    } else {
      out += c.str() + "*" + body;
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

} // namespace radflow::expr
