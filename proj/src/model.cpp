#include "radflow/model.hpp"

#include <cstdio>
#include <stdexcept>

namespace radflow::model {

using namespace expr;

const char* kind_name(EosKind k) {
  switch (k) {
  case EosKind::General: return "general";
  case EosKind::Separable: return "separable";
  case EosKind::Additive: return "additive";
  case EosKind::ScaledPower: return "scaled_power";
  case EosKind::LogForm: return "log_form";
  case EosKind::Barotropic: return "barotropic";
  case EosKind::Polytropic: return "polytropic";
  case EosKind::Entropic: return "entropic";
  case EosKind::Concrete: return "concrete";
  }
  return "?";
}

Expr U() { return jet(Field::U); }
Expr rho() { return jet(Field::Rho); }
Expr S() { return jet(Field::S); }

Expr default_kappa() { return func("kappa", {S()}); }
Expr opaque(const std::string& name, const Expr& arg) { return func(name, {arg}); }

namespace {

Expr ph(int i) { return placeholder(i); }

// Opaque one-slot antiderivative G with G'(#0) = integrand. The name carries
// a hash of the rule so different integrands never share cached derivatives.
Expr antiderivative(const std::string& base, const Expr& integrand, const Expr& arg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04zx", integrand.hash() & 0xffff);
  const std::string name = base + buf;
  if (!has_function_rules(name)) define_function(name, {integrand});
  return func(name, {arg});
}

Eos make(EosKind kind, std::string label, Expr p) {
  Eos e;
  e.kind = kind;
  e.label = std::move(label);
  e.p = std::move(p);
  return e;
}

} // namespace

Expr Eos::p_rho() const { return partial(p, jet_id(Field::Rho, 0, 0)); }
Expr Eos::p_S() const { return partial(p, jet_id(Field::S, 0, 0)); }
Expr Eos::temperature() const { return partial(e, jet_id(Field::S, 0, 0)); }

std::optional<Expr> Eos::a2_gas() const {
  const Expr P = jet(Field::P);
  switch (kind) {
  case EosKind::Polytropic: return (Expr(1) + q) * P / rho();
  case EosKind::Entropic: return Expr(0);
  case EosKind::Barotropic: return p_rho();
  default:
    if (p_S().is_zero()) return p_rho();
    return std::nullopt;
  }
}

std::optional<Expr> Eos::e_gas() const {
  const Expr P = jet(Field::P);
  switch (kind) {
  case EosKind::Polytropic: return P / (q * rho());
  case EosKind::Entropic: return -P / rho();
  case EosKind::Barotropic: return e;
  default:
    if (p_S().is_zero()) return e;
    return std::nullopt;
  }
}

Eos general() {
  Eos e = make(EosKind::General, "p(rho,S)", func("p", {rho(), S()}));
  const std::string name = "e_p";
  if (!has_function_rules(name)) define_function(name, {func("p", {ph(0), ph(1)}) / pow(ph(0), Rational(2)), std::nullopt});
  e.e = func(name, {rho(), S()});
  return e;
}

Eos separable(Expr kappa, const std::string& f) {
  Eos e = make(EosKind::Separable, "kappa(S)*" + f + "(rho)", kappa * func(f, {rho()}));
  e.kappa = kappa;
  e.e = kappa * antiderivative("G" + f, func(f, {ph(0)}) / pow(ph(0), Rational(2)), rho());
  return e;
}

Eos additive(Expr kappa, const std::string& f) {
  Eos e = make(EosKind::Additive, f + "(rho)+kappa(S)", func(f, {rho()}) + kappa);
  e.kappa = kappa;
  e.e = antiderivative("G" + f, func(f, {ph(0)}) / pow(ph(0), Rational(2)), rho()) - kappa / rho();
  return e;
}

Eos scaled_power(Expr kappa, Expr q, const std::string& f) {
  const Expr x = kappa * rho();
  Eos e = make(EosKind::ScaledPower, f + "(kappa(S)*rho)*rho^(1+q)", func(f, {x}) * pow(rho(), Expr(1) + q));
  e.kappa = kappa;
  e.q = q;
  // e = kappa^(-q) G(kappa rho) with G'(x) = f(x) x^(q-1)
  e.e = pow(kappa, -q) * antiderivative("H" + f, func(f, {ph(0)}) * pow(ph(0), q - Expr(1)), x);
  return e;
}

Eos log_form(Expr kappa, Expr k, const std::string& f) {
  const Expr x = kappa * rho();
  Eos e = make(EosKind::LogForm, f + "(kappa(S)*rho)+k*ln(rho)", func(f, {x}) + k * log(rho()));
  e.kappa = kappa;
  e.k = k;
  // e = kappa G(kappa rho) - k (ln rho + 1)/rho with G'(x) = f(x)/x^2
  e.e = kappa * antiderivative("G" + f, func(f, {ph(0)}) / pow(ph(0), Rational(2)), x) -
        k * (log(rho()) + Expr(1)) / rho();
  return e;
}

Eos barotropic(const std::string& f) {
  Eos e = make(EosKind::Barotropic, f + "(rho)", func(f, {rho()}));
  e.e = antiderivative("G" + f, func(f, {ph(0)}) / pow(ph(0), Rational(2)), rho());
  return e;
}

Eos polytropic(Expr kappa, Expr q) {
  Eos e = make(EosKind::Polytropic, "kappa(S)*rho^(1+q)", kappa * pow(rho(), Expr(1) + q));
  e.kappa = kappa;
  e.q = q;
  e.e = kappa * pow(rho(), q) / q;
  return e;
}

Eos polytropic_critical(Expr kappa, const Expr& n) {
  Eos e = polytropic(std::move(kappa), Expr(2) / n);
  e.label = "kappa(S)*rho^(1+2/n)";
  return e;
}

Eos entropic(Expr kappa) {
  Eos e = make(EosKind::Entropic, "kappa(S)", kappa);
  e.kappa = kappa;
  e.e = -kappa / rho();
  return e;
}

Eos concrete(const Expr& p, const std::string& label) {
  Eos e = make(EosKind::Concrete, label, p);
  const AtomId r_id = jet_id(Field::Rho, 0, 0);
  Expr acc;
  bool ok = true;
  for (const Term& t : p.terms()) {
    Monomial rest;
    Exponent m{Rational(0), 0};
    for (const Factor& f : t.mono) {
      if (f.atom == r_id) {
        m = f.e;
      } else {
        if (depends_on(Expr::atom(f.atom), r_id)) ok = false;
        rest.push_back(f);
      }
    }
    if (!ok) break;
    const Expr coef = Expr::from_terms({Term{rest, t.coef}});
    const Exponent m1 = m + Exponent{Rational(-1), 0};
    if (m1.is_zero())
      acc += coef * log(rho());
    else
      acc += coef * pow(rho(), m1) / m1.to_expr();
  }
  if (ok) {
    e.e = acc;
  } else {
    std::unordered_map<AtomId, Expr> sub{{r_id, ph(0)}, {jet_id(Field::S, 0, 0), ph(1)}};
    const Expr integrand = substitute(p, sub) / pow(ph(0), Rational(2));
    char buf[32];
    std::snprintf(buf, sizeof buf, "e_%04zx", integrand.hash() & 0xffff);
    if (!has_function_rules(buf)) define_function(buf, {integrand, std::nullopt});
    e.e = func(buf, {rho(), S()});
  }
  return e;
}

std::vector<Expr> membership_relations(EosKind kind, const Expr& p, const Expr& q, const Expr& k) {
  const AtomId r_id = jet_id(Field::Rho, 0, 0), s_id = jet_id(Field::S, 0, 0);
  auto dr = [&](const Expr& e) { return partial(e, r_id); };
  auto ds = [&](const Expr& e) { return partial(e, s_id); };
  // g depends on (rho,S) only through kappa(S) rho: g_S / (rho g_rho) is
  // free of rho, written without the division
  auto one_combination = [&](const Expr& g) {
    const Expr w = rho() * dr(g);
    return dr(ds(g)) * w - ds(g) * dr(w);
  };
  switch (kind) {
  case EosKind::General:
  case EosKind::Concrete: return {};
  case EosKind::Separable: return {p * dr(ds(p)) - dr(p) * ds(p)};
  case EosKind::Additive: return {dr(ds(p))};
  case EosKind::ScaledPower: return {one_combination(p * pow(rho(), -(Expr(1) + q)))};
  case EosKind::LogForm: return {one_combination(p - k * log(rho()))};
  case EosKind::Barotropic: return {ds(p)};
  case EosKind::Polytropic: return {rho() * dr(p) - (Expr(1) + q) * p};
  case EosKind::Entropic: return {dr(p)};
  }
  return {};
}

bool is_member(EosKind kind, const Expr& p, const Expr& q, const Expr& k) {
  for (const Expr& rel : membership_relations(kind, p, q, k))
    if (!is_zero(rel)) return false;
  return true;
}

std::vector<Expr> euler_residuals(const FieldTriple& fl, const Eos& eos, const Expr& n) {
  std::unordered_map<AtomId, Expr> sub{{jet_id(Field::Rho, 0, 0), fl.rho}, {jet_id(Field::S, 0, 0), fl.s}};
  const Expr pS = substitute(eos.p_S(), sub), pR = substitute(eos.p_rho(), sub);
  const Expr& u = fl.u;
  const Expr& d = fl.rho;
  const Expr& s = fl.s;
  return {
      Dt(u) + u * Dr(u) + (pS * Dr(s) + pR * Dr(d)) / d,
      Dt(d) + Dr(u * d) + (n - Expr(1)) / r() * u * d,
      Dt(s) + u * Dr(s),
  };
}

std::vector<Expr> evolution(const Eos& eos, const Expr& n) {
  const Expr u = U(), d = rho(), s = S();
  const Expr ur = jet(Field::U, 0, 1), dr_ = jet(Field::Rho, 0, 1), sr = jet(Field::S, 0, 1);
  return {
      -u * ur - (eos.p_S() * sr + eos.p_rho() * dr_) / d,
      -(ur * d + u * dr_) - (n - Expr(1)) / r() * u * d,
      -u * sr,
  };
}

SystemContext make_context(const Eos& eos, const Expr& n) {
  auto ev = evolution(eos, n);
  return SystemContext(n, {{Field::U, ev[0]}, {Field::Rho, ev[1]}, {Field::S, ev[2]}});
}

GasForm to_gas_dynamics(const Eos& eos, const Expr& n) {
  const Expr a2 = eos.a2();
  const Expr u = U();
  const Expr res = Dt(eos.p) + u * Dr(eos.p) + a2 * rho() * (jet(Field::U, 0, 1) + (n - Expr(1)) / r() * u);
  return {res, a2};
}

} // namespace radflow::model
