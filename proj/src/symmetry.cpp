#include "radflow/symmetry.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "radflow/jet.hpp"

namespace radflow::symmetry {

using namespace expr;
using model::rho;
using model::S;
using model::U;

namespace {

Expr t_() { return expr::t(); }
Expr r_() { return expr::r(); }
Expr dS(const Expr& e) { return partial(e, jet_id(Field::S, 0, 0)); }

PointGenerator gen(std::string name, Expr tau, Expr xi, Expr eu, Expr er, Expr es) {
  return {std::move(name), std::move(tau), std::move(xi), std::move(eu), std::move(er), std::move(es)};
}

} // namespace

int Characteristic::order() const {
  int k = 0;
  for (const Expr* e : {&pu, &prho, &ps})
    for (AtomId id : atoms_of(*e))
      for (AtomId leaf : atom(id).leaves)
        if (atom(leaf).kind == AtomKind::Jet) k = std::max(k, atom(leaf).tord + atom(leaf).rord);
  return k;
}

Characteristic Characteristic::operator+(const Characteristic& o) const {
  return {name + "+" + o.name, pu + o.pu, prho + o.prho, ps + o.ps};
}
Characteristic Characteristic::operator-(const Characteristic& o) const {
  return {name + "-" + o.name, pu - o.pu, prho - o.prho, ps - o.ps};
}
Characteristic Characteristic::operator*(const Expr& c) const { return {name, pu * c, prho * c, ps * c}; }
bool Characteristic::is_zero() const {
  return expr::is_zero(pu) && expr::is_zero(prho) && expr::is_zero(ps);
}

Characteristic to_characteristic(const PointGenerator& g) {
  auto P = [&](const Expr& eta, Field v) { return eta - g.tau * jet(v, 1, 0) - g.xi * jet(v, 0, 1); };
  return {g.name, P(g.eta_u, Field::U), P(g.eta_rho, Field::Rho), P(g.eta_s, Field::S)};
}

PointGenerator operator+(const PointGenerator& a, const PointGenerator& b) {
  return {a.name + "+" + b.name, a.tau + b.tau, a.xi + b.xi, a.eta_u + b.eta_u, a.eta_rho + b.eta_rho,
          a.eta_s + b.eta_s};
}
PointGenerator operator*(const Expr& c, const PointGenerator& g) {
  return {g.name, c * g.tau, c * g.xi, c * g.eta_u, c * g.eta_rho, c * g.eta_s};
}
bool same_generator(const PointGenerator& a, const PointGenerator& b) {
  return is_zero(a.tau - b.tau) && is_zero(a.xi - b.xi) && is_zero(a.eta_u - b.eta_u) &&
         is_zero(a.eta_rho - b.eta_rho) && is_zero(a.eta_s - b.eta_s);
}

std::vector<Expr> determining_residuals(const Characteristic& c, const Eos& eos, const Expr& n) {
  const Expr u = U(), d = rho();
  const Expr ur = jet(Field::U, 0, 1), dr_ = jet(Field::Rho, 0, 1), sr = jet(Field::S, 0, 1);
  const Expr pS = eos.p_S(), pR = eos.p_rho();
  const Expr flux = u * c.prho + d * c.pu;
  std::vector<Expr> out{
      Dt(c.pu) + u * Dr(c.pu) + ur * c.pu + Dr(pS * c.ps + pR * c.prho) / d -
          (pS * sr + pR * dr_) * c.prho / (d * d),
      Dt(c.prho) + Dr(flux) + (n - Expr(1)) / r_() * flux,
      Dt(c.ps) + u * Dr(c.ps) + sr * c.pu,
  };
  const SystemContext ctx = model::make_context(eos, n);
  for (Expr& e : out) e = ctx.restrict(e);
  return out;
}

bool is_symmetry(const Characteristic& c, const Eos& eos, const Expr& n) {
  for (const Expr& e : determining_residuals(c, eos, n))
    if (!is_zero(e)) return false;
  return true;
}

Expr prolonged_action(const Characteristic& q, const Expr& f) {
  std::set<AtomId> jets;
  for (AtomId id : atoms_of(f))
    for (AtomId leaf : atom(id).leaves)
      if (atom(leaf).kind == AtomKind::Jet) jets.insert(leaf);
  Expr out;
  for (AtomId leaf : jets) {
    const Atom& a = atom(leaf);
    const Expr* comp = nullptr;
    switch (a.field) {
    case Field::U: comp = &q.pu; break;
    case Field::Rho: comp = &q.prho; break;
    case Field::S: comp = &q.ps; break;
    default: continue;
    }
    Expr dq = total_derivative(total_derivative(*comp, Var::T, a.tord), Var::R, a.rord);
    out += dq * partial(f, leaf);
  }
  return out;
}

Characteristic commutator(const Characteristic& a, const Characteristic& b) {
  return {"[" + a.name + "," + b.name + "]", prolonged_action(a, b.pu) - prolonged_action(b, a.pu),
          prolonged_action(a, b.prho) - prolonged_action(b, a.prho),
          prolonged_action(a, b.ps) - prolonged_action(b, a.ps)};
}

bool equal(const Characteristic& a, const Characteristic& b) { return (a - b).is_zero(); }

// ---- catalog --------------------------------------------------------------

PointGenerator X1() { return gen("X1", 1, 0, 0, 0, 0); }
PointGenerator X2() { return gen("X2", t_(), r_(), 0, 0, 0); }
PointGenerator X_ii(const Expr& kappa, const Expr& q) {
  return gen("X_ii", 0, q * r_(), q * U(), Expr(2) * rho(), Expr(-2) * kappa / dS(kappa));
}
PointGenerator X_iii(const Expr& kappa) { return gen("X_iii", 0, r_(), U(), 0, Expr(2) * kappa / dS(kappa)); }
PointGenerator X_iv(const Expr& q) { return gen("X_iv", 0, q * r_(), q * U(), Expr(2) * rho(), 0); }
PointGenerator X_iv_prime(const Expr& n) { return gen("X'_iv", 0, r_(), U(), n * rho(), 0); }
PointGenerator X_v(const Expr& n) {
  return gen("X_v", t_() * t_(), r_() * t_(), r_() - t_() * U(), -n * t_() * rho(), 0);
}
PointGenerator X_vi(const Expr& kappa) { return gen("X_vi", 0, 0, 0, 0, Expr(1) / dS(kappa)); }
PointGenerator X_vii() { return gen("X_vii", 0, r_(), U(), Expr(-2) * rho(), 0); }
PointGenerator X_viii(const Expr& kappa) {
  return gen("X_viii", 0, r_(), U(), Expr(-2) * rho(), Expr(2) * kappa / dS(kappa));
}
PointGenerator X_ix(const Expr& F) { return gen("X_ix", 0, 0, 0, 0, F); }
PointGenerator X_vvi(const Expr& kappa, const Expr& F) {
  const Expr kp = dS(kappa);
  return gen("X_vvi", 0, 0, 0, dS(F * kp) / kp * rho(), F);
}

namespace {

Expr opaqueF() { return func("F", {S()}); }

model::Eos named(model::Eos e, std::string label) {
  e.label = std::move(label);
  return e;
}

} // namespace

CatalogCase catalog_case(int id) { return catalog_case(id, model::default_kappa(), opaqueF(), param("n")); }

CatalogCase catalog_case(int id, const Expr& kappa, const Expr& F, const Expr& n) {
  const Expr q = param("q"), k = param("k");
  CatalogCase c;
  c.id = id;
  const auto base = std::vector<PointGenerator>{X1(), X2()};
  const ExpectedCommutator c12{"X1", "X2", X1()};
  c.commutators = {c12};
  c.generators = base;
  auto add = [&](std::initializer_list<PointGenerator> gs) {
    for (const auto& g : gs) c.generators.push_back(g);
  };
  auto sl2 = [&] {
    c.commutators.push_back({"X1", "X_v", Expr(2) * X2() + Expr(-1) * X_iv_prime(n)});
    c.commutators.push_back({"X2", "X_v", X_v(n)});
  };
  switch (id) {
  case 1:
    c.eos = model::general();
    c.algebra = "A_{2,1}";
    break;
  case 2:
    c.eos = model::separable(kappa);
    add({X_iii(kappa)});
    c.algebra = "A_{2,1}+A_1";
    break;
  case 3:
    c.eos = model::additive(kappa);
    add({X_vi(kappa)});
    c.algebra = "A_{2,1}+A_1";
    break;
  case 4:
    c.eos = model::scaled_power(kappa, q);
    add({X_ii(kappa, q)});
    c.algebra = "A_{2,1}+A_1";
    break;
  case 5:
    c.eos = model::log_form(kappa, k);
    add({X_viii(kappa)});
    c.algebra = "A_{2,1}+A_1";
    break;
  case 6:
    c.eos = model::polytropic(kappa, q);
    add({X_iii(kappa), X_iv(q)});
    c.algebra = "A_{2,1}+2A_1";
    break;
  case 7:
    c.eos = named(model::concrete(kappa + k * log(rho())), "kappa(S)+k*ln(rho)");
    add({X_vi(kappa), X_vii()});
    c.algebra = "A_{2,1}+2A_1";
    break;
  case 8:
    c.eos = model::polytropic_critical(kappa, n);
    add({X_iii(kappa), X_iv_prime(n), X_v(n)});
    sl2();
    c.algebra = "sl(2,R)+2A_1";
    break;
  case 9:
    c.eos = model::barotropic();
    add({X_ix(F)});
    c.algebra = "A_{2,1}+A_inf";
    break;
  case 10:
    c.eos = model::entropic(kappa);
    add({X_vii(), X_vvi(kappa, F)});
    c.algebra = "A_{2,1}+A_1+A_inf";
    break;
  case 11:
    c.eos = named(model::concrete(k * log(rho())), "k*ln(rho)");
    add({X_vii(), X_ix(F)});
    c.algebra = "A_{2,1}+A_1+A_inf";
    break;
  case 12:
    c.eos = named(model::concrete(k * pow(rho(), Expr(1) + q)), "k*rho^(1+q)");
    add({X_iv(q), X_ix(F)});
    c.algebra = "A_{2,1}+A_1+A_inf";
    break;
  case 13:
    c.eos = named(model::concrete(k * pow(rho(), Expr(1) + Expr(2) / n)), "k*rho^(1+2/n)");
    add({X_v(n), X_iv_prime(n), X_ix(F)});
    sl2();
    c.algebra = "sl(2,R)+A_1+A_inf";
    break;
  default: throw std::out_of_range("unknown case " + std::to_string(id));
  }
  c.eos_label = c.eos.label;
  return c;
}

std::vector<InheritanceReport> inheritance_checks(int id) {
  const Expr q = param("q"), k = param("k"), n = param("n");
  const Expr kappa = model::default_kappa();
  std::vector<InheritanceReport> out;
  if (id == 6) {
    // case 2 with f = rho^(1+q) and case 5 with kappa^(1/(q+1)), k = 0. The
    // arbitrary function is written as kappa = lambda^(q+1) so that every
    // exponent stays polynomial in q.
    const Expr lam = func("lambda", {S()});
    const Expr kap = pow(lam, q + Expr(1));
    PointGenerator lhs = (q + Expr(1)) * X_iii(kap) + Expr(-1) * X_viii(lam);
    out.push_back({"X_iv = (q+1) X_iii - X_viii[kappa^(1/(q+1))]", same_generator(lhs, X_iv(q))});
    const Expr p2 = kap * pow(rho(), Expr(1) + q);
    const Expr p5 = pow(lam * rho(), Expr(1) + q);
    out.push_back({"case 2 and case 5 specializations give kappa rho^(1+q)", is_zero(p2 - p5)});
  } else if (id == 7) {
    const Expr kt = exp(kappa / k);
    PointGenerator lhs = Expr(-2) * k * X_vi(kappa) + Expr(-1) * X_ii(kt, Expr(-1));
    out.push_back({"X_vii = -2k X_vi - X_ii[exp(kappa/k), q=-1]", same_generator(lhs, X_vii())});
    const Expr p4 = k * log(kt * rho());
    out.push_back({"case 4 specialization gives kappa + k ln rho", is_zero(p4 - kappa - k * log(rho()))});
  } else if (id == 8) {
    const Expr qc = Expr(2) / n;
    out.push_back({"X'_iv = (1/q) X_iv at q = 2/n", same_generator((Expr(1) / qc) * X_iv(qc), X_iv_prime(n))});
    // sl(2,R): X'_iv commutes with X1 and X_v
    const auto a = to_characteristic(X_iv_prime(n));
    out.push_back({"[X1, X'_iv] = 0", commutator(to_characteristic(X1()), a).is_zero()});
    out.push_back({"[X_v, X'_iv] = 0", commutator(to_characteristic(X_v(n)), a).is_zero()});
    const auto h = to_characteristic(X2() + Expr(Rational(-1, 2)) * X_iv_prime(n));
    const auto e = to_characteristic(X1()), f = to_characteristic(X_v(n));
    out.push_back({"[X1, X_v] = 2 (X2 - X'_iv/2)", equal(commutator(e, f), h * Expr(2))});
    out.push_back({"[X1, X2 - X'_iv/2] = X1", equal(commutator(e, h), e)});
    out.push_back({"[X2 - X'_iv/2, X_v] = X_v", equal(commutator(h, f), f)});
  }
  return out;
}

bool CaseReport::passed() const {
  for (const auto& g : generators)
    if (!g.residual_zero) return false;
  for (const auto& c : commutators)
    if (!c.ok) return false;
  for (const auto& i : inheritance)
    if (!i.ok) return false;
  for (const auto& g : instances)
    if (!g.residual_zero) return false;
  return true;
}

namespace {

GeneratorReport check_generator(const PointGenerator& g, const Eos& eos, const Expr& n, const std::string& tag) {
  GeneratorReport rep;
  rep.name = g.name + tag;
  rep.residual_zero = true;
  for (const Expr& e : determining_residuals(to_characteristic(g), eos, n)) {
    if (!is_zero(e)) {
      rep.residual_zero = false;
      rep.residuals.push_back(to_string(e));
    }
  }
  return rep;
}

} // namespace

namespace {

// every pair: listed commutators must match, all others vanish
std::vector<CommutatorReport> check_commutators(const CatalogCase& c) {
  std::vector<CommutatorReport> out;
  std::map<std::string, Characteristic> chars;
  for (const auto& g : c.generators) chars.emplace(g.name, to_characteristic(g));
  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    for (std::size_t j = i + 1; j < c.generators.size(); ++j) {
      const std::string& a = c.generators[i].name;
      const std::string& b = c.generators[j].name;
      Characteristic expected{"0", Expr(0), Expr(0), Expr(0)};
      for (const auto& ec : c.commutators) {
        if (ec.a == a && ec.b == b) expected = to_characteristic(ec.value);
        if (ec.a == b && ec.b == a) expected = to_characteristic(ec.value) * Expr(-1);
      }
      const Characteristic got = commutator(chars.at(a), chars.at(b));
      CommutatorReport cr{a, b, equal(got, expected), ""};
      if (!cr.ok) cr.detail = "difference in U component: " + to_string(got.pu - expected.pu);
      out.push_back(cr);
    }
  }
  return out;
}

PointGenerator substituted(const PointGenerator& g, const std::unordered_map<AtomId, Expr>& m) {
  return {g.name, substitute(g.tau, m), substitute(g.xi, m), substitute(g.eta_u, m), substitute(g.eta_rho, m),
          substitute(g.eta_s, m)};
}

} // namespace

CaseReport verify_case(int id, bool with_instances) {
  const Expr n = param("n");
  const CatalogCase c = catalog_case(id);
  CaseReport rep;
  rep.id = id;
  rep.algebra = c.algebra;
  for (const auto& g : c.generators) rep.generators.push_back(check_generator(g, c.eos, n, ""));
  rep.commutators = check_commutators(c);
  rep.inheritance = inheritance_checks(id);
  if (with_instances) {
    // two concrete instantiations of the arbitrary functions, checked exactly
    const std::vector<std::pair<Expr, Expr>> inst{{exp(S()), Expr(1)}, {S() * S() + Expr(1), S()}};
    int idx = 0;
    for (const auto& [kap, F] : inst) {
      ++idx;
      const CatalogCase ci = catalog_case(id, kap, F, n);
      for (const auto& g : ci.generators)
        rep.instances.push_back(check_generator(g, ci.eos, n, "#" + std::to_string(idx)));
    }
  }
  return rep;
}

CaseReport verify_case_on(int id, const Eos& eos, const Expr& kappa, const Expr& F, const Expr& n,
                           const std::unordered_map<std::string, Expr>& values) {
  CatalogCase c = catalog_case(id, kappa, F, n);
  std::unordered_map<AtomId, Expr> m;
  for (const auto& [name, v] : values) m.emplace(param_id(name), v);
  for (auto& g : c.generators) g = substituted(g, m);
  for (auto& ec : c.commutators) ec.value = substituted(ec.value, m);
  CaseReport rep;
  rep.id = id;
  rep.algebra = c.algebra;
  for (const auto& g : c.generators) rep.generators.push_back(check_generator(g, eos, n, ""));
  rep.commutators = check_commutators(c);
  return rep;
}

} // namespace radflow::symmetry
