#include "radflow/hamiltonian.hpp"

#include "radflow/jet.hpp"

namespace radflow::hamiltonian {

using namespace expr;
using model::rho;
using model::S;
using model::U;

namespace {

Expr w(const Expr& n) { return pow(r(), n - Expr(1)); }
Expr winv(const Expr& n) { return pow(r(), Expr(1) - n); }
Expr sr() { return jet(Field::S, 0, 1); }

Characteristic restrict(const Characteristic& c, const SystemContext& ctx) {
  return {c.name, ctx.restrict(c.pu), ctx.restrict(c.prho), ctx.restrict(c.ps)};
}

} // namespace

Gradient variational_gradient(const Expr& phi, const Expr& n) {
  const Expr wp = w(n) * phi;
  return {winv(n) * euler_operator(wp, Field::U), winv(n) * euler_operator(wp, Field::Rho),
          winv(n) * euler_operator(wp, Field::S)};
}

Characteristic apply_hamiltonian_operator(const Gradient& g, const Expr& n) {
  return {"H", -Dr(g.rho) + sr() / rho() * g.s, -winv(n) * Dr(w(n) * g.u), -sr() / rho() * g.u};
}

Expr poisson_bracket_density(const Expr& F, const Expr& G, const Expr& n) {
  const Gradient gf = variational_gradient(F, n);
  const Characteristic pg = hamiltonian_symmetry(G, n);
  return w(n) * (gf.u * pg.pu + gf.rho * pg.prho + gf.s * pg.ps);
}

bool is_trivial(const Expr& weighted_density) {
  for (Field f : {Field::U, Field::Rho, Field::S})
    if (!is_zero(euler_operator(weighted_density, f))) return false;
  return true;
}

bool is_casimir(const Expr& phi, const Expr& n) { return hamiltonian_symmetry(phi, n).is_zero(); }

Expr energy_density(const Eos& eos) { return rho() * (U() * U() / Expr(2) + eos.e); }

std::vector<KinematicRow> kinematic_catalog(const Expr& n) {
  const Expr t = expr::t(), rr = r();
  const Expr ut = jet(Field::U, 1, 0), rt = jet(Field::Rho, 1, 0), st = jet(Field::S, 1, 0);
  const Expr ur = jet(Field::U, 0, 1), rhor = jet(Field::Rho, 0, 1);
  std::vector<KinematicRow> rows;

  const Eos gen = model::general();
  rows.push_back({"energy", gen, energy_density(gen), {"-D_t", -ut, -rt, -st}, "time-translation X1"});

  const Eos poly = model::polytropic_critical(model::default_kappa(), n);
  const Expr q = poly.q;
  const Expr en = energy_density(poly);
  rows.push_back({"dilational energy", poly, t * en - rr * rho() * U() / Expr(2),
                  {"(U,2/q rho,0)-rD_r", U() - rr * ur, Expr(2) / q * rho() - rr * rhor, -rr * sr()},
                  "scaling X_iv"});
  rows.push_back({"similarity energy", poly, t * t * en - t * rr * rho() * U() + rr * rr * rho() / Expr(2),
                  {"(r-tU,-nt rho,0)-(t^2D_t+rtD_r)", rr - t * U() - t * t * ut - rr * t * ur,
                   -n * t * rho() - t * t * rt - rr * t * rhor, -t * t * st - rr * t * sr()},
                  "conformal similarity X_v"});

  const Eos baro = model::barotropic();
  const Expr J1 = winv(n) * sr() / rho();
  rows.push_back({"enthalpy flux", baro, winv(n) * U(), {"(0,0,-J1)", Expr(0), Expr(0), -J1}, "X = -J1 d_S"});

  const Eos ent = model::entropic();
  const Expr f = func("f", {S()}), fp = func("f", {S()}, {1});
  if (!has_function_rules("K"))
    define_function("K", {func("f", {placeholder(0)}) * func("kappa", {placeholder(0)}, {1})});
  const Expr K = func("K", {S()});
  rows.push_back({"entropy-weighted energy", ent, rho() * U() * U() * f / Expr(2) - K,
                  {"-f D_t+(0,f' S_r rho,0)", -f * ut, -f * rt + fp * sr() * rho(), -f * st},
                  "X = f(S) d_t + f'(S) S_r rho d_rho"});
  return rows;
}

KinematicCheck check_kinematic_row(const KinematicRow& row, const Expr& n) {
  const SystemContext ctx = model::make_context(row.eos, n);
  KinematicCheck out;
  out.name = row.name;
  out.derived = restrict(hamiltonian_symmetry(row.density, n), ctx);
  const Characteristic exp = restrict(row.expected, ctx);
  out.derived_is_symmetry = symmetry::is_symmetry(out.derived, row.eos, n);
  out.listed_is_symmetry = symmetry::is_symmetry(exp, row.eos, n);
  for (int s : {1, -1}) {
    if ((out.derived - exp * Expr(s)).is_zero()) {
      out.matches = true;
      out.sign = s;
      return out;
    }
  }
  const Characteristic d1 = out.derived - exp, d2 = out.derived + exp;
  auto size = [](const Characteristic& c) { return c.pu.size() + c.prho.size() + c.ps.size(); };
  const Characteristic& d = size(d1) <= size(d2) ? d1 : d2;
  out.residual = "(" + to_string(d.pu) + ", " + to_string(d.prho) + ", " + to_string(d.ps) + ")";
  return out;
}

std::vector<Expr> apply_gas_operator(const GasGradient& g, const Expr& p, const Expr& a2, const Expr& n) {
  const Expr pr = Dr(p), d = rho();
  return {
      -Dr(g.rho) + pr / d * g.p - Dr(d * a2 * g.p) / d,
      -winv(n) * Dr(w(n) * g.u),
      -pr / d * g.u - winv(n) * d * a2 * Dr(w(n) * g.u / d),
  };
}

GasGradient gas_gradient(const Expr& phi, const Expr& n) {
  const Expr wp = w(n) * phi;
  return {winv(n) * euler_operator(wp, Field::U), winv(n) * euler_operator(wp, Field::Rho),
          winv(n) * euler_operator(wp, Field::P)};
}

std::vector<Expr> gas_consistency_residuals(const Eos& eos, const Expr& n) {
  // arbitrary gas gradients as opaque functions of first-order jets
  const std::vector<Expr> args{r(), U(), rho(), S(), jet(Field::U, 0, 1), jet(Field::Rho, 0, 1), sr()};
  const GasGradient h{func("hU", args), func("hrho", args), func("hp", args)};
  const Expr a2 = eos.a2();
  const Gradient g{h.u, h.rho + a2 * h.p, eos.p_S() * h.p};
  const Characteristic ps = apply_hamiltonian_operator(g, n);
  const auto gas = apply_gas_operator(h, eos.p, a2, n);
  // p = p(rho, S): p_t = a^2 rho_t + p_S S_t
  return {gas[0] - ps.pu, gas[1] - ps.prho, gas[2] - (a2 * ps.prho + eos.p_S() * ps.ps)};
}

std::optional<std::vector<Expr>> gas_equations_residuals(const Eos& eos, const Expr& n) {
  const auto a2 = eos.a2_gas();
  const auto e = eos.e_gas();
  if (!a2 || !e) return std::nullopt;
  const Expr P = jet(Field::P);
  const Expr phi = rho() * (U() * U() / Expr(2) + *e);
  const auto rhs = apply_gas_operator(gas_gradient(phi, n), P, *a2, n);
  const Expr u = U(), d = rho(), ur = jet(Field::U, 0, 1);
  const Expr ut = -u * ur - Dr(P) / d;
  const Expr rt = -Dr(u * d) - (n - Expr(1)) / r() * u * d;
  const Expr pt = -u * Dr(P) - *a2 * d * (ur + (n - Expr(1)) / r() * u);
  std::vector<Expr> res{rhs[0] - ut, rhs[1] - rt, rhs[2] - pt};
  if (eos.p_S().is_zero()) {
    // barotropic: p is not an independent field, tie its jets to p(rho)
    std::unordered_map<AtomId, Expr> sub;
    Expr pk = eos.p;
    for (int k = 0; k <= 3; ++k, pk = Dr(pk)) sub.emplace(jet_id(Field::P, 0, k), pk);
    for (Expr& e : res) e = substitute(e, sub);
  }
  return res;
}

} // namespace radflow::hamiltonian
