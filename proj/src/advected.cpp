#include "radflow/advected.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "radflow/casimir.hpp"
#include "radflow/hamiltonian.hpp"
#include "radflow/jet.hpp"

namespace radflow::advected {

using namespace expr;
using model::rho;
using model::U;

namespace {

void ensure_rules() {
  static std::once_flag once;
  std::call_once(once, [] {
    const Expr p0 = placeholder(0), p1 = placeholder(1), p2 = placeholder(2);
    const Expr au = func("A", {p0, p1, p2}, {0, 1, 0}), aw = func("A", {p0, p1, p2}, {0, 0, 1});
    define_function("A", {(Expr(1) + p2 * au - (dim() - Expr(1)) * p1 / p0 * p2 * aw) / p1, std::nullopt, std::nullopt});
  });
}

std::vector<Expr> a_args(const Eos& eos) { return {r(), U(), pressure_ratio(eos)}; }

Expr R(const Expr& e) { return casimir::recursion_apply(e, dim()); }
Expr w(const Expr& n) { return pow(r(), n - Expr(1)); }

Characteristic restrict(const Characteristic& c, const SystemContext& ctx) {
  return {c.name, ctx.restrict(c.pu), ctx.restrict(c.prho), ctx.restrict(c.ps)};
}

AtomId pid(Branch b) { return param_id(b == Branch::J1 ? "J1" : "J2"); }

Check make(std::string name, const Expr& residual, std::string note = {}) {
  return {std::move(name), is_zero(residual), std::move(note)};
}

bool char_equal(const Characteristic& a, const Characteristic& b) { return (a - b).is_zero(); }

} // namespace

Expr dim() { return param("n"); }

Expr pressure_ratio(const Eos& eos) { return Dr(eos.p) / rho(); }

Expr A(const Eos& eos) {
  ensure_rules();
  return func("A", a_args(eos));
}
Expr A_r(const Eos& eos) {
  ensure_rules();
  return func("A", a_args(eos), {1, 0, 0});
}
Expr A_U(const Eos& eos) {
  ensure_rules();
  return func("A", a_args(eos), {0, 1, 0});
}
Expr A_w(const Eos& eos) {
  ensure_rules();
  return func("A", a_args(eos), {0, 0, 1});
}

Expr entropic_scalar(Branch b, int l, const Eos& eos) {
  if (l < 1) throw std::invalid_argument("entropic_scalar: order must be >= 1");
  Expr j = b == Branch::J1 ? U() * U() + Expr(2) / dim() * r() * pressure_ratio(eos) : A(eos) - t();
  for (int k = 1; k < l; ++k) j = R(j);
  return j;
}

Expr bind(const Expr& f, int l, const Eos& eos) {
  return substitute(f, {{pid(Branch::J1), entropic_scalar(Branch::J1, l, eos)},
                        {pid(Branch::J2), entropic_scalar(Branch::J2, l, eos)}});
}

Expr f_index(const Expr& f, Branch b, int i, int l, const Eos& eos) {
  Expr e = bind(partial(f, pid(b)), l, eos);
  for (int k = 0; k < i; ++k) e = -R(e);
  return e;
}

Characteristic derived_symmetry(const Expr& f, int l, const Eos& eos) {
  const Expr n = dim();
  return restrict(hamiltonian::hamiltonian_symmetry(rho() * bind(f, l, eos), n), model::make_context(eos, n));
}

Characteristic closed_form_symmetry(const Expr& f, int l, const Eos& eos, bool with_aw_term) {
  const Expr n = dim();
  const Expr f1 = f_index(f, Branch::J1, l - 1, l, eos), f2 = f_index(f, Branch::J2, l - 1, l, eos);
  const Expr au = A_U(eos);
  Expr ar = A_r(eos);
  if (with_aw_term) ar = ar + (n - Expr(1)) * pressure_ratio(eos) * A_w(eos) / r();
  const Expr tau = Expr(-2) * f1, xi = au * f2, eta_u = -ar * f2;
  const Expr eta_rho = (Expr(2) * Dt(f1) - Dr(au * f2) - (n - Expr(1)) / r() * au * f2) * rho();
  auto P = [&](Field v, const Expr& eta) { return eta - tau * jet(v, 1, 0) - xi * jet(v, 0, 1); };
  const Characteristic c{"X_f", P(Field::U, eta_u), P(Field::Rho, eta_rho), P(Field::S, Expr(0))};
  return restrict(c, model::make_context(eos, n));
}

std::vector<Check> verify_closed_form(int l_max) {
  const Expr n = dim();
  const Eos eos = model::entropic();
  const Expr kp = func("kappa", {model::S()}, {1});
  const Expr wr = w(n), wv = pressure_ratio(eos);
  std::vector<Check> out;

  // Euler operators of the l = 1 densities
  const Expr d1 = wr * rho() * entropic_scalar(Branch::J1, 1, eos);
  out.push_back(make("E_U(r^(n-1) rho J11) = 2 r^(n-1) rho U", euler_operator(d1, Field::U) - Expr(2) * wr * rho() * U()));
  out.push_back(make("E_rho(r^(n-1) rho J11) = r^(n-1) U^2", euler_operator(d1, Field::Rho) - wr * U() * U(),
                     "listed with a factor 2"));
  out.push_back(make("E_S(r^(n-1) rho J11) = -2 r^(n-1) kappa'", euler_operator(d1, Field::S) + Expr(2) * wr * kp));
  out.push_back(make("E_S^(1)(r^(n-1) rho J11) = (2/n) r^n kappa'",
                     euler_operator(d1, Field::S, 1) - Expr(2) / n * pow(r(), n) * kp));
  const Expr d2 = wr * rho() * entropic_scalar(Branch::J2, 1, eos);
  const Expr aw = A_w(eos);
  out.push_back(make("E_U(r^(n-1) rho J21) = r^(n-1) rho A_U", euler_operator(d2, Field::U) - wr * rho() * A_U(eos)));
  out.push_back(make("E_rho(r^(n-1) rho J21) = r^(n-1)(J21 - w A_w)",
                     euler_operator(d2, Field::Rho) - wr * (entropic_scalar(Branch::J2, 1, eos) - wv * aw)));
  out.push_back(make("E_S(r^(n-1) rho J21) = -kappa' D_r(r^(n-1) A_w)", euler_operator(d2, Field::S) + kp * Dr(wr * aw)));
  out.push_back(make("E_S^(1)(r^(n-1) rho J21) = r^(n-1) kappa' A_w", euler_operator(d2, Field::S, 1) - wr * kp * aw));

  // D-operator identities with K = J11, J21 and f opaque
  for (Branch b : {Branch::J1, Branch::J2}) {
    const std::string kn = b == Branch::J1 ? "J11" : "J21";
    const Expr K = entropic_scalar(b, 1, eos);
    const Expr base = wr * rho() * K;
    for (int l = 0; l < l_max; ++l) {
      std::vector<Expr> Kl{K};
      for (int i = 1; i <= l; ++i) Kl.push_back(R(Kl.back()));
      const Expr fK = func("g", {Kl[l]}), fp = func("g", {Kl[l]}, {1});
      std::vector<Expr> fi{fp};
      for (int i = 1; i <= l; ++i) fi.push_back(-R(fi.back()));
      const Expr dens = wr * rho() * fK;
      const std::string tag = " (K=" + kn + ", l=" + std::to_string(l) + ")";
      out.push_back(make("identity E_U" + tag, euler_operator(dens, Field::U) - fi[l] * euler_operator(base, Field::U)));
      out.push_back(make("identity E_S" + tag, euler_operator(dens, Field::S) - fi[l] * euler_operator(base, Field::S) +
                                                Dr(fi[l]) * euler_operator(base, Field::S, 1)));
      Expr Dl;
      for (int i = 0; i <= l; ++i) Dl = Dl + Kl[l - i] * fi[i];
      out.push_back(make("identity E_rho" + tag,
                         euler_operator(dens, Field::Rho) - fi[l] * euler_operator(base, Field::Rho) - wr * (fK - Dl)));
      out.push_back(make("identity D_r relation" + tag, Dr(fK - Dl) + K * Dr(fi[l])));
    }
  }

  // Q expressions and the closed form, index l-1
  const Expr f1 = func("f", {param("J1")}), f2 = func("f", {param("J2")});
  for (int l = 1; l <= l_max; ++l) {
    const std::string tag = " (l=" + std::to_string(l) + ")";
    const Expr phi1 = wr * rho() * bind(f1, l, eos);
    std::vector<Expr> fi;
    for (int i = 0; i < l; ++i) fi.push_back(f_index(f1, Branch::J1, i, l, eos));
    out.push_back(make("Q^U J1" + tag, euler_operator(phi1, Field::U) - Expr(2) * wr * rho() * U() * fi[l - 1]));
    Expr sum;
    for (int i = 0; i < l; ++i) sum = sum + entropic_scalar(Branch::J1, l - i, eos) * fi[i];
    out.push_back(make("Q^rho J1" + tag,
                       euler_operator(phi1, Field::Rho) - wr * (U() * U() * fi[l - 1] + bind(f1, l, eos) - sum)));
    out.push_back(make("Q^S J1" + tag, euler_operator(phi1, Field::S) + Expr(2) / n * kp * Dr(pow(r(), n) * fi[l - 1])));

    const Expr phi2 = wr * rho() * bind(f2, l, eos);
    std::vector<Expr> gi;
    for (int i = 0; i < l; ++i) gi.push_back(f_index(f2, Branch::J2, i, l, eos));
    out.push_back(make("Q^U J2" + tag, euler_operator(phi2, Field::U) - wr * rho() * A_U(eos) * gi[l - 1]));
    Expr sum2;
    for (int i = 0; i < l; ++i) sum2 = sum2 + entropic_scalar(Branch::J2, l - i, eos) * gi[i];
    out.push_back(make("Q^rho J2" + tag, euler_operator(phi2, Field::Rho) -
                                             wr * (bind(f2, l, eos) - wv * aw * gi[l - 1] - sum2 +
                                                   entropic_scalar(Branch::J2, 1, eos) * gi[l - 1])));
    out.push_back(make("Q^S J2" + tag, euler_operator(phi2, Field::S) + kp * Dr(wr * aw * gi[l - 1])));

    const Expr mixed = func("F", {param("J1"), param("J2")});
    for (const auto& [fname, f] : std::vector<std::pair<std::string, Expr>>{{"f(J1)", f1}, {"f(J2)", f2}, {"F(J1,J2)", mixed}}) {
      const Characteristic d = derived_symmetry(f, l, eos);
      out.push_back({"closed form without A_w term " + fname + tag, char_equal(d, closed_form_symmetry(f, l, eos, false)), ""});
      out.push_back({"closed form " + fname + tag, char_equal(d, closed_form_symmetry(f, l, eos, true)), ""});
      out.push_back({"derived symmetry solves determining equations " + fname + tag, symmetry::is_symmetry(d, eos, n), ""});
    }
  }
  return out;
}

std::vector<Check> verify_basic_symmetries() {
  const Expr n = dim();
  const Eos eos = model::entropic();
  const SystemContext ctx = model::make_context(eos, n);
  std::vector<Check> out;
  const Characteristic x1 = derived_symmetry(param("J1"), 1, eos);
  const Characteristic x2 = derived_symmetry(param("J2"), 1, eos);
  const Characteristic minus2x1 = restrict(symmetry::to_characteristic(symmetry::X1()) * Expr(-2), ctx);
  out.push_back({"X_J11 = -2 X_1", char_equal(x1, minus2x1), ""});

  const Expr au = A_U(eos), ar = A_r(eos);
  const Expr extra = (n - Expr(1)) * pressure_ratio(eos) * A_w(eos) / r();
  auto j2 = [&](const Expr& eta_u) {
    symmetry::PointGenerator g{"X_J21", Expr(0), au, eta_u, -rho() * (Dr(au) + (n - Expr(1)) / r() * au), Expr(0)};
    return restrict(symmetry::to_characteristic(g), ctx);
  };
  const Characteristic listed = j2(-ar), with_aw = j2(-ar - extra);
  const Characteristic diff = x2 - listed;
  out.push_back({"X_J21 as listed", char_equal(x2, listed),
                 diff.is_zero() ? "" : "derived - listed = (" + to_string(diff.pu) + ", " + to_string(diff.prho) + ", " + to_string(diff.ps) + ")"});
  out.push_back({"X_J21 with d_U coefficient -(A_r + (n-1) w A_w / r)", char_equal(x2, with_aw), ""});
  out.push_back({"listed X_J21 solves determining equations", symmetry::is_symmetry(listed, eos, n), ""});
  out.push_back({"derived X_J21 solves determining equations", symmetry::is_symmetry(x2, eos, n), ""});
  out.push_back({"[X_J11, X_J21] = 0", symmetry::commutator(x1, x2).is_zero(), ""});
  return out;
}

Expr closure_h(const Expr& f, const Expr& g) {
  const AtomId a = pid(Branch::J1), b = pid(Branch::J2);
  return Expr(2) * partial(f, a) * partial(g, b) - Expr(2) * partial(f, b) * partial(g, a);
}

ClosureResult commutator_closure(const Expr& f, const Expr& g) {
  const Eos eos = model::entropic();
  ClosureResult res;
  res.f = f;
  res.g = g;
  res.h = closure_h(f, g);
  const Characteristic xf = derived_symmetry(f, 1, eos), xg = derived_symmetry(g, 1, eos);
  const Characteristic xh = derived_symmetry(res.h, 1, eos);
  res.closure_holds = char_equal(symmetry::commutator(xf, xg), xh);
  res.h_linear = true;
  for (Branch u : {Branch::J1, Branch::J2})
    for (Branch v : {Branch::J1, Branch::J2})
      if (!is_zero(partial(partial(res.h, pid(u)), pid(v)))) res.h_linear = false;
  res.xh_zero = xh.is_zero();
  if (res.xh_zero) {
    res.xh_description = "zero";
  } else if (res.h_linear) {
    // linear h: X_h = h_J1 X_J11 + h_J2 X_J21, h_J1 X_J11 = -2 h_J1 X_1
    const Expr c1 = partial(res.h, pid(Branch::J1)), c2 = partial(res.h, pid(Branch::J2));
    res.xh_description = "non-zero: (" + to_string(c1) + ") X_J11 + (" + to_string(c2) + ") X_J21";
  } else {
    res.xh_description = "non-zero, higher order";
  }
  return res;
}

std::vector<ClosureResult> closure_examples() {
  const Expr j1 = param("J1"), j2 = param("J2");
  return {commutator_closure(j1, j2), commutator_closure(j1 * j1, j2), commutator_closure(j1 * j1, j2 * j2)};
}

// ---- numerics ----------------------------------------------------------------

namespace {

struct AIntegrand {
  double r, u, w, n, c;
  // 1 - (1 - s^2)^n without cancellation near s = 0
  double g(double s) const { return -std::expm1(n * std::log1p(-s * s)); }
  double rad(double s) const { return u * u + c * g(s); }
};

template <class F> double integrate(F f, double tol) {
  double err = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 30, tol, &err);
  if (!(err <= tol * std::max(1.0, std::abs(v)))) throw std::runtime_error("eval_A: quadrature did not reach tolerance");
  return v;
}

AIntegrand make_integrand(double r, double u, double w, double n) {
  if (!(r > 0) || !(n > 0)) throw std::domain_error("eval_A: need r > 0 and n > 0");
  const double c = 2.0 / n * r * w;
  if (u * u + c <= 0 || (u == 0 && c <= 0)) throw std::domain_error("eval_A: radicand not positive on (0,1)");
  return {r, u, w, n, c};
}

} // namespace

double eval_A(double r, double u, double w, double n, double tol) {
  const AIntegrand in = make_integrand(r, u, w, n);
  return r * integrate([&](double s) { return 2 * s / std::sqrt(in.rad(s)); }, tol);
}

AValue eval_A_partials(double r, double u, double w, double n, double tol) {
  const AIntegrand in = make_integrand(r, u, w, n);
  AValue v;
  v.a = r * integrate([&](double s) { return 2 * s / std::sqrt(in.rad(s)); }, tol);
  // A is even in U with a kink at U = 0 when w > 0; the symmetric value 0 is returned there
  v.a_u = u == 0 ? 0.0 : -r * u * integrate([&](double s) { return 2 * s / std::pow(in.rad(s), 1.5); }, tol);
  const double gi = integrate([&](double s) { return 2 * s * in.g(s) / std::pow(in.rad(s), 1.5); }, tol);
  v.a_w = -r * r / n * gi;
  v.a_r = v.a / r - r * w / n * gi;
  return v;
}

} // namespace radflow::advected
