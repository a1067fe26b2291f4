#pragma once

// Entropic EOS p = kappa(S): the advected hierarchies J_{1,l}, J_{2,l}, the
// function A(r, U, w) with w = p_r/rho, and the Hamiltonian symmetries of
// rho f(J_{1,l}, J_{2,l}).
//
// Symbolically A is an opaque function "A" of (r, U, w). Its r-derivative is
// rewritten through the transport equation U A_r - w A_U + (n-1)(U/r) w A_w = 1,
// so derivatives in U and w are the free coordinates. The dimension is the
// parameter n throughout.

#include <functional>
#include <string>
#include <vector>

#include "radflow/model.hpp"
#include "radflow/symmetry.hpp"

namespace radflow::advected {

using expr::Expr;
using model::Eos;
using symmetry::Characteristic;

enum class Branch { J1, J2 };

Expr dim();
/// w = p_r / rho.
Expr pressure_ratio(const Eos& eos);
Expr A(const Eos& eos);
Expr A_r(const Eos& eos);
Expr A_U(const Eos& eos);
Expr A_w(const Eos& eos);

/// J_{1,l} = R^(l-1)(U^2 + (2/n) r p_r/rho), J_{2,l} = R^(l-1)(A - t); l >= 1.
Expr entropic_scalar(Branch b, int l, const Eos& eos = model::entropic());

/// f is written in the parameters J1, J2 standing for J_{1,l}, J_{2,l}.
Expr bind(const Expr& f, int l, const Eos& eos);
/// f_{.,l}^(i) = (-R)^i f_{J.}, bound.
Expr f_index(const Expr& f, Branch b, int i, int l, const Eos& eos);

/// Restricted characteristic of H grad(rho f).
Characteristic derived_symmetry(const Expr& f, int l, const Eos& eos);
/// Characteristic of the closed-form generator. with_aw_term adds the
/// -(n-1) w A_w / r part to the d_U coefficient.
Characteristic closed_form_symmetry(const Expr& f, int l, const Eos& eos, bool with_aw_term);

struct Check {
  std::string name;
  bool ok = false;
  std::string note;
};

/// Euler-operator values of the l = 1 scalars, the D-operator identities for
/// K = J_{1,1}, J_{2,1}, the Q expressions and the closed-form symmetry for l <= l_max.
std::vector<Check> verify_closed_form(int l_max = 2);

/// X_{J11} = -2 X_1, X_{J21} as listed and with the A_w term, their commutator.
std::vector<Check> verify_basic_symmetries();

struct ClosureResult {
  Expr f, g, h;
  bool closure_holds = false; // [X_f, X_g] = X_h
  bool h_linear = false;
  bool xh_zero = false;
  std::string xh_description;
};
/// h = 2 f_{J1} g_{J2} - 2 f_{J2} g_{J1} at l = 1.
Expr closure_h(const Expr& f, const Expr& g);
ClosureResult commutator_closure(const Expr& f, const Expr& g);
std::vector<ClosureResult> closure_examples();

// ---- numerics ----------------------------------------------------------------

struct AValue {
  double a = 0, a_r = 0, a_u = 0, a_w = 0;
};
/// A(r, U, w) = r int_0^1 dy / sqrt(U^2 + (2/n)(1 - y^n) r w) by adaptive
/// Gauss-Kronrod after y = 1 - s^2, which removes the endpoint singularity at
/// U = 0. Throws std::domain_error when the radicand is not positive on
/// (0, 1) and std::runtime_error when tol is not met.
double eval_A(double r, double u, double w, double n, double tol = 1e-10);
AValue eval_A_partials(double r, double u, double w, double n, double tol = 1e-10);

} // namespace radflow::advected
