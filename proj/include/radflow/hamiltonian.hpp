#pragma once

// Co-symplectic operator, variational gradients, the Poisson bracket density
// and the correspondence between conserved densities and symmetries.
//
// Convention: a density Phi stands for the functional int Phi r^(n-1) dr and
// its gradient is delta/delta v = r^(1-n) E_v(r^(n-1) Phi). The operator is
// applied to the weighted gradient r^(n-1) delta/delta v = E_v(r^(n-1) Phi),
// which reproduces both the equations of motion and the symmetry formula.

#include <optional>
#include <string>
#include <vector>

#include "radflow/model.hpp"
#include "radflow/symmetry.hpp"

namespace radflow::hamiltonian {

using expr::Expr;
using model::Eos;
using symmetry::Characteristic;

struct Gradient {
  Expr u, rho, s;
};

Gradient variational_gradient(const Expr& phi, const Expr& n);
Characteristic apply_hamiltonian_operator(const Gradient& g, const Expr& n);
inline Characteristic hamiltonian_symmetry(const Expr& phi, const Expr& n) {
  return apply_hamiltonian_operator(variational_gradient(phi, n), n);
}

/// r^(n-1) grad(F) . H grad(G).
Expr poisson_bracket_density(const Expr& F, const Expr& G, const Expr& n);
/// The functional with density Phi (weight r^(n-1)) is trivial: all three
/// Euler operators of r^(n-1) Phi vanish.
bool is_trivial(const Expr& weighted_density);
/// Casimir iff the Hamiltonian symmetry vanishes.
bool is_casimir(const Expr& phi, const Expr& n);

Expr energy_density(const Eos& eos);

// ---- kinematic conserved integrals ------------------------------------------

struct KinematicRow {
  std::string name;
  Eos eos;
  Expr density;
  Characteristic expected; // as listed
  std::string symmetry;
};
std::vector<KinematicRow> kinematic_catalog(const Expr& n);

struct KinematicCheck {
  std::string name;
  bool matches = false; // restricted H grad(G) equals the listed P up to an overall sign
  int sign = 0;         // +1 or -1 when matched
  Characteristic derived;
  std::string residual; // printed difference for the closer sign when unmatched
  bool derived_is_symmetry = false;
  bool listed_is_symmetry = false;
};
KinematicCheck check_kinematic_row(const KinematicRow& row, const Expr& n);

// ---- gas dynamics -------------------------------------------------------------

struct GasGradient {
  Expr u, rho, p;
};
/// Components (U, rho, p) of H_gas applied to weighted gas gradients, with the
/// pressure expression p and sound speed a2 supplied by the caller (gas
/// variables or an EOS in (rho, S)).
std::vector<Expr> apply_gas_operator(const GasGradient& g, const Expr& p, const Expr& a2, const Expr& n);
/// Weighted gradient in (U, rho, p) variables (Field::P jets).
GasGradient gas_gradient(const Expr& phi, const Expr& n);

/// Chain-rule consistency: transforming arbitrary gas gradients by the
/// variational-derivative relations and applying H equals applying H_gas.
/// Returns the three residuals (zero when consistent).
std::vector<Expr> gas_consistency_residuals(const Eos& eos, const Expr& n);
/// H_gas grad(H) minus the gas equations (U_t, rho_t, p_t); needs a2_gas/e_gas.
std::optional<std::vector<Expr>> gas_equations_residuals(const Eos& eos, const Expr& n);

} // namespace radflow::hamiltonian
