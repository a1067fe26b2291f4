#pragma once

// Recursion operator R = (r^(1-n)/rho) D_r, the advected hierarchy J_l = R^l S
// and the Casimir determining system.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "radflow/model.hpp"

namespace radflow::casimir {

using expr::Expr;
using model::Eos;

Expr recursion_apply(const Expr& e, const Expr& n);
/// J_l = R^l S.
Expr advected_scalar(int l, const Expr& n);
/// Same hierarchy in the weighted density rhot = r^(n-1) rho, where R = (1/rhot) D_r.
Expr advected_scalar_tilde(int l);

struct Residuals {
  Expr first;  // E_U(r^(n-1) Phi)
  Expr second; // D_r(r^(1-n) E_rho(r^(n-1) Phi)) - r^(1-n) (S_r/rho) E_S(r^(n-1) Phi)
  bool zero() const;
};
Residuals casimir_residuals(const Expr& phi, const Expr& n);

struct LevelReport {
  int l = 0;
  bool passed = false;
  bool budget_exceeded = false;
  std::size_t density_terms = 0;
  std::size_t euler_terms = 0; // E_rho + E_S before the second residual is formed
  std::size_t first_terms = 0, second_terms = 0;
  double seconds = 0;
};
struct HierarchyReport {
  std::vector<LevelReport> levels;
  bool complete = true; // false when the size budget stopped the run
  bool passed() const;
};

/// f(J_0..J_l) as an opaque function of l+1 arguments.
Expr opaque_hierarchy_function(int l, const Expr& n, const std::string& name = "f");
/// Substitutes J_k for the parameters J0, J1, ... of a user expression.
Expr bind_hierarchy(const Expr& f_of_params, int l, const Expr& n);

/// Checks rho f(J_0..J_l) for l = 0..l_max. With f unset an opaque f of all
/// arguments is used; otherwise f is an expression in the parameters J0..J_lmax
/// and every level uses the same f.
HierarchyReport verify_casimir_hierarchy(int l_max, const Expr& n, std::size_t budget = 200000,
                                         const std::optional<Expr>& f = std::nullopt);

struct SplitRelation {
  int k = 0, i = 0;
  std::string relation;
  bool ok = false;
};
/// J_1 E_S(J_k) = R J_k + D_r E_rhot(J_k) and, for 1 <= i <= i_max,
/// J_1 E_S^(i)(J_k) = D_r E_rhot^(i)(J_k) - E_rhot^(i-1)(J_k).
std::vector<SplitRelation> split_system_check(int k_max, int i_max);

struct FirstOrderVerdict {
  bool casimir = false;      // both residuals vanish
  bool literal_form = false; // Phi / rho is already a function of (S, J_1)
  std::string form;          // description for reports
};
/// Phi must depend on jets of order <= 1 only; throws std::invalid_argument otherwise.
FirstOrderVerdict classify_first_order(const Expr& phi, const Expr& n);

/// rho f(J_0..J_l), f in the parameters J0..Jl, is non-trivial at l >= 1 iff
/// f is nonlinear in J_l; at l = 0 iff f != 0.
bool hierarchy_density_nontrivial(const Expr& f_of_params, int l);

/// restrict(D_t J_l + U D_r J_l) for the given EOS.
Expr advection_residual(int l, const Eos& eos, const Expr& n);

} // namespace radflow::casimir
