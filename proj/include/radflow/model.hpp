#pragma once

// Radial Euler system, equation-of-state catalog and derived thermodynamics.

#include <optional>
#include <string>
#include <vector>

#include "radflow/expr.hpp"
#include "radflow/jet.hpp"

namespace radflow::model {

using expr::Expr;

enum class EosKind {
  General,     // p(rho,S) opaque
  Separable,   // kappa(S) f(rho)
  Additive,    // f(rho) + kappa(S)
  ScaledPower, // f(kappa(S) rho) rho^(1+q)
  LogForm,     // f(kappa(S) rho) + k ln rho
  Barotropic,  // f(rho)
  Polytropic,  // kappa(S) rho^(1+q)
  Entropic,    // kappa(S)
  Concrete     // any explicit p(rho,S)
};

const char* kind_name(EosKind k);

// Jets of the undifferentiated fields.
Expr U();
Expr rho();
Expr S();

struct Eos {
  EosKind kind = EosKind::General;
  std::string label;
  Expr p;     // pressure in rho, S and parameters
  Expr kappa; // kappa(S) for forms that carry one, else 0
  Expr q;     // exponent parameter where it applies
  Expr k;     // log coefficient where it applies
  Expr e;     // internal energy, rho^2 e_rho = p

  Expr p_rho() const;
  Expr p_S() const;
  Expr a2() const { return p_rho(); }
  Expr temperature() const; // T = e_S
  /// Sound speed squared in gas variables (rho, p as Field::P), when known.
  std::optional<Expr> a2_gas() const;
  /// Internal energy in gas variables, when known.
  std::optional<Expr> e_gas() const;
};

Expr default_kappa();          // opaque kappa(S)
Expr opaque(const std::string& name, const Expr& arg);

Eos general();
Eos separable(Expr kappa = default_kappa(), const std::string& f = "f");
Eos additive(Expr kappa = default_kappa(), const std::string& f = "f");
Eos scaled_power(Expr kappa = default_kappa(), Expr q = expr::param("q"), const std::string& f = "f");
Eos log_form(Expr kappa = default_kappa(), Expr k = expr::param("k"), const std::string& f = "f");
Eos barotropic(const std::string& f = "f");
Eos polytropic(Expr kappa = default_kappa(), Expr q = expr::param("q"));
/// Polytropic with q = 2/n.
Eos polytropic_critical(Expr kappa = default_kappa(), const Expr& n = expr::param("n"));
Eos entropic(Expr kappa = default_kappa());
/// Explicit pressure; e is integrated termwise in rho when possible and is an
/// opaque antiderivative otherwise.
Eos concrete(const Expr& p, const std::string& label = "concrete");

/// Differential relations in p alone characterizing membership in a family.
/// p belongs to the family iff every relation normalizes to zero.
std::vector<Expr> membership_relations(EosKind kind, const Expr& p, const Expr& q = expr::param("q"),
                                       const Expr& k = expr::param("k"));
bool is_member(EosKind kind, const Expr& p, const Expr& q = expr::param("q"), const Expr& k = expr::param("k"));

struct FieldTriple {
  Expr u = U(), rho = model::rho(), s = S();
};

/// Left sides of the momentum, continuity and entropy equations.
std::vector<Expr> euler_residuals(const FieldTriple& f, const Eos& eos, const Expr& n);
inline std::vector<Expr> euler_residuals(const Eos& eos, const Expr& n) { return euler_residuals({}, eos, n); }

/// Right sides U_t, rho_t, S_t of the system.
std::vector<Expr> evolution(const Eos& eos, const Expr& n);
expr::SystemContext make_context(const Eos& eos, const Expr& n);

struct GasForm {
  Expr pressure_residual; // p_t + U p_r + a^2 rho (U_r + (n-1)U/r), p = p(rho,S)
  Expr a2;
};
GasForm to_gas_dynamics(const Eos& eos, const Expr& n);

} // namespace radflow::model
