#pragma once

// Point and generalized symmetries: characteristics, determining equations,
// prolonged commutators and the catalog of maximal point-symmetry algebras.

#include <string>
#include <unordered_map>
#include <vector>

#include "radflow/expr.hpp"
#include "radflow/model.hpp"

namespace radflow::symmetry {

using expr::Expr;
using model::Eos;

struct PointGenerator {
  std::string name;
  Expr tau, xi, eta_u, eta_rho, eta_s;
};

struct Characteristic {
  std::string name;
  Expr pu, prho, ps;
  int order() const;

  Characteristic operator+(const Characteristic& o) const;
  Characteristic operator-(const Characteristic& o) const;
  Characteristic operator*(const Expr& c) const;
  bool is_zero() const;
};

/// P = eta - tau v_t - xi v_r.
Characteristic to_characteristic(const PointGenerator& g);
PointGenerator operator+(const PointGenerator& a, const PointGenerator& b);
PointGenerator operator*(const Expr& c, const PointGenerator& g);
bool same_generator(const PointGenerator& a, const PointGenerator& b);

/// Linearized equations applied to P, restricted to the solution space of eos.
std::vector<Expr> determining_residuals(const Characteristic& c, const Eos& eos, const Expr& n);
bool is_symmetry(const Characteristic& c, const Eos& eos, const Expr& n);

/// pr v_Q(F) = sum over jets v_J in F of (D^J Q^v) dF/dv_J.
Expr prolonged_action(const Characteristic& q, const Expr& f);
/// [a, b] = pr v_a(Q_b) - pr v_b(Q_a).
Characteristic commutator(const Characteristic& a, const Characteristic& b);
bool equal(const Characteristic& a, const Characteristic& b);

// ---- generator catalog --------------------------------------------------
// kappa is an expression in S; F an expression in S.

PointGenerator X1();
PointGenerator X2();
PointGenerator X_ii(const Expr& kappa, const Expr& q);
PointGenerator X_iii(const Expr& kappa);
PointGenerator X_iv(const Expr& q);
PointGenerator X_iv_prime(const Expr& n);
PointGenerator X_v(const Expr& n);
PointGenerator X_vi(const Expr& kappa);
PointGenerator X_vii();
PointGenerator X_viii(const Expr& kappa);
PointGenerator X_ix(const Expr& F);
PointGenerator X_vvi(const Expr& kappa, const Expr& F);

struct ExpectedCommutator {
  std::string a, b;
  PointGenerator value;
};

struct CatalogCase {
  int id = 0;
  std::string eos_label;
  Eos eos;
  std::vector<PointGenerator> generators;
  std::vector<ExpectedCommutator> commutators; // listed non-zero ones; others vanish
  std::string algebra;
};

/// Case 1..13 with opaque kappa, f, F and symbolic q, k, n. Substituting
/// concrete functions is done by the `kappa`/`F` overload.
CatalogCase catalog_case(int id);
CatalogCase catalog_case(int id, const Expr& kappa, const Expr& F, const Expr& n);
constexpr int kCaseCount = 13;

struct GeneratorReport {
  std::string name;
  bool residual_zero = false;
  std::vector<std::string> residuals; // non-zero residuals, printed
};
struct CommutatorReport {
  std::string a, b;
  bool ok = false;
  std::string detail;
};
struct InheritanceReport {
  std::string relation;
  bool ok = false;
};
struct CaseReport {
  int id = 0;
  std::string algebra;
  std::vector<GeneratorReport> generators;
  std::vector<CommutatorReport> commutators;
  std::vector<InheritanceReport> inheritance;
  std::vector<GeneratorReport> instances; // concrete kappa/F instantiations
  bool passed() const;
};

CaseReport verify_case(int id, bool with_instances = true);

/// Generators of case id, with the given kappa, F and parameter values, checked
/// against an arbitrary EOS (usually a concrete pressure). The commutator table
/// is the case's own.
CaseReport verify_case_on(int id, const Eos& eos, const Expr& kappa, const Expr& F, const Expr& n,
                          const std::unordered_map<std::string, Expr>& values = {});
/// Relations between generators of different cases (cases 6, 7, 8).
std::vector<InheritanceReport> inheritance_checks(int id);

} // namespace radflow::symmetry
