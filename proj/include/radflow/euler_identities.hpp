#pragma once

// Identities of the higher Euler operators E^(i) = E_U^(i) used when the
// advected-scalar hierarchies are descended one level, with b_{+1} = D_r(b)/a
// and an opaque f:
//   product  E(a f(b)) = sum_i E^(i)(b) (-D)^i (a f'(b)) + E^(i)(a) (-D)^i f(b)
//   lifted   E(a f(b_{+1})) = sum_i E^(i)(b) (-D)^(i+1) f'(b_{+1})
//                             + E^(i)(a) (-D)^i (f(b_{+1}) - b_{+1} f'(b_{+1}))
//   descent  sum_i E^(i)(b_{+1}) (-D)^(i+1) G
//              = -sum_i E^(i)(b) (-D)^(i+1) W
//                + sum_{i,j} C(i+j, j) E^(i+j)(a) ((-D)^j b_{+1}) (-D)^i W,
//            G = f'(b_{+1}), W = D_r(G)/a.
// A variant of the descent identity with E^(i+1)(b) in the first sum, f(b_{+1})
// in place of G and the opposite sign does not hold; it is evaluated alongside
// as a control.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "radflow/expr.hpp"

namespace radflow::expr {

struct EulerIdentityReport {
  std::string a, b;
  bool product = false, lifted = false, descent = false;
  bool descent_variant = false;
};

EulerIdentityReport check_euler_identities(const Expr& a, const Expr& b);

/// Random polynomials in r and U, U_r, U_rr with small integer coefficients;
/// a is a non-zero monomial.
std::pair<Expr, Expr> random_identity_pair(std::mt19937_64& gen);

} // namespace radflow::expr
