#include "radflow/euler_identities.hpp"

#include <stdexcept>

#include "radflow/jet.hpp"

namespace radflow::expr {

namespace {

constexpr int kTop = 4; // E^(i) vanishes above the jet order, at most 3 here

Expr E(const Expr& e, int i) { return euler_operator(e, Field::U, i); }

Expr neg_d(Expr e, int k) {
  for (int i = 0; i < k; ++i) e = -Dr(e);
  return e;
}

std::int64_t choose(int n, int k) {
  std::int64_t c = 1;
  for (int q = 1; q <= k; ++q) c = c * (n - k + q) / q;
  return c;
}

} // namespace

EulerIdentityReport check_euler_identities(const Expr& a, const Expr& b) {
  if (is_zero(a)) throw std::invalid_argument("a must be non-zero");
  EulerIdentityReport rep{to_string(a), to_string(b)};

  const Expr f = func("f", {b}), fp = func("f", {b}, {1});
  Expr rhs;
  for (int i = 0; i <= kTop; ++i) rhs += E(b, i) * neg_d(a * fp, i) + E(a, i) * neg_d(f, i);
  rep.product = is_zero(E(a * f, 0) - rhs);

  const Expr b1 = Dr(b) / a;
  const Expr g = func("f", {b1}), gp = func("f", {b1}, {1});
  rhs = Expr();
  for (int i = 0; i <= kTop; ++i) rhs += E(b, i) * neg_d(gp, i + 1) + E(a, i) * neg_d(g - b1 * gp, i);
  rep.lifted = is_zero(E(a * g, 0) - rhs);

  const Expr W = Dr(gp) / a;
  Expr lhs, lhs_variant, derived, variant;
  for (int i = 0; i <= kTop; ++i) {
    lhs += E(b1, i) * neg_d(gp, i + 1);
    lhs_variant += E(b1, i) * neg_d(g, i + 1);
    derived -= E(b, i) * neg_d(W, i + 1);
    variant += E(b, i + 1) * neg_d(W, i + 1);
    for (int j = 0; i + j <= kTop; ++j) {
      const Expr term = Expr(Rational(choose(i + j, j))) * E(a, i + j) * neg_d(b1, j) * neg_d(W, i);
      derived += term;
      variant -= term;
    }
  }
  rep.descent = is_zero(lhs - derived);
  rep.descent_variant = is_zero(lhs_variant - variant);
  return rep;
}

std::pair<Expr, Expr> random_identity_pair(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> coef(-3, 3), ord(0, 2), deg(0, 2);
  auto nonzero = [&] {
    const int c = coef(gen);
    return Expr(c == 0 ? 1 : c);
  };
  Expr b;
  for (int k = 0; k < 3; ++k) {
    Expr m = nonzero() * pow(r(), Expr(deg(gen)));
    for (int j = 0; j < 2; ++j) m *= pow(jet(Field::U, 0, ord(gen)), Expr(deg(gen)));
    b += m;
  }
  if (max_rord(b, Field::U) < 0) b += jet(Field::U, 0, 1);
  const Expr a = nonzero() * pow(r(), Expr(deg(gen))) * pow(jet(Field::U, 0, ord(gen)), Expr(1 + deg(gen))) *
                 pow(jet(Field::U, 0, ord(gen)), Expr(deg(gen)));
  return {a, b};
}

} // namespace radflow::expr
