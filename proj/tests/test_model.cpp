#include <gtest/gtest.h>

#include "radflow/model.hpp"
#include "radflow/numeric.hpp"
#include "radflow/parse.hpp"

using namespace radflow::expr;
using namespace radflow::model;
using radflow::Rational;

namespace {
Expr n() { return param("n"); }
Expr q() { return param("q"); }
Expr kap() { return default_kappa(); }
Expr dkap() { return func("kappa", {S()}, {1}); }
const AtomId rho_id() { return jet_id(Field::Rho, 0, 0); }

std::vector<Eos> catalog() {
  return {general(),
          separable(),
          additive(),
          scaled_power(),
          log_form(),
          barotropic(),
          polytropic(),
          polytropic_critical(),
          entropic(),
          concrete(pow(rho(), Rational(2)), "rho^2"),
          concrete(exp(S()) * pow(rho(), Rational(5, 3)), "exp(S) rho^(5/3)"),
          concrete(rho() + S() * pow(rho(), Rational(3)), "mixed"),
          concrete(exp(S() * rho()), "exp(S rho)")};
}
} // namespace

TEST(Model, InternalEnergyDefiningRelation) {
  for (const Eos& e : catalog()) {
    Expr rel = pow(rho(), Rational(2)) * partial(e.e, rho_id()) - e.p;
    EXPECT_TRUE(is_zero(rel)) << e.label << ": " << rel;
  }
}

TEST(Model, InternalEnergyClosedForms) {
  // stated forms for the critical polytrope and the entropic law
  EXPECT_TRUE(is_zero(polytropic_critical().e - n() / Expr(2) * kap() * pow(rho(), Expr(2) / n())));
  EXPECT_TRUE(is_zero(entropic().e + kap() / rho()));
  // rho^2: integral of rho^2/rho^2 is rho with zero constant
  EXPECT_EQ(concrete(pow(rho(), Rational(2))).e, rho());
}

TEST(Model, Temperature) {
  // T = e_S = kappa'(S) rho^q / q for the polytrope, by hand
  EXPECT_TRUE(is_zero(polytropic().temperature() - dkap() * pow(rho(), q()) / q()));
  EXPECT_TRUE(is_zero(entropic().temperature() + dkap() / rho()));
}

TEST(Model, SoundSpeed) {
  EXPECT_TRUE(is_zero(polytropic().a2() - (Expr(1) + q()) * kap() * pow(rho(), q())));
  EXPECT_TRUE(entropic().a2().is_zero());
  EXPECT_EQ(barotropic().a2(), func("f", {rho()}, {1}));
}

TEST(Model, ResidualsVanishOnSolutions) {
  for (const Eos& e : catalog()) {
    auto ctx = make_context(e, n());
    for (const Expr& res : euler_residuals(e, n())) EXPECT_TRUE(is_zero(ctx.restrict(res))) << e.label;
  }
}

TEST(Model, ContinuityResidualShape) {
  auto res = euler_residuals(general(), n());
  Expr expected = jet(Field::Rho, 1, 0) + Dr(U() * rho()) + (n() - Expr(1)) / r() * U() * rho();
  EXPECT_TRUE(is_zero(res[1] - expected));
}

TEST(Model, ConstantStateAndDiscrimination) {
  for (const Expr& res : euler_residuals({Expr(0), Expr(1), Expr(1)}, polytropic(), n()))
    EXPECT_TRUE(res.is_zero());
  // U = 0, rho = 1, S = r solves continuity and entropy but not momentum
  auto res = euler_residuals({Expr(0), Expr(1), r()}, polytropic(), n());
  EXPECT_TRUE(res[1].is_zero());
  EXPECT_TRUE(res[2].is_zero());
  EXPECT_FALSE(is_zero(res[0]));
}

TEST(Model, GasDynamicsEquivalence) {
  for (const Eos& e : catalog()) {
    auto gas = to_gas_dynamics(e, n());
    EXPECT_TRUE(is_zero(make_context(e, n()).restrict(gas.pressure_residual))) << e.label;
  }
  // kappa(S) = S: a^2 = 0 and the pressure equation is the entropy equation
  auto gas = to_gas_dynamics(entropic(S()), n());
  EXPECT_TRUE(gas.a2.is_zero());
  EXPECT_TRUE(is_zero(gas.pressure_residual - jet(Field::S, 1, 0) - U() * jet(Field::S, 0, 1)));
}

TEST(Model, MembershipRelations) {
  EXPECT_TRUE(is_member(EosKind::Polytropic, polytropic().p));
  EXPECT_TRUE(is_member(EosKind::Separable, polytropic().p));
  EXPECT_TRUE(is_member(EosKind::Separable, separable().p));
  EXPECT_TRUE(is_member(EosKind::Additive, additive().p));
  EXPECT_TRUE(is_member(EosKind::ScaledPower, scaled_power().p));
  EXPECT_TRUE(is_member(EosKind::LogForm, log_form().p));
  EXPECT_TRUE(is_member(EosKind::Entropic, entropic().p));
  EXPECT_TRUE(is_member(EosKind::Barotropic, barotropic().p));
  // the polytrope is a scaled power with f(x) = x^0 after absorbing kappa
  EXPECT_TRUE(is_member(EosKind::ScaledPower, polytropic().p));
  EXPECT_FALSE(is_member(EosKind::Polytropic, general().p));
  EXPECT_FALSE(is_member(EosKind::Barotropic, entropic().p));
  EXPECT_FALSE(is_member(EosKind::Additive, separable().p));
  EXPECT_FALSE(is_member(EosKind::Entropic, polytropic().p));
  EXPECT_FALSE(is_member(EosKind::ScaledPower, additive().p));
}

TEST(Model, ParsedEosMatchesCatalog) {
  ParseOptions opt;
  opt.unknown_as_param = false;
  Expr p = parse("kappa(S)*rho^(1+q)", opt);
  EXPECT_EQ(p, polytropic().p);
}
