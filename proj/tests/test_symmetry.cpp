#include <gtest/gtest.h>

#include "radflow/numeric.hpp"
#include "radflow/symmetry.hpp"

using namespace radflow::expr;
using namespace radflow::symmetry;
namespace model = radflow::model;
using radflow::Rational;

namespace {
Expr n() { return param("n"); }
Expr q() { return param("q"); }
Expr kap() { return model::default_kappa(); }
} // namespace

TEST(Symmetry, CharacteristicOfPointGenerators) {
  auto c1 = to_characteristic(X1());
  EXPECT_EQ(c1.pu, -jet(Field::U, 1, 0));
  EXPECT_EQ(c1.prho, -jet(Field::Rho, 1, 0));
  EXPECT_EQ(c1.ps, -jet(Field::S, 1, 0));
  auto c2 = to_characteristic(X2());
  EXPECT_TRUE(is_zero(c2.pu + t() * jet(Field::U, 1, 0) + r() * jet(Field::U, 0, 1)));
  auto c6 = to_characteristic(X_vi(kap()));
  EXPECT_TRUE(c6.pu.is_zero());
  EXPECT_TRUE(c6.prho.is_zero());
  EXPECT_EQ(c6.ps, Expr(1) / func("kappa", {model::S()}, {1}));
  EXPECT_EQ(c1.order(), 1);
}

TEST(Symmetry, GeneralEosAdmitsTranslationAndDilation) {
  const auto eos = model::general();
  EXPECT_TRUE(is_symmetry(to_characteristic(X1()), eos, n()));
  EXPECT_TRUE(is_symmetry(to_characteristic(X2()), eos, n()));
}

TEST(Symmetry, NegativeControls) {
  // conformal similarity needs q = 2/n
  auto res = determining_residuals(to_characteristic(X_v(n())), model::polytropic(kap(), q()), n());
  EXPECT_FALSE(is_zero(res[0]));
  // the residual vanishes once q = 2/n is substituted: it carries the factor
  std::unordered_map<AtomId, Expr> sub{{param_id("q"), Expr(2) / n()}};
  for (const Expr& e : res) EXPECT_TRUE(is_zero(substitute(e, sub)));
  // ... and numerically it is non-zero at random points for q != 2/n
  EXPECT_GT(numeric_zero_check(res[0]).max_relative, 1e-6);

  EXPECT_FALSE(is_symmetry(to_characteristic(X_iii(kap())), model::general(), n()));
  EXPECT_FALSE(is_symmetry(to_characteristic(X_v(n())), model::general(), n()));
  // a perturbed generator is rejected
  PointGenerator wrong = X_iii(kap());
  wrong.eta_s = kap() / func("kappa", {model::S()}, {1});
  EXPECT_FALSE(is_symmetry(to_characteristic(wrong), model::separable(), n()));
}

TEST(Symmetry, CommutatorBasics) {
  auto a = to_characteristic(X1()), b = to_characteristic(X2()), v = to_characteristic(X_v(n()));
  EXPECT_TRUE(equal(commutator(a, b), a));
  EXPECT_TRUE(equal(commutator(b, v), v));
  EXPECT_TRUE(equal(commutator(a, v), to_characteristic(Expr(2) * X2() + Expr(-1) * X_iv_prime(n()))));
  // antisymmetry
  EXPECT_TRUE(equal(commutator(a, v), commutator(v, a) * Expr(-1)));
  // Jacobi on the case-8 triple
  auto j = commutator(a, commutator(b, v)) + commutator(b, commutator(v, a)) + commutator(v, commutator(a, b));
  EXPECT_TRUE(j.is_zero());
}

TEST(Symmetry, CommutatorBilinear) {
  auto a = to_characteristic(X1()), b = to_characteristic(X_iii(kap())), c = to_characteristic(X_v(n()));
  auto lhs = commutator(a * Expr(3) + c, b);
  auto rhs = commutator(a, b) * Expr(3) + commutator(c, b);
  EXPECT_TRUE(equal(lhs, rhs));
}

TEST(Symmetry, EveryCatalogCaseVerifies) {
  for (int id = 1; id <= kCaseCount; ++id) {
    CaseReport rep = verify_case(id);
    EXPECT_TRUE(rep.passed()) << "case " << id;
    EXPECT_FALSE(rep.generators.empty());
    EXPECT_FALSE(rep.instances.empty());
  }
}

TEST(Symmetry, InheritanceRelations) {
  for (int id : {6, 7, 8}) {
    auto rels = inheritance_checks(id);
    EXPECT_FALSE(rels.empty());
    for (const auto& r : rels) EXPECT_TRUE(r.ok) << id << ": " << r.relation;
  }
}

TEST(Symmetry, UnknownCaseThrows) { EXPECT_THROW(catalog_case(99), std::out_of_range); }
