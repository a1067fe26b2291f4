#include <gtest/gtest.h>

#include "radflow/casimir.hpp"
#include "radflow/parse.hpp"

using namespace radflow::expr;
using namespace radflow::casimir;
namespace model = radflow::model;

namespace {
Expr n() { return param("n"); }
Expr d() { return model::rho(); }
Expr s() { return model::S(); }
Expr sr() { return jet(Field::S, 0, 1); }
Expr J(int k) { return param("J" + std::to_string(k)); }
} // namespace

TEST(Casimir, RecursionOperator) {
  EXPECT_TRUE(is_zero(recursion_apply(s(), n()) - pow(r(), Expr(1) - n()) * sr() / d()));
  EXPECT_TRUE(recursion_apply(Expr(7), n()).is_zero());
  // n = 3, S = r^2, rho = 1: J_1 = 2/r, J_2 = -2/r^4
  Expr j2 = advected_scalar(2, n());
  j2 = substitute(j2, {{param_id("n"), Expr(3)},
                       {jet_id(Field::S, 0, 0), r() * r()},
                       {jet_id(Field::S, 0, 1), Expr(2) * r()},
                       {jet_id(Field::S, 0, 2), Expr(2)},
                       {jet_id(Field::Rho, 0, 0), Expr(1)},
                       {jet_id(Field::Rho, 0, 1), Expr(0)}});
  EXPECT_TRUE(is_zero(j2 + Expr(2) * pow(r(), Expr(-4))));
  EXPECT_EQ(substitute(j2, {{var_id(Var::R), Expr(1)}}), Expr(-2));
}

TEST(Casimir, JetOrders) {
  for (int l = 1; l <= 3; ++l) {
    Expr j = advected_scalar(l, n());
    EXPECT_EQ(max_rord(j, Field::S), l);
    EXPECT_EQ(max_rord(j, Field::Rho), l - 1);
  }
}

TEST(Casimir, ResidualExamples) {
  EXPECT_TRUE(casimir_residuals(d() * s(), n()).zero());
  const Expr j1 = advected_scalar(1, n());
  EXPECT_TRUE(casimir_residuals(d() * j1 * j1, n()).zero());
  auto res = casimir_residuals(d() * model::U(), n());
  EXPECT_TRUE(is_zero(res.first - pow(r(), n() - Expr(1)) * d()));
}

TEST(Casimir, HierarchyWithOpaqueFunction) {
  auto rep = verify_casimir_hierarchy(3, n());
  ASSERT_EQ(rep.levels.size(), 4u);
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.levels[3].euler_terms, rep.levels[2].euler_terms);
}

TEST(Casimir, HierarchyWithConcreteFunction) {
  const Expr f = parse("J0*J1^2 + J2^3*J0", {{}, true});
  EXPECT_TRUE(verify_casimir_hierarchy(2, n(), 200000, f).passed());
}

TEST(Casimir, BudgetStopsDeterministically) {
  auto rep = verify_casimir_hierarchy(3, n(), 50);
  EXPECT_FALSE(rep.complete);
  EXPECT_FALSE(rep.passed());
  EXPECT_TRUE(rep.levels.back().budget_exceeded);
}

TEST(Casimir, SplitSystem) {
  auto rels = split_system_check(2, 2);
  EXPECT_EQ(rels.size(), 9u);
  for (const auto& rel : rels) EXPECT_TRUE(rel.ok) << rel.k << "," << rel.i << ": " << rel.relation;
}

TEST(Casimir, FirstOrderClassification) {
  const Expr j1 = advected_scalar(1, n());
  auto a = classify_first_order(d() * s() * j1, n());
  EXPECT_TRUE(a.casimir);
  EXPECT_TRUE(a.literal_form);
  // trivial densities carry the weight: r^(1-n) D_r(...)
  auto b = classify_first_order(d() + pow(r(), Expr(1) - n()) * Dr(model::U() * s()), n());
  EXPECT_TRUE(b.casimir);
  EXPECT_FALSE(b.literal_form);
  EXPECT_FALSE(classify_first_order(d() + Dr(pow(r(), Expr(1) - n()) * s()), n()).casimir);
  auto c = classify_first_order(d() * model::U() * model::U(), n());
  EXPECT_FALSE(c.casimir);
  EXPECT_THROW(classify_first_order(d() * advected_scalar(2, n()), n()), std::invalid_argument);
}

TEST(Casimir, NonTrivialityGate) {
  EXPECT_TRUE(hierarchy_density_nontrivial(J(0), 0));
  EXPECT_FALSE(hierarchy_density_nontrivial(J(0) * J(1), 1));
  EXPECT_TRUE(hierarchy_density_nontrivial(J(1) * J(1), 1));
  EXPECT_FALSE(hierarchy_density_nontrivial(J(1) * J(1) + J(2), 2));
  EXPECT_TRUE(hierarchy_density_nontrivial(J(0) * J(2) * J(2), 2));
}

TEST(Casimir, HierarchyIsAdvected) {
  for (const auto& eos : {model::general(), model::polytropic(), model::entropic(), model::barotropic()})
    for (int l = 0; l <= 2; ++l) EXPECT_TRUE(is_zero(advection_residual(l, eos, n()))) << eos.label << " " << l;
}

TEST(Casimir, EntropicScalarIsNotACasimir) {
  // rho J_{1,1} depends explicitly on U
  const Expr j11 = model::U() * model::U() + Expr(2) / n() * r() * Dr(model::entropic().p) / d();
  auto res = casimir_residuals(d() * j11, n());
  EXPECT_FALSE(is_zero(res.first));
}
