#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "radflow/solver.hpp"

using namespace radflow::solver;

namespace {

Primitive gaussian_bump(double r) {
  return {1 + 0.2 * std::exp(-10 * (r - 1.5) * (r - 1.5)), 0.1 * std::sin(M_PI * r), 0.2 * std::cos(r)};
}

// monotone data keep the limiter off its clipping branch
Primitive monotone(double r) { return {1 + 0.2 * r, 0.4 + 0.2 * r, 1 + 0.5 * r + 0.1 * std::sin(2 * r)}; }

std::map<std::string, double> imbalances(const History& h, double a, double b) {
  std::map<std::string, double> out;
  for (const auto& bal : conserved_report(h, a, b)) out[bal.integral] = bal.imbalance;
  return out;
}

} // namespace

TEST(Solver, GridValidation) {
  EXPECT_THROW((Grid{0, 1, 64, 3}).validate(), std::invalid_argument);
  EXPECT_THROW((Grid{1, 0.5, 64, 3}).validate(), std::invalid_argument);
  EXPECT_THROW((Grid{0.5, 1, 8, 3}).validate(), std::invalid_argument);
  EXPECT_THROW((Grid{0.5, 1, 64, 1}).validate(), std::invalid_argument);
  const Grid g{0.5, 2.5, 64, 3};
  double v = 0;
  for (int i = 0; i < g.N; ++i) v += g.volume(i);
  EXPECT_NEAR(v, (std::pow(2.5, 3) - std::pow(0.5, 3)) / 3, 1e-13);
}

TEST(Solver, EosValues) {
  const auto poly = NumericEos::polytropic(2.0 / 3.0);
  EXPECT_NEAR(poly.p(2, 0.5), std::exp(0.5) * std::pow(2, 5.0 / 3.0), 1e-13);
  EXPECT_NEAR(poly.a2(2, 0.5), 5.0 / 3.0 * poly.p(2, 0.5) / 2, 1e-12);
  const auto ent = NumericEos::entropic();
  EXPECT_EQ(ent.p(3, 1.7), 1.7);
  EXPECT_EQ(ent.a2(3, 1.7), 0.0);
  EXPECT_THROW(NumericEos::polytropic(-1), std::invalid_argument);
  const Kappa k = Kappa::exponential(2);
  EXPECT_NEAR(k.inv(k.f(0.3)), 0.3, 1e-14);
}

TEST(Solver, ConstantStateIsPreserved) {
  const Solver s({0.5, 2.5, 64, 3}, NumericEos::polytropic(2.0 / 3.0));
  State st = s.initial([](double) { return Primitive{1.3, 0, 0.4}; });
  for (int k = 0; k < 20; ++k) st = s.step(st, s.stable_dt(st));
  for (int i = 0; i < 64; ++i) {
    const Primitive p = st.primitive(i);
    EXPECT_NEAR(p.rho, 1.3, 1e-13);
    EXPECT_NEAR(p.u, 0, 1e-13);
    EXPECT_NEAR(p.s, 0.4, 1e-13);
  }
}

TEST(Solver, CflViolationAndVacuum) {
  const Solver s({0.5, 2.5, 64, 3}, NumericEos::polytropic(2.0 / 3.0));
  const State st = s.initial(gaussian_bump);
  EXPECT_THROW(s.step(st, 1.01 * s.stable_dt(st)), std::invalid_argument);
  EXPECT_THROW(s.step(st, -1), std::invalid_argument);
  EXPECT_THROW(s.initial([](double) { return Primitive{-1, 0, 0}; }), std::invalid_argument);
  EXPECT_THROW(Solver({0.5, 2.5, 64, 3}, NumericEos::polytropic(2.0 / 3.0), {1.5}), std::invalid_argument);
}

TEST(Solver, FullGridMassBalance) {
  const Solver s({0.5, 2.5, 128, 3}, NumericEos::polytropic(2.0 / 3.0));
  const History h = simulate(s, gaussian_bump, 0.3);
  EXPECT_LT(h.max_mass_defect, 1e-12);
  EXPECT_NEAR(h.t_end(), 0.3, 1e-14);
}

TEST(Solver, HistorySamplingAndTracing) {
  const Solver s({0.5, 2.5, 64, 3}, NumericEos::polytropic(2.0 / 3.0));
  const History h = simulate(s, gaussian_bump, 0.1);
  const Primitive p = h.at(h.states[5].t, s.grid().center(20));
  EXPECT_NEAR(p.rho, h.states[5].primitive(20).rho, 1e-13);
  EXPECT_THROW(h.at(0.5, 1), std::out_of_range);
  EXPECT_THROW(h.at(0.05, 3), std::out_of_range);
  const auto pos = trace(h, {1.0, 1.5});
  EXPECT_EQ(pos.size(), h.states.size());
  EXPECT_THROW(trace(h, {2.49}), std::out_of_range);
}

TEST(Solver, PolytropicBalancesConverge) {
  std::map<std::string, std::vector<double>> errs;
  std::vector<double> j0;
  for (int N : {128, 256}) {
    const Solver s({0.5, 2.5, N, 3}, NumericEos::polytropic(2.0 / 3.0));
    const History h = simulate(s, gaussian_bump, 0.3);
    for (auto [name, v] : imbalances(h, 1.0, 2.0)) errs[name].push_back(v);
    for (const auto& d : advected_drift(h, {1.0, 1.2, 1.4, 1.6}))
      if (d.scalar == "J0") j0.push_back(d.max_relative);
  }
  for (const char* name : {"mass", "entropy", "energy", "dilational energy", "similarity energy"}) {
    ASSERT_EQ(errs[name].size(), 2u) << name;
    EXPECT_GT(observed_orders(errs[name])[0], 1.8) << name;
  }
  // the barotropic and entropic integrals do not apply
  EXPECT_EQ(errs.count("enthalpy flux"), 0u);
  EXPECT_EQ(errs.count("entropy-weighted energy"), 0u);
  ASSERT_EQ(j0.size(), 2u);
  EXPECT_GT(observed_orders(j0)[0], 1.5);
}

TEST(Solver, EntropicDriftsConverge) {
  std::map<std::string, std::vector<double>> drift;
  for (int N : {128, 256}) {
    const Solver s({0.5, 2.5, N, 3}, NumericEos::entropic());
    const History h = simulate(s, monotone, 0.3);
    for (const auto& d : advected_drift(h, {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7})) drift[d.scalar].push_back(d.max_relative);
    EXPECT_EQ(imbalances(h, 1.0, 2.0).count("entropy-weighted energy"), 1u);
  }
  for (const char* name : {"J11", "J21"}) {
    ASSERT_EQ(drift[name].size(), 2u) << name;
    EXPECT_GT(observed_orders(drift[name])[0], 1.5) << name;
  }
}

TEST(Solver, BarotropicEnthalpyFlux) {
  std::vector<double> e;
  for (int N : {128, 256}) {
    const Solver s({0.5, 2.5, N, 3}, NumericEos::barotropic(0.4));
    const History h = simulate(s, gaussian_bump, 0.3);
    const auto im = imbalances(h, 1.0, 2.0);
    ASSERT_EQ(im.count("enthalpy flux"), 1u);
    EXPECT_EQ(im.count("dilational energy"), 0u);
    e.push_back(im.at("enthalpy flux"));
  }
  EXPECT_GT(observed_orders(e)[0], 1.8);
}

TEST(Solver, ObservedOrders) {
  const auto o = observed_orders({4e-3, 1e-3, 2.5e-4});
  ASSERT_EQ(o.size(), 2u);
  EXPECT_NEAR(o[0], 2, 1e-12);
  EXPECT_NEAR(o[1], 2, 1e-12);
}

TEST(Solver, HierarchyDriftPerCharacteristic) {
  std::vector<double> level1, level2;
  for (int N : {128, 256}) {
    const Solver s({0.5, 2.5, N, 3}, NumericEos::entropic());
    const History h = simulate(s, monotone, 0.2);
    const auto d1 = hierarchy_drift(h, 2, 1, {1.2, 1.4});
    ASSERT_EQ(d1.size(), 2u);
    level1.push_back(std::max(d1[0].max_relative, d1[1].max_relative));
    const auto d2 = hierarchy_drift(h, 1, 2, {1.2, 1.4});
    level2.push_back(std::max(d2[0].max_relative, d2[1].max_relative));
    if (N == 128) {
      EXPECT_THROW(hierarchy_drift(h, 3, 1, {1.2}), std::invalid_argument);
      EXPECT_THROW(hierarchy_drift(h, 1, 0, {1.2}), std::invalid_argument);
    }
  }
  EXPECT_GT(observed_orders(level1)[0], 1.5);
  // one numerical derivative more: still convergent
  EXPECT_LT(level2[1], level2[0]);
  const Solver sp({0.5, 2.5, 64, 3}, NumericEos::polytropic(2.0 / 3.0));
  EXPECT_THROW(hierarchy_drift(simulate(sp, gaussian_bump, 0.05), 1, 1, {1.2}), std::invalid_argument);
}
