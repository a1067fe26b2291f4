#include "radflow/groups.hpp"

// this Boost version calls isnan unqualified
#include <cmath>
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace radflow::groups {

using solver::History;
using solver::Kappa;

Sampler history_sampler(const History& h) {
  // the history must outlive the sampler
  return [&h](double t, double r) { return h.at(t, r); };
}

Slice sample(const Sampler& state, double t, const std::vector<double>& r) {
  Slice s{t, r, {}, {}, {}};
  for (double x : r) {
    const Primitive p = state(t, x);
    s.rho.push_back(p.rho);
    s.u.push_back(p.u);
    s.s.push_back(p.s);
  }
  return s;
}

Sampler slice_sampler(const Slice& s) {
  if (s.r.size() < 4) throw std::invalid_argument("slice needs at least four points");
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto make = [&](const std::vector<double>& v) { return std::make_shared<Pchip>(std::vector<double>(s.r), std::vector<double>(v)); };
  auto rho = make(s.rho), u = make(s.u), ent = make(s.s);
  const double lo = s.r.front(), hi = s.r.back();
  return [rho, u, ent, lo, hi](double, double r) {
    if (r < lo || r > hi) throw std::out_of_range("radius outside the slice");
    return Primitive{(*rho)(r), (*u)(r), (*ent)(r)};
  };
}

EntropyFunction EntropyFunction::constant(double c) {
  if (c == 0) throw std::invalid_argument("F must be non-zero");
  return {"F = " + std::to_string(c), [c](double) { return c; }, [](double) { return 0.0; },
          [c](double s) { return s / c; }, [c](double h) { return c * h; }};
}

EntropyFunction EntropyFunction::identity() {
  return {"F = S", [](double s) { return s; }, [](double) { return 1.0; },
          [](double s) {
            if (!(s > 0)) throw std::domain_error("H = ln S needs S > 0");
            return std::log(s);
          },
          [](double h) { return std::exp(h); }};
}

namespace {

struct NamedGroup {
  Group g;
  const char* name;
};
constexpr NamedGroup kGroups[] = {{Group::X1, "X1"},       {Group::X2, "X2"},       {Group::X_ii, "X_ii"},
                                  {Group::X_iii, "X_iii"}, {Group::X_iv, "X_iv"},   {Group::X_v, "X_v"},
                                  {Group::X_vi, "X_vi"},   {Group::X_vii, "X_vii"}, {Group::X_viii, "X_viii"},
                                  {Group::X_ix, "X_ix"},   {Group::X_vvi, "X_vvi"}};

double checked_inverse(const std::function<double(double)>& f, const std::function<double(double)>& inv, double target,
                       const char* what) {
  const double s = inv(target);
  if (!std::isfinite(s) || std::abs(f(s) - target) > 1e-10 * std::max(1.0, std::abs(target)))
    throw std::domain_error(std::string(what) + " is not invertible at the shifted value");
  return s;
}

double kappa_shift(const Kappa& k, double s, double factor, double add) {
  return checked_inverse(k.f, k.inv, factor * k.f(s) + add, "kappa");
}

double h_shift(const EntropyFunction& F, double s, double eps) { return checked_inverse(F.h, F.h_inv, F.h(s) + eps, "H"); }

// cubic Lagrange weights on four nodes
void lagrange4(const double* x, double at, double* w) {
  for (int k = 0; k < 4; ++k) {
    w[k] = 1;
    for (int j = 0; j < 4; ++j)
      if (j != k) w[k] *= (at - x[j]) / (x[k] - x[j]);
  }
}

} // namespace

std::string group_name(Group g) {
  for (const auto& e : kGroups)
    if (e.g == g) return e.name;
  throw std::logic_error("unnamed group");
}

Group parse_group(const std::string& name) {
  for (const auto& e : kGroups)
    if (name == e.name) return e.g;
  if (name == "time-translation") return Group::X1;
  if (name == "dilation") return Group::X2;
  if (name == "conformal") return Group::X_v;
  throw std::invalid_argument("unknown group: " + name);
}

std::vector<Group> all_groups() {
  std::vector<Group> out;
  for (const auto& e : kGroups) out.push_back(e.g);
  return out;
}

Sampler apply_group(Group g, double eps, Sampler state, const GroupContext& ctx) {
  if (eps == 0) return state;
  const double q = ctx.q, n = ctx.n;
  const Kappa kappa = ctx.kappa;
  const EntropyFunction F = ctx.F;
  switch (g) {
  case Group::X1:
    return [=](double t, double r) { return state(t - eps, r); };
  case Group::X2:
    return [=](double t, double r) { return state(std::exp(-eps) * t, std::exp(-eps) * r); };
  case Group::X_ii:
    return [=](double t, double r) {
      const double a = std::exp(q * eps);
      const Primitive p = state(t, r / a);
      return Primitive{std::exp(2 * eps) * p.rho, a * p.u, kappa_shift(kappa, p.s, std::exp(-2 * eps), 0)};
    };
  case Group::X_iii:
    return [=](double t, double r) {
      const double a = std::exp(eps);
      const Primitive p = state(t, r / a);
      return Primitive{p.rho, a * p.u, kappa_shift(kappa, p.s, std::exp(2 * eps), 0)};
    };
  case Group::X_iv:
    return [=](double t, double r) {
      const double a = std::exp(q * eps);
      const Primitive p = state(t, r / a);
      return Primitive{std::exp(2 * eps) * p.rho, a * p.u, p.s};
    };
  case Group::X_v:
    return [=](double T, double R) {
      const double d = 1 + eps * T;
      if (!(d > 0)) throw std::domain_error("conformal map: 1 + eps t must be positive");
      const double t = T / d, r = R / d;
      const Primitive p = state(t, r);
      return Primitive{p.rho / std::pow(d, n), p.u / d + eps * r, p.s};
    };
  case Group::X_vi:
    return [=](double t, double r) {
      const Primitive p = state(t, r);
      return Primitive{p.rho, p.u, kappa_shift(kappa, p.s, 1, eps)};
    };
  case Group::X_vii:
  case Group::X_viii: {
    const bool shift = g == Group::X_viii;
    return [=](double t, double r) {
      const double a = std::exp(eps);
      const Primitive p = state(t, r / a);
      return Primitive{std::exp(-2 * eps) * p.rho, a * p.u, shift ? kappa_shift(kappa, p.s, std::exp(2 * eps), 0) : p.s};
    };
  }
  case Group::X_ix:
    return [=](double t, double r) {
      const Primitive p = state(t, r);
      return Primitive{p.rho, p.u, h_shift(F, p.s, eps)};
    };
  case Group::X_vvi:
    return [=](double t, double r) {
      const Primitive p = state(t, r);
      const double s = h_shift(F, p.s, eps);
      const double w0 = kappa.df(p.s) * F.f(p.s);
      if (w0 == 0) throw std::domain_error("kappa'(S) F(S) vanishes");
      return Primitive{p.rho * kappa.df(s) * F.f(s) / w0, p.u, s};
    };
  }
  throw std::logic_error("unhandled group");
}

// ---- first-order flows -------------------------------------------------------------

Sampler enthalpy_flow(Sampler state, double eps, double n, std::function<double(double)> r_ref, double r_max) {
  if (eps == 0) return state;
  auto mass = [state, n](double t, double a, double b) {
    auto dens = [&](double x) {
      const double rho = state(t, x).rho;
      if (!(rho > 0)) throw std::domain_error("enclosed mass is not strictly increasing (rho <= 0)");
      return rho * std::pow(x, n - 1);
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(dens, a, b, 8, 1e-11);
  };
  return [=](double t, double r) {
    const double lo = r_ref(t);
    if (r < lo || r > r_max) throw std::out_of_range("enthalpy flow: radius outside [r_ref, r_max]");
    // g(x) = M(x) - (M(r) - eps), increasing in x
    std::function<double(double)> g;
    double a, b;
    if (eps > 0) {
      g = [&](double x) { return eps - mass(t, x, r); };
      a = lo, b = r;
    } else {
      g = [&](double x) { return mass(t, r, x) + eps; };
      a = r, b = r_max;
    }
    const double ga = g(a), gb = g(b);
    if (ga > 0 || gb < 0) throw std::out_of_range("enthalpy flow: M(r) - eps outside the mass range");
    double x;
    if (ga == 0) x = a;
    else if (gb == 0) x = b;
    else {
      std::uintmax_t iters = 200;
      const auto br = boost::math::tools::toms748_solve(
          g, a, b, ga, gb, [](double u, double v) { return std::abs(v - u) <= 1e-13; }, iters);
      x = 0.5 * (br.first + br.second);
    }
    const Primitive p = state(t, r);
    return Primitive{p.rho, p.u, state(t, x).s};
  };
}

Sampler entropy_weighted_flow(Sampler state, double eps, WeightFunction f, double s_lo, double s_hi) {
  if (eps == 0) return state;
  if (!(s_lo < s_hi)) throw std::invalid_argument("entropy bracket must satisfy s_lo < s_hi");
  return [=](double t, double r) {
    auto g = [&](double s) { return s - state(t - eps * f.f(s), r).s; };
    const double ga = g(s_lo), gb = g(s_hi);
    double s;
    if (ga == 0) s = s_lo;
    else if (gb == 0) s = s_hi;
    else {
      if ((ga > 0) == (gb > 0)) throw std::runtime_error("entropy-weighted flow: implicit solve not bracketed");
      std::uintmax_t iters = 200;
      const auto br = boost::math::tools::toms748_solve(
          g, s_lo, s_hi, ga, gb, [](double u, double v) { return std::abs(v - u) <= 1e-12; }, iters);
      if (iters >= 200) throw std::runtime_error("entropy-weighted flow: implicit solve did not converge");
      s = 0.5 * (br.first + br.second);
    }
    const double sigma = t - eps * f.f(s);
    const Primitive p = state(sigma, r);
    const double h = 1e-5;
    const double s_t = (state(sigma + h, r).s - state(sigma - h, r).s) / (2 * h);
    const double d = 1 + eps * f.df(s) * s_t;
    if (!(d > 0)) throw std::domain_error("entropy-weighted flow: density map degenerates");
    return Primitive{p.rho / d, p.u, p.s};
  };
}

std::function<double(double)> particle_path(const History& h, double r0) {
  const auto pos = solver::trace(h, {r0});
  auto ts = std::make_shared<std::vector<double>>(), rs = std::make_shared<std::vector<double>>();
  for (std::size_t k = 0; k < h.states.size(); ++k) {
    ts->push_back(h.states[k].t);
    rs->push_back(pos[k][0]);
  }
  if (ts->size() < 4) throw std::invalid_argument("history needs at least four snapshots");
  return [ts, rs](double t) {
    const int m = static_cast<int>(ts->size());
    if (t < ts->front() - 1e-12 || t > ts->back() + 1e-12) throw std::out_of_range("time outside the history");
    const int idx = static_cast<int>(std::upper_bound(ts->begin(), ts->end(), t) - ts->begin()) - 1;
    const int k0 = std::clamp(idx - 1, 0, m - 4);
    double w[4];
    lagrange4(ts->data() + k0, t, w);
    double out = 0;
    for (int k = 0; k < 4; ++k) out += w[k] * (*rs)[k0 + k];
    return out;
  };
}

// ---- residuals -------------------------------------------------------------------------

double ResidualNorms::total() const { return std::sqrt(u * u + rho * rho + s * s); }

ResidualNorms pde_residuals(const Sampler& state, const solver::NumericEos& eos, double n, const Window& w, double h) {
  if (!(h > 0) || w.nt < 1 || w.nr < 1) throw std::invalid_argument("residual window: bad step or lattice");
  auto d4 = [h](double fm2, double fm1, double fp1, double fp2) { return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h); };
  double su = 0, srho = 0, ss = 0;
  int count = 0;
  for (int i = 0; i < w.nt; ++i) {
    const double t = w.nt == 1 ? w.t_a : w.t_a + (w.t_b - w.t_a) * i / (w.nt - 1);
    for (int j = 0; j < w.nr; ++j) {
      const double r = w.nr == 1 ? w.r_a : w.r_a + (w.r_b - w.r_a) * j / (w.nr - 1);
      const Primitive c = state(t, r);
      Primitive pt[4], pr[4];
      const int off[4] = {-2, -1, 1, 2};
      for (int k = 0; k < 4; ++k) {
        pt[k] = state(t + off[k] * h, r);
        pr[k] = state(t, r + off[k] * h);
      }
      auto dt = [&](double Primitive::*m) { return d4(pt[0].*m, pt[1].*m, pt[2].*m, pt[3].*m); };
      auto dr = [&](double Primitive::*m) { return d4(pr[0].*m, pr[1].*m, pr[2].*m, pr[3].*m); };
      double pp[4], flux[4];
      for (int k = 0; k < 4; ++k) {
        pp[k] = eos.p(pr[k].rho, pr[k].s);
        flux[k] = pr[k].rho * pr[k].u;
      }
      const double ru = dt(&Primitive::u) + c.u * dr(&Primitive::u) + d4(pp[0], pp[1], pp[2], pp[3]) / c.rho;
      const double rrho = dt(&Primitive::rho) + d4(flux[0], flux[1], flux[2], flux[3]) + (n - 1) * c.rho * c.u / r;
      const double rs = dt(&Primitive::s) + c.u * dr(&Primitive::s);
      su += ru * ru;
      srho += rrho * rrho;
      ss += rs * rs;
      ++count;
    }
  }
  return {std::sqrt(su / count), std::sqrt(srho / count), std::sqrt(ss / count)};
}

ResidualReport residual_ratio(const std::string& label, double eps, const Sampler& base, const Sampler& transformed,
                              const solver::NumericEos& eos, double n, const Window& w, double h) {
  ResidualReport rep;
  rep.group = label;
  rep.eps = eps;
  rep.baseline = pde_residuals(base, eos, n, w, h);
  rep.transformed = pde_residuals(transformed, eos, n, w, h);
  rep.ratio = rep.transformed.total() / rep.baseline.total();
  return rep;
}

ResidualReport symmetry_residual_check(const History& h, Group g, double eps, const GroupContext& ctx, const Window& w,
                                       double step) {
  const Sampler base = history_sampler(h);
  return residual_ratio(group_name(g), eps, base, apply_group(g, eps, base, ctx), h.eos, h.grid.n, w,
                        step > 0 ? step : h.grid.dr());
}

} // namespace radflow::groups
