#include "radflow/solver.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

#include "radflow/advected.hpp"

namespace radflow::solver {

// ---- grid and EOS ------------------------------------------------------------------

void Grid::validate() const {
  if (!(r_min > 0)) throw std::invalid_argument("grid: r_min must be > 0");
  if (!(r_max > r_min)) throw std::invalid_argument("grid: r_max must exceed r_min");
  if (N < 16) throw std::invalid_argument("grid: N must be >= 16");
  if (!(n > 1)) throw std::invalid_argument("grid: dimension n must be > 1");
}

double Grid::area(int i) const { return std::pow(edge(i), n - 1); }

double Grid::volume(int i) const { return (std::pow(edge(i + 1), n) - std::pow(edge(i), n)) / n; }

Kappa Kappa::exponential(double k) {
  return {"k exp(S)", [k](double s) { return k * std::exp(s); }, [k](double s) { return k * std::exp(s); },
          [k](double v) {
            if (!(v > 0)) throw std::domain_error("kappa inverse: argument outside the range of k exp(S)");
            return std::log(v / k);
          }};
}

Kappa Kappa::linear(double a, double b) {
  if (b == 0) throw std::invalid_argument("kappa: linear coefficient must be non-zero");
  return {"a + b S", [a, b](double s) { return a + b * s; }, [b](double) { return b; },
          [a, b](double v) { return (v - a) / b; }};
}

double NumericEos::p(double rho, double s) const {
  switch (kind) {
  case Kind::Polytropic: return kappa.f(s) * std::pow(rho, 1 + q);
  case Kind::Entropic: return kappa.f(s);
  case Kind::Barotropic: return kappa.f(0) * std::pow(rho, 1 + q);
  case Kind::TwoTerm: return kappa.f(s) * std::pow(rho, 1 + q) + c2 * std::pow(rho, 1 + q2);
  }
  return 0;
}

double NumericEos::a2(double rho, double s) const {
  switch (kind) {
  case Kind::Polytropic: return (1 + q) * kappa.f(s) * std::pow(rho, q);
  case Kind::Entropic: return 0;
  case Kind::Barotropic: return (1 + q) * kappa.f(0) * std::pow(rho, q);
  case Kind::TwoTerm: return (1 + q) * kappa.f(s) * std::pow(rho, q) + (1 + q2) * c2 * std::pow(rho, q2);
  }
  return 0;
}

double NumericEos::e(double rho, double s) const {
  switch (kind) {
  case Kind::Polytropic: return kappa.f(s) * std::pow(rho, q) / q;
  case Kind::Entropic: return -kappa.f(s) / rho;
  case Kind::Barotropic: return kappa.f(0) * std::pow(rho, q) / q;
  case Kind::TwoTerm: return kappa.f(s) * std::pow(rho, q) / q + c2 * std::pow(rho, q2) / q2;
  }
  return 0;
}

NumericEos NumericEos::polytropic(double q, Kappa k) {
  if (!(q > 0)) throw std::invalid_argument("polytropic EOS needs q > 0");
  NumericEos e;
  e.kind = Kind::Polytropic;
  e.q = q;
  e.kappa = std::move(k);
  e.label = "polytropic";
  return e;
}

NumericEos NumericEos::entropic(Kappa k) {
  NumericEos e;
  e.kind = Kind::Entropic;
  e.kappa = std::move(k);
  e.label = "entropic";
  return e;
}

NumericEos NumericEos::barotropic(double q, double k) {
  if (!(q > 0)) throw std::invalid_argument("barotropic EOS needs q > 0");
  NumericEos e;
  e.kind = Kind::Barotropic;
  e.q = q;
  e.kappa = Kappa::linear(k, 1); // kappa(0) = k
  e.label = "barotropic";
  return e;
}

NumericEos NumericEos::two_term(double q, double c2, double q2, Kappa k) {
  if (!(q > 0) || !(q2 > 0)) throw std::invalid_argument("two-term EOS needs positive exponents");
  NumericEos e;
  e.kind = Kind::TwoTerm;
  e.q = q;
  e.c2 = c2;
  e.q2 = q2;
  e.kappa = std::move(k);
  e.label = "two-term";
  return e;
}

// ---- scheme ------------------------------------------------------------------------

namespace {

double minmod3(double a, double b, double c) {
  if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
  if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
  return 0;
}

// monotonized central slope
double mc_slope(double um, double u0, double up) {
  const double a = u0 - um, b = up - u0;
  return minmod3(0.5 * (a + b), 2 * a, 2 * b);
}

} // namespace

Solver::Solver(Grid g, NumericEos eos, SolverConfig cfg) : grid_(g), eos_(std::move(eos)), cfg_(cfg) {
  grid_.validate();
  if (!(cfg_.cfl > 0 && cfg_.cfl <= 1)) throw std::invalid_argument("CFL must be in (0, 1]");
}

State Solver::initial(const InitialData& init) const {
  State s;
  const int N = grid_.N;
  s.rho.resize(N);
  s.mom.resize(N);
  s.ent.resize(N);
  // cell averages with weight r^(n-1) by 3-point Gauss-Legendre per cell
  for (int i = 0; i < N; ++i) {
    double m = 0, mu = 0, ms = 0;
    auto f = [&](double r) {
      const Primitive p = init(r);
      const double w = std::pow(r, grid_.n - 1);
      return std::array<double, 3>{w * p.rho, w * p.rho * p.u, w * p.rho * p.s};
    };
    const double a = grid_.edge(i), b = grid_.edge(i + 1);
    static const double x[3] = {-std::sqrt(0.6), 0, std::sqrt(0.6)}, wq[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
    for (int k = 0; k < 3; ++k) {
      const auto v = f(0.5 * (a + b) + 0.5 * (b - a) * x[k]);
      m += wq[k] * v[0] * 0.5 * (b - a);
      mu += wq[k] * v[1] * 0.5 * (b - a);
      ms += wq[k] * v[2] * 0.5 * (b - a);
    }
    const double V = grid_.volume(i);
    s.rho[i] = m / V;
    s.mom[i] = mu / V;
    s.ent[i] = ms / V;
    if (!(s.rho[i] > cfg_.rho_floor)) throw std::invalid_argument("initial density must be positive");
  }
  return s;
}

double Solver::max_speed(const State& s) const {
  double c = 0;
  for (int i = 0; i < grid_.N; ++i) {
    const Primitive p = s.primitive(i);
    c = std::max(c, std::abs(p.u) + std::sqrt(std::max(0.0, eos_.a2(p.rho, p.s))));
  }
  return c;
}

double Solver::stable_dt(const State& s) const {
  const double c = max_speed(s);
  return c > 0 ? cfg_.cfl * grid_.dr() / c : cfg_.cfl * grid_.dr();
}

double Solver::rhs(const State& s, std::vector<double>& drho, std::vector<double>& dmom,
                   std::vector<double>& dent) const {
  const int N = grid_.N, G = 2;
  std::vector<Primitive> w(N + 2 * G);
  for (int i = 0; i < N; ++i) {
    if (!(s.rho[i] > cfg_.rho_floor)) throw std::runtime_error("vacuum: density below floor");
    w[i + G] = s.primitive(i);
  }
  // zero-gradient ghosts: extrapolation at r_min, outflow at r_max
  for (int g = 0; g < G; ++g) {
    w[g] = w[G];
    w[N + G + g] = w[N + G - 1];
  }
  std::vector<Primitive> slope(N + 2 * G, {0, 0, 0});
  for (int i = 1; i < N + 2 * G - 1; ++i)
    slope[i] = {mc_slope(w[i - 1].rho, w[i].rho, w[i + 1].rho), mc_slope(w[i - 1].u, w[i].u, w[i + 1].u),
                mc_slope(w[i - 1].s, w[i].s, w[i + 1].s)};

  // flux through edge e (between cells e-1 and e), times the edge area
  std::vector<std::array<double, 3>> flux(N + 1);
  for (int e = 0; e <= N; ++e) {
    const int l = e - 1 + G, r = e + G;
    const Primitive L{w[l].rho + 0.5 * slope[l].rho, w[l].u + 0.5 * slope[l].u, w[l].s + 0.5 * slope[l].s};
    const Primitive R{w[r].rho - 0.5 * slope[r].rho, w[r].u - 0.5 * slope[r].u, w[r].s - 0.5 * slope[r].s};
    const double pL = eos_.p(L.rho, L.s), pR = eos_.p(R.rho, R.s);
    const double cL = std::abs(L.u) + std::sqrt(std::max(0.0, eos_.a2(L.rho, L.s)));
    const double cR = std::abs(R.u) + std::sqrt(std::max(0.0, eos_.a2(R.rho, R.s)));
    const double c = std::max(cL, cR);
    const std::array<double, 3> qL{L.rho, L.rho * L.u, L.rho * L.s}, qR{R.rho, R.rho * R.u, R.rho * R.s};
    const std::array<double, 3> fL{L.rho * L.u, L.rho * L.u * L.u + pL, L.rho * L.s * L.u};
    const std::array<double, 3> fR{R.rho * R.u, R.rho * R.u * R.u + pR, R.rho * R.s * R.u};
    const double A = grid_.area(e);
    for (int k = 0; k < 3; ++k) flux[e][k] = A * (0.5 * (fL[k] + fR[k]) - 0.5 * c * (qR[k] - qL[k]));
  }
  drho.resize(N);
  dmom.resize(N);
  dent.resize(N);
  for (int i = 0; i < N; ++i) {
    const double V = grid_.volume(i);
    const Primitive& p = w[i + G];
    drho[i] = -(flux[i + 1][0] - flux[i][0]) / V;
    dmom[i] = (-(flux[i + 1][1] - flux[i][1]) + eos_.p(p.rho, p.s) * (grid_.area(i + 1) - grid_.area(i))) / V;
    dent[i] = -(flux[i + 1][2] - flux[i][2]) / V;
  }
  return flux[N][0] - flux[0][0];
}

State Solver::step(const State& s, double dt, StepInfo* info) const {
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  if (dt > stable_dt(s) * (1 + 1e-12)) throw std::invalid_argument("time step violates the CFL bound");
  const int N = grid_.N;
  std::vector<double> a, b, c;
  const double b0 = rhs(s, a, b, c);
  State s1 = s;
  for (int i = 0; i < N; ++i) {
    s1.rho[i] += dt * a[i];
    s1.mom[i] += dt * b[i];
    s1.ent[i] += dt * c[i];
  }
  const double b1 = rhs(s1, a, b, c);
  State out = s;
  for (int i = 0; i < N; ++i) {
    out.rho[i] = 0.5 * s.rho[i] + 0.5 * (s1.rho[i] + dt * a[i]);
    out.mom[i] = 0.5 * s.mom[i] + 0.5 * (s1.mom[i] + dt * b[i]);
    out.ent[i] = 0.5 * s.ent[i] + 0.5 * (s1.ent[i] + dt * c[i]);
  }
  out.t = s.t + dt;
  if (info) info->boundary_mass_flux = 0.5 * dt * (b0 + b1);
  return out;
}

double Solver::total_mass(const State& s) const {
  double m = 0;
  for (int i = 0; i < grid_.N; ++i) m += grid_.volume(i) * s.rho[i];
  return m;
}

// ---- history and interpolation ----------------------------------------------------------

namespace {

// cubic Lagrange weights (and derivative weights) for nodes x[0..3] at x
void lagrange4(const double* x, double t, double* w, double* dw) {
  for (int j = 0; j < 4; ++j) {
    double num = 1, den = 1, dnum = 0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      den *= x[j] - x[k];
      // derivative of prod (t - x_k)
      double prod = 1;
      for (int m = 0; m < 4; ++m)
        if (m != j && m != k) prod *= t - x[m];
      dnum += prod;
      num *= t - x[k];
    }
    w[j] = num / den;
    if (dw) dw[j] = dnum / den;
  }
}

int stencil_start(int idx, int count) { return std::clamp(idx - 1, 0, std::max(0, count - 4)); }

struct SpatialSample {
  Primitive v, d;
};

SpatialSample sample_snapshot(const Grid& g, const State& s, double r) {
  const double x = (r - g.r_min) / g.dr() - 0.5;
  const int i0 = stencil_start(static_cast<int>(std::floor(x)), g.N);
  double xs[4], w[4], dw[4];
  for (int k = 0; k < 4; ++k) xs[k] = g.center(i0 + k);
  lagrange4(xs, r, w, dw);
  SpatialSample out{{0, 0, 0}, {0, 0, 0}};
  for (int k = 0; k < 4; ++k) {
    const Primitive p = s.primitive(i0 + k);
    out.v.rho += w[k] * p.rho;
    out.v.u += w[k] * p.u;
    out.v.s += w[k] * p.s;
    out.d.rho += dw[k] * p.rho;
    out.d.u += dw[k] * p.u;
    out.d.s += dw[k] * p.s;
  }
  return out;
}

SpatialSample sample_history(const History& h, double t, double r) {
  const auto& st = h.states;
  if (st.size() < 4) throw std::invalid_argument("history needs at least four snapshots");
  if (t < h.t_begin() - 1e-12 || t > h.t_end() + 1e-12) throw std::out_of_range("time outside the history");
  if (r < h.grid.r_min || r > h.grid.r_max) throw std::out_of_range("radius outside the grid");
  const auto it = std::upper_bound(st.begin(), st.end(), t, [](double v, const State& s) { return v < s.t; });
  const int idx = static_cast<int>(it - st.begin()) - 1;
  const int k0 = stencil_start(idx, static_cast<int>(st.size()));
  double ts[4], w[4];
  for (int k = 0; k < 4; ++k) ts[k] = st[k0 + k].t;
  lagrange4(ts, t, w, nullptr);
  SpatialSample out{{0, 0, 0}, {0, 0, 0}};
  for (int k = 0; k < 4; ++k) {
    const SpatialSample s = sample_snapshot(h.grid, st[k0 + k], r);
    out.v.rho += w[k] * s.v.rho;
    out.v.u += w[k] * s.v.u;
    out.v.s += w[k] * s.v.s;
    out.d.rho += w[k] * s.d.rho;
    out.d.u += w[k] * s.d.u;
    out.d.s += w[k] * s.d.s;
  }
  return out;
}

} // namespace

Primitive History::at(double t, double r) const { return sample_history(*this, t, r).v; }
Primitive History::dr_at(double t, double r) const { return sample_history(*this, t, r).d; }

History simulate(const Solver& solver, const InitialData& init, double t_end, int max_steps) {
  History h{solver.grid(), solver.eos(), {}, 0};
  State s = solver.initial(init);
  h.states.push_back(s);
  for (int k = 0; k < max_steps && s.t < t_end - 1e-14; ++k) {
    double dt = std::min(solver.stable_dt(s), t_end - s.t);
    StepInfo info;
    const double m0 = solver.total_mass(s);
    State next = solver.step(s, dt, &info);
    const double m1 = solver.total_mass(next);
    h.max_mass_defect = std::max(h.max_mass_defect, std::abs(m1 - m0 + info.boundary_mass_flux) / m0);
    s = std::move(next);
    h.states.push_back(s);
  }
  if (s.t < t_end - 1e-14) throw std::runtime_error("simulate: step limit reached before the horizon");
  return h;
}

// ---- tracing and balances --------------------------------------------------------------

std::vector<std::vector<double>> trace(const History& h, const std::vector<double>& r0) {
  std::vector<std::vector<double>> pos{r0};
  for (std::size_t k = 0; k + 1 < h.states.size(); ++k) {
    const double dt = h.states[k + 1].t - h.states[k].t;
    std::vector<double> next(r0.size());
    for (std::size_t j = 0; j < r0.size(); ++j) {
      const double r = pos.back()[j];
      if (r < h.grid.r_min || r > h.grid.r_max) throw std::out_of_range("characteristic left the grid");
      const double u0 = sample_snapshot(h.grid, h.states[k], r).v.u;
      const double rs = r + dt * u0;
      if (rs < h.grid.r_min || rs > h.grid.r_max) throw std::out_of_range("characteristic left the grid");
      const double u1 = sample_snapshot(h.grid, h.states[k + 1], rs).v.u;
      next[j] = r + 0.5 * dt * (u0 + u1);
    }
    pos.push_back(std::move(next));
  }
  return pos;
}

namespace {

struct IntegralDef {
  std::string name;
  bool weighted = true;
  std::function<double(double t, double r, const Primitive&)> density, flux;
};

double entropy_weight_K(const NumericEos& eos, double s) {
  // K(S) = int_0^S (1 + x^2) kappa'(x) dx
  auto f = [&](double x) { return (1 + x * x) * eos.kappa.df(x); };
  return boost::math::quadrature::gauss<double, 10>::integrate(f, 0.0, s);
}

std::vector<IntegralDef> integrals_for(const NumericEos& eos, double n) {
  using K = NumericEos::Kind;
  std::vector<IntegralDef> out;
  auto E = [&eos](const Primitive& p) { return p.rho * (0.5 * p.u * p.u + eos.e(p.rho, p.s)); };
  auto wn = [n](double r) { return std::pow(r, n - 1); };
  out.push_back({"mass", true, [](double, double, const Primitive& p) { return p.rho; },
                 [](double, double, const Primitive&) { return 0.0; }});
  out.push_back({"entropy", true, [](double, double, const Primitive& p) { return p.rho * p.s * p.s; },
                 [](double, double, const Primitive&) { return 0.0; }});
  out.push_back({"energy", true, [E](double, double, const Primitive& p) { return E(p); },
                 [&eos, wn](double, double r, const Primitive& p) { return wn(r) * eos.p(p.rho, p.s) * p.u; }});
  if (eos.kind == K::Polytropic && std::abs(eos.q - 2 / n) < 1e-12) {
    out.push_back({"dilational energy", true,
                   [E](double t, double r, const Primitive& p) { return t * E(p) - 0.5 * r * p.rho * p.u; },
                   [&eos, wn](double t, double r, const Primitive& p) {
                     return wn(r) * (t * p.u - 0.5 * r) * eos.p(p.rho, p.s);
                   }});
    out.push_back({"similarity energy", true,
                   [E](double t, double r, const Primitive& p) {
                     return t * t * E(p) - t * r * p.rho * p.u + 0.5 * r * r * p.rho;
                   },
                   [&eos, wn](double t, double r, const Primitive& p) {
                     return wn(r) * t * (t * p.u - r) * eos.p(p.rho, p.s);
                   }});
  }
  if (eos.kind == K::Barotropic)
    out.push_back({"enthalpy flux", false, [](double, double, const Primitive& p) { return p.u; },
                   [&eos](double, double, const Primitive& p) {
                     return eos.e(p.rho, p.s) + eos.p(p.rho, p.s) / p.rho - 0.5 * p.u * p.u;
                   }});
  if (eos.kind == K::Entropic)
    out.push_back({"entropy-weighted energy", true,
                   [&eos](double, double, const Primitive& p) {
                     return 0.5 * p.rho * p.u * p.u * (1 + p.s * p.s) - entropy_weight_K(eos, p.s);
                   },
                   [&eos, wn](double, double r, const Primitive& p) {
                     return wn(r) * p.u * entropy_weight_K(eos, p.s);
                   }});
  return out;
}

// int_a^b density (r^(n-1)) dr on snapshot k, piecewise between cell centres
double volume_integral(const History& h, const State& s, const IntegralDef& d, double a, double b) {
  const Grid& g = h.grid;
  std::vector<double> cuts{a};
  for (int i = 0; i < g.N; ++i)
    if (g.center(i) > a && g.center(i) < b) cuts.push_back(g.center(i));
  cuts.push_back(b);
  double total = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto f = [&](double r) {
      const Primitive p = sample_snapshot(g, s, r).v;
      return d.density(s.t, r, p) * (d.weighted ? std::pow(r, g.n - 1) : 1.0);
    };
    total += boost::math::quadrature::gauss<double, 4>::integrate(f, cuts[k], cuts[k + 1]);
  }
  return total;
}

} // namespace

std::vector<Balance> conserved_report(const History& h, double r_a, double r_b) {
  if (!(r_a < r_b)) throw std::invalid_argument("transported domain needs r_a < r_b");
  const auto pos = trace(h, {r_a, r_b});
  std::vector<Balance> out;
  for (const auto& d : integrals_for(h.eos, h.grid.n)) {
    Balance b;
    b.integral = d.name;
    double scale = 0, flux_abs = 0, prev = 0;
    for (std::size_t k = 0; k < h.states.size(); ++k) {
      const State& s = h.states[k];
      const double I = volume_integral(h, s, d, pos[k][0], pos[k][1]);
      if (k == 0) b.initial = I;
      b.final = I;
      scale = std::max(scale, std::abs(I));
      const Primitive pa = sample_snapshot(h.grid, s, pos[k][0]).v, pb = sample_snapshot(h.grid, s, pos[k][1]).v;
      const double net = d.flux(s.t, pos[k][1], pb) - d.flux(s.t, pos[k][0], pa);
      if (k > 0) {
        const double dt = s.t - h.states[k - 1].t;
        b.flux += 0.5 * dt * (prev + net);
        flux_abs += 0.5 * dt * (std::abs(prev) + std::abs(net));
      }
      prev = net;
    }
    b.scale = std::max(scale + flux_abs, 1e-300);
    b.imbalance = std::abs(b.final - b.initial + b.flux) / b.scale;
    out.push_back(b);
  }
  return out;
}

std::vector<Drift> advected_drift(const History& h, const std::vector<double>& r0) {
  const auto pos = trace(h, r0);
  const double n = h.grid.n;
  const bool entropic = h.eos.kind == NumericEos::Kind::Entropic;
  std::vector<std::string> names{"J0", "J1"};
  if (entropic) {
    names.push_back("J11");
    names.push_back("J21");
  }
  std::vector<Drift> out;
  for (const auto& nm : names) out.push_back({nm, 0});
  for (std::size_t j = 0; j < r0.size(); ++j) {
    std::vector<double> first;
    for (std::size_t k = 0; k < h.states.size(); ++k) {
      const double r = pos[k][j], t = h.states[k].t;
      const SpatialSample sm = sample_snapshot(h.grid, h.states[k], r);
      std::vector<double> vals{sm.v.s, std::pow(r, 1 - n) * sm.d.s / sm.v.rho};
      if (entropic) {
        const double w = h.eos.kappa.df(sm.v.s) * sm.d.s / sm.v.rho;
        vals.push_back(sm.v.u * sm.v.u + 2 / n * r * w);
        vals.push_back(advected::eval_A(r, sm.v.u, w, n) - t);
      }
      if (k == 0) first = vals;
      for (std::size_t m = 0; m < vals.size(); ++m)
        out[m].max_relative =
            std::max(out[m].max_relative, std::abs(vals[m] - first[m]) / std::max(std::abs(first[m]), 1e-12));
    }
  }
  return out;
}

namespace {

double hierarchy_value(const History& h, int branch, int l, double t, double r) {
  const double n = h.grid.n;
  if (l == 1) {
    const Primitive v = h.at(t, r), d = h.dr_at(t, r);
    const double w = h.eos.kappa.df(v.s) * d.s / v.rho;
    return branch == 1 ? v.u * v.u + 2 / n * r * w : advected::eval_A(r, v.u, w, n) - t;
  }
  const double dr = h.grid.dr();
  auto f = [&](double x) { return hierarchy_value(h, branch, l - 1, t, x); };
  const double deriv = (f(r - 2 * dr) - 8 * f(r - dr) + 8 * f(r + dr) - f(r + 2 * dr)) / (12 * dr);
  return std::pow(r, 1 - n) / h.at(t, r).rho * deriv;
}

} // namespace

std::vector<CharacteristicDrift> hierarchy_drift(const History& h, int branch, int l, const std::vector<double>& r0) {
  if (h.eos.kind != NumericEos::Kind::Entropic) throw std::invalid_argument("J_{1,l}, J_{2,l} need an entropic EOS");
  if (branch != 1 && branch != 2) throw std::invalid_argument("branch must be 1 or 2");
  if (l < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  const auto pos = trace(h, r0);
  std::vector<CharacteristicDrift> out;
  for (std::size_t j = 0; j < r0.size(); ++j) {
    CharacteristicDrift d;
    d.r0 = r0[j];
    for (std::size_t k = 0; k < h.states.size(); ++k) {
      const double v = hierarchy_value(h, branch, l, h.states[k].t, pos[k][j]);
      if (k == 0) d.initial = v;
      d.final = v;
      d.max_abs = std::max(d.max_abs, std::abs(v - d.initial));
    }
    d.max_relative = d.max_abs / std::max(std::abs(d.initial), 1e-12);
    out.push_back(d);
  }
  return out;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) out.push_back(std::log2(errors[k] / errors[k + 1]));
  return out;
}

} // namespace radflow::solver
