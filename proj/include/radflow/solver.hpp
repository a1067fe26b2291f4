#pragma once

// Finite-volume method of lines for the radial Euler system on [r_min, r_max],
// r_min > 0. Conserved variables are cell averages (weight r^(n-1)) of
// rho, rho U and rho S; MUSCL reconstruction of (rho, U, S) with the MC
// limiter, Rusanov flux, SSP-RK2 in time. The pressure source
// (n-1) r^(n-2) p is integrated as p_i (A_(i+1/2) - A_(i-1/2)) with face areas
// A = r^(n-1), so constant states are preserved exactly.

#include <functional>
#include <string>
#include <vector>

namespace radflow::solver {

struct Grid {
  double r_min = 0.5, r_max = 2.5;
  int N = 128;
  double n = 3;

  void validate() const;
  double dr() const { return (r_max - r_min) / N; }
  double center(int i) const { return r_min + (i + 0.5) * dr(); }
  double edge(int i) const { return r_min + i * dr(); } // i = 0..N
  double area(int i) const;                             // r^(n-1) at edge i
  double volume(int i) const;                           // int r^(n-1) dr over cell i
};

/// kappa(S) with its derivative and inverse.
struct Kappa {
  std::string label;
  std::function<double(double)> f, df, inv;
  static Kappa exponential(double k = 1); // k e^S
  static Kappa linear(double a, double b); // a + b S
};

/// Numeric EOS p(rho, S) with internal energy e and sound speed a^2 = p_rho.
struct NumericEos {
  enum class Kind { Polytropic, Entropic, Barotropic, TwoTerm };
  Kind kind = Kind::Polytropic;
  std::string label;
  double q = 2.0 / 3.0; // polytropic / barotropic exponent
  double c2 = 0, q2 = 1; // TwoTerm: p = kappa rho^(1+q) + c2 rho^(1+q2)
  Kappa kappa = Kappa::exponential();

  double p(double rho, double s) const;
  double a2(double rho, double s) const;
  double e(double rho, double s) const;

  static NumericEos polytropic(double q, Kappa k = Kappa::exponential());
  static NumericEos entropic(Kappa k = Kappa::linear(0, 1));
  /// p = k rho^(1+q)
  static NumericEos barotropic(double q, double k = 1);
  /// kappa rho^(1+q) + c2 rho^(1+q2): not polytropic when c2 != 0 and q2 != q.
  static NumericEos two_term(double q, double c2, double q2, Kappa k = Kappa::exponential());
};

struct Primitive {
  double rho, u, s;
};
using InitialData = std::function<Primitive(double r)>;

struct State {
  double t = 0;
  std::vector<double> rho, mom, ent; // cell averages of rho, rho U, rho S
  Primitive primitive(int i) const { return {rho[i], mom[i] / rho[i], ent[i] / rho[i]}; }
};

struct SolverConfig {
  double cfl = 0.4;
  double rho_floor = 1e-10;
};

struct StepInfo {
  double boundary_mass_flux = 0; // time-integrated net outflow A F at r_max minus r_min
};

class Solver {
public:
  Solver(Grid g, NumericEos eos, SolverConfig cfg = {});
  const Grid& grid() const { return grid_; }
  const NumericEos& eos() const { return eos_; }
  const SolverConfig& config() const { return cfg_; }

  State initial(const InitialData& init) const;
  double max_speed(const State& s) const;
  double stable_dt(const State& s) const;
  /// One SSP-RK2 step; throws std::runtime_error on vacuum, std::invalid_argument
  /// when dt exceeds the CFL bound by more than 1e-12 relative.
  State step(const State& s, double dt, StepInfo* info = nullptr) const;
  double total_mass(const State& s) const;

private:
  // d/dt of the cell averages; returns net boundary mass flux A F(r_max) - A F(r_min)
  double rhs(const State& s, std::vector<double>& drho, std::vector<double>& dmom, std::vector<double>& dent) const;
  Grid grid_;
  NumericEos eos_;
  SolverConfig cfg_;
};

/// Snapshots at every step (including t = 0).
struct History {
  Grid grid;
  NumericEos eos;
  std::vector<State> states;
  double max_mass_defect = 0; // max per-step |dM + boundary flux| / M

  double t_begin() const { return states.front().t; }
  double t_end() const { return states.back().t; }
  /// Field values and r-derivatives at (t, r): cubic Lagrange in r on cell
  /// centres per snapshot, cubic Lagrange across the four nearest snapshots.
  Primitive at(double t, double r) const;
  Primitive dr_at(double t, double r) const;
};

History simulate(const Solver& solver, const InitialData& init, double t_end, int max_steps = 1000000);

// ---- transported domains and balances ------------------------------------------

/// Positions of fluid particles dr/dt = U, integrated alongside the history
/// with Heun's method on the stored snapshots.
std::vector<std::vector<double>> trace(const History& h, const std::vector<double>& r0);

struct Balance {
  std::string integral;
  double initial = 0, final = 0, flux = 0; // flux = int_0^T boundary term dt
  double imbalance = 0;                    // |final - initial + flux| / scale
  double scale = 0;
};

/// Kinematic integrals applicable to the EOS: mass, entropy (f = S^2), energy
/// and, by class, dilational and similarity energy (polytropic with q = 2/n),
/// enthalpy flux (barotropic) and entropy-weighted energy (entropic, f = 1 + S^2).
std::vector<Balance> conserved_report(const History& h, double r_a, double r_b);

struct Drift {
  std::string scalar;
  double max_relative = 0;
};
/// Max over characteristics and snapshots of |J(t) - J(0)| / max(|J(0)|, 1e-12)
/// for J_0, J_1 and, for an entropic EOS, J_{1,1}, J_{2,1}.
std::vector<Drift> advected_drift(const History& h, const std::vector<double>& r0);

/// Drift of J_{b,l} (b = 1, 2; l >= 1) along one characteristic of an entropic
/// flow. Level 1 uses the interpolated fields and r-derivatives; each further
/// level applies R = (r^(1-n)/rho) d_r by fourth-order central differences of
/// step dr, which costs one order of accuracy per level.
struct CharacteristicDrift {
  double r0 = 0;
  double initial = 0, final = 0;
  double max_abs = 0, max_relative = 0;
};
std::vector<CharacteristicDrift> hierarchy_drift(const History& h, int branch, int l, const std::vector<double>& r0);

// ---- utilities ------------------------------------------------------------------

/// Observed order log2(e_coarse / e_fine) for successive entries.
std::vector<double> observed_orders(const std::vector<double>& errors);

} // namespace radflow::solver
