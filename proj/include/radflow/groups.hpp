#pragma once

// One-parameter transformation groups acting on (discrete) solutions.
//
// A state is a Sampler: (t, r) -> (rho, U, S). The point groups act by
// push-forward, so the transformed state at (T, R) is built from the original
// at the preimage point. Time translation therefore gives U*(t, r) = U(t - eps, r).
// The first-order (non-point) flows of the enthalpy-flux and entropy-weighted
// energy symmetries are evaluated pointwise by root finding.

#include <functional>
#include <string>
#include <vector>

#include "radflow/solver.hpp"

namespace radflow::groups {

using solver::Primitive;
using Sampler = std::function<Primitive(double t, double r)>;

Sampler history_sampler(const solver::History& h);

/// A fixed-time slice on a radial grid; resampling uses monotone cubic (pchip)
/// interpolation, so values are exact at nodes and O(dr^3) in between.
struct Slice {
  double t = 0;
  std::vector<double> r, rho, u, s;
};
Slice sample(const Sampler& state, double t, const std::vector<double>& r);
/// Time-independent sampler interpolating the slice; throws outside [r.front(), r.back()].
Sampler slice_sampler(const Slice& s);

/// F(S) with H' = 1/F and the inverse of H.
struct EntropyFunction {
  std::string label;
  std::function<double(double)> f, df, h, h_inv;
  static EntropyFunction constant(double c); // H = S / c
  static EntropyFunction identity();          // F = S, H = ln S
};

enum class Group { X1, X2, X_ii, X_iii, X_iv, X_v, X_vi, X_vii, X_viii, X_ix, X_vvi };

std::string group_name(Group g);
/// Accepts the generator names above plus "time-translation", "dilation" and
/// "conformal"; throws std::invalid_argument otherwise.
Group parse_group(const std::string& name);
std::vector<Group> all_groups();

struct GroupContext {
  double n = 3;
  double q = 2.0 / 3.0; // exponent in X_ii and X_iv
  solver::Kappa kappa = solver::Kappa::exponential();
  EntropyFunction F = EntropyFunction::identity();
};

/// Closed-form group maps:
///   X1     t -> t + eps
///   X2     (t, r) -> e^eps (t, r)
///   X_ii   r, U -> e^(q eps) (r, U), rho -> e^(2 eps) rho, kappa(S) -> e^(-2 eps) kappa(S)
///   X_iii  r, U -> e^eps (r, U), kappa(S) -> e^(2 eps) kappa(S)
///   X_iv   r, U -> e^(q eps) (r, U), rho -> e^(2 eps) rho
///   X_v    (t, r) -> (t, r)/(1 - eps t), U -> (1 - eps t) U + eps r, rho -> (1 - eps t)^n rho
///   X_vi   kappa(S) -> kappa(S) + eps
///   X_vii  r, U -> e^eps (r, U), rho -> e^(-2 eps) rho
///   X_viii as X_vii with kappa(S) -> e^(2 eps) kappa(S)
///   X_ix   H(S) -> H(S) + eps
///   X_vvi  H(S) -> H(S) + eps, rho -> rho kappa'(S*) F(S*) / (kappa'(S) F(S))
/// Evaluation throws std::domain_error when 1 + eps T <= 0 (X_v) or when
/// kappa or H cannot be inverted at the shifted value.
Sampler apply_group(Group g, double eps, Sampler state, const GroupContext& ctx);

// ---- first-order flows -----------------------------------------------------------

/// Enthalpy-flux flow: U, rho unchanged, S*(t, r) = S(t, M^-1(t, M(t, r) - eps)),
/// M(t, r) = int_{r_ref(t)}^r rho r'^(n-1) dr'. Exact M is the enclosed mass; a
/// material reference point r_ref(t) changes it by a constant only. Throws
/// std::domain_error if rho <= 0 is met and std::out_of_range if the preimage
/// leaves [r_ref(t), r_max].
Sampler enthalpy_flow(Sampler state, double eps, double n, std::function<double(double)> r_ref, double r_max);

/// Entropy-weighted flow: S* = S(sigma, r), sigma = t - eps f(S*),
/// U* = U(sigma, r), rho* = rho(sigma, r) / (1 + eps f'(S*) S_t(sigma, r)).
/// S* is found by bracketed root finding on [s_lo, s_hi] to 1e-12; throws
/// std::runtime_error when the bracket does not contain a root.
struct WeightFunction {
  std::string label;
  std::function<double(double)> f, df;
};
Sampler entropy_weighted_flow(Sampler state, double eps, WeightFunction f, double s_lo, double s_hi);

/// Particle path through r0 at the first snapshot, interpolated between snapshots.
std::function<double(double)> particle_path(const solver::History& h, double r0);

// ---- discrete residuals --------------------------------------------------------------

struct Window {
  double t_a, t_b, r_a, r_b;
  int nt = 12, nr = 40;
};

/// RMS over the window of the radial Euler residuals
///   U_t + U U_r + p_r / rho, rho_t + (rho U)_r + (n-1) rho U / r, S_t + U S_r
/// with fourth-order central differences of step h.
struct ResidualNorms {
  double u = 0, rho = 0, s = 0;
  double total() const;
};
ResidualNorms pde_residuals(const Sampler& state, const solver::NumericEos& eos, double n, const Window& w, double h);

struct ResidualReport {
  std::string group;
  double eps = 0;
  ResidualNorms baseline, transformed;
  double ratio = 0; // transformed.total() / baseline.total()
};
ResidualReport residual_ratio(const std::string& label, double eps, const Sampler& base, const Sampler& transformed,
                              const solver::NumericEos& eos, double n, const Window& w, double h);
/// Applies g to the history and compares residual norms on the window; h
/// defaults to the grid spacing.
ResidualReport symmetry_residual_check(const solver::History& h, Group g, double eps, const GroupContext& ctx,
                                       const Window& w, double step = 0);

} // namespace radflow::groups
