#pragma once

// Floating-point evaluation of expressions at random jet-space points. Used
// only as an independent cross-check of symbolic verdicts.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "radflow/expr.hpp"

namespace radflow::expr {

/// Value of an opaque function (or one of its partials) at numeric arguments.
using FuncModel = std::function<double(const std::vector<double>& args, const std::vector<int>& deriv)>;

/// Default model for an opaque symbol: sum_m c_m exp(w_m . x), with c and w
/// drawn from a generator seeded by the function name.
FuncModel default_model(const std::string& name, std::size_t arity);

class NumericEnv {
public:
  double t = 0.5, r = 1.0;
  std::map<std::string, double> params;
  // Each field is a degree-4 polynomial in (t, r-1); coef[i][j] multiplies t^i (r-1)^j.
  std::map<Field, std::array<std::array<double, 5>, 5>> fields;
  std::map<std::string, FuncModel> models;
  std::uint64_t salt = 0; // varies values of parameters not listed in `params`

  double eval(const Expr& e);
  double eval_atom(AtomId id);
  /// Sum of absolute term values, a scale for relative residuals.
  double magnitude(const Expr& e);

  double field_value(Field f, int ti, int rj) const;
  /// Atom values are cached per environment; call after changing t, r,
  /// params or fields.
  void clear_cache() { cache_.clear(); }

  /// Random point: t in [0,1], r in [0.5,2], parameters in [1.5,3.5] unless
  /// fixed, fields with constant term in [1.5,2.5] and other coefficients in
  /// [-0.1,0.1].
  static NumericEnv random(std::mt19937_64& gen, const std::map<std::string, double>& fixed_params = {});

private:
  double exponent_value(const Exponent& e);
  std::unordered_map<AtomId, double> cache_;
};

struct NumericCheck {
  double max_relative = 0.0;
  int samples = 0;
  bool passed(double tol = 1e-8) const { return samples > 0 && max_relative <= tol; }
};

/// Evaluate e at `samples` random points (fixed seed) and report the largest
/// |value| / (sum of |terms| + 1e-300). Points producing non-finite values
/// are redrawn.
NumericCheck numeric_zero_check(const Expr& e, int samples = 20, std::uint64_t seed = 20240611,
                                const std::map<std::string, double>& fixed_params = {},
                                const std::map<std::string, FuncModel>& models = {});

} // namespace radflow::expr
