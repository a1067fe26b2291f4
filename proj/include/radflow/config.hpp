#pragma once

// Key-value configuration files for the command-line tool and numeric
// callables built from parsed expressions.
//
// Files are INI text: `key = value` lines, optional [section] headers, '#'
// or ';' comments. Keys are addressed as "section.key".

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "radflow/expr.hpp"
#include "radflow/model.hpp"
#include "radflow/solver.hpp"

namespace radflow::config {

using expr::Expr;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class KeyValues {
public:
  static KeyValues load(const std::string& path);
  static KeyValues from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> list(const std::string& key) const; // comma separated
  /// Every "section.key" present, in file order.
  std::vector<std::string> keys() const;

private:
  boost::property_tree::ptree tree_;
  std::string origin_;
};

/// Parses an expression; sin, cos and tanh are available in addition to exp,
/// ln and sqrt. Errors are rethrown as ConfigError naming `what`.
Expr parse_expression(const std::string& text, const std::string& what,
                      const std::unordered_map<std::string, Expr>& symbols = {});

/// x -> e with the parameter `var` bound to x and all other parameters taken
/// from `params`; pi is always bound. Throws ConfigError when e depends on anything else.
std::function<double(double)> scalar_function(const Expr& e, const std::string& var,
                                              const std::unordered_map<std::string, double>& params = {});

/// kappa(S) from text in S. k exp(S) and a + b S map to the closed forms;
/// otherwise the derivative is symbolic and the inverse a toms748 solve on a
/// bracket widened from [-1, 1] up to [-1024, 1024] (std::domain_error when
/// no sign change is found).
solver::Kappa kappa_from_text(const std::string& text);

/// [eos] kind = polytropic | entropic | barotropic | two-term, with q, k,
/// kappa, c2, q2 as they apply.
solver::NumericEos numeric_eos(const KeyValues& kv);

struct Simulation {
  solver::Grid grid;
  solver::NumericEos eos;
  solver::SolverConfig solver;
  solver::InitialData init;
  std::string init_text; // rho, U, S as given
  double t_end = 0.3;
  std::vector<double> tracers;
  double window_a = 0, window_b = 0; // transported-domain endpoints at t = 0
  std::string output_dir;
  int snapshots = 4; // evenly spaced in time, including t = 0 and t_end
  std::uint64_t seed = 20240611;
  double mass_tol = 1e-12;
};

/// [grid] r_min r_max N n; [eos] ...; [init] rho U S (expressions in r);
/// [run] t_end cfl tracers window_a window_b output snapshots seed mass_tol.
Simulation load_simulation(const KeyValues& kv);

/// Symbolic EOS for the verification commands: either `p` (an explicit
/// pressure in rho, S) or `kind` naming a family with opaque functions.
/// kappa and F are expressions in S used to instantiate catalog generators;
/// n, q, k are optional parameter values.
struct SymbolicEos {
  model::Eos eos;
  Expr kappa, F, n;
  std::unordered_map<std::string, Expr> values; // q, k when given
  std::string source;
};
SymbolicEos load_symbolic_eos(const KeyValues& kv);

} // namespace radflow::config
