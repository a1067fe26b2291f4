#include "radflow/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "radflow/numeric.hpp"
#include "radflow/parse.hpp"

namespace radflow::config {

using namespace radflow::expr;
namespace pt = boost::property_tree;

namespace {

void register_elementary() {
  static const bool done = [] {
    define_function("sin", {func("cos", {placeholder(0)})});
    define_function("cos", {Expr(-1) * func("sin", {placeholder(0)})});
    define_function("tanh", {Expr(1) - pow(func("tanh", {placeholder(0)}), Rational(2))});
    return true;
  }();
  (void)done;
}

FuncModel elementary(double (*fn)(double)) {
  return [fn](const std::vector<double>& x, const std::vector<int>& d) {
    // derivatives were rewritten symbolically on construction
    if (x.size() != 1 || (!d.empty() && d[0] != 0)) throw ConfigError("unexpected derivative of an elementary function");
    return fn(x[0]);
  };
}

// only the named parameters and sin/cos/tanh may appear
void check_leaves(const Expr& e, const std::unordered_map<std::string, double>& allowed, const std::string& var) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.mono) {
      const Atom& a = atom(f.atom);
      switch (a.kind) {
      case AtomKind::Var: throw ConfigError("unexpected variable " + std::string(a.var == Var::T ? "t" : "r"));
      case AtomKind::Jet: throw ConfigError(std::string("unexpected field ") + field_name(a.field));
      case AtomKind::Param:
        if (a.name != var && !allowed.count(a.name)) throw ConfigError("unbound parameter " + a.name);
        break;
      case AtomKind::Func:
        if (a.name != "sin" && a.name != "cos" && a.name != "tanh") throw ConfigError("unknown function " + a.name);
        [[fallthrough]];
      default:
        for (const auto& arg : a.args) check_leaves(arg, allowed, var);
      }
      if (f.e.sym != 0) check_leaves(f.e.to_expr(), allowed, var);
    }
  }
}

std::string trimmed(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

} // namespace

// ---- KeyValues ------------------------------------------------------------------

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  KeyValues kv = from_string(ss.str());
  kv.origin_ = path;
  return kv;
}

KeyValues KeyValues::from_string(const std::string& text) {
  KeyValues kv;
  // trailing comments as well as whole-line ones
  std::string stripped;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    stripped += line + "\n";
  }
  std::istringstream in(stripped);
  try {
    pt::read_ini(in, kv.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  kv.origin_ = "<string>";
  return kv;
}

bool KeyValues::has(const std::string& key) const {
  return static_cast<bool>(tree_.get_optional<std::string>(key));
}

std::string KeyValues::str(const std::string& key) const {
  auto v = tree_.get_optional<std::string>(key);
  if (!v) throw ConfigError(origin_ + ": missing key " + key);
  return trimmed(*v);
}

std::string KeyValues::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double KeyValues::num(const std::string& key) const {
  // numbers may be written as rational expressions such as 2/3
  const Expr e = parse_expression(str(key), key);
  const auto c = e.constant_value();
  if (c) return c->to_double();
  try {
    return scalar_function(e, "#unused")(0);
  } catch (const ConfigError&) {
    throw ConfigError(origin_ + ": " + key + " is not a number");
  }
}

double KeyValues::num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

int KeyValues::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(origin_ + ": " + key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<double> KeyValues::list(const std::string& key) const {
  std::vector<std::string> parts;
  const std::string s = str(key);
  boost::algorithm::split(parts, s, boost::is_any_of(","));
  std::vector<double> out;
  for (const auto& p : parts) {
    const std::string t = trimmed(p);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": " + key + ": not a number: " + t);
    }
  }
  return out;
}

std::vector<std::string> KeyValues::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : tree_) {
    if (v.empty()) out.push_back(k);
    for (const auto& [k2, v2] : v) out.push_back(k + "." + k2);
  }
  return out;
}

// ---- expressions ------------------------------------------------------------------

Expr parse_expression(const std::string& text, const std::string& what,
                      const std::unordered_map<std::string, Expr>& symbols) {
  register_elementary();
  ParseOptions opt;
  opt.symbols = symbols;
  opt.unknown_as_param = true;
  try {
    return parse(text, opt);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::function<double(double)> scalar_function(const Expr& e, const std::string& var,
                                              const std::unordered_map<std::string, double>& params) {
  auto bound = params;
  bound.emplace("pi", M_PI);
  check_leaves(e, bound, var);
  auto env = std::make_shared<NumericEnv>();
  for (const auto& [k, v] : bound) env->params[k] = v;
  env->models["sin"] = elementary([](double v) { return std::sin(v); });
  env->models["cos"] = elementary([](double v) { return std::cos(v); });
  env->models["tanh"] = elementary([](double v) { return std::tanh(v); });
  return [env, e, var](double x) {
    env->params[var] = x;
    env->clear_cache();
    return env->eval(e);
  };
}

solver::Kappa kappa_from_text(const std::string& text) {
  const Expr s = param("s");
  const Expr e = parse_expression(text, "kappa", {{"S", s}});
  check_leaves(e, {}, "s");
  const AtomId sid = param_id("s");
  // exact fast paths for the two common forms
  if (auto c = (e / exp(s)).constant_value(); c && !c->is_zero()) {
    solver::Kappa k = solver::Kappa::exponential(c->to_double());
    k.label = text;
    return k;
  }
  const Expr slope = partial(e, sid);
  if (auto b = slope.constant_value(); b && !b->is_zero()) {
    solver::Kappa k = solver::Kappa::linear(substitute(e, {{sid, Expr(0)}}).constant_value()->to_double(), b->to_double());
    k.label = text;
    return k;
  }
  auto f = scalar_function(e, "s");
  auto df = scalar_function(slope, "s");
  auto inv = [f](double v) {
    auto g = [&](double x) { return f(x) - v; };
    // widen a bracket around 0 until the sign changes
    for (double w = 1; w <= 1024; w *= 2) {
      const double a = -w, b = w;
      const double ga = g(a), gb = g(b);
      if (!std::isfinite(ga) || !std::isfinite(gb)) break;
      if (ga == 0) return a;
      if (gb == 0) return b;
      if ((ga < 0) != (gb < 0)) {
        std::uintmax_t it = 200;
        auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb,
                                                         boost::math::tools::eps_tolerance<double>(52), it);
        return 0.5 * (lo + hi);
      }
    }
    throw std::domain_error("kappa inverse: no bracket found for the value");
  };
  return {text, f, df, inv};
}

solver::NumericEos numeric_eos(const KeyValues& kv) {
  const std::string kind = kv.str("eos.kind", "polytropic");
  try {
    if (kind == "polytropic")
      return solver::NumericEos::polytropic(kv.num("eos.q", 2.0 / 3.0), kappa_from_text(kv.str("eos.kappa", "exp(S)")));
    if (kind == "entropic") return solver::NumericEos::entropic(kappa_from_text(kv.str("eos.kappa", "S")));
    if (kind == "barotropic") return solver::NumericEos::barotropic(kv.num("eos.q", 2.0 / 3.0), kv.num("eos.k", 1));
    if (kind == "two-term")
      return solver::NumericEos::two_term(kv.num("eos.q", 2.0 / 3.0), kv.num("eos.c2", 0.5), kv.num("eos.q2", 1.5),
                                          kappa_from_text(kv.str("eos.kappa", "exp(S)")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("eos: ") + e.what());
  }
  throw ConfigError("eos.kind must be polytropic, entropic, barotropic or two-term, got " + kind);
}

Simulation load_simulation(const KeyValues& kv) {
  Simulation sim;
  sim.grid.r_min = kv.num("grid.r_min", 0.5);
  sim.grid.r_max = kv.num("grid.r_max", 2.5);
  sim.grid.N = kv.integer("grid.N", 128);
  sim.grid.n = kv.num("grid.n", 3);
  try {
    sim.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  sim.eos = numeric_eos(kv);
  sim.solver.cfl = kv.num("run.cfl", 0.4);
  if (!(sim.solver.cfl > 0 && sim.solver.cfl <= 1)) throw ConfigError("run.cfl must lie in (0, 1]");

  const Expr x = param("x");
  std::array<std::function<double(double)>, 3> fn;
  const char* names[3] = {"rho", "U", "S"};
  for (int i = 0; i < 3; ++i) {
    const std::string key = std::string("init.") + names[i];
    const std::string text = kv.str(key);
    try {
      fn[i] = scalar_function(parse_expression(text, key, {{"r", x}}), "x");
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
    sim.init_text += (i ? "; " : "") + std::string(names[i]) + " = " + text;
  }
  sim.init = [fn](double r) { return solver::Primitive{fn[0](r), fn[1](r), fn[2](r)}; };

  sim.t_end = kv.num("run.t_end", 0.3);
  if (!(sim.t_end > 0)) throw ConfigError("run.t_end must be positive");
  if (kv.has("run.tracers")) sim.tracers = kv.list("run.tracers");
  for (double r : sim.tracers)
    if (!(r > sim.grid.r_min && r < sim.grid.r_max)) throw ConfigError("run.tracers: position outside the grid");
  sim.window_a = kv.num("run.window_a", sim.grid.r_min + 0.25 * (sim.grid.r_max - sim.grid.r_min));
  sim.window_b = kv.num("run.window_b", sim.grid.r_min + 0.75 * (sim.grid.r_max - sim.grid.r_min));
  if (!(sim.window_a > sim.grid.r_min && sim.window_a < sim.window_b && sim.window_b < sim.grid.r_max))
    throw ConfigError("run.window_a/window_b must be ordered inside the grid");
  sim.output_dir = kv.str("run.output", "");
  sim.snapshots = kv.integer("run.snapshots", 4);
  if (sim.snapshots < 2) throw ConfigError("run.snapshots must be at least 2");
  sim.seed = static_cast<std::uint64_t>(kv.num("run.seed", 20240611));
  sim.mass_tol = kv.num("run.mass_tol", 1e-12);
  if (!(sim.mass_tol > 0)) throw ConfigError("run.mass_tol must be positive");
  return sim;
}

SymbolicEos load_symbolic_eos(const KeyValues& kv) {
  SymbolicEos out;
  out.kappa = kv.has("kappa") ? parse_expression(kv.str("kappa"), "kappa") : model::default_kappa();
  out.F = kv.has("F") ? parse_expression(kv.str("F"), "F") : func("F", {model::S()});
  out.n = kv.has("n") ? parse_expression(kv.str("n"), "n") : param("n");
  for (const char* name : {"q", "k"})
    if (kv.has(name)) out.values.emplace(name, parse_expression(kv.str(name), name));

  auto bind = [&](const Expr& e) {
    std::unordered_map<AtomId, Expr> m;
    for (const auto& [name, v] : out.values) m.emplace(param_id(name), v);
    if (kv.has("n")) m.emplace(param_id("n"), out.n);
    return substitute(e, m);
  };
  if (kv.has("p")) {
    if (kv.has("kind")) throw ConfigError("eos: give either p or kind, not both");
    out.source = "p = " + kv.str("p");
    out.eos = model::concrete(bind(parse_expression(kv.str("p"), "p", {{"kappa", out.kappa}})), out.source);
    return out;
  }
  const std::string kind = kv.str("kind", "");
  const Expr q = out.values.count("q") ? out.values.at("q") : param("q");
  const Expr k = out.values.count("k") ? out.values.at("k") : param("k");
  if (kind == "general") out.eos = model::general();
  else if (kind == "separable") out.eos = model::separable(out.kappa);
  else if (kind == "additive") out.eos = model::additive(out.kappa);
  else if (kind == "scaled-power") out.eos = model::scaled_power(out.kappa, q);
  else if (kind == "log-form") out.eos = model::log_form(out.kappa, k);
  else if (kind == "barotropic") out.eos = model::barotropic();
  else if (kind == "polytropic") out.eos = model::polytropic(out.kappa, q);
  else if (kind == "polytropic-critical") out.eos = model::polytropic_critical(out.kappa, out.n);
  else if (kind == "entropic") out.eos = model::entropic(out.kappa);
  else
    throw ConfigError("eos: need p or kind (general, separable, additive, scaled-power, log-form, barotropic, "
                      "polytropic, polytropic-critical, entropic)");
  out.source = "kind = " + kind;
  return out;
}

} // namespace radflow::config
