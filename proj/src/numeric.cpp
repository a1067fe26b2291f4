#include "radflow/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace radflow::expr {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double falling(int k, int d) {
  double v = 1;
  for (int i = 0; i < d; ++i) v *= k - i;
  return v;
}

} // namespace

FuncModel default_model(const std::string& name, std::size_t arity) {
  std::mt19937_64 gen(fnv1a(name) ^ (arity * 0x9e3779b97f4a7c15ULL));
  std::uniform_real_distribution<double> cd(0.5, 1.5), wd(0.2, 0.7);
  std::array<double, 3> c{};
  std::array<std::vector<double>, 3> w;
  for (int m = 0; m < 3; ++m) {
    c[m] = cd(gen);
    for (std::size_t j = 0; j < arity; ++j) w[m].push_back(wd(gen));
  }
  return [c, w](const std::vector<double>& x, const std::vector<int>& d) {
    double s = 0;
    for (int m = 0; m < 3; ++m) {
      double ex = 0, pre = c[m];
      for (std::size_t j = 0; j < x.size(); ++j) {
        ex += w[m][j] * x[j];
        if (j < d.size()) pre *= std::pow(w[m][j], d[j]);
      }
      s += pre * std::exp(ex);
    }
    return s;
  };
}

double NumericEnv::field_value(Field f, int ti, int rj) const {
  auto it = fields.find(f);
  if (it == fields.end()) throw std::invalid_argument(std::string("no numeric data for field ") + field_name(f));
  const auto& a = it->second;
  const double x = r - 1.0;
  double s = 0;
  for (int i = ti; i < 5; ++i)
    for (int j = rj; i + j < 5 && j < 5; ++j) {
      if (a[i][j] == 0.0) continue;
      s += a[i][j] * falling(i, ti) * falling(j, rj) * std::pow(t, i - ti) * std::pow(x, j - rj);
    }
  return s;
}

double NumericEnv::exponent_value(const Exponent& e) {
  if (e.sym == 0) return e.c.to_double();
  return eval(e.to_expr());
}

double NumericEnv::eval_atom(AtomId id) {
  if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  const Atom& a = atom(id);
  double v = 0;
  switch (a.kind) {
  case AtomKind::Var: v = a.var == Var::T ? t : r; break;
  case AtomKind::Param: {
    auto it = params.find(a.name);
    if (it == params.end()) {
      // unnamed parameters get a reproducible value in [1.5, 3.5]
      const std::uint64_t h = fnv1a(a.name) ^ salt;
      v = 1.5 + 2.0 * static_cast<double>(h % 100000) / 100000.0;
      params[a.name] = v;
    } else {
      v = it->second;
    }
    break;
  }
  case AtomKind::Jet: v = field_value(a.field, a.tord, a.rord); break;
  case AtomKind::Func: {
    std::vector<double> x;
    for (const auto& e : a.args) x.push_back(eval(e));
    auto it = models.find(a.name);
    if (it == models.end()) it = models.emplace(a.name, default_model(a.name, a.args.size())).first;
    v = it->second(x, a.deriv);
    break;
  }
  case AtomKind::Exp: v = std::exp(eval(a.args[0])); break;
  case AtomKind::Log: v = std::log(eval(a.args[0])); break;
  case AtomKind::Base: v = eval(a.args[0]); break;
  case AtomKind::Number: v = a.number.to_double(); break;
  }
  cache_.emplace(id, v);
  return v;
}

double NumericEnv::eval(const Expr& e) {
  double s = 0;
  for (const auto& t : e.terms()) {
    double p = t.coef.to_double();
    for (const auto& f : t.mono) {
      const double b = eval_atom(f.atom);
      p *= f.e.is_integer() ? std::pow(b, static_cast<double>(f.e.c.num())) : std::pow(b, exponent_value(f.e));
    }
    s += p;
  }
  return s;
}

double NumericEnv::magnitude(const Expr& e) {
  double s = 0;
  for (const auto& t : e.terms()) {
    double p = std::abs(t.coef.to_double());
    for (const auto& f : t.mono) p *= std::abs(std::pow(eval_atom(f.atom), exponent_value(f.e)));
    s += p;
  }
  return s;
}

NumericEnv NumericEnv::random(std::mt19937_64& gen, const std::map<std::string, double>& fixed_params) {
  std::uniform_real_distribution<double> td(0.0, 1.0), rd(0.5, 2.0), pd(1.5, 3.5), c0(1.5, 2.5),
      cd(-0.1, 0.1);
  NumericEnv env;
  env.t = td(gen);
  env.r = rd(gen);
  for (const char* p : {"n", "q", "k", "eps"}) env.params[p] = pd(gen);
  for (const auto& [k, v] : fixed_params) env.params[k] = v;
  for (Field f : {Field::U, Field::Rho, Field::S, Field::P, Field::RhoTilde}) {
    std::array<std::array<double, 5>, 5> a{};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; i + j < 5; ++j) a[i][j] = (i == 0 && j == 0) ? c0(gen) : cd(gen);
    env.fields[f] = a;
  }
  return env;
}

NumericCheck numeric_zero_check(const Expr& e, int samples, std::uint64_t seed,
                                const std::map<std::string, double>& fixed_params,
                                const std::map<std::string, FuncModel>& models) {
  std::mt19937_64 gen(seed);
  NumericCheck out;
  const std::map<std::string, double>& fixed = fixed_params;
  int attempts = 0;
  while (out.samples < samples && attempts < samples * 10) {
    ++attempts;
    NumericEnv env = NumericEnv::random(gen, fixed);
    env.models = models;
    env.salt = gen();
    const double v = env.eval(e);
    const double m = env.magnitude(e);
    if (!std::isfinite(v) || !std::isfinite(m)) continue;
    out.max_relative = std::max(out.max_relative, std::abs(v) / (m + 1e-300));
    ++out.samples;
  }
  return out;
}

} // namespace radflow::expr
