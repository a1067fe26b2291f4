#include "radflow/casimir.hpp"

#include <chrono>
#include <stdexcept>

#include "radflow/jet.hpp"

namespace radflow::casimir {

using namespace expr;

namespace {

Expr w(const Expr& n) { return pow(r(), n - Expr(1)); }
Expr winv(const Expr& n) { return pow(r(), Expr(1) - n); }

std::string jname(int k) { return "J" + std::to_string(k); }

} // namespace

Expr recursion_apply(const Expr& e, const Expr& n) { return winv(n) / model::rho() * Dr(e); }

Expr advected_scalar(int l, const Expr& n) {
  Expr j = model::S();
  for (int k = 0; k < l; ++k) j = recursion_apply(j, n);
  return j;
}

Expr advected_scalar_tilde(int l) {
  Expr j = model::S();
  const Expr rt = jet(Field::RhoTilde);
  for (int k = 0; k < l; ++k) j = Dr(j) / rt;
  return j;
}

bool Residuals::zero() const { return is_zero(first) && is_zero(second); }

Residuals casimir_residuals(const Expr& phi, const Expr& n) {
  const Expr wp = w(n) * phi;
  const Expr er = euler_operator(wp, Field::Rho), es = euler_operator(wp, Field::S);
  return {euler_operator(wp, Field::U),
          Dr(winv(n) * er) - winv(n) * jet(Field::S, 0, 1) / model::rho() * es};
}

bool HierarchyReport::passed() const {
  if (!complete || levels.empty()) return false;
  for (const auto& l : levels)
    if (!l.passed) return false;
  return true;
}

Expr opaque_hierarchy_function(int l, const Expr& n, const std::string& name) {
  std::vector<Expr> args;
  for (int k = 0; k <= l; ++k) args.push_back(advected_scalar(k, n));
  return func(name, args);
}

Expr bind_hierarchy(const Expr& f_of_params, int l, const Expr& n) {
  std::unordered_map<AtomId, Expr> sub;
  for (int k = 0; k <= l; ++k) sub.emplace(param_id(jname(k)), advected_scalar(k, n));
  return substitute(f_of_params, sub);
}

HierarchyReport verify_casimir_hierarchy(int l_max, const Expr& n, std::size_t budget, const std::optional<Expr>& f) {
  HierarchyReport rep;
  for (int l = 0; l <= l_max; ++l) {
    const auto t0 = std::chrono::steady_clock::now();
    LevelReport lv;
    lv.l = l;
    const Expr phi = model::rho() * (f ? bind_hierarchy(*f, l, n) : opaque_hierarchy_function(l, n));
    lv.density_terms = phi.size();
    const Expr wp = w(n) * phi;
    const Expr er = euler_operator(wp, Field::Rho), es = euler_operator(wp, Field::S);
    lv.euler_terms = er.size() + es.size();
    if (lv.euler_terms > budget) {
      lv.budget_exceeded = true;
      rep.levels.push_back(lv);
      rep.complete = false;
      break;
    }
    const Expr first = euler_operator(wp, Field::U);
    const Expr second = Dr(winv(n) * er) - winv(n) * jet(Field::S, 0, 1) / model::rho() * es;
    lv.first_terms = first.size();
    lv.second_terms = second.size();
    lv.passed = is_zero(first) && is_zero(second);
    lv.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.levels.push_back(lv);
  }
  return rep;
}

std::vector<SplitRelation> split_system_check(int k_max, int i_max) {
  std::vector<SplitRelation> out;
  const Expr j1 = advected_scalar_tilde(1);
  for (int k = 0; k <= k_max; ++k) {
    const Expr jk = advected_scalar_tilde(k);
    const Expr rjk = Dr(jk) / jet(Field::RhoTilde);
    {
      const Expr res = j1 * euler_operator(jk, Field::S) - rjk - Dr(euler_operator(jk, Field::RhoTilde));
      out.push_back({k, 0, "J1 E_S(J" + std::to_string(k) + ") = R J" + std::to_string(k) + " + D_r E_rhot", is_zero(res)});
    }
    for (int i = 1; i <= i_max; ++i) {
      const Expr res = j1 * euler_operator(jk, Field::S, i) - Dr(euler_operator(jk, Field::RhoTilde, i)) +
                       euler_operator(jk, Field::RhoTilde, i - 1);
      out.push_back({k, i,
                     "J1 E_S^(" + std::to_string(i) + ") = D_r E_rhot^(" + std::to_string(i) + ") - E_rhot^(" +
                         std::to_string(i - 1) + ")",
                     is_zero(res)});
    }
  }
  return out;
}

FirstOrderVerdict classify_first_order(const Expr& phi, const Expr& n) {
  for (Field f : {Field::U, Field::Rho, Field::S})
    if (max_rord(phi, f) > 1) throw std::invalid_argument("classify_first_order: density of jet order > 1");
  if (max_tord(phi) > 0) throw std::invalid_argument("classify_first_order: density contains t-derivatives");
  FirstOrderVerdict v;
  v.casimir = casimir_residuals(phi, n).zero();
  if (!v.casimir) {
    v.form = "not a Casimir";
    return v;
  }
  // write S_r = r^(n-1) rho J1 and see whether Phi/rho is then a function of (S, J1)
  const Expr j = param("J1");
  const Expr g = substitute(phi / model::rho(), {{jet_id(Field::S, 0, 1), w(n) * model::rho() * j}});
  v.literal_form = true;
  for (AtomId id : {var_id(Var::R), var_id(Var::T), jet_id(Field::U, 0, 0), jet_id(Field::Rho, 0, 0),
                    jet_id(Field::U, 0, 1), jet_id(Field::Rho, 0, 1)})
    if (depends_on(g, id)) v.literal_form = false;
  v.form = v.literal_form ? "rho f(J0, J1)" : "rho f(J0, J1) modulo a total r-derivative";
  return v;
}

bool hierarchy_density_nontrivial(const Expr& f_of_params, int l) {
  const AtomId last = param_id(jname(l));
  if (l == 0) return !is_zero(f_of_params);
  return !is_zero(partial(partial(f_of_params, last), last));
}

Expr advection_residual(int l, const Eos& eos, const Expr& n) {
  const Expr j = advected_scalar(l, n);
  return model::make_context(eos, n).restrict(Dt(j) + model::U() * Dr(j));
}

} // namespace radflow::casimir
