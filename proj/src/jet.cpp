#include "radflow/jet.hpp"

#include <mutex>
#include <tuple>

namespace radflow::expr {

struct SystemContext::Impl {
  Expr n;
  std::map<Field, Expr> rules;
  std::mutex mu;
  std::map<std::tuple<Field, int, int>, Expr> memo;
};

SystemContext::SystemContext(Expr n, std::map<Field, Expr> evolution) : impl_(std::make_shared<Impl>()) {
  impl_->n = std::move(n);
  for (const auto& [f, e] : evolution)
    if (max_tord(e) > 0) throw std::invalid_argument("evolution rule must not contain t-derivatives");
  impl_->rules = std::move(evolution);
}

const Expr& SystemContext::n() const { return impl_->n; }
const std::map<Field, Expr>& SystemContext::rules() const { return impl_->rules; }

Expr SystemContext::restricted_jet(Field v, int i, int j) const {
  if (i == 0) return jet(v, 0, j);
  const auto key = std::make_tuple(v, i, j);
  {
    std::lock_guard lock(impl_->mu);
    if (auto it = impl_->memo.find(key); it != impl_->memo.end()) return it->second;
  }
  Expr out;
  if (j > 0) {
    out = Dr(restricted_jet(v, i, j - 1));
  } else if (i == 1) {
    out = impl_->rules.at(v);
  } else {
    out = restrict(Dt(restricted_jet(v, i - 1, 0)));
  }
  std::lock_guard lock(impl_->mu);
  impl_->memo.emplace(key, out);
  return out;
}

Expr SystemContext::restrict(const Expr& e) const {
  if (max_tord(e) == 0) return e;
  return map_atoms(e, [&](AtomId id) -> std::optional<Expr> {
    const Atom& a = atom(id);
    if (a.kind != AtomKind::Jet || a.tord == 0) return std::nullopt;
    if (!impl_->rules.count(a.field)) return std::nullopt;
    return restricted_jet(a.field, a.tord, a.rord);
  });
}

bool is_zero(const Expr& e) {
  if (e.is_zero()) return true;
  return clear_denominators(e).is_zero();
}

} // namespace radflow::expr
