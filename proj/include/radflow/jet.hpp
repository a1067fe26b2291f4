#pragma once

// Solution-space restriction and exact zero testing on top of the kernel.

#include <map>
#include <memory>

#include "radflow/expr.hpp"

namespace radflow::expr {

/// Evolution rules v_t = rule_v (in r-jets only) together with the spatial
/// dimension. Restriction replaces every jet with a t-index by the rule and
/// its derivatives; results are memoized per context.
class SystemContext {
public:
  SystemContext(Expr n, std::map<Field, Expr> evolution);

  const Expr& n() const;
  const std::map<Field, Expr>& rules() const;
  /// Restricted value of d_t^i d_r^j v.
  Expr restricted_jet(Field v, int i, int j) const;
  Expr restrict(const Expr& e) const;

private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

inline Expr restrict_to_solutions(const Expr& e, const SystemContext& ctx) { return ctx.restrict(e); }

/// Exact zero test: canonical form is zero, possibly after clearing
/// denominators built from irreducible sums.
bool is_zero(const Expr& e);

} // namespace radflow::expr
