// Acceptance suite: one PASS/FAIL line per criterion, followed by its pinned
// tolerances and detail lines. Exit status 1 when any criterion fails.

#include <cstdio>
#include <exception>
#include <string>

#include "radflow/acceptance.hpp"

int main() {
  using namespace radflow::acceptance;
  bool all = true;
  for (int id = 1; id <= kCriteria; ++id) {
    Criterion c;
    try {
      c = run(id);
    } catch (const std::exception& e) {
      c.id = id;
      c.title = "criterion";
      c.summary = std::string("error: ") + e.what();
    }
    all = all && c.pass;
    std::printf("%s  (%.1f s)\n", format_line(c).c_str(), c.seconds);
    std::string tol;
    for (const auto& [k, v] : c.tolerances) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%s=%.12g", tol.empty() ? "" : ", ", k.c_str(), v);
      tol += buf;
    }
    if (!tol.empty()) std::printf("      tolerances: %s\n", tol.c_str());
    for (const auto& d : c.details) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "all criteria pass" : "some criteria fail; see the detail lines above");
  return all ? 0 : 1;
}
