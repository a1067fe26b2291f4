#pragma once

// The nine acceptance criteria as library calls, shared by the acceptance
// binary and `radflow selftest`. Each criterion reports pass/fail, the pinned
// tolerances it was tested against and detail lines explaining a failure.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace radflow::acceptance {

struct Options {
  std::uint64_t seed = 20240611;
  int identity_pairs = 25;
  std::vector<int> grids{128, 256, 512};
};

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::string> details;
  double seconds = 0;
};

constexpr int kCriteria = 9;

/// Runs criterion id (1..9); throws std::out_of_range otherwise.
Criterion run(int id, const Options& opt = {});
std::vector<Criterion> run_all(const Options& opt = {});

/// "PASS  C<id> <title>: <summary>"
std::string format_line(const Criterion& c);

} // namespace radflow::acceptance
