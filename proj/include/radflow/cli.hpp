#pragma once

// Command-line front end. Exit codes: 0 when every requested check passes,
// 1 on a failed check, 2 on a usage or configuration error.

#include <iosfwd>

namespace radflow::cli {

constexpr const char* kSchema = "radflow-report/1";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace radflow::cli
