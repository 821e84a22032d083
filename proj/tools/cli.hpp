#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shadowgeom::cli {

/// Exit codes: 0 success or all checks passed, 1 some check failed,
/// 2 usage or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shadowgeom::cli
