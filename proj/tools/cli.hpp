#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bvg::cli {

/// Exit codes: 0 pass / success, 1 check failure or rejected construction,
/// 2 inconclusive result or bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bvg::cli
