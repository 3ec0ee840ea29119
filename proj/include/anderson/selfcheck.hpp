#pragma once

#include <string>
#include <vector>

namespace anderson {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Small-N invariant suite behind the `selfcheck` subcommand. Runs in well
// under a second.
std::vector<CheckOutcome> run_selfcheck();

}  // namespace anderson
