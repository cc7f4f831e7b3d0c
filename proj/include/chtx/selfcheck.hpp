#pragma once

#include <string>
#include <vector>

namespace chtx {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in property suite: threshold identities, the appendix constant
/// formula, the sigma construction, the weight-function bounds, and the
/// spectral operator symbols. These back the `validate` CLI subcommand.
std::vector<CheckResult> run_selfchecks();

/// True when every check passed.
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace chtx
