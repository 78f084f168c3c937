#pragma once

#include <string>
#include <vector>

namespace uwoc {

/// Caller-owned sink for non-fatal numerical warnings.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

}  // namespace uwoc
