#pragma once

#include <string>
#include <vector>

namespace layersplit {

inline constexpr const char* kToolVersion = "0.1.0";

namespace cli {

/// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kInvalidArguments = 2,
  kValidationFailure = 3,
  kIoFailure = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name: {"separate", "--image", "in.png", ...}.
int run(const std::vector<std::string>& args);

}  // namespace cli
}  // namespace layersplit
