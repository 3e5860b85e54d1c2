#pragma once
/// Command-line plumbing: a RunConfig names one operation to run over a
/// parsed model document; run() executes it and writes the artifacts.

#include <cstdint>
#include <string>

namespace grope {

/// One resolved invocation.
struct RunConfig {
  std::string input;    ///< model document to read
  std::string command;  ///< validate, split, split-pair, split-tower, handles,
                        ///< unravel, pipeline, certify, or fuzz
  int n = 1;            ///< distance / degree / iteration count; >= 1
  std::size_t budget = 1'000'000;  ///< object budget; >= 1
  std::uint64_t seed = 0;          ///< drives plan choices and fuzzing
  std::string out_dir = ".";       ///< artifact directory
  bool dot = false;                ///< also write before.dot / after.dot
};

/// Execute the command.  Artifacts land in out_dir: `model.doc` (the updated
/// model), `report.doc` (a structured report), and with `dot` set the
/// quotient graphs `before.dot` / `after.dot`.  Returns the exit status:
/// 0 success, 1 violation or failing certificate, 2 malformed input or
/// unknown command, 3 budget exhausted.
int run(const RunConfig& config);

}  // namespace grope
