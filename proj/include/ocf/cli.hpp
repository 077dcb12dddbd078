#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ocf::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,           // bad flags, unwritable output path
  kDomain = 2,          // input outside the domain of the operation
  kEmptyWindow = 3,     // kuzmin: no numerically trustworthy iteration
  kMarkovFail = 4,      // markov: some case failed
  kSimulateBreach = 5,  // simulate: a statistic exceeded its threshold
  kGateFail = 6,        // kuzmin, eta, measures: a checked bound failed
  kNumerical = 7,       // a tolerance could not be met
};

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ocf::cli
