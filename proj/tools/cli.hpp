#pragma once

namespace csma::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kConfig = 3,
  kIo = 4,
};

/// Entry point of the `csma-backoff` tool. Subcommands: analytic, simulate,
/// validate, delay-cdf, occupancy. Returns one of ExitCode.
int run(int argc, char** argv);

}  // namespace csma::cli
