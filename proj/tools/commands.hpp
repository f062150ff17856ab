#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace darboux::cli {

enum ExitCode : int { kPass = 0, kChecksFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  unsigned workers = 0;  // 0: hardware concurrency
};

const char* version();

int cmd_integrate(const Options& opt, std::ostream& out, std::ostream& err);
/// what: brackets, submanifold, lift or frame.
int cmd_check(const Options& opt, const std::string& what, std::ostream& out, std::ostream& err);
int cmd_reduce(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_lift_check(const Options& opt, std::ostream& out, std::ostream& err);

/// Full command line, including the program name in argv[0].
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace darboux::cli
