#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace qhmcgp {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

struct CliOptions {
  std::string config_path;  // empty: built-in defaults
  std::string out_dir;      // empty: config output_dir
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool quiet = false;
};

int cmd_run(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_trace(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_selftest(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace qhmcgp
