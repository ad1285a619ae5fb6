#pragma once

// Command-line subcommands. Each returns a process exit code:
// 0 success, 1 limit computed as never acceptable, 2 usage or config
// error, 3 I/O error.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "horizonkit/config.hpp"

namespace horizonkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNeverAcceptable = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  Overrides overrides;
  std::optional<std::string> rho;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

int cmd_simulate_ricker(const CommandOptions& options);
int cmd_limit(const CommandOptions& options);
int cmd_sweep(const CommandOptions& options);
int cmd_tolerance_curve(const CommandOptions& options);

/// Full command line entry point (`horizonkit <subcommand> [flags]`).
int run_cli(int argc, char** argv);

/// Resolves the thread count: flag, then HORIZONKIT_THREADS, then 1.
std::size_t resolve_threads(std::optional<std::size_t> flag);

}  // namespace horizonkit
