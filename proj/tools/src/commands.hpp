#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>

namespace conestable::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitStatFailure = 1,
  kExitConfigError = 2,
  kExitUnsupported = 3,
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  unsigned jobs = 0;
  std::uint64_t seed_offset = 0;
};

/// Writes <out>/samples.csv and <out>/metadata.json.
int cmd_sample(const RunOptions& opt, std::ostream& log);
/// Runs the seed protocol; writes <out>/parts/<test>-seed<k>.csv, then
/// aggregates them into <out>/<test>.csv and <out>/<test>.json.
int cmd_verify(const RunOptions& opt, std::ostream& log);
/// Writes <out>/levy.csv and <out>/metadata.json.
int cmd_levy(const RunOptions& opt, std::ostream& log);
int cmd_list_cones(std::ostream& out);
int cmd_list_tests(std::ostream& out);

/// Maps exceptions to the exit-code contract and prints them to `err`.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace conestable::cli
