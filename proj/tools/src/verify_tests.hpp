#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conestable/stat_verify.hpp"

namespace conestable::cli {

struct ExperimentConfig;

/// Names accepted by `verify` and `test.name`.
std::vector<std::string> test_names();
/// One-line description per test, same order as test_names().
std::vector<std::string> test_descriptions();

struct SeedRun {
  TestReport report;
  /// Extra CSV rows (alpha-recovery writes its Laplace estimates here).
  std::vector<std::string> extra_rows;
};

/// Runs the configured test for one seed.
SeedRun run_test(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace conestable::cli
