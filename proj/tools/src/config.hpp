#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "conestable/gallery.hpp"
#include "conestable/sampling.hpp"

namespace conestable::cli {

/// Invalid configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SamplerSpec {
  std::string mode = "lepage";  // lepage | poisson
  Truncation truncation = FixedRank{1000};
  std::size_t n = 1000;
  double window_r = 1.0;
};

struct TestSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::size_t> min_pass;
};

struct LevySpec {
  std::vector<double> times{1.0};
  std::size_t rank = 1000;
  std::size_t replicates = 10;
};

struct ExperimentConfig {
  std::string cone_name;
  ConeParams cone_params;
  ConePtr cone;
  double alpha = 0.0;
  std::vector<SpectralAtom> atoms;
  std::optional<Element> deterministic_part;
  SamplerSpec sampler;
  std::optional<TestSpec> test;
  LevySpec levy;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output = "out";
  /// Parsed document, kept for hashing.
  nlohmann::json document;

  SpectralMeasure spectral() const { return SpectralMeasure(*cone, atoms); }
  LePageConfig lepage() const { return {alpha, spectral(), deterministic_part, sampler.truncation}; }
};

/// Validates and converts a config document. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Adds `offset` to every seed and re-checks distinctness.
void apply_seed_offset(ExperimentConfig& cfg, std::uint64_t offset);

/// FNV-1a 64 of the canonical JSON (sorted keys) with the output path
/// removed and the effective seed list substituted; 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::string truncation_kind(const Truncation& t);

}  // namespace conestable::cli
