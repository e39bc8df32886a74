#include "config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "conestable/serialize.hpp"
#include "conestable/stat_verify.hpp"
#include "verify_tests.hpp"

namespace conestable::cli {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

Element element_from(const json& values) {
  return Element(values.get<std::vector<double>>());
}

Truncation parse_truncation(const json& t) {
  const auto kind = t.at("kind").get<std::string>();
  if (kind == "fixed") return FixedRank{get_or<std::size_t>(t, "rank", 1000)};
  if (kind == "expected-tail") return ExpectedTail{get_or<double>(t, "tol", 1e-3)};
  if (kind == "exact") return ExactStop{get_or<std::size_t>(t, "max_terms", 10'000'000)};
  throw ConfigError("sampler.truncation.kind must be fixed, expected-tail or exact (got '" + kind + "')");
}

SpectralAtom parse_atom(const Cone& cone, const json& a) {
  SpectralAtom atom;
  atom.weight = get_or<double>(a, "weight", 1.0);
  if (a.contains("segment")) {
    const auto* body = dynamic_cast<const ConvexBody2D*>(&cone);
    if (!body) throw ConfigError("spectral 'segment' atoms need the convex-body-2d cone");
    const auto p = a.at("segment").get<std::array<double, 2>>();
    const Element seg = body->segment({0.0, 0.0}, p);
    atom.direction = cone.scale(1.0 / cone.norm(seg), seg);
  } else if (a.contains("direction")) {
    atom.direction = element_from(a.at("direction"));
    if (get_or<bool>(a, "normalize", false)) {
      cone.validate(atom.direction);
      atom.direction = cone.scale(1.0 / cone.norm(atom.direction), atom.direction);
    }
  } else {
    throw ConfigError("spectral atom needs 'direction' or 'segment'");
  }
  return atom;
}

void check_seeds(const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
}

ExperimentConfig parse_unchecked(const json& doc) {
  ExperimentConfig cfg;
  cfg.document = doc;
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  const json& cone = doc.at("cone");
  cfg.cone_name = cone.is_string() ? cone.get<std::string>() : cone.at("name").get<std::string>();
  if (cone.is_object()) {
    cfg.cone_params.beta = get_or<double>(cone, "beta", cfg.cone_params.beta);
    cfg.cone_params.dim = get_or<std::size_t>(cone, "dim", cfg.cone_params.dim);
    cfg.cone_params.grid = get_or<std::size_t>(cone, "grid", cfg.cone_params.grid);
    cfg.cone_params.ground = get_or<std::size_t>(cone, "ground", cfg.cone_params.ground);
  }
  const auto names = cone_names();
  if (std::find(names.begin(), names.end(), cfg.cone_name) == names.end()) {
    throw ConfigError("unknown cone '" + cfg.cone_name + "'");
  }
  try {
    cfg.cone = make_cone(cfg.cone_name, cfg.cone_params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cone parameters: ") + e.what());
  }

  if (!doc.contains("alpha")) throw ConfigError("alpha is required");
  cfg.alpha = doc.at("alpha").get<double>();
  if (!std::isfinite(cfg.alpha) || cfg.alpha == 0.0) throw ConfigError("alpha must be finite and nonzero");

  if (!doc.contains("spectral") || !doc.at("spectral").is_array() || doc.at("spectral").empty()) {
    throw ConfigError("spectral must be a non-empty array of atoms");
  }
  try {
    for (const auto& a : doc.at("spectral")) cfg.atoms.push_back(parse_atom(*cfg.cone, a));
    (void)cfg.spectral();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("spectral: ") + e.what());
  }

  if (doc.contains("deterministic_part")) {
    cfg.deterministic_part = element_from(doc.at("deterministic_part"));
    try {
      cfg.cone->validate(*cfg.deterministic_part);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("deterministic_part: ") + e.what());
    }
  }

  if (doc.contains("sampler")) {
    const json& s = doc.at("sampler");
    cfg.sampler.mode = get_or<std::string>(s, "mode", "lepage");
    if (cfg.sampler.mode != "lepage" && cfg.sampler.mode != "poisson") {
      throw ConfigError("sampler.mode must be lepage or poisson");
    }
    if (s.contains("truncation")) cfg.sampler.truncation = parse_truncation(s.at("truncation"));
    cfg.sampler.n = get_or<std::size_t>(s, "n", cfg.sampler.n);
    cfg.sampler.window_r = get_or<double>(s, "window_r", cfg.sampler.window_r);
    if (cfg.sampler.n == 0) throw ConfigError("sampler.n must be positive");
    if (!(cfg.sampler.window_r > 0.0)) throw ConfigError("sampler.window_r must be positive");
  }

  if (doc.contains("test")) {
    const json& t = doc.at("test");
    TestSpec spec;
    spec.name = t.at("name").get<std::string>();
    const auto tests = test_names();
    if (std::find(tests.begin(), tests.end(), spec.name) == tests.end()) {
      throw ConfigError("unknown test '" + spec.name + "'");
    }
    if (t.contains("params")) spec.params = t.at("params");
    if (t.contains("protocol")) {
      const json& p = t.at("protocol");
      if (p.contains("min_pass")) spec.min_pass = p.at("min_pass").get<std::size_t>();
    }
    cfg.test = std::move(spec);
  }

  if (doc.contains("levy")) {
    const json& l = doc.at("levy");
    cfg.levy.times = get_or<std::vector<double>>(l, "times", cfg.levy.times);
    cfg.levy.rank = get_or<std::size_t>(l, "rank", cfg.levy.rank);
    cfg.levy.replicates = get_or<std::size_t>(l, "replicates", cfg.levy.replicates);
    if (cfg.levy.times.empty()) throw ConfigError("levy.times must not be empty");
    for (std::size_t i = 0; i < cfg.levy.times.size(); ++i) {
      const double t = cfg.levy.times[i];
      if (!(t >= 0.0 && t <= 1.0) || (i > 0 && !(t > cfg.levy.times[i - 1]))) {
        throw ConfigError("levy.times must be increasing within [0, 1]");
      }
    }
  }

  if (doc.contains("seeds")) cfg.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
  if (cfg.test && !doc.contains("seeds")) cfg.seeds = Protocol::default_seeds();
  check_seeds(cfg.seeds);
  if (cfg.test && cfg.test->min_pass && *cfg.test->min_pass > cfg.seeds.size()) {
    throw ConfigError("test.protocol.min_pass exceeds the number of seeds");
  }
  if (doc.contains("output")) cfg.output = doc.at("output").get<std::string>();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  try {
    cfg = parse_unchecked(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  // Mode guard; UnsupportedCombination propagates to the caller.
  if (cfg.sampler.mode == "lepage") plan_truncation(*cfg.cone, cfg.lepage());
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void apply_seed_offset(ExperimentConfig& cfg, std::uint64_t offset) {
  for (auto& s : cfg.seeds) s += offset;
  check_seeds(cfg.seeds);
}

std::string config_hash(const ExperimentConfig& cfg) {
  json canonical = cfg.document;
  canonical.erase("output");
  canonical["seeds"] = cfg.seeds;
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string truncation_kind(const Truncation& t) {
  if (std::holds_alternative<FixedRank>(t)) return "fixed";
  if (std::holds_alternative<ExpectedTail>(t)) return "expected-tail";
  return "exact";
}

}  // namespace conestable::cli
