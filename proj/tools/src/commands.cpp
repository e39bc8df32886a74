#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "conestable/serialize.hpp"
#include "conestable/stat_verify.hpp"
#include "conestable/version.hpp"
#include "verify_tests.hpp"

namespace conestable::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentConfig prepare(const RunOptions& opt) {
  auto cfg = load_config(opt.config);
  if (opt.seed_offset) apply_seed_offset(cfg, opt.seed_offset);
  return cfg;
}

fs::path output_dir(const RunOptions& opt, const ExperimentConfig& cfg) {
  const fs::path dir = opt.out.value_or(cfg.output);
  fs::create_directories(dir);
  return dir;
}

std::string hash_line(const std::string& hash) { return "# config_hash=" + hash; }

// Runs f(i) for every seed index on a bounded pool; results are stored by
// index so ordering never depends on completion order.
template <class F>
void for_each_seed(std::size_t count, unsigned jobs, F&& f) {
  const unsigned workers = std::min<unsigned>(effective_jobs(jobs), static_cast<unsigned>(std::max<std::size_t>(1, count)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string join(const std::vector<std::string>& parts, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void write_lines(const fs::path& path, const std::string& hash, const std::string& header,
                 const std::vector<std::vector<std::string>>& blocks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << hash_line(hash) << '\n' << header << '\n';
  for (const auto& block : blocks) {
    for (const auto& line : block) out << line << '\n';
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json base_metadata(const ExperimentConfig& cfg, const std::string& hash, const char* command) {
  json meta;
  meta["version"] = CONESTABLE_VERSION;
  meta["command"] = command;
  meta["config_hash"] = hash;
  meta["cone"] = cfg.cone->id();
  meta["alpha"] = cfg.alpha;
  meta["seeds"] = cfg.seeds;
  meta["spectral_total"] = cfg.spectral().total();
  meta["columns"] = cfg.cone->csv_columns();
  return meta;
}

std::string element_header(const Cone& cone) { return join(cone.csv_columns()); }

std::size_t default_min_pass(std::size_t seeds) {
  // 17 of 20, scaled for other seed counts.
  return static_cast<std::size_t>(std::ceil(0.85 * static_cast<double>(seeds)));
}

}  // namespace

int cmd_sample(const RunOptions& opt, std::ostream& log) {
  const auto cfg = prepare(opt);
  const std::string hash = config_hash(cfg);
  const fs::path dir = output_dir(opt, cfg);
  const auto& cone = *cfg.cone;
  std::vector<std::vector<std::string>> blocks(cfg.seeds.size());
  json meta = base_metadata(cfg, hash, "sample");
  meta["mode"] = cfg.sampler.mode;
  meta["n"] = cfg.sampler.n;

  if (cfg.sampler.mode == "lepage") {
    const auto lp = cfg.lepage();
    const auto plan = plan_truncation(cone, lp);
    std::vector<std::size_t> max_terms(cfg.seeds.size(), 0);
    for_each_seed(cfg.seeds.size(), opt.jobs, [&](std::size_t i) {
      const auto seed = cfg.seeds[i];
      const auto batch = lepage_batch(cone, lp, seed, cfg.sampler.n);
      for (std::size_t r = 0; r < batch.size(); ++r) {
        blocks[i].push_back(std::to_string(seed) + "," + std::to_string(r) + "," + to_csv_row(batch[r].value) + "," +
                            format_double(batch[r].tail_bound));
        max_terms[i] = std::max(max_terms[i], batch[r].terms);
      }
    });
    json trunc;
    trunc["kind"] = truncation_kind(cfg.sampler.truncation);
    trunc["rank"] = plan.rank;
    trunc["tail_bound"] = format_double(plan.tail_bound);
    trunc["max_terms_used"] = max_terms;
    meta["truncation"] = trunc;
    write_lines(dir / "samples.csv", hash, "seed,replicate," + element_header(cone) + ",tail_bound", blocks);
  } else {
    const auto spectral = cfg.spectral();
    for_each_seed(cfg.seeds.size(), opt.jobs, [&](std::size_t i) {
      const auto seed = cfg.seeds[i];
      for (std::size_t r = 0; r < cfg.sampler.n; ++r) {
        Rng rng = Rng::substream(seed, r);
        const auto points = stable_poisson_points(cone, cfg.alpha, spectral, cfg.sampler.window_r, rng);
        for (const auto& p : points.points()) {
          blocks[i].push_back(std::to_string(r) + "," + std::to_string(seed) + "," + format_double(p.norm) + "," +
                              (p.direction ? std::to_string(*p.direction) : std::string()) + "," +
                              to_csv_row(p.value) + "," + std::to_string(p.multiplicity));
        }
      }
    });
    meta["window_r"] = cfg.sampler.window_r;
    meta["expected_count"] = spectral.total() * std::pow(cfg.sampler.window_r, -std::abs(cfg.alpha));
    write_lines(dir / "samples.csv", hash,
                "replicate,seed,norm,direction," + element_header(cone) + ",multiplicity", blocks);
  }
  write_json(dir / "metadata.json", meta);
  log << "wrote " << (dir / "samples.csv").string() << " (config " << hash << ")\n";
  return kExitPass;
}

int cmd_levy(const RunOptions& opt, std::ostream& log) {
  const auto cfg = prepare(opt);
  const std::string hash = config_hash(cfg);
  const fs::path dir = output_dir(opt, cfg);
  const auto& cone = *cfg.cone;
  const LevyPathConfig path_cfg{cfg.alpha, cfg.spectral(), cfg.levy.times, cfg.levy.rank};
  std::vector<std::vector<std::string>> blocks(cfg.seeds.size());
  for_each_seed(cfg.seeds.size(), opt.jobs, [&](std::size_t i) {
    const auto seed = cfg.seeds[i];
    for (std::size_t r = 0; r < cfg.levy.replicates; ++r) {
      const auto path = levy_path(cone, path_cfg, Rng::substream(seed, r).next());
      for (std::size_t j = 0; j < path.size(); ++j) {
        blocks[i].push_back(std::to_string(r) + "," + std::to_string(seed) + "," + format_double(path_cfg.times[j]) +
                            "," + to_csv_row(path[j]));
      }
    }
  });
  json meta = base_metadata(cfg, hash, "levy");
  meta["times"] = cfg.levy.times;
  meta["rank"] = cfg.levy.rank;
  meta["replicates"] = cfg.levy.replicates;
  write_lines(dir / "levy.csv", hash, "replicate,seed,t," + element_header(cone), blocks);
  write_json(dir / "metadata.json", meta);
  log << "wrote " << (dir / "levy.csv").string() << " (config " << hash << ")\n";
  return kExitPass;
}

int cmd_verify(const RunOptions& opt, std::ostream& log) {
  const auto cfg = prepare(opt);
  if (!cfg.test) throw ConfigError("verify needs a 'test' section");
  const std::string hash = config_hash(cfg);
  const std::string name = cfg.test->name;
  const fs::path dir = output_dir(opt, cfg);
  const fs::path parts_dir = dir / "parts";
  fs::create_directories(parts_dir);

  Protocol protocol;
  protocol.seeds = cfg.seeds;
  protocol.min_pass = cfg.test->min_pass.value_or(default_min_pass(cfg.seeds.size()));
  protocol.jobs = opt.jobs;
  std::vector<std::vector<std::string>> extras(cfg.seeds.size());
  const auto report = run_protocol(name, protocol, [&](std::uint64_t seed) {
    const auto idx = static_cast<std::size_t>(
        std::find(cfg.seeds.begin(), cfg.seeds.end(), seed) - cfg.seeds.begin());
    auto run = run_test(cfg, seed);
    extras[idx] = std::move(run.extra_rows);
    return run.report;
  });

  const auto part_path = [&](std::uint64_t seed) { return parts_dir / (name + "-seed" + std::to_string(seed) + ".csv"); };
  for (const auto& run : report.runs) {
    write_lines(part_path(run.seed), hash, report_csv_header(), {report_csv_rows(run)});
  }

  // Aggregate: every part for this test must carry the same config hash.
  const std::string prefix = name + "-seed";
  for (const auto& entry : fs::directory_iterator(parts_dir)) {
    const auto file = entry.path().filename().string();
    if (file.rfind(prefix, 0) != 0) continue;
    std::ifstream in(entry.path());
    std::string first;
    std::getline(in, first);
    if (first != hash_line(hash)) {
      throw ConfigError("refusing to aggregate " + entry.path().string() + ": '" + first + "' does not match " +
                        hash_line(hash));
    }
  }
  std::vector<std::vector<std::string>> blocks;
  for (auto seed : cfg.seeds) {
    std::ifstream in(part_path(seed));
    std::string line;
    std::vector<std::string> rows;
    std::getline(in, line);  // hash
    std::getline(in, line);  // header
    while (std::getline(in, line)) rows.push_back(line);
    blocks.push_back(std::move(rows));
  }
  write_lines(dir / (name + ".csv"), hash, report_csv_header(), blocks);
  if (!extras.empty() && !extras.front().empty()) {
    write_lines(dir / (name + "-estimates.csv"), hash, "seed,s,family,params,n,mean,se,exponent", extras);
  }

  json summary = base_metadata(cfg, hash, "verify");
  summary["test"] = name;
  summary["min_pass"] = report.min_pass;
  summary["passed"] = report.passed;
  summary["pass"] = report.pass;
  summary["level"] = kDefaultLevel;
  json runs = json::array();
  for (const auto& run : report.runs) {
    json r;
    r["seed"] = run.seed;
    r["statistic"] = run.statistic;
    r["p_value"] = std::isnan(run.p_value) ? json(nullptr) : json(run.p_value);
    r["critical"] = std::isnan(run.critical) ? json(nullptr) : json(run.critical);
    r["pass"] = run.pass;
    if (!run.note.empty()) r["note"] = run.note;
    runs.push_back(r);
  }
  summary["runs"] = runs;
  write_json(dir / (name + ".json"), summary);

  log << name << ": " << report.passed << "/" << report.runs.size() << " seeds passed (need " << report.min_pass
      << ") -> " << (report.pass ? "PASS" : "FAIL") << '\n';
  return report.pass ? kExitPass : kExitStatFailure;
}

int cmd_list_cones(std::ostream& out) {
  for (const auto& name : cone_names()) {
    const auto cone = make_cone(name);
    const auto f = cone->flags();
    out << name << "  sub_invariant=" << f.sub_invariant << " second_distributive=" << f.second_distributive
        << " idempotent=" << f.idempotent << " origin_equals_neutral=" << f.origin_equals_neutral << '\n';
  }
  return kExitPass;
}

int cmd_list_tests(std::ostream& out) {
  const auto names = test_names();
  const auto descriptions = test_descriptions();
  for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << "  " << descriptions[i] << '\n';
  return kExitPass;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const UnsupportedCombination& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace conestable::cli
