// Copyright 2026 The trajfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// trajfp command-line driver.
//
// Every dataset is a cell CSV with a JSON manifest next to it
// (`<file>.json`) that records its role, grid, seed, and config hash.
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trajfp/config.h"
#include "trajfp/harness.h"
#include "trajfp/io.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace trajfp {
namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- configuration -------------------------------------------------------

struct Settings {
  std::string config_file;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

void add_settings(CLI::App* cmd, Settings& s) {
  cmd->add_option("--config", s.config_file, "key=value configuration file");
  cmd->add_option("--set", s.overrides, "override one key (key=value); repeatable");
  cmd->add_option("--seed", s.seed, "master seed");
  cmd->add_option("--trials", s.trials, "Monte Carlo trials or runs");
}

// File first, then --set, then dedicated flags.
ExperimentConfig load_config(const Settings& s) {
  ExperimentConfig cfg;
  try {
    if (!s.config_file.empty()) {
      std::istringstream in(read_text_file(s.config_file));
      apply_config(cfg, parse_key_values(in));
    }
    KeyValues kv;
    for (const std::string& o : s.overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + o + "'");
      kv[detail::trim(std::string_view(o).substr(0, eq))] =
          detail::trim(std::string_view(o).substr(eq + 1));
    }
    apply_config(cfg, kv);
    if (s.seed) cfg.master_seed = *s.seed;
    if (s.trials) cfg.trials = *s.trials;
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

// ---- files -----------------------------------------------------------------

json grid_json(const Grid& g) {
  const auto& b = g.bbox();
  return {{"n", g.n()}, {"x_min", b.x_min}, {"y_min", b.y_min}, {"x_max", b.x_max}, {"y_max", b.y_max}};
}

Grid grid_of(const Manifest& m, const std::string& path) {
  try {
    const json& g = m.extra.at("grid");
    return Grid(g.at("n").get<int>(), {g.at("x_min").get<double>(), g.at("y_min").get<double>(),
                                       g.at("x_max").get<double>(), g.at("y_max").get<double>()});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "'" + path + ".json' lacks a grid: " + e.what());
  }
}

std::string manifest_path(const std::string& path) { return path + ".json"; }

void write_with_manifest(const std::string& path, const std::string& body, Manifest m) {
  write_text_file(path, body);
  write_manifest(manifest_path(path), m);
}

void save_dataset(const std::string& path, const Dataset& d, Role role, const ExperimentConfig& cfg,
                  json extra = json::object()) {
  std::ostringstream out;
  write_cell_csv(out, d);
  extra["grid"] = grid_json(d.grid);
  write_with_manifest(path, out.str(), {role, cfg.master_seed, config_hash(cfg), extra});
}

struct Loaded {
  Dataset data;
  Manifest manifest;
};

Loaded load_dataset(const std::string& path) {
  Manifest m = read_manifest(manifest_path(path));
  const Grid g = grid_of(m, path);
  std::istringstream in(read_text_file(path));
  return {read_cell_csv(in, g, m.role), m};
}

void require_role(const Loaded& d, Role role, const std::string& path) {
  if (d.manifest.role != role) {
    throw Error(ErrorCode::kRoleMismatch, "'" + path + "' holds " +
                                              std::string(role_name(d.manifest.role)) +
                                              " data, expected " + std::string(role_name(role)));
  }
}

void save_model(const std::string& path, const MarkovModel& m, const ExperimentConfig& cfg) {
  std::ostringstream out;
  write_model_csv(out, m);
  write_with_manifest(path, out.str(),
                      {Role::kRaw, cfg.master_seed, config_hash(cfg),
                       {{"grid", grid_json(m.grid())}, {"kind", "markov_model"}}});
}

MarkovModel load_model(const std::string& path) {
  const Manifest m = read_manifest(manifest_path(path));
  std::istringstream in(read_text_file(path));
  return read_model_csv(in, grid_of(m, path));
}

// ---- subcommands -------------------------------------------------------------

struct Paths {
  std::string input, output, model, grid, copies, source, leaked, original, released;
  std::vector<std::string> inputs;
};

int cmd_preprocess(const Settings& s, const Paths& p, double interval, std::size_t min_len) {
  const ExperimentConfig cfg = load_config(s);
  const Grid grid = [&] {
    try {
      std::istringstream gin(read_text_file(p.grid));
      return grid_from_config(parse_key_values(gin));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }();
  std::istringstream in(read_text_file(p.input));
  Dataset d{grid, {}};
  for (const PointTrajectory& t : read_point_csv(in)) {
    std::vector<GeoPoint> pts = t.points;
    if (interval > 0.0) pts = resample_uniform(pts, interval);
    const auto parts = clip_to_area(pts, grid.bbox(), min_len);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      Trajectory tr{parts.size() == 1 ? t.id : t.id + "_" + std::to_string(k), Role::kRaw, {}};
      for (const GeoPoint& g : parts[k]) tr.cells.push_back(discretize(g, grid));
      d.trajectories.push_back(std::move(tr));
    }
  }
  require(!d.trajectories.empty(), ErrorCode::kEmptyDataset, "no trajectory survived clipping");
  save_dataset(p.output, d, Role::kRaw, cfg);
  std::cout << "preprocess: " << d.trajectories.size() << " trajectories -> " << p.output << '\n';
  return 0;
}

int cmd_build_model(const Settings& s, const Paths& p) {
  const ExperimentConfig cfg = load_config(s);
  const Loaded corpus = load_dataset(p.input);
  save_model(p.output, build_model(corpus.data), cfg);
  std::cout << "build-model: " << corpus.data.trajectories.size() << " trajectories -> " << p.output
            << '\n';
  return 0;
}

int cmd_synth(const Settings& s, const Paths& p) {
  const ExperimentConfig cfg = load_config(s);
  if (!p.model.empty() && fs::exists(p.model) && fs::exists(manifest_path(p.model))) {
    // Draw from an existing model.
    const MarkovModel m = load_model(p.model);
    Rng rng(derive_seed(cfg.master_seed, seed_stream::kData));
    const Dataset d = synth_generate(m, static_cast<std::size_t>(cfg.trajectory_count),
                                     static_cast<std::size_t>(cfg.trajectory_length), rng);
    save_dataset(p.output, d, Role::kRaw, cfg, {{"source", "model"}});
  } else {
    const Environment env = make_environment(cfg);
    save_dataset(p.output, env.raw, Role::kRaw, cfg, {{"source", cfg.data_source}});
    if (!p.model.empty()) save_model(p.model, env.model, cfg);
  }
  std::cout << "synth: " << cfg.trajectory_count << " x " << cfg.trajectory_length << " -> "
            << p.output << '\n';
  return 0;
}

int cmd_protect(const Settings& s, const Paths& p) {
  const ExperimentConfig cfg = load_config(s);
  const Loaded raw = load_dataset(p.input);
  require_role(raw, Role::kRaw, p.input);
  const MarkovModel m = load_model(p.model);
  require(m.grid() == raw.data.grid, ErrorCode::kInvalidArgument, "model and data grids differ");
  const auto traj = typed<Role::kRaw>(raw.data);
  std::vector<NoisyTrajectory> out;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    Rng rng(derive_seed(cfg.master_seed, seed_stream::kPrivacy, t));
    out.push_back(pim_release(traj[t], m, {cfg.epsilon, cfg.delta, cfg.isotropic_samples}, rng));
  }
  save_dataset(p.output, make_dataset(raw.data.grid, out), Role::kNoisy, cfg,
               {{"epsilon", cfg.epsilon}, {"delta", cfg.delta}});
  std::cout << "protect: epsilon " << cfg.epsilon << ", " << out.size() << " trajectories -> "
            << p.output << '\n';
  return 0;
}

int cmd_postprocess(const Settings& s, const Paths& p) {
  const ExperimentConfig cfg = load_config(s);
  const Loaded noisy = load_dataset(p.input);
  require_role(noisy, Role::kNoisy, p.input);
  const MarkovModel m = load_model(p.model);
  std::vector<PostProcessedTrajectory> out;
  for (const auto& t : typed<Role::kNoisy>(noisy.data)) out.push_back(post_process(t, m, cfg.tau));
  save_dataset(p.output, make_dataset(noisy.data.grid, out), Role::kPostProcessed, cfg);
  std::cout << "postprocess: " << out.size() << " trajectories -> " << p.output << '\n';
  return 0;
}

// Shared sources: post-processed data, or raw data with --no-dp.
std::vector<PostProcessedTrajectory> shareable(const Loaded& d, bool no_dp, const std::string& path) {
  if (!no_dp) {
    require_role(d, Role::kPostProcessed, path);
    return typed<Role::kPostProcessed>(d.data);
  }
  require_role(d, Role::kRaw, path);
  std::vector<PostProcessedTrajectory> out;
  for (const auto& t : typed<Role::kRaw>(d.data)) out.push_back(share_without_privacy(t));
  return out;
}

std::string analyzer_file(const std::string& dir, int a) {
  return (fs::path(dir) / ("analyzer_" + std::to_string(a) + ".csv")).string();
}

int cmd_fingerprint(const Settings& s, const Paths& p, bool no_dp) {
  const ExperimentConfig cfg = load_config(s);
  const Loaded src = load_dataset(p.input);
  const MarkovModel m = load_model(p.model);
  require(m.grid() == src.data.grid, ErrorCode::kInvalidArgument, "model and data grids differ");
  require(cfg.analyzers >= 2, ErrorCode::kInvalidArgument, "need at least two analyzers");
  const CopyFactory factory(shareable(src, no_dp, p.input), m, cfg.scheme_config(), cfg.analyzers,
                            cfg.master_seed);
  fs::create_directories(p.copies);
  for (int a = 0; a < cfg.analyzers; ++a) {
    std::vector<FingerprintedTrajectory> copies;
    for (std::size_t t = 0; t < factory.trajectories(); ++t) copies.push_back(factory.copy(a, t));
    save_dataset(analyzer_file(p.copies, a), make_dataset(src.data.grid, copies),
                 Role::kFingerprinted, cfg,
                 {{"analyzer_id", a},
                  {"analyzer_seed", factory.analyzer_seed(a)},
                  {"scheme", std::string(scheme_name(cfg.scheme))}});
  }
  if (factory.code()) {
    std::ostringstream out;
    write_codebook_csv(out, factory.code()->codebook);
    write_text_file((fs::path(p.copies) / "codebook.csv").string(), out.str());
  }
  json dist{{"scheme", std::string(scheme_name(cfg.scheme))},
            {"analyzers", cfg.analyzers},
            {"no_dp", no_dp},
            {"config", to_key_values(cfg)}};
  write_manifest((fs::path(p.copies) / "distribution.json").string(),
                 {Role::kFingerprinted, cfg.master_seed, config_hash(cfg), dist});
  std::cout << "fingerprint: " << scheme_name(cfg.scheme) << ", " << cfg.analyzers
            << " copies -> " << p.copies << '\n';
  return 0;
}

int cmd_attack(const Settings& s, const Paths& p) {
  const ExperimentConfig cfg = load_config(s);
  const AttackConfig ac = cfg.attack_config();
  std::vector<Loaded> held;
  for (const auto& path : p.inputs) {
    held.push_back(load_dataset(path));
    require_role(held.back(), Role::kFingerprinted, path);
  }
  require(!held.empty(), ErrorCode::kInvalidArgument, "attack needs at least one copy");
  require(!is_collusion(cfg.attack) || held.size() >= 2, ErrorCode::kInvalidArgument,
          "collusion needs at least two copies");
  std::optional<MarkovModel> model;
  if (!p.model.empty()) model = load_model(p.model);
  const bool needs_model = cfg.attack == AttackKind::kCorrelationFlip ||
                           cfg.attack == AttackKind::kProbabilisticCollusion ||
                           cfg.attack == AttackKind::kRefingerprint;
  require(!needs_model || model.has_value(), ErrorCode::kInvalidArgument,
          "this attack needs --model");
  const Grid& g = held[0].data.grid;
  std::vector<std::map<std::string, std::size_t>> index;
  for (const auto& h : held) index.push_back(detail::index_by_id(h.data));
  std::vector<LeakedTrajectory> out;
  for (std::size_t t = 0; t < held[0].data.trajectories.size(); ++t) {
    const std::string& id = held[0].data.trajectories[t].id;
    std::vector<FingerprintedTrajectory> copies;
    for (std::size_t k = 0; k < held.size(); ++k) {
      copies.push_back(FingerprintedTrajectory::from(
          held[k].data.trajectories[detail::resolve(index[k], id)]));
    }
    Rng rng(derive_seed(cfg.master_seed, seed_stream::kAttack, t));
    switch (cfg.attack) {
      case AttackKind::kNone:
        out.push_back(leak(copies[0]));
        break;
      case AttackKind::kRandomFlip:
        out.push_back(random_flip(copies[0], g, ac.p_r, rng));
        break;
      case AttackKind::kCorrelationFlip:
        out.push_back(correlation_flip(copies[0], *model, ac.tau_attack, ac.p_c, rng));
        break;
      case AttackKind::kMajorityCollusion:
        out.push_back(majority_collusion(copies, rng));
        break;
      case AttackKind::kProbabilisticCollusion:
        out.push_back(probabilistic_collusion(copies, *model, ac.p_e, ac.tau_attack, rng));
        break;
      case AttackKind::kRefingerprint:
        out.push_back(refingerprint(copies[0], *model, ac.p_a, 0.005, 0.5, rng));
        break;
    }
  }
  save_dataset(p.output, make_dataset(g, out), Role::kLeaked, cfg,
               {{"attack", std::string(attack_name(cfg.attack))}});
  std::cout << "attack: " << attack_name(cfg.attack) << " on " << held.size() << " copies -> "
            << p.output << '\n';
  return 0;
}

int cmd_detect(const Settings& s, const Paths& p) {
  const ExperimentConfig base = load_config(s);
  const Loaded leaked = load_dataset(p.leaked);
  require_role(leaked, Role::kLeaked, p.leaked);
  const Manifest dist = read_manifest((fs::path(p.copies) / "distribution.json").string());
  ExperimentConfig cfg;
  try {
    apply_config(cfg, dist.extra.at("config").get<KeyValues>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad distribution manifest: ") + e.what());
  }
  AggregateReport report;
  if (!is_code_scheme(cfg.scheme)) {
    std::vector<CopyRecord> records;
    for (int a = 0; a < cfg.analyzers; ++a) {
      Loaded copy = load_dataset(analyzer_file(p.copies, a));
      records.push_back({a, copy.manifest.seed, std::move(copy.data)});
    }
    report = detect_dataset(leaked.data, records);
  } else {
    require(!p.source.empty() && !p.model.empty(), ErrorCode::kInvalidArgument,
            "code schemes need --source and --model to rebuild the marks");
    const Loaded src = load_dataset(p.source);
    const MarkovModel m = load_model(p.model);
    const CopyFactory factory(shareable(src, dist.extra.value("no_dp", false), p.source), m,
                              cfg.scheme_config(), cfg.analyzers, cfg.master_seed);
    report = detect_dataset_codes(leaked.data, make_dataset(src.data.grid, [&] {
                                    std::vector<PostProcessedTrajectory> v;
                                    for (std::size_t t = 0; t < factory.trajectories(); ++t) {
                                      v.push_back(factory.source(t));
                                    }
                                    return v;
                                  }()),
                                  *factory.code());
  }
  std::vector<std::string> ids;
  for (const auto& t : leaked.data.trajectories) ids.push_back(t.id);
  std::ostringstream out;
  write_report_csv(out, report, ids);
  json extra = report_manifest(report, ids);
  extra["scheme"] = std::string(scheme_name(cfg.scheme));
  write_with_manifest(p.output, out.str(),
                      {Role::kLeaked, base.master_seed, config_hash(cfg), extra});
  std::cout << "detect: accused analyzer " << report.final_accused
            << (report.tie ? " (tie)" : "") << " -> " << p.output << '\n';
  return 0;
}

int cmd_utility(const Settings& s, const Paths& p) {
  const ExperimentConfig cfg = load_config(s);
  const Loaded original = load_dataset(p.original);
  const Loaded released = load_dataset(p.released);
  require(original.data.grid == released.data.grid, ErrorCode::kInvalidArgument,
          "datasets use different grids");
  Rng rng(derive_seed(cfg.master_seed, seed_stream::kWorkload));
  const auto r = evaluate_utility(original.data, released.data, default_workload(original.data, rng));
  std::ostringstream out;
  out << std::setprecision(10)
      << "qa_points_avre,qa_patterns_avre,popularity_kt,trip_error_jsd,diameter_error_jsd,dtw_mean\n"
      << r.qa_points_avre << ',' << r.qa_patterns_avre << ',' << r.popularity_kt << ','
      << r.trip_error_jsd << ',' << r.diameter_error_jsd << ',' << r.dtw_mean << '\n';
  write_with_manifest(p.output, out.str(),
                      {released.manifest.role, cfg.master_seed, config_hash(cfg), json::object()});
  std::cout << out.str();
  return 0;
}

int cmd_experiment(const Settings& s, const Paths& p, const std::string& kind,
                   const std::vector<std::string>& scheme_names) {
  const ExperimentConfig cfg = load_config(s);
  std::ostringstream out;
  out << std::setprecision(10);
  if (kind == "robustness") {
    out << "scheme,attack,sweep_variable,sweep_value,trials,successes,ties,detection_accuracy\n";
    for (const RunResult& r : run_robustness(cfg)) {
      out << scheme_name(r.scheme) << ',' << attack_name(r.attack) << ',' << cfg.sweep_variable
          << ',' << r.sweep_value << ',' << r.trials << ',' << r.successes << ',' << r.ties << ','
          << r.detection_accuracy << '\n';
    }
  } else if (kind == "utility") {
    std::vector<Scheme> schemes;
    try {
      for (const auto& n : scheme_names) schemes.push_back(parse_scheme(n));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    out << "scheme,epsilon,runs,qa_points_avre,qa_patterns_avre,popularity_kt,trip_error_jsd,"
           "diameter_error_jsd,dtw_mean,sd_qa_points_avre,sd_qa_patterns_avre,sd_popularity_kt,"
           "sd_trip_error_jsd,sd_diameter_error_jsd,sd_dtw_mean\n";
    for (const UtilityRow& r : run_utility(cfg, schemes)) {
      out << scheme_name(r.scheme) << ',' << r.epsilon << ',' << r.runs;
      for (double v : detail::utility_fields(r.mean)) out << ',' << v;
      for (double v : detail::utility_fields(r.stddev)) out << ',' << v;
      out << '\n';
    }
  } else {
    throw ConfigError("experiment kind must be robustness or utility, got '" + kind + "'");
  }
  write_with_manifest(p.output, out.str(),
                      {Role::kRaw, cfg.master_seed, config_hash(cfg),
                       {{"kind", kind}, {"config", to_key_values(cfg)}}});
  std::cout << out.str();
  return 0;
}

int cmd_bench(const Settings& s, const Paths& p, std::size_t count,
              const std::vector<std::size_t>& lengths, int repeats) {
  const ExperimentConfig cfg = load_config(s);
  std::ostringstream out;
  out << std::setprecision(6) << "length,count,seconds\n";
  for (const TimingRow& r : timing_benchmark(count, lengths, cfg.master_seed, repeats, cfg.grid_n)) {
    out << r.length << ',' << r.count << ',' << r.seconds << '\n';
  }
  if (!p.output.empty()) {
    write_with_manifest(p.output, out.str(),
                        {Role::kRaw, cfg.master_seed, config_hash(cfg), {{"kind", "bench"}}});
  }
  std::cout << out.str();
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Fingerprinting of differentially private trajectory data"};
  app.require_subcommand(1);
  Settings s;
  Paths p;

  auto* pre = app.add_subcommand("preprocess", "clip, resample and discretize point trajectories");
  double interval = 0.0;
  std::size_t min_len = 2;
  pre->add_option("--input", p.input, "point CSV (traj_id,seq,x,y[,t])")->required();
  pre->add_option("--grid", p.grid, "grid file (n, x_min, y_min, x_max, y_max)")->required();
  pre->add_option("--output", p.output, "cell CSV")->required();
  pre->add_option("--interval", interval, "resampling interval; 0 keeps the points");
  pre->add_option("--min-length", min_len, "shortest fragment kept after clipping");

  auto* model = app.add_subcommand("build-model", "estimate the public 2-gram model");
  model->add_option("--input", p.input, "raw corpus cell CSV")->required();
  model->add_option("--output", p.output, "model CSV")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic city dataset");
  synth->add_option("--output", p.output, "raw cell CSV")->required();
  synth->add_option("--model", p.model,
                    "model CSV: drawn from if it exists, otherwise the city model is written here");

  auto* protect = app.add_subcommand("protect", "release raw data through PIM");
  protect->add_option("--input", p.input, "raw cell CSV")->required();
  protect->add_option("--model", p.model, "model CSV")->required();
  protect->add_option("--output", p.output, "noisy cell CSV")->required();

  auto* post = app.add_subcommand("postprocess", "restore correlations in a noisy release");
  post->add_option("--input", p.input, "noisy cell CSV")->required();
  post->add_option("--model", p.model, "model CSV")->required();
  post->add_option("--output", p.output, "post-processed cell CSV")->required();

  auto* fp = app.add_subcommand("fingerprint", "produce one fingerprinted copy per analyzer");
  bool no_dp = false;
  fp->add_option("--input", p.input, "post-processed cell CSV")->required();
  fp->add_option("--model", p.model, "model CSV")->required();
  fp->add_option("--outdir", p.copies, "directory for the copies")->required();
  fp->add_flag("--no-dp", no_dp, "fingerprint raw data directly (no privacy)");

  auto* attack = app.add_subcommand("attack", "attack one or more fingerprinted copies");
  attack->add_option("--input", p.inputs, "copy CSV(s); several for collusion")->required();
  attack->add_option("--model", p.model, "model CSV (correlation-aware attacks)");
  attack->add_option("--output", p.output, "leaked cell CSV")->required();

  auto* detect = app.add_subcommand("detect", "attribute a leaked dataset to an analyzer");
  detect->add_option("--leaked", p.leaked, "leaked cell CSV")->required();
  detect->add_option("--copies", p.copies, "directory written by fingerprint")->required();
  detect->add_option("--source", p.source, "shared dataset (code schemes)");
  detect->add_option("--model", p.model, "model CSV (code schemes)");
  detect->add_option("--output", p.output, "report CSV")->required();

  auto* util = app.add_subcommand("utility", "compare a released dataset with the original");
  util->add_option("--original", p.original, "original cell CSV")->required();
  util->add_option("--released", p.released, "released cell CSV")->required();
  util->add_option("--output", p.output, "utility CSV")->required();

  auto* exp = app.add_subcommand("experiment", "Monte Carlo robustness or utility sweep");
  std::string kind = "robustness";
  std::vector<std::string> schemes{"dsfs", "bs", "tardos", "pfs"};
  exp->add_option("--kind", kind, "robustness or utility");
  exp->add_option("--schemes", schemes, "schemes for utility runs")->delimiter(',');
  exp->add_option("--output", p.output, "result CSV")->required();

  auto* bench = app.add_subcommand("bench", "DSFS fingerprinting throughput");
  std::size_t count = 100;
  std::vector<std::size_t> lengths{100, 200, 300, 400, 500};
  int repeats = 3;
  bench->add_option("--count", count, "trajectories per dataset");
  bench->add_option("--lengths", lengths, "trajectory lengths")->delimiter(',');
  bench->add_option("--repeats", repeats, "best-of repeats");
  bench->add_option("--output", p.output, "timing CSV");

  for (CLI::App* cmd : {pre, model, synth, protect, post, fp, attack, detect, util, exp, bench}) {
    add_settings(cmd, s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    if (*pre) return cmd_preprocess(s, p, interval, min_len);
    if (*model) return cmd_build_model(s, p);
    if (*synth) return cmd_synth(s, p);
    if (*protect) return cmd_protect(s, p);
    if (*post) return cmd_postprocess(s, p);
    if (*fp) return cmd_fingerprint(s, p, no_dp);
    if (*attack) return cmd_attack(s, p);
    if (*detect) return cmd_detect(s, p);
    if (*util) return cmd_utility(s, p);
    if (*exp) return cmd_experiment(s, p, kind, schemes);
    if (*bench) return cmd_bench(s, p, count, lengths, repeats);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument ? kConfigExit : kDataExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataExit;
  }
  return kConfigExit;
}

}  // namespace
}  // namespace trajfp

int main(int argc, char** argv) { return trajfp::run(argc, argv); }
