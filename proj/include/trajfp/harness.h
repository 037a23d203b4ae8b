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

// Synthetic mobility data and the seeded Monte Carlo experiments built on
// the library: robustness of detection under attacks, utility of protected
// and fingerprinted data, and fingerprinting throughput.
//
// Seeds: master -> kData (city, model corpus, target dataset) and
// master -> kTrial(i) -> {kSelection, kPrivacy, kAttack, copies}. Trial i
// sees the same data, attackers, and noise at every sweep value.

#ifndef TRAJFP_HARNESS_H_
#define TRAJFP_HARNESS_H_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "trajfp/attacks.h"
#include "trajfp/detect.h"
#include "trajfp/distribute.h"
#include "trajfp/error.h"
#include "trajfp/fingerprint.h"
#include "trajfp/geo.h"
#include "trajfp/markov.h"
#include "trajfp/pim.h"
#include "trajfp/postprocess.h"
#include "trajfp/rng.h"
#include "trajfp/utility.h"

namespace trajfp {

// A grid city: a few full-length horizontal and vertical roads.
struct City {
  Grid grid;
  std::vector<int> rows;  // y of horizontal roads
  std::vector<int> cols;  // x of vertical roads

  bool on_row(Cell c) const { return std::binary_search(rows.begin(), rows.end(), c.iy); }
  bool on_col(Cell c) const { return std::binary_search(cols.begin(), cols.end(), c.ix); }
};

inline City make_city(int n, Rng& rng) {
  City city{Grid(n), {}, {}};
  const int roads = std::max(2, n / 5);
  auto pick = [&](std::vector<int>& out) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < roads; ++k) {
      const std::size_t j = k + uniform_index(rng, all.size() - k);
      std::swap(all[static_cast<std::size_t>(k)], all[j]);
      out.push_back(all[static_cast<std::size_t>(k)]);
    }
    std::sort(out.begin(), out.end());
  };
  pick(city.rows);
  pick(city.cols);
  return city;
}

struct WalkerParams {
  std::vector<double> speed{0.1, 0.7, 0.2};  // Pr[speed = i cells per step]
  double p_turn = 0.3;  // turn at an intersection
  double p_jitter = 0.0;  // recorded cell replaced by a random neighbor (GPS error)
};

// Vehicles driving along the city's roads at a random speed each step,
// turning at intersections and bouncing off the border.
inline std::vector<Trajectory> walker_generate(const City& city, std::size_t count,
                                               std::size_t length, Rng& rng,
                                               const WalkerParams& wp = {},
                                               const std::string& id_prefix = "t") {
  require(!city.rows.empty() || !city.cols.empty(), ErrorCode::kInvalidArgument,
          "city has no roads");
  const int n = city.grid.n();
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Cell c;
    int dx = 0, dy = 0;
    const double p_row = static_cast<double>(city.rows.size()) /
                         static_cast<double>(city.rows.size() + city.cols.size());
    if (bernoulli(rng, p_row)) {
      c = {static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n))),
           city.rows[uniform_index(rng, city.rows.size())]};
      dx = bernoulli(rng, 0.5) ? 1 : -1;
    } else {
      c = {city.cols[uniform_index(rng, city.cols.size())],
           static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)))};
      dy = bernoulli(rng, 0.5) ? 1 : -1;
    }
    Trajectory t{id_prefix + std::to_string(i), Role::kRaw, {}};
    t.cells.reserve(length);
    for (std::size_t j = 0; j < length; ++j) {
      if (wp.p_jitter > 0.0 && bernoulli(rng, wp.p_jitter)) {
        const auto hood = neighbors(c, city.grid, /*include_self=*/false);
        t.cells.push_back(hood[uniform_index(rng, hood.size())]);
      } else {
        t.cells.push_back(c);
      }
      const int speed = static_cast<int>(sample_weighted(wp.speed, rng));
      for (int s = 0; s < speed; ++s) {
        if (city.on_row(c) && city.on_col(c) && bernoulli(rng, wp.p_turn)) {
          const int sign = bernoulli(rng, 0.5) ? 1 : -1;
          if (dx != 0) {
            dx = 0;
            dy = sign;
          } else {
            dy = 0;
            dx = sign;
          }
        }
        Cell next{c.ix + dx, c.iy + dy};
        if (!city.grid.contains(next)) {
          dx = -dx;
          dy = -dy;
          next = {c.ix + dx, c.iy + dy};
        }
        c = next;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Trajectories drawn from a Markov model: start proportional to visits, then
// `length - 1` transitions.
inline Dataset synth_generate(const MarkovModel& m, std::size_t count, std::size_t length,
                              Rng& rng) {
  require(length >= 1, ErrorCode::kInvalidArgument, "length must be >= 1");
  const Grid& g = m.grid();
  std::vector<double> start(m.visits().begin(), m.visits().end());
  double total = 0.0;
  for (double v : start) total += v;
  if (total <= 0.0) start.assign(start.size(), 1.0);
  Dataset d{g, {}};
  d.trajectories.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Trajectory t{"s" + std::to_string(i), Role::kRaw, {}};
    t.cells.reserve(length);
    std::size_t cur = sample_weighted(start, rng);
    t.cells.push_back(g.cell(cur));
    std::vector<double> w;
    for (std::size_t j = 1; j < length; ++j) {
      const auto row = m.row(cur);
      w.clear();
      for (const Transition& tr : row) w.push_back(tr.prob);
      cur = row[sample_weighted(w, rng)].to;
      t.cells.push_back(g.cell(cur));
    }
    d.trajectories.push_back(std::move(t));
  }
  return d;
}

// Open-field model: from every cell, moves of up to two cells per axis with
// weight exp(-|d|^2 / 2), truncated at the border.
inline MarkovModel open_field_model(const Grid& g) {
  std::vector<std::vector<Transition>> rows(g.cell_count());
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Cell c = g.cell(i);
    double total = 0.0;
    for (int dx = -2; dx <= 2; ++dx) {
      for (int dy = -2; dy <= 2; ++dy) {
        const Cell to{c.ix + dx, c.iy + dy};
        if (!g.contains(to)) continue;
        const double w = std::exp(-0.5 * (dx * dx + dy * dy));
        rows[i].push_back({static_cast<std::uint32_t>(g.index(to)), w});
        total += w;
      }
    }
    for (Transition& t : rows[i]) t.prob /= total;
  }
  return MarkovModel(g, std::move(rows), std::vector<double>(g.cell_count(), 1.0));
}

// Straight west-to-east trajectory along row y, one cell per step.
inline RawTrajectory straight_line(const Grid& g, int x0, int y, std::size_t length,
                                   const std::string& id = "line") {
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < length; ++j) {
    const Cell c{x0 + static_cast<int>(j), y};
    require(g.contains(c), ErrorCode::kOutOfBounds, "line leaves the grid");
    cells.push_back(c);
  }
  return RawTrajectory(id, std::move(cells));
}

struct ExperimentConfig {
  int grid_n = 30;
  int trajectory_count = 100;
  int trajectory_length = 100;
  int analyzers = 100;
  Scheme scheme = Scheme::kDsfs;
  AttackKind attack = AttackKind::kNone;
  std::string sweep_variable = "p";
  std::vector<double> sweep_values{0.4};
  int trials = 200;
  std::uint64_t master_seed = 20260101;
  std::vector<double> epsilons{0.9, 1.7, 2.5};

  // Defaults from the reference parameter setting.
  double tau = 0.005;
  double theta = 0.5;
  double p = 0.4;
  double delta = 0.01;
  double p_r = 0.8;
  double p_c = 0.8;
  int c = 3;
  double omega = 0.01;
  double p_e = 0.4;
  double p_a = 0.4;

  bool dp = false;           // PIM-protect before fingerprinting
  double epsilon = 1.7;      // privacy budget of robustness runs
  int isotropic_samples = 4096;
  int leaked_trajectories = 1;  // leaked per trial, detected by vote
  std::string data_source = "walker";  // or "synth" (drawn from the model)
  int model_corpus = 1000;   // held-out trajectories behind the public model
  double gps_jitter = 0.0;   // walker recording noise
  std::vector<double> walker_speed{0.1, 0.7, 0.2};  // Pr[i cells per step]
  int threads = 0;           // 0: hardware concurrency

  void validate() const {
    require(grid_n >= 2, ErrorCode::kInvalidArgument, "grid_n must be >= 2");
    require(trajectory_count >= 1 && trajectory_length >= 1, ErrorCode::kInvalidArgument,
            "dataset must be nonempty");
    require(analyzers >= 1, ErrorCode::kInvalidArgument, "analyzers must be >= 1");
    require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be >= 1");
    require(!sweep_values.empty(), ErrorCode::kInvalidArgument, "sweep values are empty");
    require(leaked_trajectories >= 1 && leaked_trajectories <= trajectory_count,
            ErrorCode::kInvalidArgument, "leaked_trajectories out of range");
    require(data_source == "walker" || data_source == "synth", ErrorCode::kInvalidArgument,
            "data_source must be walker or synth");
    require(model_corpus >= 1, ErrorCode::kInvalidArgument, "model_corpus must be >= 1");
    attack_config().validate();
    FingerprintConfig{p, tau, theta}.validate();
    require(c >= 1, ErrorCode::kInvalidArgument, "c must be >= 1");
    require(omega > 0.0 && omega < 1.0, ErrorCode::kInvalidArgument, "omega must be in (0, 1)");
    PimParams{epsilon, delta, isotropic_samples}.validate();
  }

  SchemeConfig scheme_config() const {
    SchemeConfig s;
    s.scheme = scheme;
    s.fp = {p, tau, theta};
    s.sigma = tau;
    s.c = c;
    s.omega = omega;
    return s;
  }

  AttackConfig attack_config() const { return {p_r, p_c, tau, p_e, c, p_a}; }
};

// Sets one named parameter; used by sweeps and config files.
inline void set_parameter(ExperimentConfig& cfg, const std::string& name, double v) {
  static const std::map<std::string, std::function<void(ExperimentConfig&, double)>> kSetters{
      {"p", [](ExperimentConfig& c, double x) { c.p = x; }},
      {"tau", [](ExperimentConfig& c, double x) { c.tau = x; }},
      {"theta", [](ExperimentConfig& c, double x) { c.theta = x; }},
      {"delta", [](ExperimentConfig& c, double x) { c.delta = x; }},
      {"p_r", [](ExperimentConfig& c, double x) { c.p_r = x; }},
      {"p_c", [](ExperimentConfig& c, double x) { c.p_c = x; }},
      {"p_e", [](ExperimentConfig& c, double x) { c.p_e = x; }},
      {"p_a", [](ExperimentConfig& c, double x) { c.p_a = x; }},
      {"c", [](ExperimentConfig& c, double x) { c.c = static_cast<int>(std::lround(x)); }},
      {"omega", [](ExperimentConfig& c, double x) { c.omega = x; }},
      {"epsilon", [](ExperimentConfig& c, double x) { c.epsilon = x; }},
      {"analyzers",
       [](ExperimentConfig& c, double x) { c.analyzers = static_cast<int>(std::lround(x)); }},
      {"leaked_trajectories",
       [](ExperimentConfig& c, double x) {
         c.leaked_trajectories = static_cast<int>(std::lround(x));
       }},
  };
  const auto it = kSetters.find(name);
  if (it == kSetters.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown sweep variable '" + name + "'");
  }
  it->second(cfg, v);
}

// City, public model, and target dataset of an experiment.
struct Environment {
  City city;
  MarkovModel model;
  Dataset raw;
};

inline Environment make_environment(const ExperimentConfig& cfg) {
  Rng rng(derive_seed(cfg.master_seed, seed_stream::kData));
  City city = make_city(cfg.grid_n, rng);
  const auto corpus_len = static_cast<std::size_t>(cfg.trajectory_length);
  WalkerParams wp;
  wp.p_jitter = cfg.gps_jitter;
  wp.speed = cfg.walker_speed;
  Dataset corpus{city.grid, walker_generate(city, static_cast<std::size_t>(cfg.model_corpus),
                                            corpus_len, rng, wp, "corpus")};
  MarkovModel model = build_model(corpus);
  Dataset raw{city.grid, {}};
  if (cfg.data_source == "walker") {
    raw.trajectories = walker_generate(city, static_cast<std::size_t>(cfg.trajectory_count),
                                       corpus_len, rng, wp);
  } else {
    raw = synth_generate(model, static_cast<std::size_t>(cfg.trajectory_count), corpus_len, rng);
  }
  return {std::move(city), std::move(model), std::move(raw)};
}

// Runs body(i) for i in [0, n) on `threads` workers. Each i must write only
// its own output slot.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Shares one raw trajectory: PIM release plus post-processing, or the
// explicit non-private crossing.
inline PostProcessedTrajectory share(const RawTrajectory& raw, const MarkovModel& m,
                                     const ExperimentConfig& cfg, Rng& rng) {
  if (!cfg.dp) return share_without_privacy(raw);
  const PimParams params{cfg.epsilon, cfg.delta, cfg.isotropic_samples};
  return post_process(pim_release(raw, m, params, rng), m, cfg.tau);
}

struct TrialOutcome {
  bool success = false;
  bool tie = false;
  int accused = 0;
  std::vector<int> attackers;
};

// One trial: pick the leaked trajectories and the attacker(s), distribute
// copies of those trajectories, attack, and detect.
inline TrialOutcome run_trial(const Environment& env, const ExperimentConfig& cfg,
                              std::size_t trial) {
  const std::uint64_t trial_seed = derive_seed(cfg.master_seed, seed_stream::kTrial, trial);
  Rng select(derive_seed(trial_seed, seed_stream::kSelection));
  const std::size_t n_traj = env.raw.trajectories.size();
  const int colluders = is_collusion(cfg.attack) ? std::min(cfg.c, cfg.analyzers) : 1;

  TrialOutcome out;
  std::vector<int> analyzer_pool(static_cast<std::size_t>(cfg.analyzers));
  for (int a = 0; a < cfg.analyzers; ++a) analyzer_pool[static_cast<std::size_t>(a)] = a;
  for (int k = 0; k < colluders; ++k) {
    const std::size_t j = k + uniform_index(select, analyzer_pool.size() - k);
    std::swap(analyzer_pool[static_cast<std::size_t>(k)], analyzer_pool[j]);
    out.attackers.push_back(analyzer_pool[static_cast<std::size_t>(k)]);
  }
  std::vector<std::size_t> traj_pool(n_traj);
  for (std::size_t t = 0; t < n_traj; ++t) traj_pool[t] = t;
  std::vector<std::size_t> leaked_ids;
  for (int k = 0; k < cfg.leaked_trajectories; ++k) {
    const std::size_t j = k + uniform_index(select, n_traj - k);
    std::swap(traj_pool[static_cast<std::size_t>(k)], traj_pool[j]);
    leaked_ids.push_back(traj_pool[static_cast<std::size_t>(k)]);
  }

  std::vector<PostProcessedTrajectory> sources;
  for (std::size_t t : leaked_ids) {
    Rng privacy(derive_seed(trial_seed, seed_stream::kPrivacy, t));
    sources.push_back(share(RawTrajectory::from(env.raw.trajectories[t]), env.model, cfg, privacy));
  }

  if (cfg.analyzers == 1 || (is_code_scheme(cfg.scheme) && cfg.analyzers < 2)) {
    out.success = true;
    return out;
  }
  const CopyFactory factory(sources, env.model, cfg.scheme_config(), cfg.analyzers, trial_seed,
                            leaked_ids);
  const AttackConfig ac = cfg.attack_config();
  std::vector<DetectionReport> reports;
  for (std::size_t k = 0; k < leaked_ids.size(); ++k) {
    Rng attack_rng(derive_seed(trial_seed, seed_stream::kAttack, leaked_ids[k]));
    std::vector<FingerprintedTrajectory> all;
    std::vector<FingerprintedTrajectory> held;
    if (!is_code_scheme(cfg.scheme)) {
      all = factory.copies_of(k);
      for (int a : out.attackers) held.push_back(all[static_cast<std::size_t>(a)]);
    } else {
      for (int a : out.attackers) held.push_back(factory.copy(a, k));
    }
    const LeakedTrajectory leaked = [&]() -> LeakedTrajectory {
      switch (cfg.attack) {
        case AttackKind::kNone:
          return leak(held[0]);
        case AttackKind::kRandomFlip:
          return random_flip(held[0], env.model.grid(), ac.p_r, attack_rng);
        case AttackKind::kCorrelationFlip:
          return correlation_flip(held[0], env.model, ac.tau_attack, ac.p_c, attack_rng);
        case AttackKind::kMajorityCollusion:
          if (held.size() < 2) return leak(held[0]);
          return majority_collusion(held, attack_rng);
        case AttackKind::kProbabilisticCollusion:
          if (held.size() < 2) return leak(held[0]);
          return probabilistic_collusion(held, env.model, ac.p_e, ac.tau_attack, attack_rng);
        case AttackKind::kRefingerprint:
          return refingerprint(held[0], env.model, ac.p_a, 0.005, 0.5, attack_rng);
      }
      throw Error(ErrorCode::kInvalidArgument, "unknown attack");
    }();
    if (is_code_scheme(cfg.scheme)) {
      reports.push_back(detect_code_trajectory(leaked, factory.source(k), factory.code()->marks[k],
                                               factory.code()->codebook));
    } else {
      reports.push_back(detect_trajectory(leaked, all));
    }
  }
  const AggregateReport agg = aggregate(std::move(reports), cfg.analyzers);
  out.accused = agg.final_accused;
  out.tie = agg.tie;
  out.success = std::find(out.attackers.begin(), out.attackers.end(), agg.final_accused) !=
                out.attackers.end();
  return out;
}

struct RunResult {
  double sweep_value = 0.0;
  double detection_accuracy = 0.0;
  int successes = 0;
  int trials = 0;
  int ties = 0;
  Scheme scheme = Scheme::kDsfs;
  AttackKind attack = AttackKind::kNone;
};

inline std::vector<RunResult> run_robustness(const ExperimentConfig& cfg,
                                             const Environment* env = nullptr) {
  cfg.validate();
  std::optional<Environment> own;
  if (env == nullptr) {
    own.emplace(make_environment(cfg));
    env = &*own;
  }
  std::vector<RunResult> results;
  for (double v : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    set_parameter(point, cfg.sweep_variable, v);
    point.validate();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(point.trials));
    parallel_for(outcomes.size(), point.threads,
                 [&](std::size_t i) { outcomes[i] = run_trial(*env, point, i); });
    RunResult r{v, 0.0, 0, point.trials, 0, point.scheme, point.attack};
    for (const auto& o : outcomes) {
      r.successes += o.success ? 1 : 0;
      r.ties += o.tie ? 1 : 0;
    }
    r.detection_accuracy = static_cast<double>(r.successes) / r.trials;
    results.push_back(r);
  }
  return results;
}

// Probability that a Bernoulli(q) majority of k independent votes is
// correct (strict majority; a lower bound for plurality voting).
inline double majority_vote_accuracy(double q, int k) {
  require(q >= 0.0 && q <= 1.0 && k >= 1, ErrorCode::kInvalidArgument,
          "need q in [0, 1] and k >= 1");
  if (q == 0.0 || q == 1.0) return q;
  double total = 0.0;
  for (int i = k / 2 + 1; i <= k; ++i) {
    const double log_term = std::lgamma(k + 1.0) - std::lgamma(i + 1.0) -
                            std::lgamma(k - i + 1.0) + i * std::log(q) +
                            (k - i) * std::log1p(-q);
    total += std::exp(log_term);
  }
  return total;
}

struct UtilityRow {
  Scheme scheme = Scheme::kDsfs;
  double epsilon = 0.0;
  int runs = 0;
  UtilityReport mean;
  UtilityReport stddev;
};

namespace detail {

inline std::vector<double> utility_fields(const UtilityReport& r) {
  return {r.qa_points_avre, r.qa_patterns_avre, r.popularity_kt,
          r.trip_error_jsd, r.diameter_error_jsd, r.dtw_mean};
}

inline UtilityReport utility_from(const std::vector<double>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

}  // namespace detail

// For each epsilon and scheme: PIM-protect the dataset, post-process,
// fingerprint one randomly chosen analyzer's copy, and compare to the
// original. `cfg.trials` runs per cell; runs share the noisy release across
// schemes.
inline std::vector<UtilityRow> run_utility(const ExperimentConfig& cfg,
                                           const std::vector<Scheme>& schemes,
                                           const Environment* env = nullptr) {
  cfg.validate();
  require(!cfg.epsilons.empty() && !schemes.empty(), ErrorCode::kInvalidArgument,
          "utility runs need epsilons and schemes");
  std::optional<Environment> own;
  if (env == nullptr) {
    own.emplace(make_environment(cfg));
    env = &*own;
  }
  Rng workload_rng(derive_seed(cfg.master_seed, seed_stream::kWorkload));
  const Workload workload = default_workload(env->raw, workload_rng);
  const auto raw = typed<Role::kRaw>(env->raw);
  const std::size_t runs = static_cast<std::size_t>(cfg.trials);

  std::vector<UtilityRow> rows;
  for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
    ExperimentConfig point = cfg;
    point.dp = true;
    point.epsilon = cfg.epsilons[e];
    // samples[run][scheme] -> report
    std::vector<std::vector<UtilityReport>> samples(runs,
                                                    std::vector<UtilityReport>(schemes.size()));
    parallel_for(runs, cfg.threads, [&](std::size_t run) {
      const std::uint64_t run_seed = derive_seed(cfg.master_seed, seed_stream::kTrial, run);
      std::vector<PostProcessedTrajectory> shared;
      for (std::size_t t = 0; t < raw.size(); ++t) {
        Rng privacy(derive_seed(run_seed, seed_stream::kPrivacy, t));
        shared.push_back(share(raw[t], env->model, point, privacy));
      }
      Rng select(derive_seed(run_seed, seed_stream::kSelection));
      const int analyzer = static_cast<int>(
          uniform_index(select, static_cast<std::size_t>(std::max(cfg.analyzers, 2))));
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        ExperimentConfig sc = point;
        sc.scheme = schemes[s];
        const CopyFactory factory(shared, env->model, sc.scheme_config(),
                                  std::max(cfg.analyzers, 2), run_seed);
        std::vector<FingerprintedTrajectory> copy;
        for (std::size_t t = 0; t < shared.size(); ++t) copy.push_back(factory.copy(analyzer, t));
        samples[run][s] = evaluate_utility(env->raw, make_dataset(env->raw.grid, copy), workload);
      }
    });
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      std::vector<double> mean(6, 0.0), sq(6, 0.0);
      for (std::size_t run = 0; run < runs; ++run) {
        const auto f = detail::utility_fields(samples[run][s]);
        for (std::size_t k = 0; k < 6; ++k) mean[k] += f[k];
      }
      for (double& m : mean) m /= static_cast<double>(runs);
      for (std::size_t run = 0; run < runs; ++run) {
        const auto f = detail::utility_fields(samples[run][s]);
        for (std::size_t k = 0; k < 6; ++k) sq[k] += (f[k] - mean[k]) * (f[k] - mean[k]);
      }
      for (double& v : sq) v = runs > 1 ? std::sqrt(v / static_cast<double>(runs - 1)) : 0.0;
      rows.push_back({schemes[s], point.epsilon, static_cast<int>(runs),
                      detail::utility_from(mean), detail::utility_from(sq)});
    }
  }
  return rows;
}

struct TimingRow {
  std::size_t length = 0;
  std::size_t count = 0;
  double seconds = 0.0;  // one fingerprinted dataset, best of `repeats`
};

// Wall-clock time to produce one analyzer's DSFS copy of `count` walker
// trajectories of each length.
inline std::vector<TimingRow> timing_benchmark(std::size_t count,
                                               const std::vector<std::size_t>& lengths,
                                               std::uint64_t seed, int repeats = 3,
                                               int grid_n = 30) {
  Rng rng(derive_seed(seed, seed_stream::kData));
  const City city = make_city(grid_n, rng);
  const MarkovModel model =
      build_model(Dataset{city.grid, walker_generate(city, 500, 100, rng, {}, "corpus")});
  std::vector<TimingRow> rows;
  for (std::size_t len : lengths) {
    std::vector<PostProcessedTrajectory> source;
    if (len > 0) {
      for (const Trajectory& t : walker_generate(city, count, len, rng)) {
        source.push_back(share_without_privacy(RawTrajectory::from(t)));
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, repeats); ++r) {
      const auto start = std::chrono::steady_clock::now();
      std::size_t sink = 0;
      for (std::size_t t = 0; t < source.size(); ++t) {
        Rng fp(derive_seed(seed, seed_stream::kTrajectory, t));
        sink += dsfs_fingerprint(source[t], model, FingerprintConfig{}, fp).size();
      }
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      best = std::min(best, dt.count());
      if (sink == static_cast<std::size_t>(-1)) best = 0.0;  // keep the work observable
    }
    rows.push_back({len, count, best});
  }
  return rows;
}

}  // namespace trajfp

#endif  // TRAJFP_HARNESS_H_
