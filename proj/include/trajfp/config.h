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

// Flat key=value form of ExperimentConfig. Keys match the field names; lists
// are comma-separated.

#ifndef TRAJFP_CONFIG_H_
#define TRAJFP_CONFIG_H_

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/harness.h"
#include "trajfp/io.h"

namespace trajfp {

namespace detail {

inline double config_number(const std::string& key, const std::string& v) {
  try {
    return parse_number<double>(v, 0);
  } catch (const Error&) {
    throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': not a number");
  }
}

inline int config_int(const std::string& key, const std::string& v) {
  const double x = config_number(key, v);
  if (x != static_cast<double>(static_cast<int>(x))) {
    throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': not an integer");
  }
  return static_cast<int>(x);
}

inline std::vector<double> config_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split(v)) {
    if (!item.empty()) out.push_back(config_number(key, item));
  }
  return out;
}

inline bool config_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': not a boolean");
}

inline std::string join(const std::vector<double>& xs) {
  std::ostringstream ss;
  ss.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) ss << (i ? "," : "") << xs[i];
  return ss.str();
}

inline std::string num(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

}  // namespace detail

// Applies every key; unknown keys are configuration errors.
inline void apply_config(ExperimentConfig& cfg, const KeyValues& kv) {
  using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
  auto real = [](double ExperimentConfig::*f) -> Setter {
    return [f](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.*f = detail::config_number(k, v);
    };
  };
  auto integer = [](int ExperimentConfig::*f) -> Setter {
    return [f](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.*f = detail::config_int(k, v);
    };
  };
  auto list = [](std::vector<double> ExperimentConfig::*f) -> Setter {
    return [f](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.*f = detail::config_list(k, v);
    };
  };
  static const std::map<std::string, Setter> kKeys{
      {"grid_n", integer(&ExperimentConfig::grid_n)},
      {"trajectory_count", integer(&ExperimentConfig::trajectory_count)},
      {"trajectory_length", integer(&ExperimentConfig::trajectory_length)},
      {"analyzers", integer(&ExperimentConfig::analyzers)},
      {"scheme", [](ExperimentConfig& c, const std::string&,
                    const std::string& v) { c.scheme = parse_scheme(v); }},
      {"attack", [](ExperimentConfig& c, const std::string&,
                    const std::string& v) { c.attack = parse_attack(v); }},
      {"sweep_variable", [](ExperimentConfig& c, const std::string&,
                            const std::string& v) { c.sweep_variable = v; }},
      {"sweep_values", list(&ExperimentConfig::sweep_values)},
      {"trials", integer(&ExperimentConfig::trials)},
      {"master_seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         try {
           c.master_seed = detail::parse_number<std::uint64_t>(v, 0);
         } catch (const Error&) {
           throw Error(ErrorCode::kInvalidArgument, "config key '" + k + "': not a seed");
         }
       }},
      {"epsilons", list(&ExperimentConfig::epsilons)},
      {"tau", real(&ExperimentConfig::tau)},
      {"theta", real(&ExperimentConfig::theta)},
      {"p", real(&ExperimentConfig::p)},
      {"delta", real(&ExperimentConfig::delta)},
      {"p_r", real(&ExperimentConfig::p_r)},
      {"p_c", real(&ExperimentConfig::p_c)},
      {"c", integer(&ExperimentConfig::c)},
      {"omega", real(&ExperimentConfig::omega)},
      {"p_e", real(&ExperimentConfig::p_e)},
      {"p_a", real(&ExperimentConfig::p_a)},
      {"dp", [](ExperimentConfig& c, const std::string& k,
                const std::string& v) { c.dp = detail::config_bool(k, v); }},
      {"epsilon", real(&ExperimentConfig::epsilon)},
      {"isotropic_samples", integer(&ExperimentConfig::isotropic_samples)},
      {"leaked_trajectories", integer(&ExperimentConfig::leaked_trajectories)},
      {"data_source", [](ExperimentConfig& c, const std::string&,
                         const std::string& v) { c.data_source = v; }},
      {"model_corpus", integer(&ExperimentConfig::model_corpus)},
      {"gps_jitter", real(&ExperimentConfig::gps_jitter)},
      {"walker_speed", list(&ExperimentConfig::walker_speed)},
      {"threads", integer(&ExperimentConfig::threads)},
  };
  for (const auto& [key, value] : kv) {
    const auto it = kKeys.find(key);
    if (it == kKeys.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
}

inline KeyValues to_key_values(const ExperimentConfig& c) {
  using detail::num;
  return {
      {"grid_n", num(c.grid_n)},
      {"trajectory_count", num(c.trajectory_count)},
      {"trajectory_length", num(c.trajectory_length)},
      {"analyzers", num(c.analyzers)},
      {"scheme", std::string(scheme_name(c.scheme))},
      {"attack", std::string(attack_name(c.attack))},
      {"sweep_variable", c.sweep_variable},
      {"sweep_values", detail::join(c.sweep_values)},
      {"trials", num(c.trials)},
      {"master_seed", std::to_string(c.master_seed)},
      {"epsilons", detail::join(c.epsilons)},
      {"tau", num(c.tau)},
      {"theta", num(c.theta)},
      {"p", num(c.p)},
      {"delta", num(c.delta)},
      {"p_r", num(c.p_r)},
      {"p_c", num(c.p_c)},
      {"c", num(c.c)},
      {"omega", num(c.omega)},
      {"p_e", num(c.p_e)},
      {"p_a", num(c.p_a)},
      {"dp", c.dp ? "true" : "false"},
      {"epsilon", num(c.epsilon)},
      {"isotropic_samples", num(c.isotropic_samples)},
      {"leaked_trajectories", num(c.leaked_trajectories)},
      {"data_source", c.data_source},
      {"model_corpus", num(c.model_corpus)},
      {"gps_jitter", num(c.gps_jitter)},
      {"walker_speed", detail::join(c.walker_speed)},
      {"threads", num(c.threads)},
  };
}

// Thread count does not change results, so it is left out of the hash.
inline std::string config_hash(const ExperimentConfig& c) {
  KeyValues kv = to_key_values(c);
  kv.erase("threads");
  return config_hash(kv);
}

}  // namespace trajfp

#endif  // TRAJFP_CONFIG_H_
