// Copyright 2026 The dqsim Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqs/experiments.hpp"
#include "dqs/protocols.hpp"

namespace dqs {

struct RfFieldConfig {
  std::vector<double> amplitudes;
  std::vector<double> phases;
  double kappa = 1.0;

  bool operator==(const RfFieldConfig&) const = default;
};

// One flat parameter record shared by all CLI commands. Unknown keys are
// rejected on parse; each command validates the subset it uses.
struct ExperimentConfig {
  int M = 2;
  std::vector<double> weights;           // empty: equal weights
  std::vector<double> transmissivities;  // empty: uniform at `eta`
  double eta = 1.0;
  double photon_budget = 1.0;
  double n_S = 1.0;  // per-node photons for scaling and phase commands
  std::string kind = "entangled";
  std::string task = "displacement";
  std::vector<double> alpha;  // empty: zeros
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string out;  // empty: stdout
  std::string format = "json";
  std::vector<int> M_list = {1, 2, 4, 8, 16, 32};
  std::vector<double> eta_grid;    // empty: 0.05 .. 1.00 step 0.05
  std::vector<double> ratio_grid;  // empty: 0 .. 1 step 0.025
  double theta = 0.005;
  std::vector<double> lo_angles;  // empty: default quadratic grid
  RfFieldConfig field;

  bool operator==(const ExperimentConfig&) const = default;
};

inline void to_json(nlohmann::json& j, const RfFieldConfig& f) {
  j = nlohmann::json{{"amplitudes", f.amplitudes}, {"phases", f.phases}, {"kappa", f.kappa}};
}

inline void from_json(const nlohmann::json& j, RfFieldConfig& f) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "amplitudes" && key != "phases" && key != "kappa") {
      throw std::invalid_argument("unknown key in field config: " + key);
    }
  }
  f.amplitudes = j.value("amplitudes", f.amplitudes);
  f.phases = j.value("phases", f.phases);
  f.kappa = j.value("kappa", f.kappa);
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"M", c.M},
                     {"weights", c.weights},
                     {"transmissivities", c.transmissivities},
                     {"eta", c.eta},
                     {"photon_budget", c.photon_budget},
                     {"n_S", c.n_S},
                     {"kind", c.kind},
                     {"task", c.task},
                     {"alpha", c.alpha},
                     {"trials", c.trials},
                     {"seed", c.seed},
                     {"out", c.out},
                     {"format", c.format},
                     {"M_list", c.M_list},
                     {"eta_grid", c.eta_grid},
                     {"ratio_grid", c.ratio_grid},
                     {"theta", c.theta},
                     {"lo_angles", c.lo_angles},
                     {"field", c.field}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  static const std::vector<std::string> known = {
      "M",      "weights", "transmissivities", "eta",    "photon_budget", "n_S",       "kind",
      "task",   "alpha",   "trials",           "seed",   "out",           "format",    "M_list",
      "eta_grid", "ratio_grid", "theta",       "lo_angles", "field"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  c.M = j.value("M", c.M);
  c.weights = j.value("weights", c.weights);
  c.transmissivities = j.value("transmissivities", c.transmissivities);
  c.eta = j.value("eta", c.eta);
  c.photon_budget = j.value("photon_budget", c.photon_budget);
  c.n_S = j.value("n_S", c.n_S);
  c.kind = j.value("kind", c.kind);
  c.task = j.value("task", c.task);
  c.alpha = j.value("alpha", c.alpha);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.out = j.value("out", c.out);
  c.format = j.value("format", c.format);
  c.M_list = j.value("M_list", c.M_list);
  c.eta_grid = j.value("eta_grid", c.eta_grid);
  c.ratio_grid = j.value("ratio_grid", c.ratio_grid);
  c.theta = j.value("theta", c.theta);
  c.lo_angles = j.value("lo_angles", c.lo_angles);
  c.field = j.value("field", c.field);
}

namespace detail {

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

// Checks the fields every command relies on; throws std::invalid_argument
// with the offending field named in the message.
inline void validate_common(const ExperimentConfig& c) {
  if (c.M < 1) {
    throw std::invalid_argument("M must be >= 1");
  }
  if (!(c.photon_budget >= 0.0)) {
    throw std::invalid_argument("photon_budget must be >= 0");
  }
  if (!(c.n_S > 0.0)) {
    throw std::invalid_argument("n_S must be > 0");
  }
  if (!c.weights.empty() && static_cast<int>(c.weights.size()) != c.M) {
    throw std::invalid_argument("weights length must equal M");
  }
  if (!c.transmissivities.empty() && static_cast<int>(c.transmissivities.size()) != c.M) {
    throw std::invalid_argument("transmissivities length must equal M");
  }
  for (double eta : c.transmissivities) {
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("transmissivities entries must lie in (0, 1]");
    }
  }
  if (!(c.eta > 0.0 && c.eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
  if (!c.alpha.empty() && static_cast<int>(c.alpha.size()) != c.M) {
    throw std::invalid_argument("alpha length must equal M");
  }
  if (c.trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (c.kind != "entangled" && c.kind != "separable") {
    throw std::invalid_argument("kind must be 'entangled' or 'separable'");
  }
  if (c.format != "json" && c.format != "csv") {
    throw std::invalid_argument("format must be 'json' or 'csv'");
  }
  if (c.eta_grid.size() == 1) {
    throw std::invalid_argument("eta_grid needs at least two points");
  }
  for (double eta : c.eta_grid) {
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("eta_grid entries must lie in (0, 1]");
    }
  }
}

inline ProbeKind parse_kind(const std::string& kind) {
  if (kind == "entangled") {
    return ProbeKind::entangled;
  }
  if (kind == "separable") {
    return ProbeKind::separable;
  }
  throw std::invalid_argument("kind must be 'entangled' or 'separable'");
}

inline RfTask parse_rf_task(const std::string& task) {
  if (task == "avg_amplitude") {
    return RfTask::avg_amplitude;
  }
  if (task == "phase_diff_center") {
    return RfTask::phase_diff_center;
  }
  if (task == "phase_diff_edge") {
    return RfTask::phase_diff_edge;
  }
  throw std::invalid_argument("task must be one of avg_amplitude, phase_diff_center, phase_diff_edge");
}

// Materializes the sensing spec from a validated config. User weights are
// rescaled to sum |w_m| = 1.
inline SensorNetworkSpec spec_from_config(const ExperimentConfig& c) {
  validate_common(c);
  Eigen::VectorXd weights = c.weights.empty() ? Eigen::VectorXd::Constant(c.M, 1.0 / c.M)
                                              : detail::to_eigen(c.weights);
  Eigen::VectorXd etas = c.transmissivities.empty() ? Eigen::VectorXd::Constant(c.M, c.eta)
                                                    : detail::to_eigen(c.transmissivities);
  return SensorNetworkSpec::normalized(c.M, std::move(weights), std::move(etas), c.photon_budget,
                                       parse_kind(c.kind),
                                       c.task == "phase" ? SensingTask::phase : SensingTask::displacement);
}

inline Eigen::VectorXd alpha_from_config(const ExperimentConfig& c) {
  return c.alpha.empty() ? Eigen::VectorXd::Zero(c.M) : detail::to_eigen(c.alpha);
}

inline std::vector<double> eta_grid_from_config(const ExperimentConfig& c) {
  if (!c.eta_grid.empty()) {
    return c.eta_grid;
  }
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) {
    grid.push_back(0.05 * i);
  }
  return grid;
}

inline std::vector<double> ratio_grid_from_config(const ExperimentConfig& c) {
  if (!c.ratio_grid.empty()) {
    return c.ratio_grid;
  }
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) {
    grid.push_back(i / 40.0);
  }
  return grid;
}

}  // namespace dqs
