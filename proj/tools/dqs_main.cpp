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

// Command-line front end: parses an experiment config (JSON file plus flag
// overrides, flags win), dispatches to the protocol and experiment routines,
// and serializes results as JSON or CSV (CSV files get a .meta.json sidecar
// with the config echo and tool version).
//
// Exit codes: 0 success, 2 validation failure, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqs/config.hpp"
#include "dqs/experiments.hpp"
#include "dqs/fisher.hpp"
#include "dqs/io.hpp"
#include "dqs/protocols.hpp"
#include "dqs/version.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

// Values for the common flags, tracked separately so that only flags the
// user actually passed override the config file.
struct FlagOverrides {
  std::string config_path;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string out;
  std::string format;
  int modes = 0;
  double photon_budget = 0.0;
  double eta = 0.0;
  double n_s = 0.0;
  double theta = 0.0;
  std::string kind;
  std::string task;

  CLI::Option* opt_seed = nullptr;
  CLI::Option* opt_trials = nullptr;
  CLI::Option* opt_out = nullptr;
  CLI::Option* opt_format = nullptr;
  CLI::Option* opt_modes = nullptr;
  CLI::Option* opt_budget = nullptr;
  CLI::Option* opt_eta = nullptr;
  CLI::Option* opt_ns = nullptr;
  CLI::Option* opt_theta = nullptr;
  CLI::Option* opt_kind = nullptr;
  CLI::Option* opt_task = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    opt_seed = cmd->add_option("--seed", seed, "random seed (u64)");
    opt_trials = cmd->add_option("--trials", trials, "Monte-Carlo trials");
    opt_out = cmd->add_option("--out", out, "output path (default: stdout)");
    opt_format = cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    opt_modes = cmd->add_option("--M", modes, "number of sensor nodes");
    opt_budget = cmd->add_option("--photon-budget", photon_budget, "total mean photon number N_S");
    opt_eta = cmd->add_option("--eta", eta, "uniform transmissivity");
    opt_ns = cmd->add_option("--nS", n_s, "per-node mean photon number");
    opt_theta = cmd->add_option("--theta", theta, "true phase for the phase command");
    opt_kind = cmd->add_option("--kind", kind, "entangled or separable");
    opt_task = cmd->add_option("--task", task, "task name (rf commands)");
  }

  dqs::ExperimentConfig resolve() const {
    dqs::ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) {
        throw std::invalid_argument("config: cannot open file " + config_path);
      }
      nlohmann::json j;
      is >> j;
      config = j.get<dqs::ExperimentConfig>();
    }
    if (opt_seed->count() > 0) config.seed = seed;
    if (opt_trials->count() > 0) config.trials = trials;
    if (opt_out->count() > 0) config.out = out;
    if (opt_format->count() > 0) config.format = format;
    if (opt_modes->count() > 0) config.M = modes;
    if (opt_budget->count() > 0) config.photon_budget = photon_budget;
    if (opt_eta->count() > 0) config.eta = eta;
    if (opt_ns->count() > 0) config.n_S = n_s;
    if (opt_theta->count() > 0) config.theta = theta;
    if (opt_kind->count() > 0) config.kind = kind;
    if (opt_task->count() > 0) config.task = task;
    return config;
  }
};

void emit_json(const dqs::ExperimentConfig& config, nlohmann::json payload) {
  payload["config"] = config;
  payload["tool_version"] = dqs::kVersion;
  const std::string text = payload.dump(2) + "\n";
  if (config.out.empty()) {
    std::cout << text;
  } else {
    dqs::write_text_file(config.out, text);
  }
}

void emit_table(const dqs::ExperimentConfig& config, dqs::SweepTable table) {
  table.metadata.timestamp = dqs::iso8601_utc_now();
  if (config.format == "csv") {
    std::ostringstream csv;
    dqs::write_csv(csv, table);
    if (config.out.empty()) {
      std::cout << csv.str();
    } else {
      dqs::write_text_file(config.out, csv.str());
      nlohmann::json meta = dqs::metadata_json(table.metadata);
      meta["config"] = config;
      dqs::write_text_file(config.out + ".meta.json", meta.dump(2) + "\n");
    }
  } else {
    nlohmann::json j = dqs::table_json(table);
    emit_json(config, std::move(j));
  }
}

nlohmann::json fisher_report_json(const dqs::FisherReport& report) {
  return nlohmann::json{{"value", report.value}, {"method", dqs::to_string(report.method)}};
}

int run_estimate(const dqs::ExperimentConfig& config) {
  const dqs::SensorNetworkSpec spec = dqs::spec_from_config(config);
  const dqs::EstimationResult result =
      dqs::run_estimation(spec, dqs::alpha_from_config(config), config.trials, config.seed);
  emit_json(config, nlohmann::json(result));
  return 0;
}

int run_sweep_scaling(const dqs::ExperimentConfig& config) {
  dqs::validate_common(config);
  if (config.M_list.empty()) {
    throw std::invalid_argument("M_list must not be empty");
  }
  emit_table(config, dqs::scaling_sweep(config.M_list, config.n_S, config.eta, config.trials, config.seed));
  return 0;
}

int run_compare_bounds(const dqs::ExperimentConfig& config) {
  dqs::validate_common(config);
  emit_table(config, dqs::bound_comparison(config.photon_budget, config.M, dqs::eta_grid_from_config(config),
                                           config.trials, config.seed));
  return 0;
}

int run_fisher(const dqs::ExperimentConfig& config) {
  dqs::validate_common(config);
  const double n_s = config.photon_budget;
  const double eta = config.eta;
  const dqs::FisherReport closed = dqs::displacement_qfi_gaussian(n_s, eta);
  const auto family = [&](double a) {
    return dqs::displace_x(dqs::pure_loss(dqs::squeezed_vacuum(n_s), dqs::LossMap::uniform(1, eta)), 0, a);
  };
  const dqs::FisherReport fd = dqs::fisher_fd(family, 0.0);

  nlohmann::json j;
  j["value"] = closed.value;
  j["single_mode"] = fisher_report_json(closed);
  j["fidelity_fd"] = fisher_report_json(fd);
  j["entangled"] = fisher_report_json(dqs::entangled_max_fisher(config.M, n_s, eta));
  j["separable"] = fisher_report_json(dqs::separable_max_fisher(config.M, n_s, eta));
  j["ub_entangled"] = fisher_report_json(dqs::ub_entangled(config.M, n_s, eta));
  j["ub_separable"] = fisher_report_json(dqs::ub_separable(config.M, n_s, eta));
  emit_json(config, std::move(j));
  return 0;
}

int run_rf_task(const dqs::ExperimentConfig& config) {
  dqs::validate_common(config);
  const dqs::RfTask task = dqs::parse_rf_task(config.task);
  dqs::RfField field;
  if (config.field.amplitudes.empty()) {
    field.amplitudes = Eigen::VectorXd::Ones(config.M);
    field.phases = Eigen::VectorXd::Constant(config.M, 0.1);
  } else {
    field.amplitudes = dqs::detail::to_eigen(config.field.amplitudes);
    field.phases = dqs::detail::to_eigen(config.field.phases);
  }
  field.coupling = config.field.kappa;

  auto base = [&](dqs::ProbeKind kind) {
    return dqs::SensorNetworkSpec::homogeneous(config.M, config.eta, config.photon_budget, kind);
  };
  const dqs::EstimationResult dq = dqs::rf_task(field, base(dqs::ProbeKind::entangled), task, config.trials, config.seed);
  const dqs::EstimationResult dc = dqs::rf_task(field, base(dqs::ProbeKind::separable), task, config.trials,
                                                dqs::derive_seed(config.seed, 1));
  nlohmann::json j;
  j["task"] = dqs::to_string(task);
  j["dqs"] = dq;
  j["dcs"] = dc;
  j["variance_ratio"] = (dq.stddev * dq.stddev) / (dc.stddev * dc.stddev);
  emit_json(config, std::move(j));
  return 0;
}

int run_optimize_allocation(const dqs::ExperimentConfig& config) {
  const dqs::SensorNetworkSpec spec = dqs::spec_from_config(config);
  const dqs::AllocationResult allocation =
      dqs::optimize_allocation(spec.weights, spec.transmissivities, spec.photon_budget);
  if (!allocation.converged) {
    nlohmann::json j;
    j["error"] = "allocation optimizer did not converge; best allocation reported";
    j["residual"] = allocation.residual;
    j["allocation"] = std::vector<double>(allocation.photons.data(), allocation.photons.data() + spec.num_modes);
    emit_json(config, std::move(j));
    throw dqs::NumericError("allocation optimizer did not converge");
  }
  nlohmann::json j;
  j["allocation"] = std::vector<double>(allocation.photons.data(), allocation.photons.data() + spec.num_modes);
  j["objective"] = allocation.objective;
  j["precision"] = std::sqrt(allocation.objective);
  j["residual"] = allocation.residual;
  emit_json(config, std::move(j));
  return 0;
}

int run_phase(const dqs::ExperimentConfig& config) {
  dqs::validate_common(config);
  const std::vector<double> angles = config.lo_angles.empty() ? dqs::default_lo_angle_grid() : config.lo_angles;
  dqs::SweepTable detail;
  const dqs::EstimationResult best = dqs::phase_mc(config.M, config.n_S, dqs::parse_kind(config.kind),
                                                   config.theta, angles, config.trials, config.seed, &detail);
  const dqs::PhasePrecisions closed = dqs::phase_precisions(config.M, config.n_S);
  nlohmann::json j;
  j["best"] = best;
  j["best_lo_angle"] = detail.metadata.params.at("best_lo_angle");
  j["delta_E"] = closed.entangled;
  j["delta_P"] = closed.separable;
  j["ge_bound_concentrated"] =
      dqs::ge_lower_bound(Eigen::VectorXd::Constant(config.M, 1.0 / config.M),
                          Eigen::VectorXd::Unit(config.M, 0) *
                              dqs::squeezed_vacuum_photon_fluctuation(config.M * config.n_S));
  j["twin_fock"] = dqs::twin_fock_precision(config.M * config.n_S);
  emit_json(config, std::move(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(dqs::kVersion) +
               " - Gaussian sensor-network simulator and precision-bound calculator"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const dqs::ExperimentConfig&);
  };
  const std::vector<Command> commands = {
      {"estimate", "Monte-Carlo estimation of a weighted displacement average", run_estimate},
      {"sweep-scaling", "precision versus network size, entangled and separable", run_sweep_scaling},
      {"compare-bounds", "analytic precisions and lower bounds across transmissivities", run_compare_bounds},
      {"fisher", "Fisher-information values for a single-mode probe and its network forms", run_fisher},
      {"rf-task", "RF transduction task with entangled and separable probes", run_rf_task},
      {"optimize-allocation", "photon allocation for the separable protocol", run_optimize_allocation},
      {"phase", "small-angle phase estimation with a swept local-oscillator angle", run_phase},
  };

  std::vector<std::unique_ptr<FlagOverrides>> overrides;
  std::vector<std::pair<CLI::App*, const Command*>> attached;
  for (const Command& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    overrides.push_back(std::make_unique<FlagOverrides>());
    overrides.back()->attach(sub);
    attached.emplace_back(sub, &command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  for (std::size_t i = 0; i < attached.size(); ++i) {
    if (!attached[i].first->parsed()) {
      continue;
    }
    try {
      const dqs::ExperimentConfig config = overrides[i]->resolve();
      return attached[i].second->run(config);
    } catch (const dqs::NumericError& e) {
      std::cerr << "numeric error: " << e.what() << "\n";
      return kExitNumeric;
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid config: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::out_of_range& e) {
      std::cerr << "invalid config: " << e.what() << "\n";
      return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "invalid config: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitNumeric;
    }
  }
  return kExitValidation;
}
