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
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "dqs/fisher.hpp"
#include "dqs/gaussian.hpp"
#include "dqs/homodyne.hpp"
#include "dqs/protocols.hpp"
#include "dqs/rng.hpp"

namespace dqs {

// Monte-Carlo estimator statistics next to the analytic prediction.
struct EstimationResult {
  double mean = 0.0;
  double stddev = 0.0;
  double analytic = 0.0;    // predicted rms error of the estimator
  double true_value = 0.0;  // the weighted combination being estimated
  double z_score = 0.0;     // |mean - true| in units of stddev / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct SweepMetadata {
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string timestamp;  // filled at serialization time, not by the sweep
};

// Row-oriented experiment output. Columns are either numeric or text and all
// share one length. Tables produced from identical inputs are bit-identical;
// the timestamp is deliberately left out of that contract.
struct SweepTable {
  using Column = std::variant<std::vector<double>, std::vector<std::string>>;

  std::vector<std::string> names;
  std::vector<Column> columns;
  SweepMetadata metadata;

  void add_column(std::string name, std::vector<double> values) {
    check_length(values.size());
    names.push_back(std::move(name));
    columns.emplace_back(std::move(values));
  }
  void add_column(std::string name, std::vector<std::string> values) {
    check_length(values.size());
    names.push_back(std::move(name));
    columns.emplace_back(std::move(values));
  }
  std::size_t rows() const {
    if (columns.empty()) {
      return 0;
    }
    return std::visit([](const auto& v) { return v.size(); }, columns.front());
  }
  const std::vector<double>& numeric(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) {
        return std::get<std::vector<double>>(columns[i]);
      }
    }
    throw std::invalid_argument("SweepTable: no numeric column named " + name);
  }

 private:
  void check_length(std::size_t n) const {
    if (!columns.empty() && n != rows()) {
      throw std::invalid_argument("SweepTable: column lengths must match");
    }
  }
};

namespace detail {

inline int thread_budget() {
  if (const char* env = std::getenv("DQSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) {
      return n;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Work items must be independent; results
// keyed by index stay deterministic under any thread count.
template <typename Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
  const int threads = std::min<std::size_t>(thread_budget(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
}

}  // namespace detail

// Runs the full displacement pipeline once: build probe, apply per-node
// loss, displace by alpha, homodyne every node, combine with the estimator
// weights.
inline EstimationResult run_estimation(const SensorNetworkSpec& spec, const Eigen::VectorXd& alpha,
                                       std::uint64_t trials, std::uint64_t seed) {
  if (alpha.size() != spec.num_modes) {
    throw std::invalid_argument("run_estimation: alpha length must equal M");
  }
  const ProbePlan plan = build_probe(spec);
  GaussianState state = pure_loss(plan.probe, LossMap(spec.transmissivities));
  state = displace_x_all(state, alpha);
  const HomodyneRecord record = homodyne_x(state, static_cast<std::int64_t>(trials), seed);
  const WeightedEstimate estimate = weighted_estimate(record, plan.estimator_weights);

  EstimationResult result;
  result.mean = estimate.mean;
  result.stddev = estimate.stddev;
  result.analytic = plan.analytic_precision;
  result.true_value = spec.weights.dot(alpha);
  result.z_score = estimate.stddev > 0.0
                       ? std::abs(estimate.mean - result.true_value) / (estimate.stddev / std::sqrt(static_cast<double>(trials)))
                       : 0.0;
  result.trials = trials;
  result.seed = seed;
  return result;
}

// Ordinary least squares on (x, y); r_squared is the coefficient of
// determination of the fit.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("linear_fit: need at least two matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

// Precision versus network size at fixed per-node photon number, for both
// probe kinds, with log-log scaling fits in the metadata.
inline SweepTable scaling_sweep(const std::vector<int>& m_list, double photons_per_node, double eta,
                                std::uint64_t trials, std::uint64_t seed) {
  if (!(photons_per_node > 0.0)) {
    throw std::invalid_argument("scaling_sweep: photons_per_node must be > 0");
  }
  const std::vector<ProbeKind> kinds = {ProbeKind::entangled, ProbeKind::separable};
  const std::size_t points = kinds.size() * m_list.size();

  std::vector<double> col_m(points), col_eta(points), col_analytic(points), col_mc(points), col_err(points);
  std::vector<std::string> col_kind(points);

  detail::parallel_for_index(points, [&](std::size_t i) {
    const ProbeKind kind = kinds[i / m_list.size()];
    const int m = m_list[i % m_list.size()];
    const SensorNetworkSpec spec = SensorNetworkSpec::homogeneous(m, eta, photons_per_node * m, kind);
    const EstimationResult r = run_estimation(spec, Eigen::VectorXd::Zero(m), trials, derive_seed(seed, i));
    col_m[i] = m;
    col_kind[i] = to_string(kind);
    col_eta[i] = eta;
    col_analytic[i] = r.analytic;
    col_mc[i] = r.stddev;
    col_err[i] = r.stddev / std::sqrt(2.0 * (trials - 1));
  });

  SweepTable table;
  table.add_column("M", col_m);
  table.add_column("kind", col_kind);
  table.add_column("eta", col_eta);
  table.add_column("delta_analytic", col_analytic);
  table.add_column("delta_mc", col_mc);
  table.add_column("mc_err", col_err);
  table.metadata.seed = seed;
  table.metadata.trials = trials;
  table.metadata.params["n_S"] = std::to_string(photons_per_node);
  table.metadata.params["eta"] = std::to_string(eta);

  for (std::size_t k = 0; k < kinds.size(); ++k) {
    std::vector<double> log_m(m_list.size()), log_delta(m_list.size());
    for (std::size_t j = 0; j < m_list.size(); ++j) {
      log_m[j] = std::log(col_m[k * m_list.size() + j]);
      log_delta[j] = std::log(col_mc[k * m_list.size() + j]);
    }
    const LinearFit fit = linear_fit(log_m, log_delta);
    const std::string prefix = std::string("slope_") + to_string(kinds[k]);
    table.metadata.params[prefix] = std::to_string(fit.slope);
    table.metadata.params["r2_" + std::string(to_string(kinds[k]))] = std::to_string(fit.r_squared);
  }
  return table;
}

// Analytic precisions, their lower bounds, and Monte-Carlo checks across a
// transmissivity grid at fixed M and N_S.
inline SweepTable bound_comparison(double photon_budget, int num_modes, const std::vector<double>& eta_grid,
                                   std::uint64_t trials, std::uint64_t seed) {
  const std::size_t points = eta_grid.size();
  std::vector<double> col_eta(points), col_e(points), col_p(points), col_e_lb(points), col_c_lb(points);
  std::vector<double> col_e_mc(points), col_p_mc(points), col_err_e(points), col_err_p(points);

  detail::parallel_for_index(points, [&](std::size_t i) {
    const double eta = eta_grid[i];
    col_eta[i] = eta;
    col_e[i] = delta_entangled_homogeneous(num_modes, photon_budget, eta);
    col_p[i] = delta_separable_homogeneous(num_modes, photon_budget, eta);
    col_e_lb[i] = delta_lb_entangled(num_modes, photon_budget, eta);
    col_c_lb[i] = delta_lb_separable(num_modes, photon_budget, eta);

    const Eigen::VectorXd alpha = Eigen::VectorXd::Zero(num_modes);
    const EstimationResult re = run_estimation(
        SensorNetworkSpec::homogeneous(num_modes, eta, photon_budget, ProbeKind::entangled), alpha, trials,
        derive_seed(seed, 2 * i));
    const EstimationResult rp = run_estimation(
        SensorNetworkSpec::homogeneous(num_modes, eta, photon_budget, ProbeKind::separable), alpha, trials,
        derive_seed(seed, 2 * i + 1));
    col_e_mc[i] = re.stddev;
    col_p_mc[i] = rp.stddev;
    col_err_e[i] = re.stddev / std::sqrt(2.0 * (trials - 1));
    col_err_p[i] = rp.stddev / std::sqrt(2.0 * (trials - 1));
  });

  SweepTable table;
  table.add_column("eta", col_eta);
  table.add_column("delta_E", col_e);
  table.add_column("delta_P", col_p);
  table.add_column("delta_E_LB", col_e_lb);
  table.add_column("delta_C_LB", col_c_lb);
  table.add_column("delta_E_mc", col_e_mc);
  table.add_column("delta_P_mc", col_p_mc);
  table.add_column("mc_err_E", col_err_e);
  table.add_column("mc_err_P", col_err_p);
  table.metadata.seed = seed;
  table.metadata.trials = trials;
  table.metadata.params["N_S"] = std::to_string(photon_budget);
  table.metadata.params["M"] = std::to_string(num_modes);
  return table;
}

// ---------------------------------------------------------------------------
// RF transduction tasks.

// RF field observed by the photonic sensors. An electro-optic transducer
// turns node m's field into a quadrature displacement alpha_m = kappa E_m
// phi_m (weak-field limit).
struct RfField {
  Eigen::VectorXd amplitudes;
  Eigen::VectorXd phases;
  double coupling = 1.0;

  Eigen::VectorXd displacements() const {
    if (amplitudes.size() != phases.size()) {
      throw std::invalid_argument("RfField: amplitudes and phases must have the same length");
    }
    if (!(coupling > 0.0) || !amplitudes.allFinite() || !phases.allFinite()) {
      throw std::invalid_argument("RfField: entries must be finite and coupling > 0");
    }
    return coupling * amplitudes.cwiseProduct(phases);
  }
};

enum class RfTask { avg_amplitude, phase_diff_center, phase_diff_edge };

inline const char* to_string(RfTask t) {
  switch (t) {
    case RfTask::avg_amplitude: return "avg_amplitude";
    case RfTask::phase_diff_center: return "phase_diff_center";
    case RfTask::phase_diff_edge: return "phase_diff_edge";
  }
  return "unknown";
}

// Estimator weights defining each RF task. The averaging task works for any
// M; the phase-difference tasks are defined on the three-node network.
inline Eigen::VectorXd rf_task_weights(RfTask task, int num_modes) {
  switch (task) {
    case RfTask::avg_amplitude:
      return Eigen::VectorXd::Constant(num_modes, 1.0 / num_modes);
    case RfTask::phase_diff_center: {
      if (num_modes != 3) {
        throw std::invalid_argument("rf_task_weights: phase_diff_center requires a 3-node network");
      }
      Eigen::VectorXd w(3);
      w << -0.25, 0.5, -0.25;
      return w;
    }
    case RfTask::phase_diff_edge: {
      if (num_modes != 3) {
        throw std::invalid_argument("rf_task_weights: phase_diff_edge requires a 3-node network");
      }
      Eigen::VectorXd w(3);
      w << 0.5, -0.5, 0.0;
      return w;
    }
  }
  throw std::invalid_argument("rf_task_weights: unknown task");
}

// Estimates the task-weighted RF combination with the given probe kind. The
// spec's weights are replaced by the task weights.
inline EstimationResult rf_task(const RfField& field, const SensorNetworkSpec& base, RfTask task,
                                std::uint64_t trials, std::uint64_t seed) {
  if (field.amplitudes.size() != base.num_modes) {
    throw std::invalid_argument("rf_task: field size must equal M");
  }
  const SensorNetworkSpec spec(base.num_modes, rf_task_weights(task, base.num_modes), base.transmissivities,
                               base.photon_budget, base.kind, base.task);
  return run_estimation(spec, field.displacements(), trials, seed);
}

// ---------------------------------------------------------------------------
// Entanglement-structure sweep over one beam-splitter ratio.

// Distribution coefficients of the three-node circuit for a given task.
// One variable beam splitter is swept and the other is fixed per task; the
// sign of node 2's arm carries the 0-or-pi flip.
//   avg_amplitude:      v = (sqrt(r), s sqrt((1-r)/2), sqrt((1-r)/2))
//   phase_diff_center:  v = (sqrt(1/6), s sqrt((5/6) r), sqrt((5/6)(1-r)))
//   phase_diff_edge:    v = (sqrt(r), s sqrt(1-r), 0)
inline Eigen::VectorXd circuit_coefficients(RfTask task, double ratio, double flip) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("circuit_coefficients: ratio must lie in [0, 1]");
  }
  const double sign = std::cos(flip) >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd v(3);
  switch (task) {
    case RfTask::avg_amplitude:
      v << std::sqrt(ratio), sign * std::sqrt((1.0 - ratio) / 2.0), std::sqrt((1.0 - ratio) / 2.0);
      break;
    case RfTask::phase_diff_center:
      v << std::sqrt(1.0 / 6.0), sign * std::sqrt((5.0 / 6.0) * ratio), std::sqrt((5.0 / 6.0) * (1.0 - ratio));
      break;
    case RfTask::phase_diff_edge:
      v << std::sqrt(ratio), sign * std::sqrt(1.0 - ratio), 0.0;
      break;
  }
  return v;
}

// Estimator variance when the squeezed mode is distributed with arbitrary
// unit coefficients v instead of the optimal ones:
//   var = (u.v)^2 (1/(4s) - 1/4) + |u|^2 / 4 + sum w_m^2 (1 - eta_m) / 4,
// with u_m = w_m sqrt(eta_m). Maximizing (u.v)^2 recovers build_entangled.
inline double variance_for_coefficients(const Eigen::VectorXd& weights, const Eigen::VectorXd& transmissivities,
                                        double photon_budget, const Eigen::VectorXd& coefficients) {
  const double s = squeeze_factor(photon_budget);
  Eigen::VectorXd u(weights.size());
  double leak = 0.0;
  for (int m = 0; m < weights.size(); ++m) {
    u[m] = weights[m] * std::sqrt(transmissivities[m]);
    leak += weights[m] * weights[m] * (1.0 - transmissivities[m]) / 4.0;
  }
  const double overlap = u.dot(coefficients);
  return overlap * overlap * (1.0 / (4.0 * s) - 0.25) + u.squaredNorm() / 4.0 + leak;
}

// Sweeps the tunable ratio at one flip setting, recording analytic and
// Monte-Carlo estimator variances. The separable benchmark at the same
// budget and weights goes into the metadata.
inline SweepTable entanglement_sweep(const SensorNetworkSpec& base, RfTask task,
                                     const std::vector<double>& ratio_grid, double flip, std::uint64_t trials,
                                     std::uint64_t seed) {
  if (base.num_modes != 3) {
    throw std::invalid_argument("entanglement_sweep: the circuit sweep is defined on a 3-node network");
  }
  const Eigen::VectorXd weights = rf_task_weights(task, base.num_modes);
  const std::size_t points = ratio_grid.size();
  std::vector<double> col_ratio(points), col_var(points), col_var_mc(points), col_err(points);

  detail::parallel_for_index(points, [&](std::size_t i) {
    const Eigen::VectorXd v = circuit_coefficients(task, ratio_grid[i], flip);
    GaussianState source = squeezed_vacuum(base.photon_budget);
    for (int m = 1; m < base.num_modes; ++m) {
      source = tensor(source, vacuum(1));
    }
    GaussianState probe = apply_symplectic(source, distribution_array(v));
    probe = pure_loss(probe, LossMap(base.transmissivities));
    const HomodyneRecord record = homodyne_x(probe, static_cast<std::int64_t>(trials), derive_seed(seed, i));
    const WeightedEstimate estimate = weighted_estimate(record, weights);
    col_ratio[i] = ratio_grid[i];
    col_var[i] = variance_for_coefficients(weights, base.transmissivities, base.photon_budget, v);
    col_var_mc[i] = estimate.stddev * estimate.stddev;
    col_err[i] = col_var_mc[i] * std::sqrt(2.0 / static_cast<double>(trials - 1));
  });

  SweepTable table;
  table.add_column("ratio", col_ratio);
  table.add_column("var_analytic", col_var);
  table.add_column("var_mc", col_var_mc);
  table.add_column("mc_err", col_err);
  table.metadata.seed = seed;
  table.metadata.trials = trials;
  table.metadata.params["task"] = to_string(task);
  table.metadata.params["flip"] = std::to_string(flip);

  const SensorNetworkSpec dcs(base.num_modes, weights, base.transmissivities, base.photon_budget,
                              ProbeKind::separable, base.task);
  const EstimationResult benchmark =
      run_estimation(dcs, Eigen::VectorXd::Zero(base.num_modes), trials, derive_seed(seed, points + 1));
  table.metadata.params["dcs_var_mc"] = std::to_string(benchmark.stddev * benchmark.stddev);
  table.metadata.params["dcs_var_analytic"] = std::to_string(benchmark.analytic * benchmark.analytic);
  return table;
}

// ---------------------------------------------------------------------------
// Small-angle phase estimation with a swept local-oscillator angle.

// Quadrature variance of the squeezed mode measured at angle u from the
// squeezed axis.
inline double rotated_variance(double s, double u) {
  const double c = std::cos(u), sn = std::sin(u);
  return c * c / (4.0 * s) + s * sn * sn / 4.0;
}

inline double rotated_variance_slope(double s, double u) {
  return (s - 1.0 / s) / 4.0 * std::sin(2.0 * u);
}

// Monte-Carlo phase estimation: every node picks up the same small rotation
// theta; each local oscillator angle in the grid is tried and the
// second-moment statistic is inverted linearly around theta = 0. Returns the
// estimate at the best (lowest empirical std) angle. The optional detail
// table records the whole sweep.
inline EstimationResult phase_mc(int num_modes, double photons_per_node, ProbeKind kind, double theta,
                                 const std::vector<double>& lo_angles, std::uint64_t trials, std::uint64_t seed,
                                 SweepTable* detail_out = nullptr) {
  if (!(theta >= 0.0 && theta <= 0.01)) {
    throw std::invalid_argument("phase_mc: theta must lie in [0, 0.01] (small-angle regime)");
  }
  if (lo_angles.empty()) {
    throw std::invalid_argument("phase_mc: need at least one local-oscillator angle");
  }
  const double total_budget = num_modes * photons_per_node;
  const double s = kind == ProbeKind::entangled ? squeeze_factor(total_budget) : squeeze_factor(photons_per_node);
  const PhasePrecisions closed = phase_precisions(num_modes, photons_per_node);
  const double analytic = kind == ProbeKind::entangled ? closed.entangled : closed.separable;
  const Eigen::VectorXd balanced =
      Eigen::VectorXd::Constant(num_modes, 1.0 / std::sqrt(static_cast<double>(num_modes)));

  // Probe before rotation: all photons in the balanced global mode, or one
  // squeezed mode per node.
  GaussianState probe = [&] {
    if (kind == ProbeKind::entangled) {
      GaussianState source = squeezed_vacuum(total_budget);
      for (int m = 1; m < num_modes; ++m) {
        source = tensor(source, vacuum(1));
      }
      return apply_symplectic(source, distribution_array(balanced));
    }
    GaussianState source = squeezed_vacuum(photons_per_node);
    for (int m = 1; m < num_modes; ++m) {
      source = tensor(source, squeezed_vacuum(photons_per_node));
    }
    return source;
  }();
  probe = phase_rotate_all(probe, theta);

  std::vector<double> col_angle(lo_angles.size()), col_std(lo_angles.size()), col_mean(lo_angles.size()),
      col_pred(lo_angles.size());

  detail::parallel_for_index(lo_angles.size(), [&](std::size_t i) {
    const double angle = lo_angles[i];
    const double variance_at_zero = rotated_variance(s, angle);
    const double slope = rotated_variance_slope(s, angle);
    col_angle[i] = angle;
    if (std::abs(slope) < 1e-12) {
      col_std[i] = std::numeric_limits<double>::infinity();
      col_mean[i] = 0.0;
      col_pred[i] = std::numeric_limits<double>::infinity();
      return;
    }
    // Measuring at LO angle phi is measuring x after rotating by -phi.
    const GaussianState rotated = phase_rotate_all(probe, -angle);
    const HomodyneRecord record = homodyne_x(rotated, static_cast<std::int64_t>(trials), derive_seed(seed, i));

    double sum = 0.0, sum_sq = 0.0;
    const std::int64_t t_count = record.trials();
    for (std::int64_t t = 0; t < t_count; ++t) {
      double estimate_t;
      if (kind == ProbeKind::entangled) {
        double z = 0.0;
        for (int m = 0; m < num_modes; ++m) {
          z += balanced[m] * record.samples(t, m);
        }
        estimate_t = (variance_at_zero - z * z) / slope;
      } else {
        estimate_t = 0.0;
        for (int m = 0; m < num_modes; ++m) {
          const double x = record.samples(t, m);
          estimate_t += (variance_at_zero - x * x) / slope;
        }
        estimate_t /= num_modes;
      }
      sum += estimate_t;
      sum_sq += estimate_t * estimate_t;
    }
    const double mean = sum / t_count;
    col_mean[i] = mean;
    col_std[i] = std::sqrt(std::max(0.0, (sum_sq - t_count * mean * mean) / (t_count - 1)));
    const double per_trial = std::sqrt(2.0) * variance_at_zero / std::abs(slope);
    col_pred[i] = kind == ProbeKind::entangled ? per_trial : per_trial / std::sqrt(static_cast<double>(num_modes));
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < col_std.size(); ++i) {
    if (col_std[i] < col_std[best]) {
      best = i;
    }
  }

  if (detail_out != nullptr) {
    SweepTable table;
    table.add_column("lo_angle", col_angle);
    table.add_column("std_mc", col_std);
    table.add_column("mean_mc", col_mean);
    table.add_column("std_predicted", col_pred);
    table.metadata.seed = seed;
    table.metadata.trials = trials;
    table.metadata.params["kind"] = to_string(kind);
    table.metadata.params["best_lo_angle"] = std::to_string(col_angle[best]);
    *detail_out = std::move(table);
  }

  EstimationResult result;
  result.mean = col_mean[best];
  result.stddev = col_std[best];
  result.analytic = analytic;
  result.true_value = theta;
  result.z_score = result.stddev > 0.0
                       ? std::abs(result.mean - theta) / (result.stddev / std::sqrt(static_cast<double>(trials)))
                       : 0.0;
  result.trials = trials;
  result.seed = seed;
  return result;
}

// Default LO-angle grid: quadratic spacing toward zero so strongly squeezed
// probes (whose optimum sits near the squeezed axis) are resolved.
inline std::vector<double> default_lo_angle_grid(int count = 32) {
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) {
    const double frac = static_cast<double>(k + 1) / count;
    grid[k] = (CounterRng::kPi / 2.0) * frac * frac;
  }
  return grid;
}

}  // namespace dqs
