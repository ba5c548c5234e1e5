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

#include <catch2/catch_amalgamated.hpp>

#include "dqs/experiments.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace dqs;

namespace {

std::size_t argmin(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) {
      best = i;
    }
  }
  return best;
}

std::vector<double> default_ratio_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) {
    grid.push_back(i / 40.0);
  }
  return grid;
}

}  // namespace

TEST_CASE("run_estimation matches its analytic prediction") {
  const SensorNetworkSpec spec = SensorNetworkSpec::homogeneous(4, 0.9, 4.0, ProbeKind::entangled);
  const std::uint64_t trials = 100000;
  const EstimationResult result = run_estimation(spec, Eigen::VectorXd::Zero(4), trials, 2024);
  CHECK(std::abs(result.mean) < 3.0 * result.stddev / std::sqrt(double(trials)));
  CHECK(result.stddev == Approx(result.analytic).margin(3.0 * result.analytic / std::sqrt(2.0 * trials)));
  CHECK(result.z_score < 3.0);
}

TEST_CASE("run_estimation with one node reduces to single-sensor estimation") {
  const SensorNetworkSpec spec = SensorNetworkSpec::homogeneous(1, 1.0, 2.0, ProbeKind::entangled);
  const EstimationResult result = run_estimation(spec, Eigen::VectorXd::Constant(1, 0.4), 20000, 5);
  CHECK(result.analytic == Approx(1.0 / (2.0 * std::sqrt(squeeze_factor(2.0)))).epsilon(1e-12));
  CHECK(result.true_value == Approx(0.4));
  CHECK(std::abs(result.mean - 0.4) < 3.0 * result.stddev / std::sqrt(20000.0));
}

TEST_CASE("run_estimation is deterministic per seed") {
  const SensorNetworkSpec spec = SensorNetworkSpec::homogeneous(3, 0.8, 1.0, ProbeKind::separable);
  const Eigen::VectorXd alpha = Eigen::Vector3d(0.1, 0.0, -0.1);
  const EstimationResult a = run_estimation(spec, alpha, 5000, 99);
  const EstimationResult b = run_estimation(spec, alpha, 5000, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
  CHECK(a.z_score == b.z_score);
  const EstimationResult c = run_estimation(spec, alpha, 5000, 100);
  CHECK(a.mean != c.mean);
}

TEST_CASE("linear_fit recovers an exact line") {
  const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> ys = {1.0, 0.5, 0.0, -0.5};
  const LinearFit fit = linear_fit(xs, ys);
  CHECK(fit.slope == Approx(-0.5).epsilon(1e-14));
  CHECK(fit.intercept == Approx(1.0).epsilon(1e-14));
  CHECK(fit.r_squared == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(linear_fit({1.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("scaling sweep slopes and reproducibility") {
  const std::vector<int> m_list = {1, 2, 4};
  const SweepTable table = scaling_sweep(m_list, 1.0, 1.0, 20000, 31337);
  REQUIRE(table.rows() == 6);

  const double slope_e = std::stod(table.metadata.params.at("slope_entangled"));
  const double slope_p = std::stod(table.metadata.params.at("slope_separable"));
  CHECK(slope_e == Approx(-0.91).margin(0.08));
  CHECK(slope_p == Approx(-0.50).margin(0.05));
  CHECK(std::stod(table.metadata.params.at("r2_entangled")) > 0.99);
  CHECK(std::stod(table.metadata.params.at("r2_separable")) > 0.99);

  // Monte-Carlo values sit close to the analytic column.
  const auto& analytic = table.numeric("delta_analytic");
  const auto& mc = table.numeric("delta_mc");
  const auto& err = table.numeric("mc_err");
  for (std::size_t i = 0; i < table.rows(); ++i) {
    CHECK(mc[i] == Approx(analytic[i]).margin(4.0 * err[i]));
  }

  const SweepTable again = scaling_sweep(m_list, 1.0, 1.0, 20000, 31337);
  CHECK(again.numeric("delta_mc") == table.numeric("delta_mc"));

  CHECK_THROWS_AS(scaling_sweep(m_list, 0.0, 1.0, 100, 1), std::invalid_argument);
}

TEST_CASE("sub-unity transmissivity flattens the entangled scaling") {
  const std::vector<int> m_list = {4, 8, 16, 32};
  const SweepTable lossless = scaling_sweep(m_list, 1.0, 1.0, 4000, 7);
  const SweepTable lossy = scaling_sweep(m_list, 1.0, 0.95, 4000, 7);
  const double slope_ideal = std::stod(lossless.metadata.params.at("slope_entangled"));
  const double slope_lossy = std::stod(lossy.metadata.params.at("slope_entangled"));
  CHECK(slope_lossy > slope_ideal + 0.2);
}

TEST_CASE("bound comparison table") {
  const std::vector<double> grid = {0.5, 0.9, 1.0};
  const SweepTable table = bound_comparison(10.0, 10, grid, 20000, 11);
  const auto& eta = table.numeric("eta");
  const auto& delta_e = table.numeric("delta_E");
  const auto& delta_p = table.numeric("delta_P");
  const auto& lb_e = table.numeric("delta_E_LB");
  const auto& lb_c = table.numeric("delta_C_LB");
  const auto& mc_e = table.numeric("delta_E_mc");
  const auto& mc_p = table.numeric("delta_P_mc");
  const auto& err_e = table.numeric("mc_err_E");
  const auto& err_p = table.numeric("mc_err_P");

  for (std::size_t i = 0; i < table.rows(); ++i) {
    CAPTURE(eta[i]);
    // Achieved precision never undercuts its own lower bound.
    CHECK(mc_e[i] >= lb_e[i] - 3.0 * err_e[i]);
    CHECK(mc_p[i] >= lb_c[i] - 3.0 * err_p[i]);
    CHECK(delta_e[i] <= delta_p[i]);
    if (eta[i] == 1.0) {
      CHECK(delta_e[i] == Approx(lb_e[i]).epsilon(1e-12));
      CHECK(delta_p[i] == Approx(lb_c[i]).epsilon(1e-12));
    } else {
      CHECK(delta_e[i] > lb_e[i]);
    }
  }

  // Near eta = 1 the entangled protocol beats even the separable bound.
  const std::size_t last = table.rows() - 1;
  CHECK(delta_e[last] < lb_c[last]);
}

TEST_CASE("bound formulas collapse to the vacuum floor at eta = 0") {
  const int m = 10;
  const double floor = 1.0 / (2.0 * std::sqrt(double(m)));
  CHECK(delta_entangled_homogeneous(m, 10.0, 0.0) == Approx(floor).epsilon(1e-14));
  CHECK(delta_separable_homogeneous(m, 10.0, 0.0) == Approx(floor).epsilon(1e-14));
  CHECK(delta_lb_entangled(m, 10.0, 0.0) == Approx(floor).epsilon(1e-14));
  CHECK(delta_lb_separable(m, 10.0, 0.0) == Approx(floor).epsilon(1e-14));
}

TEST_CASE("rf transduction tasks") {
  RfField field;
  field.amplitudes = Eigen::Vector3d::Ones();
  field.phases = Eigen::Vector3d::Constant(0.1);
  field.coupling = 1.0;

  const SensorNetworkSpec base = SensorNetworkSpec::homogeneous(3, 1.0, 2.0, ProbeKind::entangled);
  const std::uint64_t trials = 50000;
  const EstimationResult avg = rf_task(field, base, RfTask::avg_amplitude, trials, 21);
  CHECK(avg.true_value == Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(avg.mean - 0.1) < 3.0 * avg.stddev / std::sqrt(double(trials)));

  RfField zero_field;
  zero_field.amplitudes = Eigen::Vector3d::Zero();
  zero_field.phases = Eigen::Vector3d::Zero();
  const EstimationResult null = rf_task(zero_field, base, RfTask::phase_diff_edge, trials, 22);
  CHECK(std::abs(null.mean) < 3.0 * null.stddev / std::sqrt(double(trials)));

  // Entangled beats separable at the same budget on the edge task.
  const SensorNetworkSpec dcs = SensorNetworkSpec::homogeneous(3, 1.0, 2.0, ProbeKind::separable);
  const EstimationResult dq = rf_task(field, base, RfTask::phase_diff_edge, trials, 23);
  const EstimationResult dc = rf_task(field, dcs, RfTask::phase_diff_edge, trials, 24);
  CHECK(dq.stddev * dq.stddev < dc.stddev * dc.stddev);

  RfField bad;
  bad.amplitudes = Eigen::Vector2d::Ones();
  bad.phases = Eigen::Vector2d::Ones();
  CHECK_THROWS_AS(rf_task(bad, base, RfTask::avg_amplitude, 100, 1), std::invalid_argument);
}

TEST_CASE("entanglement sweep finds the balanced optimum for averaging") {
  const SensorNetworkSpec base = SensorNetworkSpec::homogeneous(3, 1.0, 2.0, ProbeKind::entangled);
  const std::vector<double> grid = default_ratio_grid();
  const SweepTable table = entanglement_sweep(base, RfTask::avg_amplitude, grid, 0.0, 20000, 33);

  const auto& ratios = table.numeric("ratio");
  const auto& analytic = table.numeric("var_analytic");
  const auto& mc = table.numeric("var_mc");

  const std::size_t best_analytic = argmin(analytic);
  const std::size_t best_mc = argmin(mc);
  // Balanced routing: first coefficient 1/sqrt(3), ratio 1/3.
  CHECK(std::abs(ratios[best_analytic] - 1.0 / 3.0) <= 0.025 + 1e-12);
  CHECK(std::abs(ratios[best_mc] - ratios[best_analytic]) <= 0.025 + 1e-12);

  // The swept minimum agrees with the dedicated builder's optimum.
  const double best_possible = std::pow(analytic_precision_entangled(base), 2.0);
  CHECK(analytic[best_analytic] == Approx(best_possible).epsilon(1e-3));
}

TEST_CASE("entanglement sweep is asymmetric under the phase flip") {
  const SensorNetworkSpec base = SensorNetworkSpec::homogeneous(3, 1.0, 2.0, ProbeKind::entangled);
  const std::vector<double> grid = default_ratio_grid();
  for (RfTask task : {RfTask::phase_diff_center, RfTask::phase_diff_edge}) {
    const SweepTable flat = entanglement_sweep(base, task, grid, 0.0, 20000, 44);
    const SweepTable flipped = entanglement_sweep(base, task, grid, CounterRng::kPi, 20000, 44);
    const auto& ratios = flat.numeric("ratio");
    const std::size_t best_flat = argmin(flat.numeric("var_mc"));
    const std::size_t best_flipped = argmin(flipped.numeric("var_mc"));
    CAPTURE(to_string(task));
    CHECK(std::abs(ratios[best_flat] - ratios[best_flipped]) > 0.025 + 1e-12);

    // At its best setting the entangled circuit beats the separable benchmark.
    const double dcs_var = std::stod(flipped.metadata.params.at("dcs_var_mc"));
    const double best_var = std::min(flat.numeric("var_mc")[best_flat], flipped.numeric("var_mc")[best_flipped]);
    CHECK(best_var < dcs_var);
  }
}

TEST_CASE("flipped center-task optimum matches the optimal coefficients") {
  // At flip = pi the circuit family contains the ideal routing for the
  // (-1, 2, -1)/4 weights; the analytic optimum sits at ratio 0.8.
  const SensorNetworkSpec base = SensorNetworkSpec::homogeneous(3, 1.0, 2.0, ProbeKind::entangled);
  const std::vector<double> grid = default_ratio_grid();
  const SweepTable flipped = entanglement_sweep(base, RfTask::phase_diff_center, grid, CounterRng::kPi, 20000, 55);
  const auto& ratios = flipped.numeric("ratio");
  const std::size_t best = argmin(flipped.numeric("var_analytic"));
  CHECK(ratios[best] == Approx(0.8).margin(1e-12));

  const Eigen::VectorXd weights = rf_task_weights(RfTask::phase_diff_center, 3);
  const SensorNetworkSpec ideal(3, weights, base.transmissivities, base.photon_budget, ProbeKind::entangled);
  CHECK(flipped.numeric("var_analytic")[best] ==
        Approx(std::pow(analytic_precision_entangled(ideal), 2.0)).epsilon(1e-12));
}

TEST_CASE("small-angle phase estimation achieves the closed form at the best angle") {
  const std::vector<double> angles = default_lo_angle_grid();
  const EstimationResult result = phase_mc(1, 1.0, ProbeKind::entangled, 0.005, angles, 100000, 66);
  CHECK(result.analytic == Approx(0.25).epsilon(1e-12));
  CHECK(result.stddev <= 1.1 * result.analytic);
  CHECK(result.stddev >= 0.8 * result.analytic);
  CHECK(std::abs(result.mean - 0.005) < 4.0 * result.stddev / std::sqrt(100000.0));
}

TEST_CASE("phase estimation is unbiased at zero angle") {
  const EstimationResult result =
      phase_mc(2, 1.0, ProbeKind::entangled, 0.0, default_lo_angle_grid(), 50000, 77);
  CHECK(std::abs(result.mean) < 3.0 * result.stddev / std::sqrt(50000.0));
}

TEST_CASE("entangled phase probes beat separable ones") {
  const std::vector<double> angles = default_lo_angle_grid();
  SweepTable detail_e, detail_p;
  const EstimationResult ent = phase_mc(4, 1.0, ProbeKind::entangled, 0.005, angles, 60000, 88, &detail_e);
  const EstimationResult sep = phase_mc(4, 1.0, ProbeKind::separable, 0.005, angles, 60000, 88, &detail_p);
  CHECK(ent.stddev < sep.stddev);
  CHECK(ent.analytic == Approx(phase_precisions(4, 1.0).entangled).epsilon(1e-12));
  CHECK(sep.analytic == Approx(phase_precisions(4, 1.0).separable).epsilon(1e-12));
  CHECK(detail_e.rows() == angles.size());

  CHECK_THROWS_AS(phase_mc(1, 1.0, ProbeKind::entangled, 0.1, angles, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(phase_mc(1, 1.0, ProbeKind::entangled, 0.005, {}, 100, 1), std::invalid_argument);
}

TEST_CASE("sweep tables enforce equal column lengths") {
  SweepTable table;
  table.add_column("a", std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(table.add_column("b", std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(table.numeric("missing"), std::invalid_argument);
  CHECK(table.rows() == 2);
}
