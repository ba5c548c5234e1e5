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

#include "dqs/fisher.hpp"
#include "dqs/protocols.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace dqs;

namespace {

// The optimal single-mode probe family: lossy x-squeezed vacuum displaced
// along x by the parameter.
std::function<GaussianState(double)> lossy_family(double photons, double eta) {
  return [photons, eta](double alpha) {
    return displace_x(pure_loss(squeezed_vacuum(photons), LossMap::uniform(1, eta)), 0, alpha);
  };
}

}  // namespace

TEST_CASE("single-mode displacement information closed form") {
  CHECK(displacement_qfi_gaussian(0.0, 1.0).value == Approx(4.0).epsilon(1e-14));
  CHECK(displacement_qfi_gaussian(1.0, 1.0).value == Approx(23.313708498984759).epsilon(1e-12));
  CHECK(displacement_qfi_gaussian(5.0, 1e-9).value == Approx(4.0).epsilon(1e-6));
  CHECK(displacement_qfi_gaussian(1.0, 1.0).method == FisherMethod::closed_form);

  CHECK_THROWS_AS(displacement_qfi_gaussian(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(displacement_qfi_gaussian(1.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(displacement_qfi_gaussian(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("fidelity finite differences reproduce known values") {
  // Coherent probe: information 4 at any reference point.
  auto coherent = [](double alpha) { return displace_x(vacuum(1), 0, alpha); };
  CHECK(fisher_fd(coherent, 0.0).value == Approx(4.0).epsilon(1e-6));
  CHECK(fisher_fd(coherent, 0.7).value == Approx(4.0).epsilon(1e-6));

  CHECK(fisher_fd(lossy_family(1.0, 1.0), 0.0).value == Approx(23.313708498984759).epsilon(1e-6));
  // 4 / (0.5/s(1) + 0.5) = 4 + 2 sqrt(2)
  CHECK(fisher_fd(lossy_family(1.0, 0.5), 0.0).value == Approx(6.8284271247461903).epsilon(1e-6));

  CHECK_THROWS_AS(fisher_fd(coherent, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(fisher_fd(coherent, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("finite differences agree with the closed form on a grid") {
  for (double photons : {0.0, 0.5, 1.0, 5.0, 10.0}) {
    for (double eta : {0.25, 0.5, 0.9, 1.0}) {
      const double closed = displacement_qfi_gaussian(photons, eta).value;
      const double fd = fisher_fd(lossy_family(photons, eta), 0.0).value;
      CAPTURE(photons, eta);
      CHECK(fd == Approx(closed).epsilon(1e-4));
    }
  }
}

TEST_CASE("network Fisher values") {
  const double s10 = squeeze_factor(10.0);
  const FisherReport ent = entangled_max_fisher(10, 10.0, 1.0);
  CHECK(ent.value == Approx(40.0 * s10).epsilon(1e-12));
  CHECK(1.0 / std::sqrt(ent.value) == Approx(0.0244).margin(5e-5));

  const FisherReport sep = separable_max_fisher(10, 10.0, 1.0);
  CHECK(sep.value == Approx(40.0 * squeeze_factor(1.0)).epsilon(1e-12));
  CHECK(1.0 / std::sqrt(sep.value) == Approx(0.0655).margin(5e-5));

  CHECK(entangled_max_fisher(1, 3.0, 0.8).value == Approx(separable_max_fisher(1, 3.0, 0.8).value).epsilon(1e-14));
}

TEST_CASE("upper bounds dominate and are tight at the endpoints") {
  CHECK(ub_entangled(10, 10.0, 1.0).value == Approx(entangled_max_fisher(10, 10.0, 1.0).value).epsilon(1e-14));
  CHECK(ub_entangled(10, 10.0, 0.0).value == Approx(40.0).epsilon(1e-14));
  CHECK(ub_separable(10, 10.0, 0.0).value == Approx(40.0).epsilon(1e-14));
  CHECK(ub_entangled(10, 10.0, 0.9).value > entangled_max_fisher(10, 10.0, 0.9).value);

  for (int m : {1, 4, 10}) {
    for (double n : {0.5, 2.0, 10.0}) {
      for (double eta : {0.25, 0.6, 0.9, 1.0}) {
        CAPTURE(m, n, eta);
        const double ub_e = ub_entangled(m, n, eta).value;
        const double max_e = entangled_max_fisher(m, n, eta).value;
        const double max_c = separable_max_fisher(m, n, eta).value;
        CHECK(ub_e >= max_e * (1.0 - 1e-14));
        CHECK(max_e >= max_c * (1.0 - 1e-14));
        CHECK(ub_separable(m, n, eta).value >= max_c * (1.0 - 1e-14));
        if (eta < 1.0 && n > 0.0 && m > 1) {
          CHECK(ub_e > max_e);
          CHECK(max_e > max_c);
        }
      }
    }
  }
}

TEST_CASE("Fisher values are monotone in photons and transmissivity") {
  const std::vector<double> photons = {0.0, 0.5, 1.0, 5.0, 10.0};
  const std::vector<double> etas = {0.25, 0.5, 0.9, 1.0};
  for (std::size_t i = 0; i + 1 < photons.size(); ++i) {
    for (double eta : etas) {
      CHECK(displacement_qfi_gaussian(photons[i + 1], eta).value >=
            displacement_qfi_gaussian(photons[i], eta).value);
      CHECK(ub_entangled(4, photons[i + 1], eta).value >= ub_entangled(4, photons[i], eta).value);
    }
  }
  for (double n : photons) {
    for (std::size_t j = 0; j + 1 < etas.size(); ++j) {
      // At N_S = 0 the value is constant in eta, up to roundoff.
      CHECK(displacement_qfi_gaussian(n, etas[j + 1]).value >=
            displacement_qfi_gaussian(n, etas[j]).value * (1.0 - 1e-12));
      CHECK(separable_max_fisher(4, n, etas[j + 1]).value >=
            separable_max_fisher(4, n, etas[j]).value * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("bounded-generator limits") {
  const auto [sep, ent] = dv_bounds(3, 0.0, 1.0);
  CHECK(sep.value == 3.0);
  CHECK(ent.value == 9.0);

  const auto [sep0, ent0] = dv_bounds(5, 0.7, 0.7);
  CHECK(sep0.value == 0.0);
  CHECK(ent0.value == 0.0);

  const auto [sep1, ent1] = dv_bounds(1, -0.5, 1.5);
  CHECK(sep1.value == ent1.value);

  for (int m = 1; m <= 16; ++m) {
    const auto [s, e] = dv_bounds(m, 0.0, 1.0);
    CHECK(e.value / s.value == double(m));
  }

  CHECK_THROWS_AS(dv_bounds(2, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("variance form on pure states") {
  CHECK(variance_form_fisher(vacuum(1), Eigen::VectorXd::Ones(1)).value == Approx(4.0).epsilon(1e-14));
  CHECK(variance_form_fisher(squeezed_vacuum(1.0), Eigen::VectorXd::Ones(1)).value ==
        Approx(23.313708498984759).epsilon(1e-12));

  // Balanced network probe carrying 4 n photons, unit weight per node.
  const double n = 0.75;
  const int m = 4;
  GaussianState probe = squeezed_vacuum(4.0 * n);
  for (int k = 1; k < m; ++k) {
    probe = tensor(probe, vacuum(1));
  }
  probe = apply_symplectic(probe, distribution_array(Eigen::VectorXd::Constant(m, 0.5)));
  CHECK(variance_form_fisher(probe, Eigen::VectorXd::Ones(m)).value ==
        Approx(entangled_max_fisher(m, 4.0 * n, 1.0).value).epsilon(1e-9));

  const GaussianState mixed = pure_loss(squeezed_vacuum(1.0), LossMap::uniform(1, 0.5));
  CHECK_THROWS_AS(variance_form_fisher(mixed, Eigen::VectorXd::Ones(1)), std::invalid_argument);
}

TEST_CASE("variance form agrees with finite differences on random pure probes") {
  CounterRng rng(71, 0);
  for (int rep = 0; rep < 8; ++rep) {
    const double photons = 2.0 * rng.next_open_unit();
    const double angle = 0.4 * rng.next_normal();
    const GaussianState probe = phase_rotate(squeezed_vacuum(photons), 0, angle);
    auto family = [&](double alpha) { return displace_x(probe, 0, alpha); };
    CHECK(variance_form_fisher(probe, Eigen::VectorXd::Ones(1)).value ==
          Approx(fisher_fd(family, 0.0).value).epsilon(1e-6));
  }
}

TEST_CASE("displacement Fisher matrix") {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(4, 2);
  jac(0, 0) = 1.0;  // x of mode 1
  jac(2, 1) = 1.0;  // x of mode 2
  const FisherMatrix h = fisher_matrix_displacement(vacuum(2), jac);
  CHECK(h.matrix.isApprox(4.0 * Eigen::MatrixXd::Identity(2, 2), 1e-12));

  // Single column reduces to the variance form on pure states.
  CounterRng rng(81, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const GaussianState probe = phase_rotate(squeezed_vacuum(rng.next_open_unit()), 0, rng.next_normal());
    Eigen::MatrixXd j1(2, 1);
    const double weight = 1.0 + rng.next_open_unit();
    j1 << weight, 0.0;
    CHECK(fisher_matrix_displacement(probe, j1).matrix(0, 0) ==
          Approx(variance_form_fisher(probe, Eigen::VectorXd::Constant(1, weight)).value).epsilon(1e-10));
  }
}

TEST_CASE("Fisher matrix off-diagonals match a fidelity oracle") {
  // Entangled two-mode probe displaced mode-wise.
  const GaussianState probe = apply_symplectic(
      tensor(squeezed_vacuum(2.0), vacuum(1)),
      distribution_array(Eigen::Vector2d(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0))));
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(4, 2);
  jac(0, 0) = 1.0;
  jac(2, 1) = 1.0;
  const FisherMatrix h = fisher_matrix_displacement(probe, jac);
  CHECK(std::abs(h.matrix(0, 1)) > 0.1);

  // Finite differences of the pure-state overlap along parameter slices.
  auto slice_information = [&](const Eigen::Vector2d& direction) {
    const double eps = 1e-4;
    auto state_at = [&](double t) {
      return displace_x(displace_x(probe, 0, direction[0] * t), 1, direction[1] * t);
    };
    const double f = dqs::testing::pure_overlap_fidelity(state_at(-eps / 2.0), state_at(eps / 2.0));
    return 8.0 * (1.0 - std::sqrt(f)) / (eps * eps);
  };
  const double i_plus = slice_information(Eigen::Vector2d(1.0, 1.0));
  const double i_minus = slice_information(Eigen::Vector2d(1.0, -1.0));
  const double off_diagonal = (i_plus - i_minus) / 4.0;
  CHECK(h.matrix(0, 1) == Approx(off_diagonal).epsilon(1e-5));
  CHECK(h.matrix(0, 0) == Approx(slice_information(Eigen::Vector2d(1.0, 0.0))).epsilon(1e-5));
}

TEST_CASE("weighted CR bound") {
  const FisherMatrix h(4.0 * Eigen::MatrixXd::Identity(2, 2), {"a1", "a2"});
  CHECK(weighted_cr_bound(h, Eigen::Vector2d(0.5, 0.5)) == Approx(0.125).epsilon(1e-14));
  CHECK(std::sqrt(weighted_cr_bound(h, Eigen::Vector2d(0.5, 0.5))) == Approx(0.35355).margin(1e-5));

  const FisherMatrix scalar(Eigen::MatrixXd::Identity(1, 1) * 16.0, {"a"});
  CHECK(weighted_cr_bound(scalar, Eigen::VectorXd::Ones(1)) == Approx(1.0 / 16.0).epsilon(1e-14));

  // Network consistency: entangled probe, equal weights.
  const int m = 10;
  GaussianState probe = squeezed_vacuum(10.0);
  for (int k = 1; k < m; ++k) {
    probe = tensor(probe, vacuum(1));
  }
  probe = apply_symplectic(probe, distribution_array(Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)))));
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * m, m);
  for (int k = 0; k < m; ++k) {
    jac(2 * k, k) = 1.0;
  }
  const FisherMatrix h_net = fisher_matrix_displacement(probe, jac);
  const double bound = weighted_cr_bound(h_net, Eigen::VectorXd::Constant(m, 1.0 / m));
  CHECK(bound == Approx(1.0 / entangled_max_fisher(m, 10.0, 1.0).value).epsilon(1e-9));

  const FisherMatrix singular(Eigen::MatrixXd::Zero(2, 2), {"a1", "a2"});
  CHECK_THROWS_AS(weighted_cr_bound(singular, Eigen::Vector2d(1.0, 0.0)), NumericError);
}

TEST_CASE("classical information of a homodyne mixture is convex") {
  // Mixing two probe variances can never beat mixing their informations.
  for (auto [p, n1, n2] : {std::tuple{0.5, 0.0, 1.0}, {0.3, 0.5, 2.0}, {0.8, 1.0, 4.0}}) {
    const double v1 = 1.0 / (4.0 * squeeze_factor(n1));
    const double v2 = 1.0 / (4.0 * squeeze_factor(n2));
    const double mixture = dqs::testing::mixture_mean_fisher(p, v1, v2);
    const double convex_bound = p / v1 + (1.0 - p) / v2;
    CAPTURE(p, n1, n2);
    CHECK(mixture <= convex_bound * (1.0 + 1e-6));
  }
}
