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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dqs/gaussian.hpp"

namespace dqs {

enum class FisherMethod { closed_form, fidelity_fd, variance_form, upper_bound };

inline const char* to_string(FisherMethod m) {
  switch (m) {
    case FisherMethod::closed_form: return "closed_form";
    case FisherMethod::fidelity_fd: return "fidelity_fd";
    case FisherMethod::variance_form: return "variance_form";
    case FisherMethod::upper_bound: return "upper_bound";
  }
  return "unknown";
}

// Echo of the inputs a Fisher value was computed for, so values produced by
// different methods can be compared without guessing their provenance.
struct FisherParams {
  int num_modes = 1;
  double photon_budget = 0.0;
  Eigen::VectorXd transmissivities;
  Eigen::VectorXd weights;
};

// One Fisher-information value, in inverse-variance units per probe use.
struct FisherReport {
  double value = 0.0;
  FisherMethod method = FisherMethod::closed_form;
  FisherParams params;
};

namespace detail {

inline void check_eta_open(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("transmissivity must lie in (0, 1]");
  }
}

inline void check_eta_closed(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("transmissivity must lie in [0, 1]");
  }
}

inline FisherParams params_m_n_eta(int num_modes, double photon_budget, double eta) {
  FisherParams p;
  p.num_modes = num_modes;
  p.photon_budget = photon_budget;
  p.transmissivities = Eigen::VectorXd::Constant(num_modes, eta);
  return p;
}

}  // namespace detail

// Displacement Fisher information of the optimal single-mode Gaussian probe
// (x-squeezed vacuum with mean photon number N_S) after loss eta:
//   I = 4 / (eta/s + 1 - eta),  s = (sqrt(N_S+1) + sqrt(N_S))^2.
// This single-mode form anchors the normalization of every network value
// below; it equals 1/Vxx of the lossy probe, so homodyne saturates it.
inline FisherReport displacement_qfi_gaussian(double photon_budget, double eta) {
  detail::check_eta_open(eta);
  const double s = squeeze_factor(photon_budget);
  return FisherReport{4.0 / (eta / s + 1.0 - eta), FisherMethod::closed_form,
                      detail::params_m_n_eta(1, photon_budget, eta)};
}

// Best entangled-network Fisher information for estimating the balanced
// average of M displacements under uniform loss, total photon budget N_S:
// M times the single-mode optimum at full budget.
inline FisherReport entangled_max_fisher(int num_modes, double photon_budget, double eta) {
  if (num_modes < 1) {
    throw std::invalid_argument("entangled_max_fisher: num_modes must be >= 1");
  }
  FisherReport single = displacement_qfi_gaussian(photon_budget, eta);
  return FisherReport{num_modes * single.value, FisherMethod::closed_form,
                      detail::params_m_n_eta(num_modes, photon_budget, eta)};
}

// Separable counterpart: the budget splits evenly, so each mode carries
// N_S / M photons.
inline FisherReport separable_max_fisher(int num_modes, double photon_budget, double eta) {
  if (num_modes < 1) {
    throw std::invalid_argument("separable_max_fisher: num_modes must be >= 1");
  }
  FisherReport single = displacement_qfi_gaussian(photon_budget / num_modes, eta);
  return FisherReport{num_modes * single.value, FisherMethod::closed_form,
                      detail::params_m_n_eta(num_modes, photon_budget, eta)};
}

// Upper bound on the entangled-network Fisher information under loss:
//   I <= eta * 4M s(N_S) + 4 (1 - eta) M.
// Tight at eta = 1 and eta = 0; whether it is attainable in between is not
// asserted anywhere in this library.
inline FisherReport ub_entangled(int num_modes, double photon_budget, double eta) {
  detail::check_eta_closed(eta);
  if (num_modes < 1) {
    throw std::invalid_argument("ub_entangled: num_modes must be >= 1");
  }
  const double s = squeeze_factor(photon_budget);
  const double value = eta * 4.0 * num_modes * s + 4.0 * (1.0 - eta) * num_modes;
  return FisherReport{value, FisherMethod::upper_bound, detail::params_m_n_eta(num_modes, photon_budget, eta)};
}

// Separable version of the same bound, with the per-mode budget N_S / M.
inline FisherReport ub_separable(int num_modes, double photon_budget, double eta) {
  detail::check_eta_closed(eta);
  if (num_modes < 1) {
    throw std::invalid_argument("ub_separable: num_modes must be >= 1");
  }
  const double s = squeeze_factor(photon_budget / num_modes);
  const double value = eta * 4.0 * num_modes * s + 4.0 * (1.0 - eta) * num_modes;
  return FisherReport{value, FisherMethod::upper_bound, detail::params_m_n_eta(num_modes, photon_budget, eta)};
}

// Fisher-information limits for M probes with a bounded generator spectrum
// [lambda_min, lambda_max]: separable inputs reach M (dlambda)^2, entangled
// inputs M^2 (dlambda)^2. The entangled value is returned as exactly M times
// the separable one.
inline std::pair<FisherReport, FisherReport> dv_bounds(int num_modes, double lambda_min, double lambda_max) {
  if (num_modes < 1) {
    throw std::invalid_argument("dv_bounds: num_modes must be >= 1");
  }
  if (lambda_max < lambda_min) {
    throw std::invalid_argument("dv_bounds: lambda_max must be >= lambda_min");
  }
  const double gap2 = (lambda_max - lambda_min) * (lambda_max - lambda_min);
  FisherParams params;
  params.num_modes = num_modes;
  FisherReport separable{num_modes * gap2, FisherMethod::closed_form, params};
  FisherReport entangled{num_modes * separable.value, FisherMethod::closed_form, params};
  return {separable, entangled};
}

// Fisher information of a single-mode state family via the fidelity form
//   I = lim 8 (1 - sqrt(F(rho(a), rho(a + e)))) / e^2,
// evaluated with central differences at a0 +/- e/2 and one Richardson step.
inline FisherReport fisher_fd(const std::function<GaussianState(double)>& family, double alpha0,
                              double eps = 1e-4) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("fisher_fd: eps must be > 0");
  }
  auto estimate = [&](double e) {
    const double f = fidelity_single_mode(family(alpha0 - e / 2.0), family(alpha0 + e / 2.0));
    const double defect = 1.0 - std::sqrt(f);
    if (defect >= 0.1) {
      throw std::invalid_argument("fisher_fd: eps too large for this family (1 - sqrt(F) >= 0.1)");
    }
    return 8.0 * defect / (e * e);
  };
  const double coarse = estimate(eps);
  const double fine = estimate(eps / 2.0);
  FisherParams params;
  params.num_modes = 1;
  return FisherReport{(4.0 * fine - coarse) / 3.0, FisherMethod::fidelity_fd, params};
}

// Calibration of the variance form I = K * c^T Vpp c for pure states whose
// parameter displaces x_m by c_m. Anchored once so a unit-weight coherent
// probe (vacuum, Vpp = 1/4) reports I = 4, matching the fidelity form; frozen
// thereafter.
inline constexpr double kVarianceFormScale = 16.0;

// Variance-form Fisher information for a pure Gaussian probe and generator
// sum_m c_m p_m. Invalid for mixed states, which are rejected.
inline FisherReport variance_form_fisher(const GaussianState& state, const Eigen::VectorXd& weights) {
  if (weights.size() != state.num_modes) {
    throw std::invalid_argument("variance_form_fisher: weight length must equal num_modes");
  }
  if (!is_pure(state, 1e-8)) {
    throw std::invalid_argument("variance_form_fisher: state is not pure; the variance form is invalid for mixed states");
  }
  double quad = 0.0;
  for (int i = 0; i < state.num_modes; ++i) {
    for (int j = 0; j < state.num_modes; ++j) {
      quad += weights[i] * weights[j] * state.cov(2 * i + 1, 2 * j + 1);
    }
  }
  FisherParams params;
  params.num_modes = state.num_modes;
  params.weights = weights;
  return FisherReport{kVarianceFormScale * quad, FisherMethod::variance_form, params};
}

// K x K Fisher information matrix, symmetric positive semidefinite.
struct FisherMatrix {
  Eigen::MatrixXd matrix;
  std::vector<std::string> labels;

  FisherMatrix(Eigen::MatrixXd matrix_in, std::vector<std::string> labels_in)
      : matrix(std::move(matrix_in)), labels(std::move(labels_in)) {
    if (matrix.rows() != matrix.cols()) {
      throw std::invalid_argument("FisherMatrix: matrix must be square");
    }
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw std::invalid_argument("FisherMatrix: matrix is not symmetric");
    }
    matrix = 0.5 * (matrix + matrix.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      throw std::invalid_argument("FisherMatrix: matrix is not positive semidefinite");
    }
  }
};

// Fisher matrix for parameters that shift the mean only: H = J^T V^-1 J,
// where column k of the jacobian is d(mean)/d(alpha_k). Exact for Gaussian
// states of any purity; the K = 1 diagonal reproduces fisher_fd.
inline FisherMatrix fisher_matrix_displacement(const GaussianState& state, const Eigen::MatrixXd& jacobian) {
  if (jacobian.rows() != 2 * state.num_modes) {
    throw std::invalid_argument("fisher_matrix_displacement: jacobian must have 2M rows");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(state.cov);
  if (!lu.isInvertible()) {
    throw NumericError("fisher_matrix_displacement: singular covariance");
  }
  Eigen::MatrixXd h = jacobian.transpose() * lu.solve(jacobian);
  h = 0.5 * (h + h.transpose().eval());
  std::vector<std::string> labels(jacobian.cols());
  for (int k = 0; k < jacobian.cols(); ++k) {
    labels[k] = "alpha_" + std::to_string(k + 1);
  }
  return FisherMatrix(std::move(h), std::move(labels));
}

// Variance lower bound for estimating the weighted combination w . alpha:
//   var >= w^T H^-1 w.
inline double weighted_cr_bound(const FisherMatrix& fisher, const Eigen::VectorXd& weights) {
  if (weights.size() != fisher.matrix.rows()) {
    throw std::invalid_argument("weighted_cr_bound: weight length must match the Fisher matrix");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(fisher.matrix);
  if (!lu.isInvertible()) {
    throw NumericError("weighted_cr_bound: singular Fisher matrix");
  }
  return weights.dot(lu.solve(weights));
}

}  // namespace dqs
