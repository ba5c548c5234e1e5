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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqs {

// Quadrature convention used throughout: x = Re(a), p = Im(a), vacuum
// covariance I/4 per mode, quadratures interleaved as (x1, p1, ..., xM, pM).
// A displacement by real alpha shifts the mean of x by exactly alpha, and
// pure loss maps (mu, V) -> (sqrt(eta) mu, eta V + (1 - eta) I/4).
inline constexpr double kVacuumVariance = 0.25;

// Thrown when a computation fails numerically (as opposed to bad arguments).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Standard symplectic form for the interleaved ordering: block diag of
// [[0, 1], [-1, 0]] per mode.
inline Eigen::MatrixXd symplectic_form(int num_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
  for (int m = 0; m < num_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

// Gaussian state of M bosonic modes: quadrature mean vector (length 2M) and
// covariance matrix (2M x 2M). Immutable by convention; operations return
// new states.
struct GaussianState {
  int num_modes;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianState(int modes, Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
      : num_modes(modes), mean(std::move(mean_in)), cov(std::move(cov_in)) {
    if (num_modes < 1) {
      throw std::invalid_argument("GaussianState: num_modes must be >= 1");
    }
    const int n = 2 * num_modes;
    if (mean.size() != n || cov.rows() != n || cov.cols() != n) {
      throw std::invalid_argument("GaussianState: mean/cov dimensions do not match num_modes");
    }
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw std::invalid_argument("GaussianState: covariance is not symmetric");
    }
    cov = 0.5 * (cov + cov.transpose().eval());
  }
};

// Affine quadrature map r -> S r + d with S symplectic.
struct SymplecticTransform {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd shift;

  SymplecticTransform(Eigen::MatrixXd matrix_in, Eigen::VectorXd shift_in)
      : matrix(std::move(matrix_in)), shift(std::move(shift_in)) {
    if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0 || matrix.rows() == 0) {
      throw std::invalid_argument("SymplecticTransform: matrix must be 2M x 2M");
    }
    if (shift.size() != matrix.rows()) {
      throw std::invalid_argument("SymplecticTransform: shift length must match matrix");
    }
    const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(matrix.rows()) / 2);
    const double dev = (matrix * omega * matrix.transpose() - omega).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
      throw std::invalid_argument("SymplecticTransform: matrix is not symplectic (|S Omega S^T - Omega| = " +
                                  std::to_string(dev) + ")");
    }
  }

  int num_modes() const { return static_cast<int>(matrix.rows()) / 2; }

  // Exact group inverse: S^-1 = -Omega S^T Omega, no factorization needed.
  SymplecticTransform inverse() const {
    const Eigen::MatrixXd omega = symplectic_form(num_modes());
    Eigen::MatrixXd inv = -omega * matrix.transpose() * omega;
    Eigen::VectorXd s = -(inv * shift);
    return SymplecticTransform(std::move(inv), std::move(s));
  }
};

// Applies t1 first, then t2.
inline SymplecticTransform compose(const SymplecticTransform& t2, const SymplecticTransform& t1) {
  if (t1.matrix.rows() != t2.matrix.rows()) {
    throw std::invalid_argument("compose: transform dimensions do not match");
  }
  return SymplecticTransform(t2.matrix * t1.matrix, t2.matrix * t1.shift + t2.shift);
}

// Per-mode pure-loss channel. Entries in [0, 1]; 1 is the identity channel
// and 0 replaces the mode with vacuum.
struct LossMap {
  Eigen::VectorXd transmissivities;

  explicit LossMap(Eigen::VectorXd etas) : transmissivities(std::move(etas)) {
    for (int m = 0; m < transmissivities.size(); ++m) {
      const double eta = transmissivities[m];
      if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("LossMap: transmissivities must lie in [0, 1]");
      }
    }
  }

  static LossMap uniform(int num_modes, double eta) {
    return LossMap(Eigen::VectorXd::Constant(num_modes, eta));
  }
};

inline GaussianState vacuum(int num_modes) {
  if (num_modes < 1) {
    throw std::invalid_argument("vacuum: num_modes must be >= 1");
  }
  return GaussianState(num_modes, Eigen::VectorXd::Zero(2 * num_modes),
                       Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes) * kVacuumVariance);
}

// Squeeze factor s = (sqrt(N+1) + sqrt(N))^2 for mean photon number N. The
// squeezed x-variance is 1/(4s) and the anti-squeezed p-variance s/4. Note
// s = e^{2r} with N = sinh^2(r); some texts use a squeezing parameter equal
// to twice this r, which shifts factors of 2 around.
inline double squeeze_factor(double photon_number) {
  if (photon_number < 0.0) {
    throw std::invalid_argument("squeeze_factor: photon number must be >= 0");
  }
  const double root = std::sqrt(photon_number + 1.0) + std::sqrt(photon_number);
  return root * root;
}

// Single-mode x-squeezed vacuum with mean photon number N_S.
inline GaussianState squeezed_vacuum(double photon_number) {
  const double s = squeeze_factor(photon_number);
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0 / (4.0 * s), 0.0, 0.0, s / 4.0;
  return GaussianState(1, Eigen::VectorXd::Zero(2), cov);
}

// Total mean photon number: sum over modes of Vxx + Vpp + mux^2 + mup^2 - 1/2.
inline double mean_photon_number(const GaussianState& state) {
  double total = 0.0;
  for (int m = 0; m < state.num_modes; ++m) {
    const int x = 2 * m, p = 2 * m + 1;
    total += state.cov(x, x) + state.cov(p, p) + state.mean[x] * state.mean[x] +
             state.mean[p] * state.mean[p] - 0.5;
  }
  return total;
}

inline GaussianState apply_symplectic(const GaussianState& state, const SymplecticTransform& t) {
  if (t.matrix.rows() != 2 * state.num_modes) {
    throw std::invalid_argument("apply_symplectic: dimension mismatch");
  }
  return GaussianState(state.num_modes, t.matrix * state.mean + t.shift,
                       t.matrix * state.cov * t.matrix.transpose());
}

// Tensor product of two states (a's modes first).
inline GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int modes = a.num_modes + b.num_modes;
  Eigen::VectorXd mean(2 * modes);
  mean << a.mean, b.mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  cov.topLeftCorner(2 * a.num_modes, 2 * a.num_modes) = a.cov;
  cov.bottomRightCorner(2 * b.num_modes, 2 * b.num_modes) = b.cov;
  return GaussianState(modes, std::move(mean), std::move(cov));
}

// Orthogonal M x M matrix with the given unit first column, promoted to a
// passive 2M x 2M symplectic acting identically on the x and p blocks. Mode 1
// is routed into the network with amplitudes `coefficients`.
//
// The remaining columns are completed by Gram-Schmidt on the standard basis
// in index order, so the completion is deterministic.
inline SymplecticTransform distribution_array(const Eigen::VectorXd& coefficients) {
  const int modes = static_cast<int>(coefficients.size());
  if (modes < 1) {
    throw std::invalid_argument("distribution_array: empty coefficient vector");
  }
  if (std::abs(coefficients.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("distribution_array: coefficients must be unit-norm");
  }
  Eigen::MatrixXd ortho(modes, modes);
  ortho.col(0) = coefficients / coefficients.norm();
  int filled = 1;
  for (int j = 0; j < modes && filled < modes; ++j) {
    Eigen::VectorXd cand = Eigen::VectorXd::Unit(modes, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < filled; ++k) {
        cand -= ortho.col(k).dot(cand) * ortho.col(k);
      }
    }
    if (cand.squaredNorm() > 1e-12) {
      ortho.col(filled++) = cand.normalized();
    }
  }
  if (filled < modes) {
    throw NumericError("distribution_array: orthogonal completion failed");
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    for (int k = 0; k < modes; ++k) {
      s(2 * m, 2 * k) = ortho(m, k);
      s(2 * m + 1, 2 * k + 1) = ortho(m, k);
    }
  }
  return SymplecticTransform(std::move(s), Eigen::VectorXd::Zero(2 * modes));
}

inline GaussianState pure_loss(const GaussianState& state, const LossMap& loss) {
  if (loss.transmissivities.size() != state.num_modes) {
    throw std::invalid_argument("pure_loss: dimension mismatch");
  }
  Eigen::VectorXd scale(2 * state.num_modes);
  Eigen::VectorXd eta2(2 * state.num_modes);
  for (int m = 0; m < state.num_modes; ++m) {
    const double eta = loss.transmissivities[m];
    scale[2 * m] = scale[2 * m + 1] = std::sqrt(eta);
    eta2[2 * m] = eta2[2 * m + 1] = eta;
  }
  Eigen::VectorXd mean = scale.asDiagonal() * state.mean;
  Eigen::MatrixXd cov = scale.asDiagonal() * state.cov * scale.asDiagonal();
  cov.diagonal() += (Eigen::VectorXd::Ones(2 * state.num_modes) - eta2) * kVacuumVariance;
  return GaussianState(state.num_modes, std::move(mean), std::move(cov));
}

inline GaussianState displace_x(const GaussianState& state, int mode, double alpha) {
  if (mode < 0 || mode >= state.num_modes) {
    throw std::out_of_range("displace_x: mode index out of range");
  }
  Eigen::VectorXd mean = state.mean;
  mean[2 * mode] += alpha;
  return GaussianState(state.num_modes, std::move(mean), state.cov);
}

// Displaces the x quadrature of every mode by the corresponding entry.
inline GaussianState displace_x_all(const GaussianState& state, const Eigen::VectorXd& alphas) {
  if (alphas.size() != state.num_modes) {
    throw std::invalid_argument("displace_x_all: dimension mismatch");
  }
  Eigen::VectorXd mean = state.mean;
  for (int m = 0; m < state.num_modes; ++m) {
    mean[2 * m] += alphas[m];
  }
  return GaussianState(state.num_modes, std::move(mean), state.cov);
}

// Phase-space rotation of one mode by theta:
// R = [[cos, sin], [-sin, cos]]. Photon number is invariant.
inline GaussianState phase_rotate(const GaussianState& state, int mode, double theta) {
  if (mode < 0 || mode >= state.num_modes) {
    throw std::out_of_range("phase_rotate: mode index out of range");
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * state.num_modes, 2 * state.num_modes);
  const double c = std::cos(theta), sn = std::sin(theta);
  s(2 * mode, 2 * mode) = c;
  s(2 * mode, 2 * mode + 1) = sn;
  s(2 * mode + 1, 2 * mode) = -sn;
  s(2 * mode + 1, 2 * mode + 1) = c;
  return apply_symplectic(state, SymplecticTransform(std::move(s), Eigen::VectorXd::Zero(2 * state.num_modes)));
}

inline GaussianState phase_rotate_all(const GaussianState& state, double theta) {
  GaussianState out = state;
  for (int m = 0; m < state.num_modes; ++m) {
    out = phase_rotate(out, m, theta);
  }
  return out;
}

// Symplectic eigenvalues of a covariance matrix, descending. A physical
// state has all of them >= 1/4 (up to roundoff); a pure state has all of
// them equal to 1/4.
inline std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const int modes = static_cast<int>(cov.rows()) / 2;
  const Eigen::MatrixXd m = symplectic_form(modes) * cov;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symplectic_eigenvalues: eigen decomposition failed");
  }
  std::vector<double> moduli(2 * modes);
  for (int i = 0; i < 2 * modes; ++i) {
    moduli[i] = std::abs(solver.eigenvalues()[i]);
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  // Moduli come in +/- i nu pairs; keep one per pair.
  std::vector<double> out(modes);
  for (int i = 0; i < modes; ++i) {
    out[i] = 0.5 * (moduli[2 * i] + moduli[2 * i + 1]);
  }
  return out;
}

inline bool is_physical(const GaussianState& state, double tolerance = 1e-10) {
  for (double nu : symplectic_eigenvalues(state.cov)) {
    if (nu < kVacuumVariance - tolerance) {
      return false;
    }
  }
  return true;
}

inline bool is_pure(const GaussianState& state, double tolerance = 1e-8) {
  for (double nu : symplectic_eigenvalues(state.cov)) {
    if (std::abs(nu - kVacuumVariance) > tolerance) {
      return false;
    }
  }
  return true;
}

// Uhlmann fidelity between two single-mode Gaussian states.
//
// With D = 16 det(V1 + V2) and L = (16 det V1 - 1)(16 det V2 - 1):
//   F = 2 exp(-1/2 d^T (V1+V2)^-1 d) / (sqrt(D + L) - sqrt(L)).
// The denominator is evaluated in rationalized form to avoid cancellation
// for strongly mixed states.
inline double fidelity_single_mode(const GaussianState& a, const GaussianState& b) {
  if (a.num_modes != 1 || b.num_modes != 1) {
    throw std::invalid_argument("fidelity_single_mode: both states must be single-mode");
  }
  const Eigen::Matrix2d vsum = a.cov + b.cov;
  const Eigen::Vector2d d = b.mean - a.mean;
  const double det_sum = vsum.determinant();
  if (det_sum <= 0.0) {
    throw NumericError("fidelity_single_mode: degenerate covariance sum");
  }
  const double big_d = 16.0 * det_sum;
  const double l1 = std::max(0.0, 16.0 * a.cov.determinant() - 1.0);
  const double l2 = std::max(0.0, 16.0 * b.cov.determinant() - 1.0);
  const double big_l = l1 * l2;
  const double denom = big_d / (std::sqrt(big_d + big_l) + std::sqrt(big_l));
  const double quad = d.dot(vsum.inverse() * d);
  const double f = (2.0 / denom) * std::exp(-0.5 * quad);
  return std::min(1.0, std::max(0.0, f));
}

}  // namespace dqs
