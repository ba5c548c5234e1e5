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
#include <utility>

#include "dqs/gaussian.hpp"
#include "dqs/rng.hpp"

namespace dqs {

// Outcomes of repeated x-quadrature homodyne measurements on every mode.
// Row t holds the M outcomes of trial t.
struct HomodyneRecord {
  Eigen::MatrixXd samples;
  std::uint64_t seed;

  std::int64_t trials() const { return samples.rows(); }
  int num_modes() const { return static_cast<int>(samples.cols()); }
};

namespace detail {

// Cholesky factor of the x-block covariance, with a small diagonal jitter
// ladder for marginally indefinite blocks.
inline Eigen::MatrixXd x_block_cholesky(const Eigen::MatrixXd& x_cov) {
  for (double jitter : {0.0, 1e-15, 1e-13, 1e-12}) {
    Eigen::MatrixXd candidate = x_cov;
    candidate.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(candidate);
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
  }
  throw NumericError("homodyne_x: x-quadrature covariance block is not positive definite");
}

}  // namespace detail

// Samples joint x-quadrature outcomes for all modes. Trials are i.i.d. draws
// from the multivariate normal with the state's x means and x-block
// covariance. Each trial uses its own counter-derived stream, so the record
// is deterministic in (seed, trial index) and independent of evaluation
// order.
inline HomodyneRecord homodyne_x(const GaussianState& state, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("homodyne_x: trials must be >= 1");
  }
  const int modes = state.num_modes;
  Eigen::VectorXd x_mean(modes);
  Eigen::MatrixXd x_cov(modes, modes);
  for (int i = 0; i < modes; ++i) {
    x_mean[i] = state.mean[2 * i];
    for (int j = 0; j < modes; ++j) {
      x_cov(i, j) = state.cov(2 * i, 2 * j);
    }
  }
  const Eigen::MatrixXd chol = detail::x_block_cholesky(x_cov);

  HomodyneRecord record{Eigen::MatrixXd(trials, modes), seed};
  Eigen::VectorXd z(modes);
  for (std::int64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    for (int m = 0; m < modes; ++m) {
      z[m] = rng.next_normal();
    }
    record.samples.row(t) = (x_mean + chol * z).transpose();
  }
  return record;
}

}  // namespace dqs
