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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "dqs/gaussian.hpp"
#include "dqs/homodyne.hpp"
#include "dqs/rng.hpp"

namespace dqs {

enum class ProbeKind { entangled, separable };
enum class SensingTask { displacement, phase };

inline const char* to_string(ProbeKind k) {
  return k == ProbeKind::entangled ? "entangled" : "separable";
}

inline const char* to_string(SensingTask t) {
  return t == SensingTask::displacement ? "displacement" : "phase";
}

// Description of one sensing task over a network of M nodes: estimator
// weights (signed, normalized to sum |w_m| = 1), per-node transmissivities,
// and the total mean-photon budget of the probe.
struct SensorNetworkSpec {
  int num_modes;
  Eigen::VectorXd weights;
  Eigen::VectorXd transmissivities;
  double photon_budget;
  ProbeKind kind;
  SensingTask task;

  SensorNetworkSpec(int num_modes_in, Eigen::VectorXd weights_in, Eigen::VectorXd transmissivities_in,
                    double photon_budget_in, ProbeKind kind_in, SensingTask task_in = SensingTask::displacement)
      : num_modes(num_modes_in),
        weights(std::move(weights_in)),
        transmissivities(std::move(transmissivities_in)),
        photon_budget(photon_budget_in),
        kind(kind_in),
        task(task_in) {
    if (num_modes < 1) {
      throw std::invalid_argument("SensorNetworkSpec: M must be >= 1");
    }
    if (weights.size() != num_modes) {
      throw std::invalid_argument("SensorNetworkSpec: weights length must equal M");
    }
    if (transmissivities.size() != num_modes) {
      throw std::invalid_argument("SensorNetworkSpec: transmissivities length must equal M");
    }
    if (std::abs(weights.cwiseAbs().sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("SensorNetworkSpec: weights must satisfy sum |w_m| = 1");
    }
    for (int m = 0; m < num_modes; ++m) {
      const double eta = transmissivities[m];
      if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("SensorNetworkSpec: transmissivities must lie in (0, 1]");
      }
    }
    if (!(photon_budget >= 0.0)) {
      throw std::invalid_argument("SensorNetworkSpec: photon_budget must be >= 0");
    }
  }

  // Rescales the given weights to sum |w_m| = 1 before validating.
  static SensorNetworkSpec normalized(int num_modes, Eigen::VectorXd weights,
                                      Eigen::VectorXd transmissivities, double photon_budget,
                                      ProbeKind kind, SensingTask task = SensingTask::displacement) {
    const double total = weights.cwiseAbs().sum();
    if (!(total > 0.0)) {
      throw std::invalid_argument("SensorNetworkSpec: weights must not be all zero");
    }
    return SensorNetworkSpec(num_modes, weights / total, std::move(transmissivities), photon_budget, kind, task);
  }

  // Equal weights 1/M, uniform transmissivity.
  static SensorNetworkSpec homogeneous(int num_modes, double eta, double photon_budget, ProbeKind kind,
                                       SensingTask task = SensingTask::displacement) {
    return SensorNetworkSpec(num_modes, Eigen::VectorXd::Constant(num_modes, 1.0 / num_modes),
                             Eigen::VectorXd::Constant(num_modes, eta), photon_budget, kind, task);
  }
};

// Probe state plus everything needed to run and score the protocol.
struct ProbePlan {
  GaussianState probe;
  SymplecticTransform distribution;
  Eigen::VectorXd estimator_weights;
  double analytic_precision;
  Eigen::VectorXd allocation;  // per-node photons; meaningful for separable plans
  bool allocation_converged = true;
};

// rms error of the entangled displacement protocol for arbitrary weights and
// transmissivities:
//   delta = (wbar / 2) sqrt(etabar / s(N_S) + 1 - etabar)
// with wbar^2 = sum w_m^2 and etabar = sum w_m^2 eta_m / wbar^2. Of the two
// normalizations of wbar floating around, this is the one whose prediction
// the homodyne simulation reproduces; the eta-weighted alternative enters
// only through the beam-splitter coefficients v_m ~ w_m sqrt(eta_m).
inline double analytic_precision_entangled_raw(const Eigen::VectorXd& weights,
                                               const Eigen::VectorXd& transmissivities,
                                               double photon_budget) {
  const double w2 = weights.squaredNorm();
  double w2eta = 0.0;
  for (int m = 0; m < weights.size(); ++m) {
    w2eta += weights[m] * weights[m] * transmissivities[m];
  }
  const double etabar = w2eta / w2;
  const double s = squeeze_factor(photon_budget);
  return 0.5 * std::sqrt(w2) * std::sqrt(etabar / s + 1.0 - etabar);
}

inline double analytic_precision_entangled(const SensorNetworkSpec& spec) {
  return analytic_precision_entangled_raw(spec.weights, spec.transmissivities, spec.photon_budget);
}

// Homogeneous closed forms, usable down to eta = 0 (vacuum-noise floor).
inline double delta_entangled_homogeneous(int num_modes, double photon_budget, double eta) {
  const double s = squeeze_factor(photon_budget);
  return 0.5 / std::sqrt(static_cast<double>(num_modes)) * std::sqrt(eta / s + 1.0 - eta);
}

inline double delta_separable_homogeneous(int num_modes, double photon_budget, double eta) {
  const double s = squeeze_factor(photon_budget / num_modes);
  return 0.5 / std::sqrt(static_cast<double>(num_modes)) * std::sqrt(eta / s + 1.0 - eta);
}

// Precision lower bounds from the lossy Fisher-information upper bounds.
inline double delta_lb_entangled(int num_modes, double photon_budget, double eta) {
  const double s = squeeze_factor(photon_budget);
  return 1.0 / std::sqrt(eta * 4.0 * num_modes * s + 4.0 * (1.0 - eta) * num_modes);
}

inline double delta_lb_separable(int num_modes, double photon_budget, double eta) {
  const double s = squeeze_factor(photon_budget / num_modes);
  return 1.0 / std::sqrt(eta * 4.0 * num_modes * s + 4.0 * (1.0 - eta) * num_modes);
}

// Builds the entangled probe: a single x-squeezed vacuum carrying the whole
// budget, distributed by the array whose first column is v_m ~ w_m
// sqrt(eta_m) (signs included, so signed weights become phase flips).
inline ProbePlan build_entangled(const SensorNetworkSpec& spec) {
  Eigen::VectorXd v(spec.num_modes);
  for (int m = 0; m < spec.num_modes; ++m) {
    v[m] = spec.weights[m] * std::sqrt(spec.transmissivities[m]);
  }
  const double norm = v.norm();
  if (!(norm > 0.0)) {
    throw std::invalid_argument("build_entangled: all-zero distribution coefficients");
  }
  v /= norm;
  SymplecticTransform array = distribution_array(v);
  GaussianState source = squeezed_vacuum(spec.photon_budget);
  for (int m = 1; m < spec.num_modes; ++m) {
    source = tensor(source, vacuum(1));
  }
  GaussianState probe = apply_symplectic(source, array);
  return ProbePlan{std::move(probe), std::move(array), spec.weights,
                   analytic_precision_entangled(spec), Eigen::VectorXd::Zero(spec.num_modes)};
}

// ---------------------------------------------------------------------------
// Separable-probe power allocation.

// Objective of the allocation problem:
//   f(N) = sum_m w_m^2 (eta_m / s(N_m) + 1 - eta_m) / 4,  sum N_m = N_S.
inline double allocation_objective(const Eigen::VectorXd& weights, const Eigen::VectorXd& transmissivities,
                                   const Eigen::VectorXd& photons) {
  double total = 0.0;
  for (int m = 0; m < weights.size(); ++m) {
    const double w2 = weights[m] * weights[m];
    total += w2 * (transmissivities[m] / squeeze_factor(std::max(0.0, photons[m])) + 1.0 - transmissivities[m]) / 4.0;
  }
  return total;
}

struct AllocationResult {
  Eigen::VectorXd photons;
  double objective;
  bool converged;
  double residual;  // first-order optimality gap bound at the returned point
};

namespace detail {

// Euclidean projection onto {x >= 0, sum x = budget}.
inline Eigen::VectorXd project_simplex(Eigen::VectorXd x, double budget) {
  const int n = static_cast<int>(x.size());
  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (int i = 0; i < n; ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - budget) / (i + 1);
    if (sorted[i] - candidate > 0.0) {
      theta = candidate;
    }
  }
  for (int i = 0; i < n; ++i) {
    x[i] = std::max(0.0, x[i] - theta);
  }
  return x;
}

// d/dN of (sqrt(N+1) - sqrt(N))^2, clamped near N = 0 where it diverges.
inline double inverse_squeeze_slope(double photons) {
  const double n = std::max(photons, 1e-12);
  const double g = std::pow(std::sqrt(n + 1.0) - std::sqrt(n), 2.0);
  return -g / std::sqrt(n * (n + 1.0));
}

}  // namespace detail

// Minimizes the allocation objective by projected gradient descent with
// backtracking, from an equal-split start plus random restarts. The problem
// is convex, so the restarts guard against step-size stalls rather than
// local minima. Nodes with zero weight are excluded and receive no photons.
inline AllocationResult optimize_allocation(const Eigen::VectorXd& weights,
                                            const Eigen::VectorXd& transmissivities, double budget,
                                            int restarts = 20, int max_iterations = 800) {
  const int n = static_cast<int>(weights.size());
  std::vector<int> active;
  for (int m = 0; m < n; ++m) {
    if (weights[m] != 0.0) {
      active.push_back(m);
    }
  }
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  if (active.empty() || budget <= 0.0) {
    return AllocationResult{best, allocation_objective(weights, transmissivities, best), true, 0.0};
  }
  const int k = static_cast<int>(active.size());

  auto expand = [&](const Eigen::VectorXd& reduced) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) {
      full[active[i]] = reduced[i];
    }
    return full;
  };
  auto objective = [&](const Eigen::VectorXd& reduced) {
    return allocation_objective(weights, transmissivities, expand(reduced));
  };
  auto gradient = [&](const Eigen::VectorXd& reduced) {
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) {
      const int m = active[i];
      g[i] = weights[m] * weights[m] * transmissivities[m] / 4.0 * detail::inverse_squeeze_slope(reduced[i]);
    }
    return g;
  };

  // First-order optimality certificate for a convex objective on the
  // simplex: f(x) - f* <= g.x - budget * min_i g_i. Zero exactly at the
  // optimum, where the gradient equalizes over the support.
  auto optimality_gap = [&](const Eigen::VectorXd& point, const Eigen::VectorXd& grad) {
    return grad.dot(point) - budget * grad.minCoeff();
  };
  const double gap_tolerance = 1e-12 * std::max(1.0, std::abs(allocation_objective(
                                                    weights, transmissivities, Eigen::VectorXd::Zero(n))));

  double best_objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_reduced = Eigen::VectorXd::Constant(k, budget / k);
  double best_gap = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < restarts; ++restart) {
    Eigen::VectorXd point(k);
    if (restart == 0) {
      point.setConstant(budget / k);
    } else {
      CounterRng rng(0x5eedf00dULL, static_cast<std::uint64_t>(restart));
      for (int i = 0; i < k; ++i) {
        point[i] = -std::log(rng.next_open_unit());
      }
      point *= budget / point.sum();
    }
    double value = objective(point);
    double step = budget;
    double gap = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iterations; ++iter) {
      const Eigen::VectorXd grad = gradient(point);
      gap = optimality_gap(point, grad);
      if (gap <= gap_tolerance) {
        break;
      }
      step = std::min(step * 4.0, 8.0 * budget);
      bool moved = false;
      while (step > 1e-18 * budget) {
        const Eigen::VectorXd next = detail::project_simplex(point - step * grad, budget);
        const double next_value = objective(next);
        const double decrease = (point - next).squaredNorm() / step;
        if (next_value <= value - 1e-4 * decrease && next_value < value) {
          point = next;
          value = next_value;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        break;
      }
    }
    if (value < best_objective) {
      best_objective = value;
      best_reduced = point;
      best_gap = gap;
    }
  }

  // Pin the budget exactly; projection leaves only rounding-level drift.
  best_reduced *= budget / best_reduced.sum();
  const bool converged = best_gap <= 1e-8 * std::max(1.0, std::abs(best_objective));
  return AllocationResult{expand(best_reduced), objective(best_reduced), converged, best_gap};
}

// Builds the separable probe: one x-squeezed vacuum per node with the
// optimized photon allocation. Non-convergence of the allocation is reported
// through the plan flag, with the best allocation found still used.
inline ProbePlan build_separable(const SensorNetworkSpec& spec) {
  AllocationResult allocation = optimize_allocation(spec.weights, spec.transmissivities, spec.photon_budget);
  GaussianState probe = squeezed_vacuum(allocation.photons[0]);
  for (int m = 1; m < spec.num_modes; ++m) {
    probe = tensor(probe, squeezed_vacuum(allocation.photons[m]));
  }
  SymplecticTransform identity(Eigen::MatrixXd::Identity(2 * spec.num_modes, 2 * spec.num_modes),
                               Eigen::VectorXd::Zero(2 * spec.num_modes));
  return ProbePlan{std::move(probe), std::move(identity), spec.weights, std::sqrt(allocation.objective),
                   allocation.photons, allocation.converged};
}

inline ProbePlan build_probe(const SensorNetworkSpec& spec) {
  return spec.kind == ProbeKind::entangled ? build_entangled(spec) : build_separable(spec);
}

// ---------------------------------------------------------------------------
// Reduction relation.

struct ReductionWitness {
  double max_deviation;
  bool passed;
};

// Checks B^-1 U^(x M)(alpha) B = U(sqrt(M) alpha) on mode 1, with B the
// balanced distribution array, by applying both sides to a randomized
// physical state (random per-mode squeezing and rotation, random mixing,
// random displacement; the draw is keyed by M and alpha so the witness is
// reproducible).
inline ReductionWitness reduction_check(int num_modes, double alpha, double tolerance) {
  if (num_modes < 1) {
    throw std::invalid_argument("reduction_check: num_modes must be >= 1");
  }
  std::uint64_t alpha_bits = 0;
  std::memcpy(&alpha_bits, &alpha, sizeof(alpha));
  CounterRng rng(alpha_bits ^ 0x9d2c5680ULL, static_cast<std::uint64_t>(num_modes));

  GaussianState state = [&] {
    GaussianState acc = phase_rotate(squeezed_vacuum(rng.next_open_unit() * 3.0), 0, rng.next_normal());
    for (int m = 1; m < num_modes; ++m) {
      acc = tensor(acc, phase_rotate(squeezed_vacuum(rng.next_open_unit() * 3.0), 0, rng.next_normal()));
    }
    Eigen::VectorXd direction(num_modes);
    for (int m = 0; m < num_modes; ++m) {
      direction[m] = rng.next_normal();
    }
    acc = apply_symplectic(acc, distribution_array(direction.normalized()));
    Eigen::VectorXd mean_shift(2 * num_modes);
    for (int i = 0; i < 2 * num_modes; ++i) {
      mean_shift[i] = rng.next_normal();
    }
    return GaussianState(num_modes, acc.mean + mean_shift, acc.cov);
  }();

  const SymplecticTransform array =
      distribution_array(Eigen::VectorXd::Constant(num_modes, 1.0 / std::sqrt(static_cast<double>(num_modes))));
  GaussianState left = apply_symplectic(state, array);
  left = displace_x_all(left, Eigen::VectorXd::Constant(num_modes, alpha));
  left = apply_symplectic(left, array.inverse());

  const GaussianState right = displace_x(state, 0, std::sqrt(static_cast<double>(num_modes)) * alpha);

  const double mean_dev = (left.mean - right.mean).cwiseAbs().maxCoeff();
  const double cov_dev = (left.cov - right.cov).cwiseAbs().maxCoeff();
  const double dev = std::max(mean_dev, cov_dev);
  return ReductionWitness{dev, dev < tolerance};
}

// ---------------------------------------------------------------------------
// Phase-sensing closed forms.

struct PhasePrecisions {
  double entangled;
  double separable;
};

// rms errors for estimating the balanced average of M phase shifts with
// per-node photon number n_S:
//   entangled  1 / sqrt(8 M n_S (M n_S + 1))
//   separable  1 / sqrt(8 M n_S (n_S + 1))
inline PhasePrecisions phase_precisions(int num_modes, double photons_per_node) {
  if (!(photons_per_node > 0.0)) {
    throw std::invalid_argument("phase_precisions: photons_per_node must be > 0");
  }
  if (num_modes < 1) {
    throw std::invalid_argument("phase_precisions: num_modes must be >= 1");
  }
  const double total = num_modes * photons_per_node;
  return PhasePrecisions{1.0 / std::sqrt(8.0 * total * (total + 1.0)),
                         1.0 / std::sqrt(8.0 * num_modes * photons_per_node * (photons_per_node + 1.0))};
}

// Photon-number fluctuation sqrt(<n^2>) of a squeezed vacuum with mean
// photon number N_S: sqrt(N_S (3 N_S + 2)).
inline double squeezed_vacuum_photon_fluctuation(double photon_number) {
  if (photon_number < 0.0) {
    throw std::invalid_argument("squeezed_vacuum_photon_fluctuation: photon number must be >= 0");
  }
  return std::sqrt(photon_number * (3.0 * photon_number + 2.0));
}

// Phase-estimation lower bound for beam-splitter networks with product
// inputs constrained by photon-number fluctuations:
//   delta >= M |w*|^2 / (2 |n*|).
inline double ge_lower_bound(const Eigen::VectorXd& weights_star, const Eigen::VectorXd& fluctuations_star) {
  if (weights_star.size() != fluctuations_star.size()) {
    throw std::invalid_argument("ge_lower_bound: vectors must have the same length");
  }
  const double n_norm = fluctuations_star.norm();
  if (!(n_norm > 0.0)) {
    throw std::invalid_argument("ge_lower_bound: photon fluctuations must not be all zero");
  }
  return static_cast<double>(weights_star.size()) * weights_star.squaredNorm() / (2.0 * n_norm);
}

// Phase precision of the generalized twin-Fock protocol: 2 / sqrt(2 N (N+2)).
inline double twin_fock_precision(double photon_number) {
  if (!(photon_number > 0.0)) {
    throw std::invalid_argument("twin_fock_precision: photon number must be > 0");
  }
  return 2.0 / std::sqrt(2.0 * photon_number * (photon_number + 2.0));
}

// ---------------------------------------------------------------------------
// Estimation from homodyne records.

struct WeightedEstimate {
  Eigen::VectorXd per_trial;
  double mean;
  double stddev;  // sample standard deviation (N - 1)
};

inline WeightedEstimate weighted_estimate(const HomodyneRecord& record, const Eigen::VectorXd& weights) {
  if (weights.size() != record.num_modes()) {
    throw std::invalid_argument("weighted_estimate: weight length must match record width");
  }
  Eigen::VectorXd per_trial = record.samples * weights;
  const double mean = per_trial.mean();
  double ss = 0.0;
  for (int t = 0; t < per_trial.size(); ++t) {
    const double d = per_trial[t] - mean;
    ss += d * d;
  }
  const double stddev = per_trial.size() > 1 ? std::sqrt(ss / (per_trial.size() - 1)) : 0.0;
  return WeightedEstimate{std::move(per_trial), mean, stddev};
}

}  // namespace dqs
