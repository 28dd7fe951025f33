// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "leadsel/error.hpp"
#include "leadsel/linalg.hpp"
#include "leadsel/stability.hpp"
#include "leadsel/system.hpp"
#include "leadsel/tolerances.hpp"

namespace leadsel {

struct SimulationSpec {
  GroundedSystem system;
  double dt = 1e-3;
  double total_time = 100.0;
  double burn_in = 10.0;
  std::uint64_t seed = 0;
  std::size_t ensemble = 1;
};

struct CoherenceEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::vector<double> per_run;
};

struct Trajectory {
  std::vector<double> time;
  // y(t) = first-order states, one row per recorded step.
  std::vector<std::vector<double>> outputs;
};

struct TrajectoryOptions {
  std::size_t record_stride = 1;
  bool noise = true;
  // Initial state, n*m entries in block order; zero when absent.
  std::optional<Vector> initial_state;
};

namespace detail {

// Kahan-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline void validate(const SimulationSpec& spec, const Tolerances& tol) {
  if (!(spec.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  if (!(spec.burn_in >= 0.0 && spec.burn_in < spec.total_time)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 <= burn_in < total_time");
  }
  if (spec.ensemble == 0) throw Error(ErrorCode::kInvalidArgument, "ensemble must be >= 1");
  if (spec.system.leaders().empty() || !check_stability(spec.system, tol).stable) {
    throw Error(ErrorCode::kUnstableSystem, "simulation needs a stable system");
  }
  const Matrix a = build_state_matrices(spec.system).a;
  const double norm = Eigen::BDCSVD<Matrix>(a).singularValues()(0);
  if (!(spec.dt * norm < tol.step_guard)) {
    throw Error(ErrorCode::kStepTooLarge,
                "dt * ||A||_2 = " + std::to_string(spec.dt * norm) + " must stay below " +
                    std::to_string(tol.step_guard));
  }
}

inline std::mt19937_64 run_stream(std::uint64_t seed, std::size_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run)};
  return std::mt19937_64(seq);
}

// Euler-Maruyama integrator; state stored as an n x m matrix, column j holding
// the (j+1)-th order states.
class Integrator {
 public:
  Integrator(const GroundedSystem& s, double dt)
      : q_(s.q()), gains_(s.gains()), dt_(dt), sqrt_dt_(std::sqrt(dt)),
        x_(Matrix::Zero(static_cast<Eigen::Index>(s.size()), s.order())) {
    for (int j = 0; j < s.order(); ++j) weights_.push_back(gains_.a(j + 1));
  }

  void set_state(const Vector& flat) {
    if (flat.size() != x_.size()) throw Error(ErrorCode::kInvalidArgument, "initial state size");
    x_ = Eigen::Map<const Matrix>(flat.data(), x_.rows(), x_.cols());
  }

  // x <- x + dt A x + sqrt(dt) B xi.
  template <class Noise>
  void step(Noise&& noise) {
    const Eigen::Index m = x_.cols();
    Vector mix = Vector::Zero(x_.rows());
    for (Eigen::Index j = 0; j < m; ++j) mix += weights_[static_cast<std::size_t>(j)] * x_.col(j);
    const Vector drive = q_ * mix;
    for (Eigen::Index j = 0; j + 1 < m; ++j) x_.col(j) += dt_ * x_.col(j + 1);
    x_.col(m - 1) -= dt_ * drive;
    for (Eigen::Index i = 0; i < x_.rows(); ++i) x_(i, m - 1) += sqrt_dt_ * noise();
  }

  auto output() const { return x_.col(0); }

 private:
  Matrix q_;
  GainVector gains_;
  std::vector<double> weights_;
  double dt_;
  double sqrt_dt_;
  Matrix x_;
};

inline std::size_t step_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

}  // namespace detail

/// Empirical coherence: per run, sum over nodes of the time variance of x1
/// after burn-in; estimate is the mean over runs, standard error the sample
/// standard deviation over runs divided by sqrt(ensemble).
inline CoherenceEstimate simulate_coherence(const SimulationSpec& spec,
                                            const Tolerances& tol = default_tolerances()) {
  detail::validate(spec, tol);
  const std::size_t steps = detail::step_count(spec.total_time, spec.dt);
  const std::size_t skip = detail::step_count(spec.burn_in, spec.dt);
  const std::size_t n = spec.system.size();
  CoherenceEstimate out;
  for (std::size_t run = 0; run < spec.ensemble; ++run) {
    auto rng = detail::run_stream(spec.seed, run);
    std::normal_distribution<double> normal(0.0, 1.0);
    detail::Integrator integ(spec.system, spec.dt);
    std::vector<detail::CompensatedSum> sum(n), sum_sq(n);
    std::size_t samples = 0;
    for (std::size_t s = 1; s <= steps; ++s) {
      integ.step([&] { return normal(rng); });
      if (s <= skip) continue;
      const auto y = integ.output();
      for (std::size_t i = 0; i < n; ++i) {
        const double v = y(static_cast<Eigen::Index>(i));
        sum[i].add(v);
        sum_sq[i].add(v * v);
      }
      ++samples;
    }
    double total = 0.0;
    const double count = static_cast<double>(samples);
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = sum[i].value() / count;
      total += sum_sq[i].value() / count - mean * mean;
    }
    out.per_run.push_back(total);
  }
  detail::CompensatedSum acc;
  for (double v : out.per_run) acc.add(v);
  const double r = static_cast<double>(out.per_run.size());
  out.estimate = acc.value() / r;
  if (out.per_run.size() > 1) {
    double ss = 0.0;
    for (double v : out.per_run) ss += (v - out.estimate) * (v - out.estimate);
    out.standard_error = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
  }
  return out;
}

/// First-order states of run 0, every `record_stride` steps (t = 0 included).
inline Trajectory simulate_trajectory(const SimulationSpec& spec, const TrajectoryOptions& options,
                                      const Tolerances& tol = default_tolerances()) {
  detail::validate(spec, tol);
  if (options.record_stride == 0) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  const std::size_t steps = detail::step_count(spec.total_time, spec.dt);
  auto rng = detail::run_stream(spec.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  detail::Integrator integ(spec.system, spec.dt);
  if (options.initial_state) integ.set_state(*options.initial_state);
  Trajectory traj;
  auto record = [&](std::size_t s) {
    traj.time.push_back(static_cast<double>(s) * spec.dt);
    const auto y = integ.output();
    traj.outputs.emplace_back(y.data(), y.data() + y.size());
  };
  record(0);
  for (std::size_t s = 1; s <= steps; ++s) {
    if (options.noise) {
      integ.step([&] { return normal(rng); });
    } else {
      integ.step([] { return 0.0; });
    }
    if (s % options.record_stride == 0) record(s);
  }
  return traj;
}

// CSV with header t,y_0,...,y_{n-1}; values in %.17g.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.outputs.empty() ? 0 : traj.outputs.front().size();
  out << "t";
  for (std::size_t i = 0; i < n; ++i) out << ",y_" << i;
  out << '\n';
  char buf[40];
  for (std::size_t r = 0; r < traj.time.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.time[r]);
    out << buf;
    for (double v : traj.outputs[r]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace leadsel
