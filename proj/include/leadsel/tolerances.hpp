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

#include <cstddef>

namespace leadsel {

// Numerical thresholds shared by every module. Defaults are the contract
// values; tests construct custom instances only to probe edge cases.
struct Tolerances {
  // Relative asymmetry accepted by the symmetric eigensolver.
  double symmetry = 1e-10;
  // Sherman-Morrison denominators at or below this are rejected.
  double singular_update = 1e-12;
  // Lyapunov residual bound, relative to the Frobenius norm of the RHS.
  double lyapunov_residual = 1e-8;
  // Largest state dimension n*m accepted by the Lyapunov oracle.
  std::size_t lyapunov_max_dim = 60;
  // Strict-inequality slack for the Hurwitz stability conditions.
  double stability_slack = 1e-12;
  // Closed-form coherence refuses systems closer than this to the boundary.
  double marginal_slack = 1e-9;
  // Spectral oracle: stable iff max Re(eig(A)) < -spectral_margin.
  double spectral_margin = 1e-9;
  // Minimal improvement of f_m for the greedy to keep going.
  double greedy_improvement = 1e-12;
  // Objective values within this relative distance are ties.
  double tie_relative = 1e-10;
  // Upper bound on the number of subsets visited by exhaustive search.
  std::size_t exhaustive_cap = 1'000'000;
  // Allowed negative slack in the submodularity / monotonicity checks.
  double property_slack = 1e-9;
  // Simulation step guard: dt * ||A||_2 must stay below this.
  double step_guard = 0.1;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances kDefaults{};
  return kDefaults;
}

}  // namespace leadsel
