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
#include <initializer_list>
#include <string>
#include <vector>

#include "leadsel/error.hpp"

namespace leadsel {

inline constexpr int kMaxOrder = 4;

// Feedback gains a_1..a_m of an m-th order system, m in [1, 4].
class GainVector {
 public:
  GainVector() = default;
  GainVector(std::initializer_list<double> gains) : GainVector(std::vector<double>(gains)) {}
  explicit GainVector(std::vector<double> gains) : gains_(std::move(gains)) {
    if (gains_.empty() || gains_.size() > static_cast<std::size_t>(kMaxOrder)) {
      throw Error(ErrorCode::kUnsupportedOrder,
                  "order " + std::to_string(gains_.size()) + " not in [1, 4]");
    }
    for (double a : gains_) {
      if (a == 0.0) throw Error(ErrorCode::kInvalidGains, "gains must be non-zero");
    }
  }

  static GainVector equal(int order, double a) {
    if (order < 1) throw Error(ErrorCode::kUnsupportedOrder, "order must be positive");
    return GainVector(std::vector<double>(static_cast<std::size_t>(order), a));
  }

  int order() const noexcept { return static_cast<int>(gains_.size()); }
  // 1-based access, a(1) = a_1.
  double a(int j) const { return gains_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<double>& values() const noexcept { return gains_; }

  friend bool operator==(const GainVector&, const GainVector&) = default;

 private:
  std::vector<double> gains_;
};

// Products of gains that appear throughout the stability and coherence
// formulas. Only meaningful for the matching order.
struct GainRatios {
  // m = 3: a2 a3 / a1.
  double third = 0.0;
  // m = 4: a3 a4 / a2 and a1 a4^2 / a2^2.
  double fourth_outer = 0.0;
  double fourth_inner = 0.0;
};

inline GainRatios gain_ratios(const GainVector& g) {
  GainRatios r;
  if (g.order() == 3) r.third = g.a(2) * g.a(3) / g.a(1);
  if (g.order() == 4) {
    r.fourth_outer = g.a(3) * g.a(4) / g.a(2);
    r.fourth_inner = g.a(1) * g.a(4) * g.a(4) / (g.a(2) * g.a(2));
  }
  return r;
}

}  // namespace leadsel
