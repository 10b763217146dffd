// Copyright 2026 The IOL Authors. All rights reserved.
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
#include <vector>

#include "iol/common.hpp"

namespace iol {

struct LpSolution {
  double objective = 0.0;
  std::vector<double> x;
};

// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0, so
// the slack basis is feasible from the start. Bland's rule; no cycling.
// Sized for the oracle's small programs, not for general use.
inline LpSolution maximize_lp(const std::vector<double>& c, const Matrix& a,
                              const std::vector<double>& b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  require_size(c.size(), n, "lp objective");
  require_size(b.size(), m, "lp rhs");
  for (double v : b) {
    if (!(v >= 0.0)) throw ValidationError("maximize_lp: rhs must be >= 0");
  }
  constexpr double kEps = 1e-12;
  const std::size_t width = n + m + 1;
  Matrix t(m + 1, width);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n + i) = 1.0;
    t(i, width - 1) = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t(m, j) = -c[j];

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t(m, j) < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter) <= kEps) continue;
      const double ratio = t(i, width - 1) / t(i, enter);
      if (leave == m || ratio < best_ratio - kEps ||
          (std::abs(ratio - best_ratio) <= kEps && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) throw Error("maximize_lp: unbounded");

    const double pivot = t(leave, enter);
    for (std::size_t j = 0; j < width; ++j) t(leave, j) /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t(i, enter);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t(i, j) -= factor * t(leave, j);
    }
    basis[leave] = enter;
  }

  LpSolution out;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = t(i, width - 1);
  }
  out.objective = t(m, width - 1);
  return out;
}

}  // namespace iol
