// Copyright 2026 The loolsim Authors
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
//
// Test-only oracles, kept independent of the library code paths they check.

#pragma once

#include <complex>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "loolsim/fock.hpp"

namespace loolsim::testing {

// Vacuum expectation <0| a^m (a_dag)^n |0> for a single mode, evaluated by
// repeated commutation (a (a_dag)^n = (a_dag)^n a + n (a_dag)^(n-1)) rather
// than any factorial shortcut.
inline double vacuum_expectation(int annihilators, int creators) {
  // State after applying the creators: raw ket (a_dag)^n |0> has coefficient 1
  // on the "power n" slot. Applying one annihilator maps power p -> p-1 with
  // weight p. Work on a coefficient table over powers.
  std::map<int, double> coeff;
  coeff[creators] = 1.0;
  for (int k = 0; k < annihilators; ++k) {
    std::map<int, double> next;
    for (const auto& [power, c] : coeff) {
      if (power > 0) next[power - 1] += c * static_cast<double>(power);
    }
    coeff = std::move(next);
  }
  auto it = coeff.find(0);
  return it == coeff.end() ? 0.0 : it->second;
}

// Haar-ish random unitary via QR of a complex Gaussian matrix, with the
// phase ambiguity fixed so the result is deterministic for a given engine.
inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& engine) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(engine), gauss(engine));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const Complex phase = d / std::abs(d);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace loolsim::testing
