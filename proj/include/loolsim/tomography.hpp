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

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "loolsim/measurement.hpp"

namespace loolsim {

/// The informationally complete product settings: 6 local states per party
/// (3 MUBs x 2 outcomes) combined into 36 pairs, Alice-major ordering.
std::vector<std::pair<Ket2, Ket2>> tomography_settings(SubspaceLabel label);

/// A tomography data set: per-setting records plus the totals the
/// frequencies are normalized with.
struct TomographySet {
  std::vector<CoincidenceRecord> records;
  std::uint64_t total_per_setting = 0;
  SubspaceLabel label;
};

enum class LeastSquaresWeighting { Unweighted, Poisson };

/// Least-squares solution of the Born-rule system over normalized
/// frequencies; Hermitian by construction, possibly unphysical (negative
/// eigenvalues, trace off one). Throws std::domain_error if the settings do
/// not span the 16-dimensional operator space.
Eigen::Matrix4cd linear_inversion(
    const TomographySet& set,
    LeastSquaresWeighting weighting = LeastSquaresWeighting::Unweighted);

/// Frobenius-nearest physical state: eigenvalues projected onto the
/// probability simplex (sort-based), eigenvectors kept.
DensityMatrix project_to_physical(const Eigen::Matrix4cd& hermitian);

/// F = <target| rho |target>, real in [0, 1].
double fidelity(const DensityMatrix& rho, const Eigen::Vector4cd& target);

struct TomoReport {
  DensityMatrix rho_hat;
  double fidelity = 0.0;
  double sigma = 0.0;  // bootstrap standard error of the fidelity
  Eigen::Matrix4d real_part;
  Eigen::Matrix4d imag_part;
  TomographySet data;
};

struct TomoOptions {
  LeastSquaresWeighting weighting = LeastSquaresWeighting::Unweighted;
  int bootstrap_rounds = 200;
  std::uint64_t bootstrap_seed = 4321;
  double background_mean = 0.0;  // flat accidental counts per setting
};

/// Full pipeline: simulate counts in all 36 settings, invert, project, and
/// score against the ideal entangled target.
TomoReport tomo_pipeline(const DensityMatrix& rho_true, SubspaceLabel label,
                         std::uint64_t counts_per_setting, std::uint64_t seed,
                         const TomoOptions& options = {});

}  // namespace loolsim
