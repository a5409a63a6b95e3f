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

#include "loolsim/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "loolsim/rng.hpp"

namespace loolsim {

namespace {

// Orthonormal Hermitian operator basis (Frobenius): normalized two-qubit
// Pauli products sigma_mu (x) sigma_nu / 2.
const std::array<Eigen::Matrix4cd, 16>& hermitian_basis() {
  static const std::array<Eigen::Matrix4cd, 16> basis = [] {
    std::array<Eigen::Matrix2cd, 4> pauli;
    pauli[0] = Eigen::Matrix2cd::Identity();
    pauli[1] << 0, 1, 1, 0;
    pauli[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    pauli[3] << 1, 0, 0, -1;
    std::array<Eigen::Matrix4cd, 16> out;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        Eigen::Matrix4cd op;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            op.block<2, 2>(2 * i, 2 * j) = pauli[static_cast<std::size_t>(mu)](i, j) *
                                           pauli[static_cast<std::size_t>(nu)];
        out[static_cast<std::size_t>(4 * mu + nu)] = 0.5 * op;
      }
    return out;
  }();
  return basis;
}

Eigen::Vector4cd setting_vector(const Ket2& alice, const Ket2& bob) {
  Eigen::Vector4cd v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      v(2 * i + j) = alice.vector()(i) * bob.vector()(j);
  return v;
}

}  // namespace

std::vector<std::pair<Ket2, Ket2>> tomography_settings(SubspaceLabel label) {
  const auto mubs = mub_settings(label);
  std::vector<Ket2> locals;
  for (const auto& basis : mubs)
    for (const auto& ket : basis) locals.push_back(ket);

  std::vector<std::pair<Ket2, Ket2>> settings;
  settings.reserve(36);
  for (const auto& a : locals)
    for (const auto& b : locals) settings.emplace_back(a, b);
  return settings;
}

Eigen::Matrix4cd linear_inversion(const TomographySet& set, LeastSquaresWeighting weighting) {
  if (set.total_per_setting == 0)
    throw std::invalid_argument("tomography set lacks per-setting totals");
  const auto& basis = hermitian_basis();
  const auto n = static_cast<Eigen::Index>(set.records.size());

  Eigen::MatrixXd design(n, 16);
  Eigen::VectorXd freq(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& rec = set.records[static_cast<std::size_t>(r)];
    const Eigen::Vector4cd v = setting_vector(rec.setting_alice, rec.setting_bob);
    for (int k = 0; k < 16; ++k) {
      const Complex me = v.adjoint() * basis[static_cast<std::size_t>(k)] * v;
      design(r, k) = me.real();
    }
    freq(r) = static_cast<double>(rec.counts) / static_cast<double>(set.total_per_setting);
  }

  if (weighting == LeastSquaresWeighting::Poisson) {
    // Weight each row by the inverse Poisson standard deviation of its
    // frequency estimate (variance ~ p/N, floored to keep zero-count rows).
    for (Eigen::Index r = 0; r < n; ++r) {
      const double var = std::max(freq(r), 1.0 / static_cast<double>(set.total_per_setting)) /
                         static_cast<double>(set.total_per_setting);
      const double w = 1.0 / std::sqrt(var);
      design.row(r) *= w;
      freq(r) *= w;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < 16)
    throw std::domain_error("tomography settings are not informationally complete");
  const Eigen::VectorXd coeffs = svd.solve(freq);

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 16; ++k) rho += coeffs(k) * basis[static_cast<std::size_t>(k)];
  return 0.5 * (rho + rho.adjoint().eval());
}

DensityMatrix project_to_physical(const Eigen::Matrix4cd& hermitian) {
  const Eigen::Matrix4cd sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(sym);
  Eigen::Vector4d lambda = solver.eigenvalues();

  // Project the eigenvalue vector onto the probability simplex (sort-based).
  std::array<double, 4> sorted{lambda(0), lambda(1), lambda(2), lambda(3)};
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  int support = 0;
  for (int k = 0; k < 4; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) {
      theta = candidate;
      support = k + 1;
    }
  }
  if (support == 0) throw std::domain_error("simplex projection found no support");
  for (int k = 0; k < 4; ++k) lambda(k) = std::max(0.0, lambda(k) - theta);

  Eigen::Matrix4cd projected =
      solver.eigenvectors() * lambda.asDiagonal() * solver.eigenvectors().adjoint();
  projected = 0.5 * (projected + projected.adjoint().eval());
  // Squash residual rounding so the invariant checks hold exactly enough.
  projected *= 1.0 / projected.trace().real();
  return DensityMatrix(projected);
}

double fidelity(const DensityMatrix& rho, const Eigen::Vector4cd& target) {
  const double n2 = target.squaredNorm();
  if (n2 <= 0.0) throw std::invalid_argument("fidelity target must be non-zero");
  const Complex f = target.adjoint() * rho.matrix() * target;
  return f.real() / n2;
}

TomoReport tomo_pipeline(const DensityMatrix& rho_true, SubspaceLabel label,
                         std::uint64_t counts_per_setting, std::uint64_t seed,
                         const TomoOptions& options) {
  TomographySet set;
  set.label = label;
  set.total_per_setting = counts_per_setting;
  set.records = simulate_counts(rho_true, tomography_settings(label), counts_per_setting, seed,
                                options.background_mean);

  const Eigen::Matrix4cd ls = linear_inversion(set, options.weighting);
  DensityMatrix rho_hat = project_to_physical(ls);
  const Eigen::Vector4cd target = chi_ket();

  TomoReport report{rho_hat, fidelity(rho_hat, target), 0.0,
                    rho_hat.matrix().real(), rho_hat.matrix().imag(), set};

  if (options.bootstrap_rounds > 0) {
    double mean = 0.0, m2 = 0.0;
    TomographySet resampled = set;
    for (int round = 0; round < options.bootstrap_rounds; ++round) {
      SplitMixRng rng(derive_seed(options.bootstrap_seed, static_cast<std::uint64_t>(round)));
      for (std::size_t i = 0; i < set.records.size(); ++i) {
        resampled.records[i].counts =
            rng.next_poisson(static_cast<double>(set.records[i].counts));
      }
      const double f =
          fidelity(project_to_physical(linear_inversion(resampled, options.weighting)), target);
      const double delta = f - mean;
      mean += delta / static_cast<double>(round + 1);
      m2 += delta * (f - mean);
    }
    report.sigma = std::sqrt(m2 / static_cast<double>(options.bootstrap_rounds));
  }
  return report;
}

}  // namespace loolsim
