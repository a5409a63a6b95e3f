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

#include "loolsim/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include "loolsim/rng.hpp"

namespace loolsim {

Ket2::Ket2(Complex c0, Complex c1, SubspaceLabel label)
    : c0_(c0), c1_(c1), label_(label) {
  const double norm = std::norm(c0_) + std::norm(c1_);
  if (std::abs(norm - 1.0) > kNormTolerance)
    throw std::invalid_argument("measurement ket must be normalized");
}

bool Ket2::same_state(const Ket2& other, double tol) const {
  return label_ == other.label_ && std::abs(c0_ - other.c0_) <= tol &&
         std::abs(c1_ - other.c1_) <= tol;
}

Eigen::Matrix4cd TwoPartyProjector::matrix() const {
  const Eigen::Matrix2cd pa = alice * alice.adjoint();
  const Eigen::Matrix2cd pb = bob * bob.adjoint();
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
  return scale * out;
}

TwoPartyProjector sym_projector(SubspaceLabel label) {
  return TwoPartyProjector{Eigen::Vector2cd(1.0, 1.0), Eigen::Vector2cd(1.0, 1.0), 0.25, label};
}

TwoPartyProjector asym_projector(SubspaceLabel label) {
  return TwoPartyProjector{Eigen::Vector2cd(1.0, 1.0), Eigen::Vector2cd(1.0, -1.0), 0.25, label};
}

TwoPartyProjector bump_projector(SubspaceLabel label) { return asym_projector(label); }

DensityMatrix::DensityMatrix(Eigen::Matrix4cd m) : m_(std::move(m)) {
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kUnitaryTolerance)
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(m_.trace().real() - 1.0) > kUnitaryTolerance ||
      std::abs(m_.trace().imag()) > kUnitaryTolerance)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m_);
  if (solver.eigenvalues().minCoeff() < -kUnitaryTolerance)
    throw std::invalid_argument("density matrix must be positive semidefinite");
}

DensityMatrix DensityMatrix::from_ket(const Eigen::Vector4cd& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw std::invalid_argument("cannot form a state from the zero vector");
  Eigen::Vector4cd v = psi / std::sqrt(n2);
  return DensityMatrix(v * v.adjoint());
}

Eigen::Vector4cd chi_ket() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(2) = M_SQRT1_2;   // |l,0>
  v(1) = -M_SQRT1_2;  // |0,l>
  return v;
}

DensityMatrix chi_density() { return DensityMatrix::from_ket(chi_ket()); }

DensityMatrix classically_correlated() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(1, 1) = 0.5;
  m(2, 2) = 0.5;
  return DensityMatrix(m);
}

DensityMatrix white_noise() {
  return DensityMatrix(Eigen::Matrix4cd::Identity() * 0.25);
}

DensityMatrix chi_with_crosstalk(double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("plate overlap eta must lie in [0, 1]");
  const Eigen::Matrix4cd m =
      eta * chi_density().matrix() + (1.0 - eta) * classically_correlated().matrix();
  return DensityMatrix(m);
}

Eigen::Vector4cd subspace_amplitudes(const PhotonState& state, SubspaceLabel label) {
  const ModeIndex a0 = label.gauss_mode(Path::A);
  const ModeIndex a1 = label.high_mode(Path::A);
  const ModeIndex b0 = label.gauss_mode(Path::B);
  const ModeIndex b1 = label.high_mode(Path::B);

  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  for (const auto& term : state.terms()) {
    int ia = -1, ib = -1;
    for (const auto& [mode, count] : term.occupations) {
      if (count != 1)
        throw std::invalid_argument("state is not a one-photon-per-arm subspace state");
      if (mode == a0) ia = 0;
      else if (mode == a1) ia = 1;
      else if (mode == b0) ib = 0;
      else if (mode == b1) ib = 1;
      else
        throw std::invalid_argument("state occupies a mode outside the declared subspace");
    }
    if (ia < 0 || ib < 0)
      throw std::invalid_argument("state is not a one-photon-per-arm subspace state");
    psi(2 * ia + ib) = term.amplitude;
  }
  return psi;
}

double eraser_expectation(const Eigen::Vector4cd& psi, const TwoPartyProjector& proj) {
  Eigen::Vector4cd setting;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      setting(2 * i + j) = proj.alice(i) * proj.bob(j);
  const Complex amp = setting.adjoint() * psi;
  return proj.scale * std::norm(amp);
}

double eraser_expectation(const PhotonState& state, const TwoPartyProjector& proj) {
  return eraser_expectation(subspace_amplitudes(state, proj.label), proj);
}

double eraser_expectation(const DensityMatrix& rho, const TwoPartyProjector& proj) {
  const Complex tr = (rho.matrix() * proj.matrix()).trace();
  return tr.real();
}

EraserScan eraser_scan(const SpectralModel& phi, const SpectralModel& chi,
                       const TwoPartyProjector& proj, double tau_min, double tau_max,
                       int n_points, const QuadratureOptions& opts) {
  if (n_points < 3) throw std::invalid_argument("eraser scan needs at least 3 points");
  if (!(tau_max > tau_min)) throw std::invalid_argument("empty delay range");

  // The projector expectation is affine in the branch coherence: the pure
  // value at full coherence and the classically correlated plateau at none.
  const double v_pure = eraser_expectation(chi_ket(), proj);
  const double v_mixed = eraser_expectation(classically_correlated(), proj);

  EraserScan scan;
  scan.taus.resize(static_cast<std::size_t>(n_points));
  scan.values.resize(static_cast<std::size_t>(n_points));
  const double h = (tau_max - tau_min) / static_cast<double>(n_points - 1);
  for (int k = 0; k < n_points; ++k) {
    const double tau = tau_min + h * static_cast<double>(k);
    const double coherence = std::norm(overlap_integral(phi, chi, tau, opts));
    scan.taus[static_cast<std::size_t>(k)] = tau;
    scan.values[static_cast<std::size_t>(k)] =
        coherence * v_pure + (1.0 - coherence) * v_mixed;
  }
  return scan;
}

std::array<std::array<Ket2, 2>, 3> mub_settings(SubspaceLabel label) {
  return {{{Ket2::zero(label), Ket2::high(label)},
           {Ket2::plus(label), Ket2::minus(label)},
           {Ket2::plus_i(label), Ket2::minus_i(label)}}};
}

double born_probability(const DensityMatrix& rho, const Ket2& alice, const Ket2& bob) {
  Eigen::Vector4cd setting;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      setting(2 * i + j) = alice.vector()(i) * bob.vector()(j);
  const Complex p = setting.adjoint() * rho.matrix() * setting;
  return p.real();
}

std::vector<CoincidenceRecord> simulate_counts(
    const DensityMatrix& rho, const std::vector<std::pair<Ket2, Ket2>>& settings,
    std::uint64_t total_per_setting, std::uint64_t seed, double background_mean) {
  if (total_per_setting == 0)
    throw std::invalid_argument("total counts per setting must be positive");
  if (background_mean < 0.0)
    throw std::invalid_argument("background rate must be non-negative");
  std::vector<CoincidenceRecord> records;
  records.reserve(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const double p = std::max(0.0, born_probability(rho, settings[i].first, settings[i].second));
    SplitMixRng rng(derive_seed(seed, i));
    const std::uint64_t counts =
        rng.next_poisson(static_cast<double>(total_per_setting) * p + background_mean);
    records.push_back(CoincidenceRecord{settings[i].first, settings[i].second, counts});
  }
  return records;
}

namespace {

// Counts arranged as n[mub][alice_outcome][bob_outcome].
using CountTable = std::array<std::array<std::array<double, 2>, 2>, 3>;

CountTable tabulate(const std::vector<CoincidenceRecord>& records, SubspaceLabel label) {
  const auto mubs = mub_settings(label);
  CountTable n{};
  std::array<std::array<std::array<bool, 2>, 2>, 3> seen{};
  for (const auto& rec : records) {
    int mub = -1, ia = -1, ib = -1;
    for (int m = 0; m < 3 && mub < 0; ++m) {
      for (int i = 0; i < 2; ++i) {
        if (rec.setting_alice.same_state(mubs[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)])) {
          for (int j = 0; j < 2; ++j) {
            if (rec.setting_bob.same_state(mubs[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)])) {
              mub = m; ia = i; ib = j;
              break;
            }
          }
        }
      }
    }
    if (mub < 0)
      throw std::invalid_argument("record setting does not belong to any MUB of the subspace");
    n[static_cast<std::size_t>(mub)][static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] +=
        static_cast<double>(rec.counts);
    seen[static_cast<std::size_t>(mub)][static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] = true;
  }
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!seen[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
          throw std::invalid_argument("witness needs all 4 settings of every MUB");
  return n;
}

// F = (1 - E1 - E2 - E3) / 4 for the antisymmetric target: every MUB of a
// singlet-type state anticorrelates, E_m = -1.
double fidelity_from_table(const CountTable& n, std::array<double, 3>* correlators) {
  double f = 1.0;
  for (int m = 0; m < 3; ++m) {
    const auto& t = n[static_cast<std::size_t>(m)];
    const double total = t[0][0] + t[0][1] + t[1][0] + t[1][1];
    if (total <= 0.0)
      throw std::domain_error("witness MUB has zero total counts");
    const double corr = (t[0][0] + t[1][1] - t[0][1] - t[1][0]) / total;
    if (correlators) (*correlators)[static_cast<std::size_t>(m)] = corr;
    f -= corr;
  }
  return f / 4.0;
}

}  // namespace

WitnessResult witness_fidelity(const std::vector<CoincidenceRecord>& records,
                               SubspaceLabel label, std::uint64_t bootstrap_seed,
                               int bootstrap_rounds) {
  const CountTable n = tabulate(records, label);

  WitnessResult result;
  result.fidelity = fidelity_from_table(n, &result.correlators);

  if (bootstrap_rounds > 0) {
    double mean = 0.0, m2 = 0.0;
    for (int round = 0; round < bootstrap_rounds; ++round) {
      SplitMixRng rng(derive_seed(bootstrap_seed, static_cast<std::uint64_t>(round)));
      CountTable resampled{};
      for (int m = 0; m < 3; ++m)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double lam = n[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            resampled[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<double>(rng.next_poisson(lam));
          }
      const double f = fidelity_from_table(resampled, nullptr);
      const double delta = f - mean;
      mean += delta / static_cast<double>(round + 1);
      m2 += delta * (f - mean);
    }
    result.sigma = std::sqrt(m2 / static_cast<double>(bootstrap_rounds));
  }
  return result;
}

}  // namespace loolsim
