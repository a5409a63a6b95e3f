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

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "loolsim/fock.hpp"
#include "loolsim/spectral.hpp"

namespace loolsim {

/// Names the two-level subspace {|0>, |label>} of one photon: the Gaussian
/// mode plus one higher-order mode of the given family.
struct SubspaceLabel {
  BasisTag tag = BasisTag::Azimuthal;
  int index = 3;

  friend auto operator<=>(const SubspaceLabel&, const SubspaceLabel&) = default;

  ModeIndex gauss_mode(Path path) const { return make_mode(path, tag, 0); }
  ModeIndex high_mode(Path path) const { return make_mode(path, tag, index); }
};

/// Normalized single-party measurement state c0 |0> + c1 |label>.
class Ket2 {
 public:
  Ket2(Complex c0, Complex c1, SubspaceLabel label);

  Complex c0() const { return c0_; }
  Complex c1() const { return c1_; }
  const SubspaceLabel& label() const { return label_; }
  Eigen::Vector2cd vector() const { return Eigen::Vector2cd(c0_, c1_); }

  bool same_state(const Ket2& other, double tol = 1e-12) const;

  static Ket2 zero(SubspaceLabel label)   { return Ket2(1.0, 0.0, label); }
  static Ket2 high(SubspaceLabel label)   { return Ket2(0.0, 1.0, label); }
  static Ket2 plus(SubspaceLabel label)   { return Ket2(M_SQRT1_2, M_SQRT1_2, label); }
  static Ket2 minus(SubspaceLabel label)  { return Ket2(M_SQRT1_2, -M_SQRT1_2, label); }
  static Ket2 plus_i(SubspaceLabel label) { return Ket2(M_SQRT1_2, Complex(0.0, M_SQRT1_2), label); }
  static Ket2 minus_i(SubspaceLabel label){ return Ket2(M_SQRT1_2, Complex(0.0, -M_SQRT1_2), label); }

 private:
  Complex c0_, c1_;
  SubspaceLabel label_;
};

/// Product projector scale * |a><a| (x) |b><b| with the party vectors kept in
/// the raw (possibly unnormalized) form they are quoted in; the symmetric and
/// antisymmetric eraser projectors carry raw vectors (1, +-1) and the 1/4
/// prefactor, which together make a normalized rank-1 projector.
struct TwoPartyProjector {
  Eigen::Vector2cd alice;
  Eigen::Vector2cd bob;
  double scale = 1.0;
  SubspaceLabel label;

  /// The 4x4 operator on the {|00>, |0l>, |l0>, |ll>} basis.
  Eigen::Matrix4cd matrix() const;
};

TwoPartyProjector sym_projector(SubspaceLabel label);
TwoPartyProjector asym_projector(SubspaceLabel label);
/// The bump operator: |+><+| on A with |-><-| on B (same operator family as
/// asym_projector, named after the antibunching signature it detects).
TwoPartyProjector bump_projector(SubspaceLabel label);

/// Two-party state on the 2x2 subspace, basis {|00>, |0l>, |l0>, |ll>}
/// (first slot path A, second path B). Hermitian, PSD, unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::Matrix4cd m);

  const Eigen::Matrix4cd& matrix() const { return m_; }

  static DensityMatrix from_ket(const Eigen::Vector4cd& psi);

 private:
  Eigen::Matrix4cd m_;
};

/// |chi> = (|l,0> - |0,l>) / sqrt(2) on the 4-dim ordering above.
Eigen::Vector4cd chi_ket();
DensityMatrix chi_density();
/// Classically correlated mixture (|l0><l0| + |0l><0l|) / 2.
DensityMatrix classically_correlated();
DensityMatrix white_noise();
/// Post-selected state for a plate with single-photon mode overlap eta:
/// the branch coherence scales with eta, eta |chi><chi| + (1-eta) rho_c.
DensityMatrix chi_with_crosstalk(double eta);

/// Extracts the two-party amplitudes of a post-selected two-photon state in
/// the declared subspace. Throws std::invalid_argument when the state leaves
/// the subspace (wrong labels, bunched terms, stray modes).
Eigen::Vector4cd subspace_amplitudes(const PhotonState& state, SubspaceLabel label);

/// <P> on a pure state or a density matrix; real, in [0, 1] for the
/// normalized eraser projectors.
double eraser_expectation(const Eigen::Vector4cd& psi, const TwoPartyProjector& proj);
double eraser_expectation(const PhotonState& state, const TwoPartyProjector& proj);
double eraser_expectation(const DensityMatrix& rho, const TwoPartyProjector& proj);

struct EraserScan {
  std::vector<double> taus;
  std::vector<double> values;
};

/// Projector expectation as a function of path delay: the interference term
/// of the spectral pair sets the branch coherence, so the curve runs from the
/// pure-state value at tau = 0 to the mixed-state plateau at large delay.
EraserScan eraser_scan(const SpectralModel& phi, const SpectralModel& chi,
                       const TwoPartyProjector& proj, double tau_min, double tau_max,
                       int n_points, const QuadratureOptions& opts = {});

/// The three mutually unbiased bases of the subspace:
/// {|0>, |l>}, {|+>, |->}, {|+i>, |-i>}.
std::array<std::array<Ket2, 2>, 3> mub_settings(SubspaceLabel label);

/// One projective coincidence measurement and its observed counts.
struct CoincidenceRecord {
  Ket2 setting_alice;
  Ket2 setting_bob;
  std::uint64_t counts = 0;
  double integration_window = 0.2e-9;  // seconds, metadata only
};

/// Born probability of the product setting on rho.
double born_probability(const DensityMatrix& rho, const Ket2& alice, const Ket2& bob);

/// Poisson counts with mean total_per_setting * Born probability, one
/// independent substream per setting so results do not depend on evaluation
/// order. Deterministic for a fixed seed. background_mean adds a flat
/// accidental-coincidence rate per setting (default off).
std::vector<CoincidenceRecord> simulate_counts(
    const DensityMatrix& rho, const std::vector<std::pair<Ket2, Ket2>>& settings,
    std::uint64_t total_per_setting, std::uint64_t seed, double background_mean = 0.0);

struct WitnessResult {
  double fidelity = 0.0;
  double sigma = 0.0;                     // bootstrap standard error
  std::array<double, 3> correlators{};    // per-MUB two-party correlators
};

/// Fidelity to the maximally entangled target from coincidence counts in the
/// three MUBs: F = (1 - E1 - E2 - E3) / 4 with per-MUB normalized counts.
/// sigma comes from 1000 seeded Poisson bootstrap resamples.
WitnessResult witness_fidelity(const std::vector<CoincidenceRecord>& records,
                               SubspaceLabel label, std::uint64_t bootstrap_seed = 1234,
                               int bootstrap_rounds = 1000);

}  // namespace loolsim
