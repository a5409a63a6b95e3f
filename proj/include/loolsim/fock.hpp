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

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace loolsim {

using Complex = std::complex<double>;

// Amplitudes below this magnitude are dropped when terms are merged.
inline constexpr double kAmplitudeCutoff = 1e-14;
// Tolerance used when deciding whether a state is normalized.
inline constexpr double kNormTolerance = 1e-12;
// Tolerance for the unitarity check on mode matrices.
inline constexpr double kUnitaryTolerance = 1e-10;

enum class Path : std::uint8_t { A, B };
enum class BasisTag : std::uint8_t { Azimuthal, Radial, Polarization, Generic };

/// A labeled single-photon mode: which arm the photon travels in plus the
/// internal label carried by the photon (azimuthal l, radial p, polarization,
/// or a generic sink label). Two ModeIndex values address the same mode iff
/// all three fields are equal. Ordering is (path, tag, label) so occupation
/// maps merge deterministically.
struct ModeIndex {
  Path path;
  BasisTag tag;
  int label;

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Checked constructor: radial labels must be non-negative.
ModeIndex make_mode(Path path, BasisTag tag, int label);

inline ModeIndex azimuthal_mode(Path path, int l) {
  return ModeIndex{path, BasisTag::Azimuthal, l};
}
ModeIndex radial_mode(Path path, int p);

const char* to_string(Path path);
const char* to_string(BasisTag tag);

/// Occupation map of a single Fock basis ket: mode -> photon count (> 0).
using OccupationMap = std::map<ModeIndex, int>;

/// One basis ket with its complex amplitude. The amplitude multiplies the
/// *normalized* number ket, i.e. (a^dag)^n |0> = sqrt(n!) |n>.
struct OccupationTerm {
  OccupationMap occupations;
  Complex amplitude;

  int photon_number() const;
};

/// Sparse superposition of occupation-number basis kets over labeled modes.
/// Terms are kept in canonical order with duplicate kets merged; states are
/// immutable after construction and safe to share across threads.
class PhotonState {
 public:
  PhotonState() = default;

  /// Builds a state from raw terms: merges duplicates, drops negligible
  /// amplitudes and records whether the result is normalized.
  static PhotonState from_terms(std::vector<OccupationTerm> terms);

  /// Single basis ket with amplitude one.
  static PhotonState basis_ket(OccupationMap occupations);

  const std::vector<OccupationTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool is_normalized() const { return normalized_; }

  double norm_squared() const;

  /// Total photon number, identical for every term by construction.
  int photon_number() const;

  /// Amplitude of a given basis ket (zero if absent).
  Complex amplitude_of(const OccupationMap& occupations) const;

  /// Returns the same ray rescaled to unit norm.
  PhotonState normalized() const;

 private:
  std::vector<OccupationTerm> terms_;
  bool normalized_ = false;
};

/// <x|y> under the normalized-ket convention; conjugate-symmetric.
Complex inner_product(const PhotonState& x, const PhotonState& y);

/// |<x|y>| for comparing states up to global phase (both sides normalized
/// by the caller).
double overlap_magnitude(const PhotonState& x, const PhotonState& y);

/// Two single photons in distinct arms, |1>_m1 |1>_m2.
/// Throws std::invalid_argument unless m1 is in path A and m2 in path B.
PhotonState make_two_photon_input(const ModeIndex& m1, const ModeIndex& m2);

/// Unitary matrix acting on a finite, ordered set of single-photon modes.
/// Columns are images: mode j maps to sum_i matrix(i, j) * modes[i].
class ModeUnitary {
 public:
  ModeUnitary(Eigen::MatrixXcd matrix, std::vector<ModeIndex> modes);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  int dimension() const { return static_cast<int>(modes_.size()); }

  /// Position of a mode in the row/column ordering, or -1.
  int index_of(const ModeIndex& mode) const;

  static ModeUnitary identity(std::vector<ModeIndex> modes);

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<ModeIndex> modes_;
};

/// Substitutes every creation operator through the unitary and re-expands.
/// Photon number is conserved exactly; the result is renormalized only if
/// the input state was normalized. Throws if a populated mode is missing
/// from the unitary's mode list.
PhotonState apply_mode_unitary(const PhotonState& state, const ModeUnitary& u);

struct PostSelection {
  PhotonState state;     // renormalized coincidence part
  double probability;    // weight of the kept terms relative to the input
};

/// Keeps the terms with exactly one photon in each arm and renormalizes.
/// Throws std::invalid_argument unless the state carries two photons, and
/// std::domain_error when no coincidence term survives.
PostSelection post_select_coincidence(const PhotonState& state);

/// Weight of coincidence terms (one photon per arm) relative to the total;
/// the non-throwing companion of post_select_coincidence.
double coincidence_probability(const PhotonState& state);

/// Unordered pair of output modes, stored sorted.
struct ModePair {
  ModeIndex first;
  ModeIndex second;

  ModePair(ModeIndex a, ModeIndex b);
  friend auto operator<=>(const ModePair&, const ModePair&) = default;
};

/// Two-photon transition amplitudes for every unordered output pair,
/// computed from permanents of 2x2 submatrices with 1/sqrt(n!m!) occupation
/// factors. Agrees term-by-term with apply_mode_unitary on the same input.
std::map<ModePair, Complex> two_photon_lift(
    const ModeUnitary& u, const std::pair<ModeIndex, ModeIndex>& input_pair);

}  // namespace loolsim
