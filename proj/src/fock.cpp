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

#include "loolsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace loolsim {

namespace {

double sqrt_factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return std::sqrt(f);
}

double sqrt_factorial_product(const OccupationMap& occ) {
  double f = 1.0;
  for (const auto& [mode, n] : occ) f *= sqrt_factorial(n);
  return f;
}

int photons_in_path(const OccupationMap& occ, Path path) {
  int n = 0;
  for (const auto& [mode, count] : occ)
    if (mode.path == path) n += count;
  return n;
}

}  // namespace

ModeIndex make_mode(Path path, BasisTag tag, int label) {
  if (tag == BasisTag::Radial && label < 0)
    throw std::invalid_argument("radial mode labels must be non-negative");
  return ModeIndex{path, tag, label};
}

ModeIndex radial_mode(Path path, int p) {
  return make_mode(path, BasisTag::Radial, p);
}

const char* to_string(Path path) { return path == Path::A ? "A" : "B"; }

const char* to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::Azimuthal: return "azimuthal";
    case BasisTag::Radial: return "radial";
    case BasisTag::Polarization: return "polarization";
    case BasisTag::Generic: return "generic";
  }
  return "?";
}

int OccupationTerm::photon_number() const {
  int n = 0;
  for (const auto& [mode, count] : occupations) n += count;
  return n;
}

PhotonState PhotonState::from_terms(std::vector<OccupationTerm> terms) {
  std::map<OccupationMap, Complex> merged;
  for (auto& term : terms) {
    for (const auto& [mode, count] : term.occupations) {
      if (count <= 0)
        throw std::invalid_argument("occupation counts must be positive");
    }
    merged[std::move(term.occupations)] += term.amplitude;
  }

  PhotonState state;
  int photons = -1;
  for (auto& [occ, amp] : merged) {
    if (std::abs(amp) < kAmplitudeCutoff) continue;
    int n = std::accumulate(occ.begin(), occ.end(), 0,
                            [](int acc, const auto& e) { return acc + e.second; });
    if (photons < 0) photons = n;
    if (n != photons)
      throw std::invalid_argument("terms mix different total photon numbers");
    state.terms_.push_back(OccupationTerm{occ, amp});
  }
  state.normalized_ = std::abs(state.norm_squared() - 1.0) <= kNormTolerance;
  return state;
}

PhotonState PhotonState::basis_ket(OccupationMap occupations) {
  return from_terms({OccupationTerm{std::move(occupations), Complex{1.0, 0.0}}});
}

double PhotonState::norm_squared() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.amplitude);
  return s;
}

int PhotonState::photon_number() const {
  if (terms_.empty()) return 0;
  return terms_.front().photon_number();
}

Complex PhotonState::amplitude_of(const OccupationMap& occupations) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), occupations,
      [](const OccupationTerm& t, const OccupationMap& occ) { return t.occupations < occ; });
  if (it != terms_.end() && it->occupations == occupations) return it->amplitude;
  return Complex{0.0, 0.0};
}

PhotonState PhotonState::normalized() const {
  double n2 = norm_squared();
  if (n2 <= 0.0) throw std::domain_error("cannot normalize an empty state");
  double scale = 1.0 / std::sqrt(n2);
  std::vector<OccupationTerm> scaled = terms_;
  for (auto& t : scaled) t.amplitude *= scale;
  return from_terms(std::move(scaled));
}

Complex inner_product(const PhotonState& x, const PhotonState& y) {
  // Both term lists are sorted by occupation map; walk them in lockstep.
  Complex acc{0.0, 0.0};
  auto ix = x.terms().begin();
  auto iy = y.terms().begin();
  while (ix != x.terms().end() && iy != y.terms().end()) {
    if (ix->occupations < iy->occupations) {
      ++ix;
    } else if (iy->occupations < ix->occupations) {
      ++iy;
    } else {
      acc += std::conj(ix->amplitude) * iy->amplitude;
      ++ix;
      ++iy;
    }
  }
  return acc;
}

double overlap_magnitude(const PhotonState& x, const PhotonState& y) {
  return std::abs(inner_product(x, y));
}

PhotonState make_two_photon_input(const ModeIndex& m1, const ModeIndex& m2) {
  if (m1.path != Path::A || m2.path != Path::B)
    throw std::invalid_argument(
        "two-photon input requires one photon in path A and one in path B");
  OccupationMap occ;
  occ[m1] += 1;
  occ[m2] += 1;
  return PhotonState::basis_ket(std::move(occ));
}

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix, std::vector<ModeIndex> modes)
    : matrix_(std::move(matrix)), modes_(std::move(modes)) {
  const auto n = static_cast<Eigen::Index>(modes_.size());
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw std::invalid_argument("matrix dimension does not match mode list");
  std::vector<ModeIndex> sorted = modes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("mode list contains duplicates");
  Eigen::MatrixXcd gram = matrix_.adjoint() * matrix_;
  double dev = (gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > kUnitaryTolerance)
    throw std::invalid_argument("matrix is not unitary within tolerance");
}

int ModeUnitary::index_of(const ModeIndex& mode) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i] == mode) return static_cast<int>(i);
  return -1;
}

ModeUnitary ModeUnitary::identity(std::vector<ModeIndex> modes) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  return ModeUnitary(Eigen::MatrixXcd::Identity(n, n), std::move(modes));
}

PhotonState apply_mode_unitary(const PhotonState& state, const ModeUnitary& u) {
  std::map<OccupationMap, Complex> result;
  for (const auto& term : state.terms()) {
    // Convert the normalized-ket amplitude to an operator-product coefficient,
    // expand the substituted operator polynomial, then convert back.
    Complex coeff = term.amplitude / sqrt_factorial_product(term.occupations);

    std::map<OccupationMap, Complex> poly;
    poly[OccupationMap{}] = coeff;
    for (const auto& [mode, count] : term.occupations) {
      int col = u.index_of(mode);
      if (col < 0)
        throw std::invalid_argument("state occupies a mode missing from the unitary");
      for (int rep = 0; rep < count; ++rep) {
        std::map<OccupationMap, Complex> next;
        for (const auto& [occ, amp] : poly) {
          for (int row = 0; row < u.dimension(); ++row) {
            Complex c = u.matrix()(row, col);
            if (std::abs(c) < kAmplitudeCutoff) continue;
            OccupationMap extended = occ;
            extended[u.modes()[row]] += 1;
            next[std::move(extended)] += amp * c;
          }
        }
        poly = std::move(next);
      }
    }

    for (auto& [occ, amp] : poly) result[occ] += amp * sqrt_factorial_product(occ);
  }

  std::vector<OccupationTerm> terms;
  terms.reserve(result.size());
  for (auto& [occ, amp] : result) terms.push_back(OccupationTerm{occ, amp});
  PhotonState out = PhotonState::from_terms(std::move(terms));
  if (state.is_normalized() && !out.empty()) out = out.normalized();
  return out;
}

PostSelection post_select_coincidence(const PhotonState& state) {
  if (state.photon_number() != 2)
    throw std::invalid_argument("post-selection expects a two-photon state");

  std::vector<OccupationTerm> kept;
  double kept_weight = 0.0;
  double total_weight = 0.0;
  for (const auto& term : state.terms()) {
    total_weight += std::norm(term.amplitude);
    if (photons_in_path(term.occupations, Path::A) == 1 &&
        photons_in_path(term.occupations, Path::B) == 1) {
      kept.push_back(term);
      kept_weight += std::norm(term.amplitude);
    }
  }
  if (kept.empty())
    throw std::domain_error("no coincidence terms survive post-selection");

  PostSelection out;
  out.probability = total_weight > 0.0 ? kept_weight / total_weight : 0.0;
  out.state = PhotonState::from_terms(std::move(kept)).normalized();
  return out;
}

double coincidence_probability(const PhotonState& state) {
  double kept = 0.0;
  double total = 0.0;
  for (const auto& term : state.terms()) {
    total += std::norm(term.amplitude);
    if (photons_in_path(term.occupations, Path::A) == 1 &&
        photons_in_path(term.occupations, Path::B) == 1)
      kept += std::norm(term.amplitude);
  }
  return total > 0.0 ? kept / total : 0.0;
}

ModePair::ModePair(ModeIndex a, ModeIndex b) : first(a), second(b) {
  if (second < first) std::swap(first, second);
}

std::map<ModePair, Complex> two_photon_lift(
    const ModeUnitary& u, const std::pair<ModeIndex, ModeIndex>& input_pair) {
  int c1 = u.index_of(input_pair.first);
  int c2 = u.index_of(input_pair.second);
  if (c1 < 0 || c2 < 0)
    throw std::invalid_argument("input modes missing from the unitary");

  const double in_norm = (c1 == c2) ? std::sqrt(2.0) : 1.0;
  std::map<ModePair, Complex> table;
  for (int i = 0; i < u.dimension(); ++i) {
    for (int j = i; j < u.dimension(); ++j) {
      // Permanent of the 2x2 submatrix picked by output rows (i, j) and
      // input columns (c1, c2).
      Complex perm = u.matrix()(i, c1) * u.matrix()(j, c2) +
                     u.matrix()(i, c2) * u.matrix()(j, c1);
      double out_norm = (i == j) ? std::sqrt(2.0) : 1.0;
      table[ModePair(u.modes()[i], u.modes()[j])] = perm / (in_norm * out_norm);
    }
  }
  return table;
}

}  // namespace loolsim
