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

#include "loolsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loolsim {

ModeUnitary beamsplitter(double reflectivity, const std::vector<InternalLabel>& labels) {
  if (reflectivity < 0.0 || reflectivity > 1.0)
    throw std::invalid_argument("beamsplitter reflectivity must lie in [0, 1]");
  if (labels.empty())
    throw std::invalid_argument("beamsplitter needs at least one internal label");

  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  const auto n = static_cast<Eigen::Index>(2 * labels.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  std::vector<ModeIndex> modes;
  modes.reserve(2 * labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    modes.push_back(make_mode(Path::A, labels[k].tag, labels[k].label));
    modes.push_back(make_mode(Path::B, labels[k].tag, labels[k].label));
    const auto i = static_cast<Eigen::Index>(2 * k);
    m(i, i) = t;
    m(i + 1, i) = r;
    m(i, i + 1) = r;
    m(i + 1, i + 1) = -t;
  }
  return ModeUnitary(std::move(m), std::move(modes));
}

ModeUnitary slm_mixer(double theta, BasisTag tag, int l1, int l2) {
  if (l1 == l2) throw std::invalid_argument("SLM mixer needs two distinct labels");
  const Complex c{std::cos(theta), 0.0};
  const Complex is{0.0, std::sin(theta)};
  std::vector<ModeIndex> modes = {
      make_mode(Path::A, tag, l1), make_mode(Path::B, tag, l1),
      make_mode(Path::A, tag, l2), make_mode(Path::B, tag, l2)};
  Eigen::MatrixXcd m(4, 4);
  m << c, 0, is, 0,
       0, c, 0, is,
       is, 0, c, 0,
       0, is, 0, c;
  return ModeUnitary(std::move(m), std::move(modes));
}

PhotonState mirror(const PhotonState& state, Path path) {
  std::vector<OccupationTerm> out;
  out.reserve(state.terms().size());
  for (const auto& term : state.terms()) {
    OccupationMap relabeled;
    for (const auto& [mode, count] : term.occupations) {
      if (mode.path == path && mode.tag != BasisTag::Azimuthal)
        throw std::invalid_argument("mirror flips azimuthal labels only");
      ModeIndex image = mode;
      if (mode.path == path) image.label = -mode.label;
      relabeled[image] += count;
    }
    out.push_back(OccupationTerm{std::move(relabeled), term.amplitude});
  }
  return PhotonState::from_terms(std::move(out));
}

PhotonState phase_plate(const PhotonState& state, Path path, int delta) {
  std::vector<OccupationTerm> out;
  out.reserve(state.terms().size());
  for (const auto& term : state.terms()) {
    OccupationMap relabeled;
    for (const auto& [mode, count] : term.occupations) {
      if (mode.path == path && mode.tag != BasisTag::Azimuthal)
        throw std::invalid_argument("phase plate shifts azimuthal labels only");
      ModeIndex image = mode;
      if (mode.path == path) image.label = mode.label + delta;
      relabeled[image] += count;
    }
    out.push_back(OccupationTerm{std::move(relabeled), term.amplitude});
  }
  return PhotonState::from_terms(std::move(out));
}

PhotonState vortex_plate(const PhotonState& state, Path path, int ell, double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("plate overlap eta must lie in [0, 1]");
  PhotonState shifted = phase_plate(state, path, ell);
  if (eta == 1.0) return shifted;

  // Rotate the target mode partially into an undetected sink mode.
  ModeIndex target = azimuthal_mode(path, ell);
  ModeIndex sink = make_mode(path, BasisTag::Generic, ell);
  std::vector<ModeIndex> touched;
  for (const auto& term : shifted.terms())
    for (const auto& [mode, count] : term.occupations)
      if (std::find(touched.begin(), touched.end(), mode) == touched.end())
        touched.push_back(mode);
  if (std::find(touched.begin(), touched.end(), target) == touched.end())
    return shifted;
  if (std::find(touched.begin(), touched.end(), sink) == touched.end())
    touched.push_back(sink);
  std::sort(touched.begin(), touched.end());

  const auto n = static_cast<Eigen::Index>(touched.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  auto idx = [&](const ModeIndex& mode) {
    return static_cast<Eigen::Index>(
        std::find(touched.begin(), touched.end(), mode) - touched.begin());
  };
  const double a = std::sqrt(eta);
  const double b = std::sqrt(1.0 - eta);
  m(idx(target), idx(target)) = a;
  m(idx(sink), idx(target)) = b;
  m(idx(target), idx(sink)) = -b;
  m(idx(sink), idx(sink)) = a;
  return apply_mode_unitary(shifted, ModeUnitary(std::move(m), std::move(touched)));
}

ModeUnitary compose(const ModeUnitary& f, const ModeUnitary& g) {
  std::vector<ModeIndex> modes = f.modes();
  for (const auto& mode : g.modes())
    if (std::find(modes.begin(), modes.end(), mode) == modes.end())
      modes.push_back(mode);

  const auto n = static_cast<Eigen::Index>(modes.size());
  auto extend = [&](const ModeUnitary& u) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      int ui = u.index_of(modes[static_cast<std::size_t>(i)]);
      if (ui < 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        int uj = u.index_of(modes[static_cast<std::size_t>(j)]);
        if (uj >= 0) m(i, j) = u.matrix()(ui, uj);
      }
    }
    return m;
  };

  Eigen::MatrixXcd composed = extend(f) * extend(g);
  return ModeUnitary(std::move(composed), std::move(modes));
}

}  // namespace loolsim
