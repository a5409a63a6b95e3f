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

#include <utility>
#include <vector>

#include "loolsim/fock.hpp"

namespace loolsim {

/// Internal label shared by an (A, B) mode pair at the beamsplitter.
struct InternalLabel {
  BasisTag tag;
  int label;

  friend auto operator<=>(const InternalLabel&, const InternalLabel&) = default;
};

/// Beamsplitter of reflectivity r acting on each listed internal label:
/// a -> sqrt(1-r) a + sqrt(r) b,  b -> sqrt(r) a - sqrt(1-r) b.
/// Internal labels never mix; the mode ordering is (A,l1), (B,l1), (A,l2), ...
ModeUnitary beamsplitter(double reflectivity, const std::vector<InternalLabel>& labels);

/// SLM label mixer: within each path, l1 -> cos(t) l1 + i sin(t) l2 and
/// l2 -> i sin(t) l1 + cos(t) l2. Mode ordering (A,l1), (B,l1), (A,l2), (B,l2).
ModeUnitary slm_mixer(double theta, BasisTag tag, int l1, int l2);

/// Mirror in one arm: flips the sign of every occupied azimuthal label in
/// that path (amplitudes unchanged, the overall reflection phase is dropped).
/// Throws std::invalid_argument if the path holds non-azimuthal photons.
PhotonState mirror(const PhotonState& state, Path path);

/// Spiral/vortex phase plate as a pure relabeling: (path, l) -> (path, l+delta)
/// on the given path. Azimuthal modes only.
PhotonState phase_plate(const PhotonState& state, Path path, int delta);

/// Vortex plate with mode-overlap eta: the ideal plate shifts the azimuthal
/// label by `ell`; a fraction sqrt(1-eta) of the target-mode amplitude leaks
/// into an undetected sink mode (BasisTag::Generic, same label). eta = 1 is
/// the ideal plate.
PhotonState vortex_plate(const PhotonState& state, Path path, int ell, double eta);

/// Composition on the union of the two mode sets (missing modes extended by
/// identity). compose(f, g) applies g first: the matrix is f * g, matching
/// the written order of an operator product.
ModeUnitary compose(const ModeUnitary& f, const ModeUnitary& g);

}  // namespace loolsim
