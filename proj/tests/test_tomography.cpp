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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "loolsim/rng.hpp"
#include "loolsim/tomography.hpp"

using namespace loolsim;

namespace {

const SubspaceLabel kEll3{BasisTag::Azimuthal, 3};

// Records whose frequencies are the exact Born probabilities: counts scaled
// by a power of two so every dyadic probability stays exact.
TomographySet exact_frequency_set(const DensityMatrix& rho, SubspaceLabel label) {
  TomographySet set;
  set.label = label;
  set.total_per_setting = 1ULL << 40;
  for (const auto& [a, b] : tomography_settings(label)) {
    const double p = born_probability(rho, a, b);
    set.records.push_back(CoincidenceRecord{
        a, b, static_cast<std::uint64_t>(std::llround(p * static_cast<double>(1ULL << 40)))});
  }
  return set;
}

DensityMatrix random_density(SplitMixRng& rng) {
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  Eigen::Matrix4cd m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(0.5 * (m + m.adjoint().eval()));
}

}  // namespace

TEST_CASE("tomography settings are informationally complete") {
  const auto settings = tomography_settings(kEll3);
  CHECK(settings.size() == 36);
  // Rank is checked inside linear_inversion; a successful exact inversion
  // of a full-rank state is the end-to-end witness of completeness.
  const auto rho = white_noise();
  const auto set = exact_frequency_set(rho, kEll3);
  const Eigen::Matrix4cd ls = linear_inversion(set);
  CHECK((ls - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exact frequencies invert exactly") {
  for (const auto& rho : {chi_density(), classically_correlated(), chi_with_crosstalk(0.85)}) {
    const auto set = exact_frequency_set(rho, kEll3);
    const Eigen::Matrix4cd ls = linear_inversion(set);
    CHECK((ls - rho.matrix()).norm() < 1e-9);
    // And the full pipeline (with projection) keeps the answer.
    const auto physical = project_to_physical(ls);
    CHECK((physical.matrix() - rho.matrix()).norm() < 1e-9);
  }
}

TEST_CASE("rank-deficient settings are rejected") {
  TomographySet set;
  set.label = kEll3;
  set.total_per_setting = 1000;
  const auto all = tomography_settings(kEll3);
  for (std::size_t i = 0; i < 8; ++i)
    set.records.push_back(CoincidenceRecord{all[i].first, all[i].second, 10});
  CHECK_THROWS_AS(linear_inversion(set), std::domain_error);
}

TEST_CASE("finite counts can leave the physical set") {
  bool negative_seen = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TomographySet set;
    set.label = kEll3;
    set.total_per_setting = 1000;
    set.records = simulate_counts(chi_density(), tomography_settings(kEll3), 1000, seed);
    const Eigen::Matrix4cd ls = linear_inversion(set);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(ls);
    if (solver.eigenvalues().minCoeff() < -1e-6) negative_seen = true;
  }
  CHECK(negative_seen);
}

TEST_CASE("simplex projection of the eigenvalues") {
  SUBCASE("hand-run example") {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.diagonal() << 1.1, -0.1, 0.0, 0.0;
    const auto projected = project_to_physical(m);
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
    expected(0, 0) = 1.0;
    CHECK((projected.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("physical inputs pass through unchanged") {
    SplitMixRng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_density(rng);
      const auto projected = project_to_physical(rho.matrix());
      CHECK((projected.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("output satisfies the density-matrix invariants") {
    SplitMixRng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
      Eigen::Matrix4cd g;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.next_normal(), rng.next_normal());
      const Eigen::Matrix4cd hermitian = 0.5 * (g + g.adjoint().eval());
      // The DensityMatrix constructor re-checks Hermiticity, PSD, and trace.
      CHECK_NOTHROW(project_to_physical(hermitian));
    }
  }

  SUBCASE("no feasible direction shortens the Frobenius distance") {
    SplitMixRng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Matrix4cd g;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.next_normal(), rng.next_normal());
      const Eigen::Matrix4cd m = 0.5 * (g + g.adjoint().eval());
      const auto p = project_to_physical(m);
      const double base = (m - p.matrix()).norm();
      for (int dir = 0; dir < 10; ++dir) {
        const auto other = random_density(rng);
        for (double t : {0.05, 0.3, 1.0}) {
          const Eigen::Matrix4cd moved =
              (1.0 - t) * p.matrix() + t * other.matrix();
          CHECK((m - moved).norm() >= base - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("fidelity closed cases") {
  CHECK(fidelity(chi_density(), chi_ket()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(classically_correlated(), chi_ket()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fidelity(white_noise(), chi_ket()) == doctest::Approx(0.25).epsilon(1e-12));

  SUBCASE("bounds on random states") {
    SplitMixRng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
      const double f = fidelity(random_density(rng), chi_ket());
      CHECK(f >= -1e-12);
      CHECK(f <= 1.0 + 1e-12);
    }
  }

  SUBCASE("unit fidelity only for the target itself") {
    SplitMixRng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
      Eigen::Vector4cd v;
      for (int i = 0; i < 4; ++i) v(i) = Complex(rng.next_normal(), rng.next_normal());
      v.normalize();
      const double f = fidelity(DensityMatrix::from_ket(v), chi_ket());
      const Complex overlap = chi_ket().adjoint() * v;
      const double align = std::norm(overlap);
      CHECK(f == doctest::Approx(align).epsilon(1e-9));
      if (f > 1.0 - 1e-9) CHECK(align > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("tomography pipeline") {
  SUBCASE("high statistics recover the ideal state") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const auto report = tomo_pipeline(chi_density(), kEll3, 100000, seed,
                                        TomoOptions{LeastSquaresWeighting::Unweighted, 0, 0});
      CHECK(report.fidelity >= 0.99);
    }
  }

  SUBCASE("classically correlated input lands near one half") {
    const auto report = tomo_pipeline(classically_correlated(), kEll3, 100000, 5,
                                      TomoOptions{LeastSquaresWeighting::Unweighted, 100, 77});
    CHECK(std::abs(report.fidelity - 0.5) < 0.01);
    CHECK(report.sigma > 0.0);
  }

  SUBCASE("report carries the matrix split") {
    const auto report = tomo_pipeline(chi_density(), kEll3, 50000, 9,
                                      TomoOptions{LeastSquaresWeighting::Unweighted, 0, 0});
    CHECK((report.real_part - report.rho_hat.matrix().real()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((report.imag_part - report.rho_hat.matrix().imag()).cwiseAbs().maxCoeff() == 0.0);
    // Fig.-style structure: strong anti-diagonal block, negative coherences.
    CHECK(report.real_part(1, 1) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(report.real_part(2, 2) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(report.real_part(1, 2) == doctest::Approx(-0.5).epsilon(0.05));
  }

  SUBCASE("Poisson weighting stays consistent on exact data") {
    const auto set = exact_frequency_set(chi_with_crosstalk(0.9), kEll3);
    const Eigen::Matrix4cd unweighted = linear_inversion(set, LeastSquaresWeighting::Unweighted);
    const Eigen::Matrix4cd weighted = linear_inversion(set, LeastSquaresWeighting::Poisson);
    CHECK((unweighted - weighted).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("crosstalk sweep trends downward") {
    double previous = 2.0;
    for (double eta : {1.0, 0.9, 0.8}) {
      double mean = 0.0;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        mean += tomo_pipeline(chi_with_crosstalk(eta), kEll3, 20000, 100 + seed,
                              TomoOptions{LeastSquaresWeighting::Unweighted, 0, 0}).fidelity;
      }
      mean /= 5.0;
      CHECK(mean < previous);
      previous = mean;
    }
  }
}
