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
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "loolsim/fock.hpp"

namespace loolsim {

/// Normalized Gaussian spectral amplitude of rms width sigma centered at mean
/// (both in rad/s).
struct GaussianSpectrum {
  double sigma;
  double mean = 0.0;
};

/// Normalized sinc spectral amplitude sqrt(A/pi) * sinc(A w); A in seconds.
/// Its temporal profile is a boxcar of half-width A.
struct SincSpectrum {
  double width;  // the paper-style A parameter
};

/// Uniformly sampled complex amplitude; zero outside the sampled range.
struct GridSpectrum {
  double omega0;   // frequency of the first sample
  double spacing;  // sample spacing, rad/s
  std::vector<Complex> amplitudes;
};

/// Single-photon spectral amplitude phi(w) with unit L2 norm.
class SpectralModel {
 public:
  explicit SpectralModel(GaussianSpectrum g);
  explicit SpectralModel(SincSpectrum s);
  /// Grid input must satisfy sum |phi|^2 dw = 1 within 1e-8.
  explicit SpectralModel(GridSpectrum g);

  /// Builds a grid model rescaled to exact unit norm.
  static SpectralModel normalized_grid(GridSpectrum g);

  Complex evaluate(double omega) const;

  bool is_gaussian() const { return std::holds_alternative<GaussianSpectrum>(kind_); }
  bool is_sinc() const { return std::holds_alternative<SincSpectrum>(kind_); }
  bool is_grid() const { return std::holds_alternative<GridSpectrum>(kind_); }
  const GaussianSpectrum& gaussian() const { return std::get<GaussianSpectrum>(kind_); }
  const SincSpectrum& sinc() const { return std::get<SincSpectrum>(kind_); }
  const GridSpectrum& grid() const { return std::get<GridSpectrum>(kind_); }

  /// Frequency window outside which the amplitude is negligible (Gaussian)
  /// or handled by the analytic tail correction (sinc).
  double window_lo() const;
  double window_hi() const;

 private:
  std::variant<GaussianSpectrum, SincSpectrum, GridSpectrum> kind_;
};

struct QuadratureOptions {
  double window_sigmas = 8.0;  // Gaussian window half-width in units of sigma
  double sinc_window = 32.0;   // sinc window half-width in units of 1/A
  int n_points = 1024;         // trapezoid points for Gaussian/grid windows
  int n_points_sinc = 4096;    // trapezoid points when a sinc tail is present
};

/// Overlap integral of the delay interferogram,
///   I(tau) = int phi*(w) chi(w) exp(-i w tau) dw,
/// by composite trapezoid over the joint window. For a sinc/sinc pair the
/// truncated 1/w^2 tails are added back analytically (exact up to the
/// sine-integral evaluation).
Complex overlap_integral(const SpectralModel& phi, const SpectralModel& chi,
                         double tau, const QuadratureOptions& opts = {});

/// Coincidence probability behind a 50:50 beamsplitter for a separable pair,
///   p(tau) = 1/2 - 1/2 |I(tau)|^2,
/// evaluated by quadrature of the general overlap integral.
double coincidence_prob_separable(const SpectralModel& phi, const SpectralModel& chi,
                                  double tau, const QuadratureOptions& opts = {});

/// Closed form for two Gaussian spectra.
double coincidence_prob_gauss(double sigma_a, double sigma_b, double mean_a,
                              double mean_b, double tau);

/// Closed form for matched sinc spectra (triangular dip).
double coincidence_prob_sinc(double width, double tau);

/// Joint spectral amplitude f(w1, w2) on a square uniform grid with
/// sum |f|^2 dw^2 = 1 within 1e-6.
class JointSpectralAmplitude {
 public:
  JointSpectralAmplitude(std::vector<double> omegas, Eigen::MatrixXcd amplitudes);

  static JointSpectralAmplitude normalized(std::vector<double> omegas,
                                           Eigen::MatrixXcd amplitudes);

  /// Product JSA phi(w1) chi(w2) sampled on a symmetric n-point grid.
  static JointSpectralAmplitude product(const SpectralModel& phi, const SpectralModel& chi,
                                        double omega_lo, double omega_hi, int n);

  const std::vector<double>& omegas() const { return omegas_; }
  const Eigen::MatrixXcd& amplitudes() const { return amplitudes_; }
  double spacing() const { return spacing_; }
  int size() const { return static_cast<int>(omegas_.size()); }

 private:
  std::vector<double> omegas_;
  double spacing_;
  Eigen::MatrixXcd amplitudes_;
};

/// Coincidence probability for a spectrally entangled pair,
///   p(tau) = 1/2 - 1/2 int int f*(w1,w2) f(w2,w1) exp(i (w2-w1) tau),
/// evaluated as the discrete double sum. The imaginary residue must stay
/// below 1e-9 and is truncated.
double coincidence_prob_entangled(const JointSpectralAmplitude& jsa, double tau);

struct SchmidtDecomposition {
  std::vector<double> coefficients;       // descending, sum of squares = 1
  std::vector<SpectralModel> modes_a;     // phi_k, grid models
  std::vector<SpectralModel> modes_b;     // chi_k, grid models
  double truncation_weight = 0.0;         // squared weight beyond the cutoff
};

/// Singular value decomposition of the discretized JSA, rescaled so the
/// squared coefficients sum to one, truncated at rank_cutoff.
SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa, int rank_cutoff);

/// p(tau) assembled from a Schmidt decomposition via the mode-pair overlap
/// sums on the shared grid; equals the direct double integral at full rank.
double coincidence_prob_schmidt(const SchmidtDecomposition& schmidt, double tau);

/// What hom_scan sweeps: either a separable pair of spectral models or an
/// entangled JSA, with an optional single-photon mode overlap eta scaling
/// the interference term (eta = 1: perfect overlap).
struct HomScanModel {
  std::variant<std::pair<SpectralModel, SpectralModel>, JointSpectralAmplitude> source;
  double eta = 1.0;
};

struct HomScan {
  std::vector<double> taus;
  std::vector<double> probabilities;
  double visibility;
  bool is_dip;  // false: bump
};

/// Samples the coincidence probability over [tau_min, tau_max] and estimates
/// the visibility against a baseline taken from the outermost 10% of samples.
HomScan hom_scan(const HomScanModel& model, double tau_min, double tau_max,
                 int n_points, const QuadratureOptions& opts = {});

/// Visibility of an existing curve (exposed for reuse by the eraser scan).
void annotate_visibility(HomScan& scan);

}  // namespace loolsim
