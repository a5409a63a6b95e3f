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

#include "loolsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loolsim {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc_kernel(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Sine integral Si(x) = int_0^x sin(t)/t dt. Power series up to |x| = 16,
// auxiliary asymptotic expansion beyond; absolute error < 2e-7 everywhere
// and < 2e-11 in the series range.
double sine_integral(double x) {
  const double ax = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (ax <= 16.0) {
    double sum = 0.0;
    double num = ax;  // (-1)^k x^(2k+1) / (2k+1)!
    for (int k = 0; k < 120; ++k) {
      sum += num / static_cast<double>(2 * k + 1);
      num *= -ax * ax / static_cast<double>((2 * k + 2) * (2 * k + 3));
      if (std::abs(num) < 1e-20) break;
    }
    return sign * sum;
  }
  const double inv2 = 1.0 / (ax * ax);
  const double f =
      (1.0 / ax) * (1.0 + inv2 * (-2.0 + inv2 * (24.0 + inv2 * (-720.0 + inv2 * 40320.0))));
  const double g =
      inv2 * (1.0 + inv2 * (-6.0 + inv2 * (120.0 + inv2 * (-5040.0 + inv2 * 362880.0))));
  return sign * (kPi / 2.0 - f * std::cos(ax) - g * std::sin(ax));
}

// int_Omega^inf cos(b w) / w^2 dw, used by the sinc tail correction.
double cosine_tail(double b, double omega) {
  b = std::abs(b);
  if (b == 0.0) return 1.0 / omega;
  return std::cos(b * omega) / omega - b * (kPi / 2.0 - sine_integral(b * omega));
}

}  // namespace

SpectralModel::SpectralModel(GaussianSpectrum g) : kind_(g) {
  if (g.sigma <= 0.0)
    throw std::invalid_argument("Gaussian spectral width must be positive");
}

SpectralModel::SpectralModel(SincSpectrum s) : kind_(s) {
  if (s.width <= 0.0)
    throw std::invalid_argument("sinc spectral parameter must be positive");
}

SpectralModel::SpectralModel(GridSpectrum g) : kind_(std::move(g)) {
  const auto& grid = std::get<GridSpectrum>(kind_);
  if (grid.amplitudes.size() < 2 || grid.spacing <= 0.0)
    throw std::invalid_argument("grid spectrum needs >= 2 samples and positive spacing");
  double norm = 0.0;
  for (const auto& a : grid.amplitudes) norm += std::norm(a);
  norm *= grid.spacing;
  if (std::abs(norm - 1.0) > 1e-8)
    throw std::invalid_argument("grid spectrum is not normalized");
}

SpectralModel SpectralModel::normalized_grid(GridSpectrum g) {
  double norm = 0.0;
  for (const auto& a : g.amplitudes) norm += std::norm(a);
  norm *= g.spacing;
  if (norm <= 0.0) throw std::invalid_argument("grid spectrum has zero norm");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : g.amplitudes) a *= scale;
  return SpectralModel(std::move(g));
}

Complex SpectralModel::evaluate(double omega) const {
  if (is_gaussian()) {
    const auto& g = gaussian();
    const double d = (omega - g.mean) / g.sigma;
    return Complex{std::pow(kPi, -0.25) / std::sqrt(g.sigma) * std::exp(-0.5 * d * d), 0.0};
  }
  if (is_sinc()) {
    const auto& s = sinc();
    return Complex{std::sqrt(s.width / kPi) * sinc_kernel(s.width * omega), 0.0};
  }
  const auto& g = grid();
  const double pos = (omega - g.omega0) / g.spacing;
  if (pos < 0.0 || pos > static_cast<double>(g.amplitudes.size() - 1)) return {0.0, 0.0};
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= g.amplitudes.size()) return g.amplitudes.back();
  const double frac = pos - static_cast<double>(i);
  return g.amplitudes[i] * (1.0 - frac) + g.amplitudes[i + 1] * frac;
}

double SpectralModel::window_lo() const {
  if (is_gaussian()) return gaussian().mean - 8.0 * gaussian().sigma;
  if (is_sinc()) return -32.0 / sinc().width;
  return grid().omega0;
}

double SpectralModel::window_hi() const {
  if (is_gaussian()) return gaussian().mean + 8.0 * gaussian().sigma;
  if (is_sinc()) return 32.0 / sinc().width;
  const auto& g = grid();
  return g.omega0 + g.spacing * static_cast<double>(g.amplitudes.size() - 1);
}

Complex overlap_integral(const SpectralModel& phi, const SpectralModel& chi,
                         double tau, const QuadratureOptions& opts) {
  const bool sinc_pair = phi.is_sinc() && chi.is_sinc();

  auto window_lo = [&](const SpectralModel& m) {
    if (m.is_gaussian()) return m.gaussian().mean - opts.window_sigmas * m.gaussian().sigma;
    if (m.is_sinc()) return -opts.sinc_window / m.sinc().width;
    return m.window_lo();
  };
  auto window_hi = [&](const SpectralModel& m) {
    if (m.is_gaussian()) return m.gaussian().mean + opts.window_sigmas * m.gaussian().sigma;
    if (m.is_sinc()) return opts.sinc_window / m.sinc().width;
    return m.window_hi();
  };

  // The integrand vanishes wherever either factor does, so the narrower
  // window wins unless both models are heavy-tailed sincs.
  double lo, hi;
  if (sinc_pair) {
    lo = std::min(window_lo(phi), window_lo(chi));
    hi = std::max(window_hi(phi), window_hi(chi));
  } else if (phi.is_sinc()) {
    lo = window_lo(chi);
    hi = window_hi(chi);
  } else if (chi.is_sinc()) {
    lo = window_lo(phi);
    hi = window_hi(phi);
  } else {
    lo = std::min(window_lo(phi), window_lo(chi));
    hi = std::max(window_hi(phi), window_hi(chi));
  }
  if (!(hi > lo)) throw std::invalid_argument("empty quadrature window");

  int n = sinc_pair ? opts.n_points_sinc : opts.n_points;
  if (n < 3) throw std::invalid_argument("quadrature needs at least 3 points");
  // Keep at least ~10 samples per period of the fastest oscillation in the
  // window (sinc ringing plus the delay phase); wide mixed windows would
  // otherwise undersample.
  double rate = std::abs(tau);
  if (phi.is_sinc()) rate += phi.sinc().width;
  if (chi.is_sinc()) rate += chi.sinc().width;
  const double needed = (hi - lo) * rate * 10.0 / (2.0 * kPi);
  if (needed > static_cast<double>(n))
    n = static_cast<int>(std::min(needed, 2097152.0)) + 1;

  const double h = (hi - lo) / static_cast<double>(n - 1);
  Complex acc{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double w = lo + h * static_cast<double>(k);
    const Complex v = std::conj(phi.evaluate(w)) * chi.evaluate(w) *
                      std::polar(1.0, -w * tau);
    acc += (k == 0 || k == n - 1) ? 0.5 * v : v;
  }
  acc *= h;

  if (sinc_pair) {
    // sinc(Aa w) sinc(Ab w) = [cos((Aa-Ab) w) - cos((Aa+Ab) w)] / (2 Aa Ab w^2),
    // so the truncated tails reduce to cosine tail integrals.
    const double aa = phi.sinc().width;
    const double ab = chi.sinc().width;
    const double omega = hi;  // symmetric window for sinc pairs
    const double diff = aa - ab;
    const double sum = aa + ab;
    const double scale = std::sqrt(aa * ab) / kPi / (2.0 * aa * ab);
    const double tail = scale * (cosine_tail(diff + tau, omega) + cosine_tail(diff - tau, omega) -
                                 cosine_tail(sum + tau, omega) - cosine_tail(sum - tau, omega));
    acc += Complex{tail, 0.0};
  }
  return acc;
}

double coincidence_prob_separable(const SpectralModel& phi, const SpectralModel& chi,
                                  double tau, const QuadratureOptions& opts) {
  const Complex overlap = overlap_integral(phi, chi, tau, opts);
  return 0.5 - 0.5 * std::norm(overlap);
}

double coincidence_prob_gauss(double sigma_a, double sigma_b, double mean_a,
                              double mean_b, double tau) {
  if (sigma_a <= 0.0 || sigma_b <= 0.0)
    throw std::invalid_argument("Gaussian spectral widths must be positive");
  const double s2 = sigma_a * sigma_a + sigma_b * sigma_b;
  const double dm = mean_a - mean_b;
  const double expo = (sigma_a * sigma_a * sigma_b * sigma_b * tau * tau + dm * dm) / s2;
  return 0.5 - sigma_a * sigma_b / s2 * std::exp(-expo);
}

double coincidence_prob_sinc(double width, double tau) {
  if (width <= 0.0) throw std::invalid_argument("sinc spectral parameter must be positive");
  const double q = std::abs(tau) - std::abs(0.5 * tau - width) - std::abs(0.5 * tau + width);
  return 0.5 - q * q / (8.0 * width * width);
}

JointSpectralAmplitude::JointSpectralAmplitude(std::vector<double> omegas,
                                               Eigen::MatrixXcd amplitudes)
    : omegas_(std::move(omegas)), amplitudes_(std::move(amplitudes)) {
  const auto n = static_cast<Eigen::Index>(omegas_.size());
  if (n < 2) throw std::invalid_argument("JSA grid needs at least 2 samples");
  if (amplitudes_.rows() != n || amplitudes_.cols() != n)
    throw std::invalid_argument("JSA amplitude grid must be square over the samples");
  spacing_ = omegas_[1] - omegas_[0];
  if (spacing_ <= 0.0) throw std::invalid_argument("JSA samples must be increasing");
  for (std::size_t i = 2; i < omegas_.size(); ++i) {
    if (std::abs((omegas_[i] - omegas_[i - 1]) - spacing_) > 1e-9 * spacing_)
      throw std::invalid_argument("JSA samples must be uniformly spaced");
  }
  const double norm = amplitudes_.squaredNorm() * spacing_ * spacing_;
  if (std::abs(norm - 1.0) > 1e-6)
    throw std::invalid_argument("JSA is not normalized");
}

JointSpectralAmplitude JointSpectralAmplitude::normalized(std::vector<double> omegas,
                                                          Eigen::MatrixXcd amplitudes) {
  if (omegas.size() < 2) throw std::invalid_argument("JSA grid needs at least 2 samples");
  const double spacing = omegas[1] - omegas[0];
  const double norm = amplitudes.squaredNorm() * spacing * spacing;
  if (norm <= 0.0) throw std::invalid_argument("JSA has zero norm");
  amplitudes /= std::sqrt(norm);
  return JointSpectralAmplitude(std::move(omegas), std::move(amplitudes));
}

JointSpectralAmplitude JointSpectralAmplitude::product(const SpectralModel& phi,
                                                       const SpectralModel& chi,
                                                       double omega_lo, double omega_hi,
                                                       int n) {
  if (n < 2) throw std::invalid_argument("JSA grid needs at least 2 samples");
  std::vector<double> omegas(static_cast<std::size_t>(n));
  const double h = (omega_hi - omega_lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) omegas[static_cast<std::size_t>(i)] = omega_lo + h * i;
  Eigen::MatrixXcd f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f(i, j) = phi.evaluate(omegas[static_cast<std::size_t>(i)]) *
                chi.evaluate(omegas[static_cast<std::size_t>(j)]);
  return normalized(std::move(omegas), std::move(f));
}

double coincidence_prob_entangled(const JointSpectralAmplitude& jsa, double tau) {
  const int n = jsa.size();
  const double dw2 = jsa.spacing() * jsa.spacing();
  Complex acc{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double phase = (jsa.omegas()[static_cast<std::size_t>(j)] -
                            jsa.omegas()[static_cast<std::size_t>(i)]) * tau;
      acc += std::conj(jsa.amplitudes()(i, j)) * jsa.amplitudes()(j, i) *
             std::polar(1.0, phase);
    }
  }
  acc *= dw2;
  const Complex p = 0.5 - 0.5 * acc;
  if (std::abs(p.imag()) > 1e-9)
    throw std::domain_error("entangled coincidence probability has an imaginary residue");
  return p.real();
}

SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa, int rank_cutoff) {
  if (rank_cutoff < 1) throw std::invalid_argument("rank cutoff must be positive");
  const int n = jsa.size();
  // Scale by dw so the singular values obey sum u_k^2 = 1 directly.
  Eigen::MatrixXcd m = jsa.amplitudes() * jsa.spacing();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const Eigen::VectorXd& sv = svd.singularValues();
  double total = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) total += sv(k) * sv(k);
  const double rescale = 1.0 / std::sqrt(total);

  SchmidtDecomposition out;
  const int rank = std::min<int>(rank_cutoff, static_cast<int>(sv.size()));
  const double sqrt_dw = std::sqrt(jsa.spacing());
  for (int k = 0; k < rank; ++k) {
    out.coefficients.push_back(sv(k) * rescale);
    GridSpectrum ga{jsa.omegas().front(), jsa.spacing(), {}};
    GridSpectrum gb{jsa.omegas().front(), jsa.spacing(), {}};
    ga.amplitudes.resize(static_cast<std::size_t>(n));
    gb.amplitudes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      // f(w1, w2) = sum_k u_k phi_k(w1) chi_k(w2) with F = U S V^H means
      // chi_k samples are conj(V) columns; 1/sqrt(dw) restores unit L2 norm.
      ga.amplitudes[static_cast<std::size_t>(i)] = svd.matrixU()(i, k) / sqrt_dw;
      gb.amplitudes[static_cast<std::size_t>(i)] = std::conj(svd.matrixV()(i, k)) / sqrt_dw;
    }
    out.modes_a.push_back(SpectralModel::normalized_grid(std::move(ga)));
    out.modes_b.push_back(SpectralModel::normalized_grid(std::move(gb)));
  }
  double kept = 0.0;
  for (double u : out.coefficients) kept += u * u;
  out.truncation_weight = std::max(0.0, 1.0 - kept);
  return out;
}

namespace {

// Mode overlap on the shared Schmidt grid, summed with the same discrete
// weights as the direct double sum so the two routes agree identically.
Complex grid_overlap(const SpectralModel& a, const SpectralModel& b, double tau) {
  const auto& ga = a.grid();
  const auto& gb = b.grid();
  if (ga.amplitudes.size() != gb.amplitudes.size() ||
      std::abs(ga.omega0 - gb.omega0) > 1e-12 || std::abs(ga.spacing - gb.spacing) > 1e-12)
    throw std::invalid_argument("Schmidt modes live on mismatched grids");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < ga.amplitudes.size(); ++i) {
    const double w = ga.omega0 + ga.spacing * static_cast<double>(i);
    acc += std::conj(ga.amplitudes[i]) * gb.amplitudes[i] * std::polar(1.0, -w * tau);
  }
  return acc * ga.spacing;
}

}  // namespace

double coincidence_prob_schmidt(const SchmidtDecomposition& schmidt, double tau) {
  const std::size_t r = schmidt.coefficients.size();
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t kp = 0; kp < r; ++kp) {
      const Complex i1 = grid_overlap(schmidt.modes_a[k], schmidt.modes_b[kp], tau);
      const Complex i2 = std::conj(grid_overlap(schmidt.modes_a[kp], schmidt.modes_b[k], tau));
      acc += schmidt.coefficients[k] * schmidt.coefficients[kp] * i1 * i2;
    }
  }
  const Complex p = 0.5 - 0.5 * acc;
  return p.real();
}

HomScan hom_scan(const HomScanModel& model, double tau_min, double tau_max, int n_points,
                 const QuadratureOptions& opts) {
  if (n_points < 3) throw std::invalid_argument("HOM scan needs at least 3 points");
  if (!(tau_max > tau_min)) throw std::invalid_argument("empty delay range");
  if (model.eta < 0.0 || model.eta > 1.0)
    throw std::invalid_argument("mode overlap eta must lie in [0, 1]");

  HomScan scan;
  scan.taus.resize(static_cast<std::size_t>(n_points));
  scan.probabilities.resize(static_cast<std::size_t>(n_points));
  const double h = (tau_max - tau_min) / static_cast<double>(n_points - 1);
  for (int k = 0; k < n_points; ++k) {
    const double tau = tau_min + h * static_cast<double>(k);
    double interference;  // the term subtracted from 1/2
    if (std::holds_alternative<std::pair<SpectralModel, SpectralModel>>(model.source)) {
      const auto& pair = std::get<std::pair<SpectralModel, SpectralModel>>(model.source);
      interference = std::norm(overlap_integral(pair.first, pair.second, tau, opts));
    } else {
      const auto& jsa = std::get<JointSpectralAmplitude>(model.source);
      interference = 1.0 - 2.0 * coincidence_prob_entangled(jsa, tau);
    }
    scan.taus[static_cast<std::size_t>(k)] = tau;
    scan.probabilities[static_cast<std::size_t>(k)] =
        0.5 - 0.5 * model.eta * interference;
  }
  annotate_visibility(scan);
  return scan;
}

void annotate_visibility(HomScan& scan) {
  const std::size_t n = scan.probabilities.size();
  std::size_t edge = std::max<std::size_t>(1, n / 20);  // 5% from each end
  double baseline = 0.0;
  for (std::size_t k = 0; k < edge; ++k)
    baseline += scan.probabilities[k] + scan.probabilities[n - 1 - k];
  baseline /= static_cast<double>(2 * edge);

  const double lo = *std::min_element(scan.probabilities.begin(), scan.probabilities.end());
  const double hi = *std::max_element(scan.probabilities.begin(), scan.probabilities.end());
  scan.is_dip = (baseline - lo) >= (hi - baseline);
  scan.visibility = baseline > 0.0
                        ? (scan.is_dip ? (baseline - lo) / baseline : (hi - baseline) / baseline)
                        : 0.0;
}

}  // namespace loolsim
