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

#include "loolsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loolsim/measurement.hpp"
#include "loolsim/optics.hpp"
#include "loolsim/rng.hpp"
#include "loolsim/spectral.hpp"
#include "loolsim/tomography.hpp"

namespace loolsim {

namespace {

using nlohmann::json;

constexpr double kCoincidenceWindowSeconds = 0.2e-9;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SubspaceLabel subspace_of(const RunConfig& cfg) {
  if (cfg.use_radial) return SubspaceLabel{BasisTag::Radial, cfg.radial_p};
  return SubspaceLabel{BasisTag::Azimuthal, cfg.ell};
}

DensityMatrix state_of(const RunConfig& cfg) {
  if (cfg.state == "ideal") return chi_density();
  if (cfg.state == "mixed") return classically_correlated();
  if (cfg.state == "white") return white_noise();
  if (cfg.state == "crosstalk") return chi_with_crosstalk(cfg.eta);
  throw std::invalid_argument("unknown state family: " + cfg.state);
}

std::pair<SpectralModel, SpectralModel> spectra_of(const RunConfig& cfg) {
  if (cfg.profile == "gauss") {
    const double sb = cfg.sigma_b > 0.0 ? cfg.sigma_b : cfg.sigma;
    return {SpectralModel(GaussianSpectrum{cfg.sigma, cfg.mean}),
            SpectralModel(GaussianSpectrum{sb, cfg.mean_b})};
  }
  if (cfg.profile == "sinc") {
    return {SpectralModel(SincSpectrum{cfg.sinc_width}),
            SpectralModel(SincSpectrum{cfg.sinc_width})};
  }
  throw std::invalid_argument("unknown spectral profile: " + cfg.profile);
}

std::pair<double, double> default_tau_range(const RunConfig& cfg) {
  if (cfg.tau_min != 0.0 || cfg.tau_max != 0.0) return {cfg.tau_min, cfg.tau_max};
  if (cfg.profile == "sinc") return {-3.0 * cfg.sinc_width, 3.0 * cfg.sinc_width};
  return {-6.0 / cfg.sigma, 6.0 / cfg.sigma};
}

json records_to_json(const std::vector<CoincidenceRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    out.push_back({{"alice_c0_re", r.setting_alice.c0().real()},
                   {"alice_c0_im", r.setting_alice.c0().imag()},
                   {"alice_c1_re", r.setting_alice.c1().real()},
                   {"alice_c1_im", r.setting_alice.c1().imag()},
                   {"bob_c0_re", r.setting_bob.c0().real()},
                   {"bob_c0_im", r.setting_bob.c0().imag()},
                   {"bob_c1_re", r.setting_bob.c1().real()},
                   {"bob_c1_im", r.setting_bob.c1().imag()},
                   {"counts", r.counts},
                   {"integration_window_s", r.integration_window}});
  }
  return out;
}

std::string records_to_csv(const std::vector<CoincidenceRecord>& records) {
  std::string out =
      "alice_c0_re,alice_c0_im,alice_c1_re,alice_c1_im,"
      "bob_c0_re,bob_c0_im,bob_c1_re,bob_c1_im,counts,integration_window_s\n";
  for (const auto& r : records) {
    out += format_double(r.setting_alice.c0().real()) + "," +
           format_double(r.setting_alice.c0().imag()) + "," +
           format_double(r.setting_alice.c1().real()) + "," +
           format_double(r.setting_alice.c1().imag()) + "," +
           format_double(r.setting_bob.c0().real()) + "," +
           format_double(r.setting_bob.c0().imag()) + "," +
           format_double(r.setting_bob.c1().real()) + "," +
           format_double(r.setting_bob.c1().imag()) + "," +
           std::to_string(r.counts) + "," + format_double(r.integration_window) + "\n";
  }
  return out;
}

json matrix_to_json(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

struct CommandOutput {
  json body;
  std::string csv;
  std::string summary;
};

CommandOutput run_hom_scan(const RunConfig& cfg) {
  const auto [phi, chi] = spectra_of(cfg);
  const auto [lo, hi] = default_tau_range(cfg);
  const auto scan = hom_scan(HomScanModel{std::pair{phi, chi}, cfg.eta}, lo, hi, cfg.points);

  CommandOutput out;
  out.body["command"] = "hom-scan";
  out.body["profile"] = cfg.profile;
  out.body["eta"] = cfg.eta;
  out.body["visibility"] = scan.visibility;
  out.body["kind"] = scan.is_dip ? "dip" : "bump";
  out.body["tau_seconds"] = scan.taus;
  out.body["probability"] = scan.probabilities;

  out.csv = "tau_seconds,probability\n";
  for (std::size_t k = 0; k < scan.taus.size(); ++k)
    out.csv += format_double(scan.taus[k]) + "," + format_double(scan.probabilities[k]) + "\n";

  char line[160];
  std::snprintf(line, sizeof(line), "  %-22s %s\n  %-22s %.6f\n", "shape",
                scan.is_dip ? "dip" : "bump", "visibility", scan.visibility);
  out.summary = line;
  return out;
}

CommandOutput run_eraser(const RunConfig& cfg) {
  const auto label = subspace_of(cfg);
  const auto [phi, chi] = spectra_of(cfg);
  const auto [lo, hi] = default_tau_range(cfg);
  const auto sym = eraser_scan(phi, chi, sym_projector(label), lo, hi, cfg.points);
  const auto asym = eraser_scan(phi, chi, asym_projector(label), lo, hi, cfg.points);

  CommandOutput out;
  out.body["command"] = "eraser";
  out.body["subspace"] = {{"basis", to_string(label.tag)}, {"index", label.index}};
  out.body["tau_seconds"] = sym.taus;
  out.body["p_sym"] = sym.values;
  out.body["p_asym"] = asym.values;
  // The quoted projectors absorb their 1/4 prefactor into the unnormalized
  // kets, so the prefactor-free conditional probabilities coincide.
  out.body["p_sym_conditional"] = sym.values;
  out.body["p_asym_conditional"] = asym.values;

  out.csv = "tau_seconds,p_sym,p_asym\n";
  for (std::size_t k = 0; k < sym.taus.size(); ++k)
    out.csv += format_double(sym.taus[k]) + "," + format_double(sym.values[k]) + "," +
               format_double(asym.values[k]) + "\n";

  const std::size_t mid = sym.taus.size() / 2;
  char line[240];
  std::snprintf(line, sizeof(line),
                "  %-22s %.6f / %.6f\n  %-22s %.6f / %.6f\n",
                "sym at tau=0 / edge", sym.values[mid], sym.values.front(),
                "asym at tau=0 / edge", asym.values[mid], asym.values.front());
  out.summary = line;
  return out;
}

CommandOutput run_witness(const RunConfig& cfg) {
  const auto label = subspace_of(cfg);
  const auto rho = state_of(cfg);
  std::vector<std::pair<Ket2, Ket2>> settings;
  for (const auto& basis : mub_settings(label))
    for (const auto& a : basis)
      for (const auto& b : basis) settings.emplace_back(a, b);
  auto records = simulate_counts(rho, settings, cfg.counts, cfg.seed, cfg.background);
  for (auto& r : records) r.integration_window = kCoincidenceWindowSeconds;
  const auto result = witness_fidelity(records, label, derive_seed(cfg.seed, 0xb00f));

  CommandOutput out;
  out.body["command"] = "witness";
  out.body["state"] = cfg.state;
  out.body["subspace"] = {{"basis", to_string(label.tag)}, {"index", label.index}};
  out.body["counts_per_setting"] = cfg.counts;
  out.body["seed"] = cfg.seed;
  out.body["fidelity"] = result.fidelity;
  out.body["sigma"] = result.sigma;
  out.body["mub_correlators"] = result.correlators;
  out.body["records"] = records_to_json(records);

  out.csv = records_to_csv(records);

  char line[200];
  std::snprintf(line, sizeof(line), "  %-22s %.4f +- %.4f\n", "witness fidelity",
                result.fidelity, result.sigma);
  out.summary = line;
  return out;
}

CommandOutput run_tomo(const RunConfig& cfg) {
  const auto label = subspace_of(cfg);
  const auto rho = state_of(cfg);
  TomoOptions options;
  options.weighting = cfg.poisson_weighted ? LeastSquaresWeighting::Poisson
                                           : LeastSquaresWeighting::Unweighted;
  options.bootstrap_seed = derive_seed(cfg.seed, 0x70b0);
  options.background_mean = cfg.background;
  const auto report = tomo_pipeline(rho, label, cfg.counts, cfg.seed, options);

  CommandOutput out;
  out.body["command"] = "tomo";
  out.body["state"] = cfg.state;
  out.body["subspace"] = {{"basis", to_string(label.tag)}, {"index", label.index}};
  out.body["counts_per_setting"] = cfg.counts;
  out.body["seed"] = cfg.seed;
  out.body["fidelity"] = report.fidelity;
  out.body["sigma"] = report.sigma;
  out.body["rho_real"] = matrix_to_json(report.real_part);
  out.body["rho_imag"] = matrix_to_json(report.imag_part);
  out.body["records"] = records_to_json(report.data.records);
  out.body["integration_window_s"] = kCoincidenceWindowSeconds;

  out.csv = "row,col,real,imag\n";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.csv += std::to_string(i) + "," + std::to_string(j) + "," +
                 format_double(report.real_part(i, j)) + "," +
                 format_double(report.imag_part(i, j)) + "\n";

  char line[200];
  std::snprintf(line, sizeof(line), "  %-22s %.4f +- %.4f\n", "tomography fidelity",
                report.fidelity, report.sigma);
  out.summary = line;
  return out;
}

CommandOutput run_schmidt(const RunConfig& cfg) {
  // Correlated double-Gaussian JSA: narrow along the sum frequency (pump),
  // wide along the difference (phase matching).
  const double ss = cfg.jsa_sigma_sum;
  const double sd = cfg.jsa_sigma_diff;
  const double extent = 5.0 * std::max(ss, sd);
  std::vector<double> omegas(static_cast<std::size_t>(cfg.grid));
  for (int i = 0; i < cfg.grid; ++i)
    omegas[static_cast<std::size_t>(i)] = -extent + 2.0 * extent * i / (cfg.grid - 1);
  Eigen::MatrixXcd f(cfg.grid, cfg.grid);
  for (int i = 0; i < cfg.grid; ++i)
    for (int j = 0; j < cfg.grid; ++j) {
      const double sum = omegas[static_cast<std::size_t>(i)] + omegas[static_cast<std::size_t>(j)];
      const double diff = omegas[static_cast<std::size_t>(i)] - omegas[static_cast<std::size_t>(j)];
      f(i, j) = std::exp(-sum * sum / (2.0 * ss * ss) - diff * diff / (2.0 * sd * sd));
    }
  const auto jsa = JointSpectralAmplitude::normalized(std::move(omegas), std::move(f));
  const auto schmidt = schmidt_decompose(jsa, cfg.rank);

  CommandOutput out;
  out.body["command"] = "schmidt";
  out.body["grid"] = cfg.grid;
  out.body["sigma_sum"] = ss;
  out.body["sigma_diff"] = sd;
  out.body["coefficients"] = schmidt.coefficients;
  out.body["truncation_weight"] = schmidt.truncation_weight;
  out.body["p_ent_tau0_direct"] = coincidence_prob_entangled(jsa, 0.0);
  out.body["p_ent_tau0_schmidt"] = coincidence_prob_schmidt(schmidt, 0.0);

  out.csv = "k,coefficient\n";
  for (std::size_t k = 0; k < schmidt.coefficients.size(); ++k)
    out.csv += std::to_string(k) + "," + format_double(schmidt.coefficients[k]) + "\n";

  char line[200];
  std::snprintf(line, sizeof(line), "  %-22s %.6f\n  %-22s %.3e\n", "leading coefficient",
                schmidt.coefficients.front(), "truncation weight", schmidt.truncation_weight);
  out.summary = line;
  return out;
}

CommandOutput run_lift(const RunConfig& cfg) {
  const int l1 = cfg.ell;
  const int l2 = 0;
  const auto composite = compose(slm_mixer(cfg.theta, BasisTag::Azimuthal, l1, l2),
                                 beamsplitter(cfg.reflectivity,
                                              {{BasisTag::Azimuthal, l1},
                                               {BasisTag::Azimuthal, l2}}));
  const std::pair<ModeIndex, ModeIndex> input{azimuthal_mode(Path::A, l1),
                                              azimuthal_mode(Path::B, l2)};
  const auto table = two_photon_lift(composite, input);

  // Image of the occupied-mode indicator vector under the composite, in the
  // (A,l1), (B,l1), (A,l2), (B,l2) ordering.
  Eigen::VectorXcd indicator = Eigen::VectorXcd::Zero(composite.dimension());
  indicator(composite.index_of(input.first)) = 1.0;
  indicator(composite.index_of(input.second)) += 1.0;
  const Eigen::VectorXcd image = composite.matrix() * indicator;

  CommandOutput out;
  out.body["command"] = "lift";
  out.body["theta"] = cfg.theta;
  out.body["r"] = cfg.reflectivity;
  json amps = json::array();
  for (const auto& [pair, amp] : table) {
    amps.push_back({{"mode_1", {{"path", to_string(pair.first.path)}, {"label", pair.first.label}}},
                    {"mode_2", {{"path", to_string(pair.second.path)}, {"label", pair.second.label}}},
                    {"re", amp.real()},
                    {"im", amp.imag()}});
  }
  out.body["pair_amplitudes"] = amps;
  json vec = json::array();
  for (Eigen::Index i = 0; i < image.size(); ++i)
    vec.push_back({{"re", image(i).real()}, {"im", image(i).imag()}});
  out.body["mode_image_vector"] = vec;

  out.csv = "path_1,label_1,path_2,label_2,re,im\n";
  for (const auto& [pair, amp] : table)
    out.csv += std::string(to_string(pair.first.path)) + "," + std::to_string(pair.first.label) +
               "," + to_string(pair.second.path) + "," + std::to_string(pair.second.label) + "," +
               format_double(amp.real()) + "," + format_double(amp.imag()) + "\n";

  const ModePair coincidence(input.first, azimuthal_mode(Path::B, l1));
  char line[200];
  std::snprintf(line, sizeof(line), "  %-22s %d\n  %-22s %.6f\n", "output pairs",
                static_cast<int>(table.size()), "|A(l1;A x l1;B)|",
                std::abs(table.at(coincidence)));
  out.summary = line;
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;

  CLI::App app{"loolsim: two-photon mode-entanglement simulator"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // Seed fallback from the environment, overridden by --seed.
  if (const char* env_seed = std::getenv("LOOLSIM_SEED")) {
    cfg.seed = std::strtoull(env_seed, nullptr, 10);
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out_path, "Output file path");
  };
  auto add_subspace = [&](CLI::App* sub) {
    auto* l = sub->add_option("--l", cfg.ell, "Azimuthal index of the higher mode")
                  ->check(CLI::Range(-100, 100));
    auto* p = sub->add_option_function<int>(
                     "--p",
                     [&cfg](const int& v) {
                       cfg.use_radial = true;
                       cfg.radial_p = v;
                     },
                     "Radial index of the higher mode (switches to the radial family)")
                  ->check(CLI::Range(1, 100));
    l->excludes(p);
  };
  auto add_spectral = [&](CLI::App* sub) {
    sub->add_option("--profile", cfg.profile, "Spectral profile")
        ->check(CLI::IsMember({"gauss", "sinc"}));
    sub->add_option("--sigma", cfg.sigma, "Gaussian width, rad/s")
        ->check(CLI::PositiveNumber);
    sub->add_option("--sigma-b", cfg.sigma_b, "Second photon width, rad/s")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mean", cfg.mean, "First photon center, rad/s");
    sub->add_option("--mean-b", cfg.mean_b, "Second photon center, rad/s");
    sub->add_option("--A", cfg.sinc_width, "Sinc width parameter, s")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tau-min", cfg.tau_min, "Scan start, s");
    sub->add_option("--tau-max", cfg.tau_max, "Scan end, s");
    sub->add_option("--points", cfg.points, "Scan points")->check(CLI::Range(3, 100000));
  };
  auto add_counting = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state, "State family")
        ->check(CLI::IsMember({"ideal", "mixed", "white", "crosstalk"}));
    sub->add_option("--eta", cfg.eta, "Plate mode overlap")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--counts", cfg.counts, "Counts per setting")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed (env LOOLSIM_SEED as fallback)");
    sub->add_option("--background", cfg.background, "Flat accidental counts per setting")
        ->check(CLI::NonNegativeNumber);
  };

  auto* hom = app.add_subcommand("hom-scan", "Coincidence probability vs path delay");
  add_common(hom);
  add_spectral(hom);
  hom->add_option("--eta", cfg.eta, "Single-photon mode overlap")->check(CLI::Range(0.0, 1.0));

  auto* eraser = app.add_subcommand("eraser", "Projected two-photon interference scan");
  add_common(eraser);
  add_subspace(eraser);
  add_spectral(eraser);

  auto* witness = app.add_subcommand("witness", "MUB correlation witness fidelity");
  add_common(witness);
  add_subspace(witness);
  add_counting(witness);

  auto* tomo = app.add_subcommand("tomo", "Full state tomography pipeline");
  add_common(tomo);
  add_subspace(tomo);
  add_counting(tomo);
  tomo->add_flag("--poisson-weighted", cfg.poisson_weighted,
                 "Weight the least squares by Poisson errors");

  auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a correlated JSA");
  add_common(schmidt);
  schmidt->add_option("--grid", cfg.grid, "Grid size")->check(CLI::Range(8, 512));
  schmidt->add_option("--rank", cfg.rank, "Rank cutoff")->check(CLI::Range(1, 512));
  schmidt->add_option("--sigma-sum", cfg.jsa_sigma_sum, "Sum-frequency width")
      ->check(CLI::PositiveNumber);
  schmidt->add_option("--sigma-diff", cfg.jsa_sigma_diff, "Difference-frequency width")
      ->check(CLI::PositiveNumber);

  auto* lift = app.add_subcommand("lift", "Two-photon amplitudes of the SLM x BS composite");
  add_common(lift);
  lift->add_option("--theta", cfg.theta, "SLM mixing angle, rad");
  lift->add_option("--r", cfg.reflectivity, "Beamsplitter reflectivity")
      ->check(CLI::Range(0.0, 1.0));
  lift->add_option("--l", cfg.ell, "Azimuthal index of the shifted mode")
      ->check(CLI::Range(-100, 100));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();

  try {
    CommandOutput output;
    if (cfg.command == "hom-scan") output = run_hom_scan(cfg);
    else if (cfg.command == "eraser") output = run_eraser(cfg);
    else if (cfg.command == "witness") output = run_witness(cfg);
    else if (cfg.command == "tomo") output = run_tomo(cfg);
    else if (cfg.command == "schmidt") output = run_schmidt(cfg);
    else output = run_lift(cfg);

    const std::string path = cfg.out_path.empty()
                                 ? cfg.command + (cfg.format == "json" ? ".json" : ".csv")
                                 : cfg.out_path;
    if (cfg.format == "json") {
      write_file(path, output.body.dump(2) + "\n");
    } else {
      write_file(path, output.csv);
    }

    std::printf("%s\n", cfg.command.c_str());
    std::printf("%s", output.summary.c_str());
    std::printf("  %-22s %s\n", "output", path.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace loolsim
