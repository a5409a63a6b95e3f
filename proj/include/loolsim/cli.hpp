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

#include <cstdint>
#include <string>

namespace loolsim {

/// Parsed command-line run: one of the six subcommands plus its parameters.
/// Unknown flags are rejected at parse time (exit 2); module-level failures
/// during execution exit with 3.
struct RunConfig {
  std::string command;
  std::string format = "json";  // "json" or "csv"
  std::string out_path;         // defaults to <command>.<format>

  // Subspace: azimuthal l or radial p (mutually exclusive).
  int ell = 3;
  bool use_radial = false;
  int radial_p = 1;

  // Spectral parameters.
  std::string profile = "gauss";  // "gauss" or "sinc"
  double sigma = 1.0;
  double sigma_b = 0.0;  // 0: same as sigma
  double mean = 0.0;
  double mean_b = 0.0;
  double sinc_width = 1.0;
  double tau_min = 0.0, tau_max = 0.0;  // 0,0: profile-dependent default
  int points = 201;
  double eta = 1.0;

  // Counting parameters.
  std::string state = "ideal";  // ideal | mixed | white | crosstalk
  std::uint64_t counts = 100000;
  std::uint64_t seed = 12345;
  bool poisson_weighted = false;
  double background = 0.0;

  // Beamsplitter / SLM parameters.
  double reflectivity = 0.5;
  double theta = 0.78539816339744831;  // pi/4

  // Schmidt parameters.
  int grid = 64;
  int rank = 8;
  double jsa_sigma_sum = 0.5;   // pump-sum width of the correlated JSA
  double jsa_sigma_diff = 2.0;  // phase-matching difference width
};

/// Entry point behind the binary: parses argv, runs the command, writes the
/// output file and prints a summary. Returns the process exit code
/// (0 success, 2 configuration error, 3 numerical/domain error).
int run_cli(int argc, const char* const* argv);

}  // namespace loolsim
