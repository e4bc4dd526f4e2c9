// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_CONFIG_HPP
#define BCSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcsim/precoding.hpp"

namespace bcsim {

/// Invalid user input (flags, config file, or an inconsistent combination).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Semiorthogonality threshold request: either "pick the best beta from
/// the beta grid per operating point" or one or more fixed values.
struct BetaSpec {
  bool auto_opt = true;
  std::vector<double> values;  // used when auto_opt is false

  static BetaSpec automatic() { return {true, {}}; }
  static BetaSpec fixed(double beta) { return {false, {beta}}; }
  static BetaSpec fixed_list(std::vector<double> betas) {
    return {false, std::move(betas)};
  }
};

/// Full description of one simulation run. Sweep drivers read the list
/// fields they sweep over and require the others to be single-valued.
/// Transmit power is fixed at 1, so snr_db alone sets the noise power
/// sigma2 = 10^(-snr_db / 10).
struct ExperimentConfig {
  int m_tx = 4;
  std::vector<int> k_users = {4, 10, 20, 40};
  std::vector<double> snr_db = {15.0};
  double err_power = 0.1;
  BetaSpec beta;
  std::vector<PrecoderKind> schemes = {PrecoderKind::zf(), PrecoderKind::rzf(),
                                       PrecoderKind::rrzf()};
  int trials = 2000;
  std::uint64_t seed = 1;
  /// 0 means use the hardware thread count.
  int threads = 0;
  /// Empty means write CSV to stdout.
  std::string out_path;
  /// Candidate loadings for alpha optimization, ascending.
  std::vector<double> alpha_grid;
  /// Candidate thresholds for beta optimization, ascending, within [0, 1].
  std::vector<double> beta_grid;

  ExperimentConfig();
};

/// 60 log-spaced loadings spanning [1e-4, 1e3].
std::vector<double> default_alpha_grid();

/// {0.05, 0.10, ..., 1.00}.
std::vector<double> default_beta_grid();

/// Set of overrides parsed from a config file or command line; fields left
/// unset keep the receiving config's value.
struct ConfigPatch {
  std::optional<int> m_tx;
  std::optional<std::vector<int>> k_users;
  std::optional<std::vector<double>> snr_db;
  std::optional<double> err_power;
  std::optional<BetaSpec> beta;
  std::optional<std::vector<PrecoderKind>> schemes;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_path;
  std::optional<std::vector<double>> alpha_grid;
  std::optional<std::vector<double>> beta_grid;
};

/// Parses flat "key = value" lines ('#' starts a comment, blank lines
/// skipped). Keys match the CLI flags: m, k, snr_db, e2, beta, schemes,
/// trials, seed, threads, out, alpha_grid, beta_grid. List values are
/// comma-separated; beta accepts "auto", one value, or a list. Unknown
/// keys, duplicate keys, and malformed values raise ConfigError.
ConfigPatch parse_config_text(std::string_view text);

/// parse_config_text over a file's contents; unreadable path raises
/// ConfigError.
ConfigPatch parse_config_file(const std::string& path);

void apply_patch(ExperimentConfig& cfg, const ConfigPatch& patch);

/// Field-level checks shared by every subcommand (positive counts, ranges,
/// ascending grids). Cross-field requirements live in the sweep drivers.
void validate_config_common(const ExperimentConfig& cfg);

/// Helpers shared by the file parser and the CLI for list-valued flags.
std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);
std::vector<PrecoderKind> parse_scheme_list(std::string_view text);
BetaSpec parse_beta_spec(std::string_view text);
std::uint64_t parse_seed(std::string_view text);

}  // namespace bcsim

#endif  // BCSIM_CONFIG_HPP
