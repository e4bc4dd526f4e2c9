// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace bcsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view token, const char* what) {
  token = trim(token);
  if (token.empty()) {
    throw ConfigError(std::string("empty ") + what + " value");
  }
  T value{};
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ConfigError(std::string("malformed ") + what + " value: '" +
                      std::string(token) + "'");
  }
  return value;
}

bool equals_ci(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

void require_ascending(const std::vector<double>& xs, const char* what) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw ConfigError(std::string(what) + " must be strictly ascending");
    }
  }
}

}  // namespace

ExperimentConfig::ExperimentConfig()
    : alpha_grid(default_alpha_grid()), beta_grid(default_beta_grid()) {}

std::vector<double> default_alpha_grid() {
  constexpr int kPoints = 60;
  constexpr double kLogLo = -4.0;
  constexpr double kLogHi = 3.0;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::pow(10.0, kLogLo + (kLogHi - kLogLo) * i / (kPoints - 1));
  }
  return grid;
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid(20);
  for (int i = 1; i <= 20; ++i) {
    grid[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) / 20.0;
  }
  return grid;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto tok : split(text, ',')) {
    out.push_back(parse_number<int>(tok, "integer"));
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto tok : split(text, ',')) {
    out.push_back(parse_number<double>(tok, "number"));
  }
  return out;
}

std::vector<PrecoderKind> parse_scheme_list(std::string_view text) {
  std::vector<PrecoderKind> out;
  for (const auto tok : split(text, ',')) {
    const auto kind = precoder_kind_from_name(trim(tok));
    if (!kind) {
      throw ConfigError("unknown scheme '" + std::string(trim(tok)) +
                        "' (expected ZF, RZF, RRZF or MF)");
    }
    out.push_back(*kind);
  }
  if (out.empty()) throw ConfigError("empty scheme list");
  return out;
}

BetaSpec parse_beta_spec(std::string_view text) {
  if (equals_ci(trim(text), "auto")) return BetaSpec::automatic();
  return BetaSpec::fixed_list(parse_double_list(text));
}

std::uint64_t parse_seed(std::string_view text) {
  return parse_number<std::uint64_t>(text, "seed");
}

ConfigPatch parse_config_text(std::string_view text) {
  ConfigPatch patch;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (const auto raw_line : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config: duplicate key '" + key + "'");
    }

    if (key == "m") {
      patch.m_tx = parse_number<int>(value, "m");
    } else if (key == "k") {
      patch.k_users = parse_int_list(value);
    } else if (key == "snr_db") {
      patch.snr_db = parse_double_list(value);
    } else if (key == "e2") {
      patch.err_power = parse_number<double>(value, "e2");
    } else if (key == "beta") {
      patch.beta = parse_beta_spec(value);
    } else if (key == "schemes") {
      patch.schemes = parse_scheme_list(value);
    } else if (key == "trials") {
      patch.trials = parse_number<int>(value, "trials");
    } else if (key == "seed") {
      patch.seed = parse_seed(value);
    } else if (key == "threads") {
      patch.threads = parse_number<int>(value, "threads");
    } else if (key == "out") {
      patch.out_path = std::string(value);
    } else if (key == "alpha_grid") {
      patch.alpha_grid = parse_double_list(value);
    } else if (key == "beta_grid") {
      patch.beta_grid = parse_double_list(value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return patch;
}

ConfigPatch parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_patch(ExperimentConfig& cfg, const ConfigPatch& patch) {
  if (patch.m_tx) cfg.m_tx = *patch.m_tx;
  if (patch.k_users) cfg.k_users = *patch.k_users;
  if (patch.snr_db) cfg.snr_db = *patch.snr_db;
  if (patch.err_power) cfg.err_power = *patch.err_power;
  if (patch.beta) cfg.beta = *patch.beta;
  if (patch.schemes) cfg.schemes = *patch.schemes;
  if (patch.trials) cfg.trials = *patch.trials;
  if (patch.seed) cfg.seed = *patch.seed;
  if (patch.threads) cfg.threads = *patch.threads;
  if (patch.out_path) cfg.out_path = *patch.out_path;
  if (patch.alpha_grid) cfg.alpha_grid = *patch.alpha_grid;
  if (patch.beta_grid) cfg.beta_grid = *patch.beta_grid;
}

void validate_config_common(const ExperimentConfig& cfg) {
  if (cfg.m_tx < 1 || cfg.m_tx > 64) {
    throw ConfigError("m must be in [1, 64]");
  }
  if (cfg.k_users.empty()) throw ConfigError("k list must not be empty");
  for (const int k : cfg.k_users) {
    if (k < cfg.m_tx) {
      throw ConfigError("every k must be >= m (got k=" + std::to_string(k) +
                        ", m=" + std::to_string(cfg.m_tx) + ")");
    }
    if (k > 1000000) throw ConfigError("k too large");
  }
  if (cfg.snr_db.empty()) throw ConfigError("snr_db list must not be empty");
  for (const double s : cfg.snr_db) {
    if (!std::isfinite(s)) throw ConfigError("snr_db must be finite");
  }
  if (!(cfg.err_power >= 0.0 && cfg.err_power <= 1.0)) {
    throw ConfigError("e2 must lie in [0, 1]");
  }
  if (!cfg.beta.auto_opt) {
    if (cfg.beta.values.empty()) {
      throw ConfigError("beta must be 'auto' or at least one value");
    }
    for (const double b : cfg.beta.values) {
      if (!(b >= 0.0 && b <= 1.0)) {
        throw ConfigError("beta values must lie in [0, 1]");
      }
    }
  }
  if (cfg.schemes.empty()) throw ConfigError("scheme list must not be empty");
  if (cfg.trials < 1 || cfg.trials > 100000000) {
    throw ConfigError("trials must be in [1, 1e8]");
  }
  if (cfg.threads < 0 || cfg.threads > 4096) {
    throw ConfigError("threads must be in [0, 4096]");
  }
  if (cfg.alpha_grid.empty()) throw ConfigError("alpha_grid must not be empty");
  for (const double a : cfg.alpha_grid) {
    if (!std::isfinite(a) || a < 0.0) {
      throw ConfigError("alpha_grid values must be finite and >= 0");
    }
  }
  require_ascending(cfg.alpha_grid, "alpha_grid");
  if (cfg.beta_grid.empty()) throw ConfigError("beta_grid must not be empty");
  for (const double b : cfg.beta_grid) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw ConfigError("beta_grid values must lie in [0, 1]");
    }
  }
  require_ascending(cfg.beta_grid, "beta_grid");
}

}  // namespace bcsim
