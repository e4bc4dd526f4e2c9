// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "bcsim/channel.hpp"
#include "bcsim/config.hpp"
#include "bcsim/experiments.hpp"
#include "bcsim/metrics.hpp"
#include "bcsim/precoding.hpp"
#include "bcsim/selection.hpp"
#include "bcsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitVerifyFailed = 3;

struct RawFlags {
  std::string config_path;
  int m = 0;
  std::string k_csv;
  std::string snr_csv;
  double e2 = 0.0;
  std::string beta_str;
  std::string schemes_csv;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  int threads = 0;
};

struct OptionRefs {
  CLI::Option* config = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* snr = nullptr;
  CLI::Option* e2 = nullptr;
  CLI::Option* beta = nullptr;
  CLI::Option* schemes = nullptr;
  CLI::Option* trials = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* threads = nullptr;
};

OptionRefs add_common_flags(CLI::App* cmd, RawFlags& raw) {
  OptionRefs refs;
  refs.config = cmd->add_option("--config", raw.config_path,
                                "flat key = value config file; flags given "
                                "here override file entries");
  refs.m = cmd->add_option("--m", raw.m, "transmit antenna count");
  refs.k = cmd->add_option("--k", raw.k_csv,
                           "candidate user count (single value or comma list)");
  refs.snr = cmd->add_option("--snr-db", raw.snr_csv,
                             "SNR P/sigma^2 in dB (single value or comma "
                             "list)");
  refs.e2 = cmd->add_option("--e2", raw.e2, "CSI error fraction e^2 in [0,1]");
  refs.beta = cmd->add_option(
      "--beta", raw.beta_str,
      "selection threshold: 'auto', one value, or a comma list");
  refs.schemes = cmd->add_option("--schemes", raw.schemes_csv,
                                 "comma list drawn from ZF,RZF,RRZF,MF");
  refs.trials = cmd->add_option("--trials", raw.trials,
                                "Monte-Carlo trials per sweep point");
  refs.seed = cmd->add_option("--seed", raw.seed, "64-bit run seed");
  refs.out = cmd->add_option("--out", raw.out_path,
                             "CSV output path (default: stdout)");
  refs.threads = cmd->add_option("--threads", raw.threads,
                                 "worker threads (0 = hardware count)");
  return refs;
}

bcsim::ConfigPatch patch_from_cli(const RawFlags& raw, const OptionRefs& refs) {
  bcsim::ConfigPatch patch;
  if (refs.m->count() > 0) patch.m_tx = raw.m;
  if (refs.k->count() > 0) patch.k_users = bcsim::parse_int_list(raw.k_csv);
  if (refs.snr->count() > 0) {
    patch.snr_db = bcsim::parse_double_list(raw.snr_csv);
  }
  if (refs.e2->count() > 0) patch.err_power = raw.e2;
  if (refs.beta->count() > 0) patch.beta = bcsim::parse_beta_spec(raw.beta_str);
  if (refs.schemes->count() > 0) {
    patch.schemes = bcsim::parse_scheme_list(raw.schemes_csv);
  }
  if (refs.trials->count() > 0) patch.trials = raw.trials;
  if (refs.seed->count() > 0) patch.seed = raw.seed;
  if (refs.out->count() > 0) patch.out_path = raw.out_path;
  if (refs.threads->count() > 0) patch.threads = raw.threads;
  return patch;
}

/// Per-subcommand defaults; everything else is overridden by config file
/// and flags in that order.
bcsim::ExperimentConfig defaults_for(std::string_view cmd) {
  bcsim::ExperimentConfig cfg;
  if (cmd == "sweep-snr") {
    cfg.k_users = {20};
    cfg.snr_db = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
  } else if (cmd == "opt-alpha") {
    cfg.m_tx = 2;
    cfg.k_users = {100};
    cfg.snr_db = {30.0};
  } else if (cmd == "demo") {
    cfg.k_users = {8};
    cfg.beta = bcsim::BetaSpec::fixed(0.5);
    cfg.schemes = {bcsim::PrecoderKind::zf(), bcsim::PrecoderKind::rzf(),
                   bcsim::PrecoderKind::rrzf(), bcsim::PrecoderKind::mf()};
    cfg.trials = 1;
  }
  return cfg;
}

bcsim::ExperimentConfig resolve_config(std::string_view cmd,
                                       const RawFlags& raw,
                                       const OptionRefs& refs) {
  bcsim::ExperimentConfig cfg = defaults_for(cmd);
  if (refs.config->count() > 0) {
    bcsim::apply_patch(cfg, bcsim::parse_config_file(raw.config_path));
  }
  bcsim::apply_patch(cfg, patch_from_cli(raw, refs));
  return cfg;
}

void write_rows(const bcsim::ExperimentConfig& cfg,
                const bcsim::SweepResult& rows) {
  const std::string csv = bcsim::to_csv(rows);
  std::ostream* summary = &std::cout;
  if (cfg.out_path.empty()) {
    std::cout << csv;
    std::cout.flush();
    summary = &std::cerr;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      throw bcsim::ConfigError("cannot open output file '" + cfg.out_path +
                               "'");
    }
    out << csv;
    if (!out) {
      throw bcsim::ConfigError("failed writing output file '" + cfg.out_path +
                               "'");
    }
  }

  char line[256];
  for (const bcsim::SweepRow& r : rows) {
    std::snprintf(line, sizeof line,
                  "# %s=%g %-6s mean %.4f +/- %.4f bits/s/Hz (model %.4f), "
                  "beta %.3g, alpha %.4g, served %.2f, redraws %llu",
                  r.sweep_name.c_str(), r.sweep_value, r.scheme.c_str(),
                  r.mean_sum_rate, r.std_error, r.mean_model_sum_rate,
                  r.beta_used, r.alpha_used, r.mean_selected_n,
                  static_cast<unsigned long long>(r.redraws));
    *summary << line << '\n';
  }
}

int run_sweep(std::string_view cmd, const RawFlags& raw,
              const OptionRefs& refs) {
  const bcsim::ExperimentConfig cfg = resolve_config(cmd, raw, refs);
  bcsim::SweepResult rows;
  if (cmd == "sweep-k") {
    rows = bcsim::sweep_over_users(cfg);
  } else if (cmd == "sweep-snr") {
    rows = bcsim::sweep_over_snr(cfg);
  } else if (cmd == "opt-alpha") {
    rows = bcsim::sweep_alpha_opt(cfg);
  } else {
    rows = bcsim::sweep_beta_opt(cfg);
  }
  write_rows(cfg, rows);
  return kExitOk;
}

int run_verify(std::uint64_t seed) {
  const std::vector<bcsim::CheckResult> results =
      bcsim::run_verification(seed);
  for (const bcsim::CheckResult& r : results) {
    std::cout << (r.pass ? "[ ok ] " : "[FAIL] ") << r.name << ": "
              << r.detail << '\n';
  }
  if (!bcsim::all_passed(results)) {
    std::cout << "verification FAILED\n";
    return kExitVerifyFailed;
  }
  std::cout << "verification passed (" << results.size() << " checks)\n";
  return kExitOk;
}

void print_matrix(const char* label, const bcsim::ComplexMatrix& m) {
  std::printf("%s (%dx%d):\n", label, m.rows(), m.cols());
  if (m.rows() > 12 || m.cols() > 8) {
    std::printf("  [omitted: %dx%d]\n", m.rows(), m.cols());
    return;
  }
  for (int i = 0; i < m.rows(); ++i) {
    std::printf(" ");
    for (int j = 0; j < m.cols(); ++j) {
      std::printf(" %+7.3f%+7.3fi", m(i, j).real(), m(i, j).imag());
    }
    std::printf("\n");
  }
}

int run_demo(const RawFlags& raw, const OptionRefs& refs) {
  bcsim::ExperimentConfig cfg = resolve_config("demo", raw, refs);
  bcsim::validate_config_common(cfg);
  if (cfg.k_users.size() != 1 || cfg.snr_db.size() != 1) {
    throw bcsim::ConfigError("demo requires single k and snr_db values");
  }
  if (cfg.beta.auto_opt || cfg.beta.values.size() != 1) {
    throw bcsim::ConfigError("demo requires one fixed beta");
  }

  const bcsim::PointConfig pt{.m_tx = cfg.m_tx,
                              .k_users = cfg.k_users.front(),
                              .snr_db = cfg.snr_db.front(),
                              .err_power = cfg.err_power,
                              .beta = cfg.beta.values.front()};
  std::printf(
      "demo trial: M=%d K=%d SNR=%g dB e2=%g beta=%g seed=%llu (stream 0)\n",
      pt.m_tx, pt.k_users, pt.snr_db, pt.err_power, pt.beta,
      static_cast<unsigned long long>(cfg.seed));

  bcsim::RngStream stream(cfg.seed, 0);
  const bcsim::ChannelRealization chan =
      bcsim::draw_channels(stream, pt.k_users, pt.m_tx, pt.err_power);
  print_matrix("estimated channel", chan.h_est);
  print_matrix("true channel", chan.h_true);

  const bcsim::SelectionResult sel =
      bcsim::sus_select(chan.h_est, {pt.beta, pt.m_tx});
  std::printf("selected users:");
  for (const int u : sel.order) std::printf(" %d", u);
  std::printf("%s\n", sel.pool_exhausted ? " (pool exhausted)" : "");

  bcsim::ComplexMatrix h_est_sel(static_cast<int>(sel.order.size()),
                                 chan.h_est.cols());
  bcsim::ComplexMatrix h_true_sel(static_cast<int>(sel.order.size()),
                                  chan.h_true.cols());
  for (std::size_t i = 0; i < sel.order.size(); ++i) {
    for (int j = 0; j < chan.h_est.cols(); ++j) {
      h_est_sel(static_cast<int>(i), j) = chan.h_est(sel.order[i], j);
      h_true_sel(static_cast<int>(i), j) = chan.h_true(sel.order[i], j);
    }
  }

  for (const bcsim::PrecoderKind& kind : cfg.schemes) {
    const double alpha = bcsim::regularization_factor(
        kind, pt.m_tx, pt.power(), pt.sigma2(), pt.err_power);
    std::printf("\n[%s] alpha = %.6g\n", std::string(kind.name()).c_str(),
                alpha);
    try {
      const bcsim::Precoder pre =
          bcsim::build_precoder(h_est_sel, alpha, pt.power());
      print_matrix("beamformer w", pre.w);
      std::printf("rho = %.6g\n", pre.rho);
      const bcsim::SinrReport report =
          bcsim::physical_sinr(h_true_sel, pre, pt.sigma2());
      std::printf("per-user SINR:");
      for (const double s : report.per_user_sinr) std::printf(" %.4g", s);
      std::printf("\nsum rate = %.6g bits/s/Hz\n", report.sum_rate);
      const bcsim::TrialOutcome outcome =
          bcsim::evaluate_channel(chan, pt, kind);
      std::printf("model-predicted sum rate = %.6g bits/s/Hz\n",
                  outcome.model_sum_rate);
    } catch (const bcsim::SingularMatrixError& e) {
      std::printf("skipped: %s\n", e.what());
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bcsim: Monte-Carlo simulator for multiuser MIMO broadcast "
      "beamforming (ZF/RZF/RRZF/MF) with semiorthogonal user selection "
      "under imperfect CSI"};
  app.require_subcommand(1);

  RawFlags raw;
  std::uint64_t verify_seed = 1;

  CLI::App* sweep_k = app.add_subcommand(
      "sweep-k", "sum rate vs user count at fixed SNR (CSV)");
  CLI::App* sweep_snr = app.add_subcommand(
      "sweep-snr", "sum rate vs SNR at fixed user count (CSV)");
  CLI::App* opt_alpha = app.add_subcommand(
      "opt-alpha", "grid-optimal loading alpha per beta (CSV)");
  CLI::App* opt_beta = app.add_subcommand(
      "opt-beta", "grid-optimal selection threshold beta per (k, scheme) "
                  "(CSV)");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the library's invariant and property checks");
  CLI::App* demo = app.add_subcommand(
      "demo", "one verbose trial with intermediate matrices");

  const OptionRefs sweep_k_refs = add_common_flags(sweep_k, raw);
  const OptionRefs sweep_snr_refs = add_common_flags(sweep_snr, raw);
  const OptionRefs opt_alpha_refs = add_common_flags(opt_alpha, raw);
  const OptionRefs opt_beta_refs = add_common_flags(opt_beta, raw);
  const OptionRefs demo_refs = add_common_flags(demo, raw);
  verify->add_option("--seed", verify_seed, "seed for the check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (sweep_k->parsed()) return run_sweep("sweep-k", raw, sweep_k_refs);
    if (sweep_snr->parsed()) {
      return run_sweep("sweep-snr", raw, sweep_snr_refs);
    }
    if (opt_alpha->parsed()) {
      return run_sweep("opt-alpha", raw, opt_alpha_refs);
    }
    if (opt_beta->parsed()) return run_sweep("opt-beta", raw, opt_beta_refs);
    if (verify->parsed()) return run_verify(verify_seed);
    if (demo->parsed()) return run_demo(raw, demo_refs);
  } catch (const bcsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitBadConfig;
}
