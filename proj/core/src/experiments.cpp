// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "bcsim/metrics.hpp"
#include "bcsim/selection.hpp"
#include "bcsim/stats.hpp"

namespace bcsim {

namespace {

constexpr int kMaxRedrawAttempts = 64;

/// Attempt 0 reuses the trial index itself, so redraw-free runs consume
/// stream ids 0..trials-1 exactly.
std::uint64_t substream_id(int trial, int attempt) {
  return static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial)) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(attempt))
          << 32);
}

int resolve_threads(int threads, int trials) {
  int t = threads;
  if (t <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    t = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return std::clamp(t, 1, std::max(trials, 1));
}

/// Runs body(0..trials-1), each index exactly once. Workers pull indices
/// from a shared counter; determinism comes from each index writing only
/// its own result slot. The first exception wins and is rethrown after
/// all workers join.
template <typename Body>
void parallel_trials(int trials, int threads, Body&& body) {
  const int n_workers = resolve_threads(threads, trials);
  if (n_workers == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    try {
      while (true) {
        const int t = next.fetch_add(1, std::memory_order_relaxed);
        if (t >= trials) return;
        body(t);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ComplexMatrix select_rows(const ComplexMatrix& src,
                          const std::vector<int>& order) {
  ComplexMatrix out(static_cast<int>(order.size()), src.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto from = src.row(order[i]);
    const auto to = out.row(static_cast<int>(i));
    std::copy(from.begin(), from.end(), to.begin());
  }
  return out;
}

/// Gram spectrum of the selected estimated subchannel, with Jacobi
/// roundoff clamped at zero. A zero eigenvalue alongside alpha = 0 is
/// escalated like a singular inversion so the trial gets redrawn.
std::vector<double> selected_spectrum(const ComplexMatrix& h_est_sel) {
  const ComplexMatrix gram = matmul(h_est_sel, conj_transpose(h_est_sel));
  std::vector<double> lambdas = hermitian_eigenvalues(gram);
  for (double& lam : lambdas) lam = std::max(lam, 0.0);
  return lambdas;
}

double model_rate_from_spectrum(std::vector<double> lambdas,
                                const PointConfig& pt, double alpha) {
  if (alpha == 0.0) {
    for (const double lam : lambdas) {
      if (lam == 0.0) {
        throw SingularMatrixError(
            "model rate: zero Gram eigenvalue at alpha = 0");
      }
    }
  }
  const double n = static_cast<double>(lambdas.size());
  EigenProfile prof{std::move(lambdas), pt.m_tx, pt.power(), pt.sigma2(),
                    pt.err_power};
  return n * std::log2(1.0 + model_average_sinr(prof, alpha));
}

MonteCarloStats aggregate_stats(std::span<const double> rates,
                                std::span<const double> model,
                                std::span<const double> nsel,
                                std::uint64_t redraws) {
  MonteCarloStats st;
  const MeanStdError ms = mean_and_std_error(rates);
  st.mean = ms.mean;
  st.std_error = ms.std_error;
  const double n = static_cast<double>(rates.size());
  st.mean_selected_n = pairwise_sum(nsel) / n;
  st.mean_model_sum_rate = pairwise_sum(model) / n;
  st.redraws = redraws;
  st.trials = static_cast<int>(rates.size());
  return st;
}

std::uint64_t total_redraws(const std::vector<std::uint32_t>& per_trial) {
  std::uint64_t total = 0;
  for (const std::uint32_t r : per_trial) total += r;
  return total;
}

void require_trials(int trials) {
  if (trials < 1) {
    throw std::invalid_argument("monte carlo: trials must be >= 1");
  }
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

double PointConfig::sigma2() const { return std::pow(10.0, -snr_db / 10.0); }

TrialOutcome evaluate_channel(const ChannelRealization& chan,
                              const PointConfig& pt,
                              const PrecoderKind& kind) {
  const SelectionResult sel =
      sus_select(chan.h_est, {.beta = pt.beta, .m_target = pt.m_tx});
  if (sel.order.empty()) {
    throw SingularMatrixError("evaluate_channel: no selectable users");
  }
  const ComplexMatrix h_est_sel = select_rows(chan.h_est, sel.order);
  const ComplexMatrix h_true_sel = select_rows(chan.h_true, sel.order);

  const double alpha = regularization_factor(kind, pt.m_tx, pt.power(),
                                             pt.sigma2(), pt.err_power);
  const Precoder pre = build_precoder(h_est_sel, alpha, pt.power());
  const SinrReport report = physical_sinr(h_true_sel, pre, pt.sigma2());

  TrialOutcome out;
  out.sum_rate = report.sum_rate;
  out.n_selected = static_cast<int>(sel.order.size());
  out.model_sum_rate =
      model_rate_from_spectrum(selected_spectrum(h_est_sel), pt, alpha);
  return out;
}

TrialOutcome run_trial(RngStream& stream, const PointConfig& pt,
                       const PrecoderKind& kind) {
  const ChannelRealization chan =
      draw_channels(stream, pt.k_users, pt.m_tx, pt.err_power);
  return evaluate_channel(chan, pt, kind);
}

MonteCarloStats monte_carlo(const PointConfig& pt, const PrecoderKind& kind,
                            int trials, std::uint64_t seed, int threads) {
  require_trials(trials);
  const std::size_t n = static_cast<std::size_t>(trials);
  std::vector<double> rates(n);
  std::vector<double> model(n);
  std::vector<double> nsel(n);
  std::vector<std::uint32_t> redraw(n, 0);

  parallel_trials(trials, threads, [&](int t) {
    const std::size_t slot = static_cast<std::size_t>(t);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxRedrawAttempts) {
        throw std::runtime_error("monte_carlo: trial redraw limit exceeded");
      }
      RngStream stream(seed, substream_id(t, attempt));
      try {
        const TrialOutcome out = run_trial(stream, pt, kind);
        rates[slot] = out.sum_rate;
        model[slot] = out.model_sum_rate;
        nsel[slot] = static_cast<double>(out.n_selected);
        break;
      } catch (const SingularMatrixError&) {
        ++redraw[slot];
      }
    }
  });

  return aggregate_stats(rates, model, nsel, total_redraws(redraw));
}

std::vector<MonteCarloStats> beta_grid_stats(const PointConfig& pt,
                                             const PrecoderKind& kind,
                                             std::span<const double> betas,
                                             int trials, std::uint64_t seed,
                                             int threads) {
  require_trials(trials);
  if (betas.empty()) {
    throw std::invalid_argument("beta_grid_stats: empty grid");
  }
  for (const double b : betas) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw std::invalid_argument("beta_grid_stats: beta outside [0, 1]");
    }
  }

  const std::size_t n = static_cast<std::size_t>(trials);
  const std::size_t c_count = betas.size();
  std::vector<double> rates(n * c_count);
  std::vector<double> model(n * c_count);
  std::vector<double> nsel(n * c_count);
  std::vector<std::uint32_t> redraw(n, 0);

  parallel_trials(trials, threads, [&](int t) {
    const std::size_t slot = static_cast<std::size_t>(t);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxRedrawAttempts) {
        throw std::runtime_error(
            "beta_grid_stats: trial redraw limit exceeded");
      }
      RngStream stream(seed, substream_id(t, attempt));
      const ChannelRealization chan =
          draw_channels(stream, pt.k_users, pt.m_tx, pt.err_power);
      try {
        // All candidates see the same draw; a singular candidate redraws
        // the whole grid so the pairing stays intact.
        for (std::size_t c = 0; c < c_count; ++c) {
          PointConfig cand = pt;
          cand.beta = betas[c];
          const TrialOutcome out = evaluate_channel(chan, cand, kind);
          rates[c * n + slot] = out.sum_rate;
          model[c * n + slot] = out.model_sum_rate;
          nsel[c * n + slot] = static_cast<double>(out.n_selected);
        }
        break;
      } catch (const SingularMatrixError&) {
        ++redraw[slot];
      }
    }
  });

  const std::uint64_t redraws = total_redraws(redraw);
  std::vector<MonteCarloStats> out;
  out.reserve(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    out.push_back(aggregate_stats(
        std::span(rates).subspan(c * n, n), std::span(model).subspan(c * n, n),
        std::span(nsel).subspan(c * n, n), redraws));
  }
  return out;
}

std::vector<MonteCarloStats> alpha_grid_stats(const PointConfig& pt,
                                              std::span<const double> alphas,
                                              int trials, std::uint64_t seed,
                                              int threads) {
  require_trials(trials);
  if (alphas.empty()) {
    throw std::invalid_argument("alpha_grid_stats: empty grid");
  }
  for (const double a : alphas) {
    if (std::isnan(a) || a < 0.0) {
      throw std::invalid_argument("alpha_grid_stats: alpha must be >= 0");
    }
  }

  const std::size_t n = static_cast<std::size_t>(trials);
  const std::size_t c_count = alphas.size();
  std::vector<double> rates(n * c_count);
  std::vector<double> model(n * c_count);
  std::vector<double> nsel(n);
  std::vector<std::uint32_t> redraw(n, 0);

  parallel_trials(trials, threads, [&](int t) {
    const std::size_t slot = static_cast<std::size_t>(t);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxRedrawAttempts) {
        throw std::runtime_error(
            "alpha_grid_stats: trial redraw limit exceeded");
      }
      RngStream stream(seed, substream_id(t, attempt));
      const ChannelRealization chan =
          draw_channels(stream, pt.k_users, pt.m_tx, pt.err_power);
      try {
        const SelectionResult sel =
            sus_select(chan.h_est, {.beta = pt.beta, .m_target = pt.m_tx});
        if (sel.order.empty()) {
          throw SingularMatrixError("alpha_grid_stats: no selectable users");
        }
        const ComplexMatrix h_est_sel = select_rows(chan.h_est, sel.order);
        const ComplexMatrix h_true_sel = select_rows(chan.h_true, sel.order);
        const std::vector<double> lambdas = selected_spectrum(h_est_sel);

        for (std::size_t c = 0; c < c_count; ++c) {
          const Precoder pre =
              build_precoder(h_est_sel, alphas[c], pt.power());
          const SinrReport report =
              physical_sinr(h_true_sel, pre, pt.sigma2());
          rates[c * n + slot] = report.sum_rate;
          model[c * n + slot] =
              model_rate_from_spectrum(lambdas, pt, alphas[c]);
        }
        nsel[slot] = static_cast<double>(sel.order.size());
        break;
      } catch (const SingularMatrixError&) {
        ++redraw[slot];
      }
    }
  });

  const std::uint64_t redraws = total_redraws(redraw);
  std::vector<MonteCarloStats> out;
  out.reserve(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    out.push_back(aggregate_stats(
        std::span(rates).subspan(c * n, n), std::span(model).subspan(c * n, n),
        nsel, redraws));
  }
  return out;
}

namespace {

GridOptimum pick_max(std::span<const double> grid,
                     std::vector<MonteCarloStats> stats) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < stats.size(); ++i) {
    if (stats[i].mean > stats[best].mean) best = i;
  }
  return {grid[best], static_cast<int>(best), std::move(stats[best])};
}

}  // namespace

GridOptimum optimize_beta(const PointConfig& pt, const PrecoderKind& kind,
                          std::span<const double> beta_grid, int trials,
                          std::uint64_t seed, int threads) {
  return pick_max(beta_grid,
                  beta_grid_stats(pt, kind, beta_grid, trials, seed, threads));
}

GridOptimum optimize_alpha(const PointConfig& pt,
                           std::span<const double> alpha_grid, int trials,
                           std::uint64_t seed, int threads) {
  return pick_max(alpha_grid,
                  alpha_grid_stats(pt, alpha_grid, trials, seed, threads));
}

std::string to_csv(const SweepResult& rows) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const SweepRow& r : rows) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s,%s,%s,%d,%d,%s,%s,%s,%s,%s,%s,%s,%llu,%d,%llu",
                  r.sweep_name.c_str(), fmt_g(r.sweep_value).c_str(),
                  r.scheme.c_str(), r.m, r.k, fmt_g(r.snr_db).c_str(),
                  fmt_g(r.e2).c_str(), fmt_g(r.beta_used).c_str(),
                  fmt_g(r.alpha_used).c_str(), fmt_g(r.mean_sum_rate).c_str(),
                  fmt_g(r.std_error).c_str(),
                  fmt_g(r.mean_selected_n).c_str(),
                  static_cast<unsigned long long>(r.redraws), r.trials,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
    out += '\n';
  }
  return out;
}

namespace {

SweepRow make_row(std::string_view sweep_name, double sweep_value,
                  std::string_view scheme, const ExperimentConfig& cfg, int k,
                  double snr_db, double beta_used, double alpha_used,
                  const MonteCarloStats& st) {
  SweepRow row;
  row.sweep_name = std::string(sweep_name);
  row.sweep_value = sweep_value;
  row.scheme = std::string(scheme);
  row.m = cfg.m_tx;
  row.k = k;
  row.snr_db = snr_db;
  row.e2 = cfg.err_power;
  row.beta_used = beta_used;
  row.alpha_used = alpha_used;
  row.mean_sum_rate = st.mean;
  row.std_error = st.std_error;
  row.mean_selected_n = st.mean_selected_n;
  row.redraws = st.redraws;
  row.trials = st.trials;
  row.seed = cfg.seed;
  row.mean_model_sum_rate = st.mean_model_sum_rate;
  return row;
}

void require_single_snr(const ExperimentConfig& cfg, const char* cmd) {
  if (cfg.snr_db.size() != 1) {
    throw ConfigError(std::string(cmd) + " requires a single snr_db value");
  }
}

void require_single_k(const ExperimentConfig& cfg, const char* cmd) {
  if (cfg.k_users.size() != 1) {
    throw ConfigError(std::string(cmd) + " requires a single k value");
  }
}

/// Shared body for the fixed-scheme sweeps: beta comes either from the
/// per-point optimizer or from the single fixed value.
SweepRow measured_row(std::string_view sweep_name, double sweep_value,
                      const ExperimentConfig& cfg, const PrecoderKind& kind,
                      int k, double snr_db) {
  PointConfig pt{.m_tx = cfg.m_tx,
                 .k_users = k,
                 .snr_db = snr_db,
                 .err_power = cfg.err_power,
                 .beta = 1.0};
  MonteCarloStats st;
  double beta_used = 0.0;
  if (cfg.beta.auto_opt) {
    const GridOptimum opt = optimize_beta(pt, kind, cfg.beta_grid, cfg.trials,
                                          cfg.seed, cfg.threads);
    st = opt.stats;
    beta_used = opt.argument;
  } else {
    pt.beta = cfg.beta.values.front();
    st = monte_carlo(pt, kind, cfg.trials, cfg.seed, cfg.threads);
    beta_used = pt.beta;
  }
  const double alpha_used = regularization_factor(
      kind, cfg.m_tx, pt.power(), pt.sigma2(), cfg.err_power);
  return make_row(sweep_name, sweep_value, kind.name(), cfg, k, snr_db,
                  beta_used, alpha_used, st);
}

}  // namespace

SweepResult sweep_over_users(const ExperimentConfig& cfg) {
  validate_config_common(cfg);
  require_single_snr(cfg, "sweep-k");
  if (!cfg.beta.auto_opt && cfg.beta.values.size() != 1) {
    throw ConfigError("sweep-k requires beta 'auto' or a single value");
  }
  const double snr = cfg.snr_db.front();
  SweepResult rows;
  for (const int k : cfg.k_users) {
    for (const PrecoderKind& kind : cfg.schemes) {
      rows.push_back(measured_row("sweep-k", static_cast<double>(k), cfg,
                                  kind, k, snr));
    }
  }
  return rows;
}

SweepResult sweep_over_snr(const ExperimentConfig& cfg) {
  validate_config_common(cfg);
  require_single_k(cfg, "sweep-snr");
  if (!cfg.beta.auto_opt && cfg.beta.values.size() != 1) {
    throw ConfigError("sweep-snr requires beta 'auto' or a single value");
  }
  const int k = cfg.k_users.front();
  SweepResult rows;
  for (const double snr : cfg.snr_db) {
    for (const PrecoderKind& kind : cfg.schemes) {
      rows.push_back(measured_row("sweep-snr", snr, cfg, kind, k, snr));
    }
  }
  return rows;
}

SweepResult sweep_alpha_opt(const ExperimentConfig& cfg) {
  validate_config_common(cfg);
  require_single_k(cfg, "opt-alpha");
  require_single_snr(cfg, "opt-alpha");
  const std::vector<double>& beta_sweep =
      cfg.beta.auto_opt ? cfg.beta_grid : cfg.beta.values;
  const int k = cfg.k_users.front();
  const double snr = cfg.snr_db.front();
  SweepResult rows;
  for (const double beta : beta_sweep) {
    const PointConfig pt{.m_tx = cfg.m_tx,
                         .k_users = k,
                         .snr_db = snr,
                         .err_power = cfg.err_power,
                         .beta = beta};
    const GridOptimum opt = optimize_alpha(pt, cfg.alpha_grid, cfg.trials,
                                           cfg.seed, cfg.threads);
    rows.push_back(make_row("opt-alpha", beta, "CUSTOM", cfg, k, snr, beta,
                            opt.argument, opt.stats));
  }
  return rows;
}

SweepResult sweep_beta_opt(const ExperimentConfig& cfg) {
  validate_config_common(cfg);
  require_single_snr(cfg, "opt-beta");
  const double snr = cfg.snr_db.front();
  SweepResult rows;
  for (const int k : cfg.k_users) {
    for (const PrecoderKind& kind : cfg.schemes) {
      const PointConfig pt{.m_tx = cfg.m_tx,
                           .k_users = k,
                           .snr_db = snr,
                           .err_power = cfg.err_power,
                           .beta = 1.0};
      const GridOptimum opt = optimize_beta(pt, kind, cfg.beta_grid,
                                            cfg.trials, cfg.seed, cfg.threads);
      const double alpha_used = regularization_factor(
          kind, cfg.m_tx, pt.power(), pt.sigma2(), cfg.err_power);
      rows.push_back(make_row("opt-beta", static_cast<double>(k), kind.name(),
                              cfg, k, snr, opt.argument, alpha_used,
                              opt.stats));
    }
  }
  return rows;
}

}  // namespace bcsim
