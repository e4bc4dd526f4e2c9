// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_EXPERIMENTS_HPP
#define BCSIM_EXPERIMENTS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcsim/channel.hpp"
#include "bcsim/config.hpp"
#include "bcsim/precoding.hpp"
#include "bcsim/rng.hpp"

namespace bcsim {

/// One operating point of the downlink: antenna count, candidate pool
/// size, SNR, CSI error fraction, selection threshold. Transmit power is
/// fixed at 1 so SNR alone determines the noise power.
struct PointConfig {
  int m_tx = 4;
  int k_users = 4;
  double snr_db = 15.0;
  double err_power = 0.1;
  double beta = 1.0;

  double power() const { return 1.0; }
  double sigma2() const;
};

struct TrialOutcome {
  /// Realized sum rate from the true-channel SINRs.
  double sum_rate = 0.0;
  /// Users actually served (less than m_tx when the pool ran dry).
  int n_selected = 0;
  /// Closed-form prediction at the same spectrum: n_selected times the
  /// rate at the model average SINR.
  double model_sum_rate = 0.0;
};

/// Runs selection, precoding, and SINR evaluation on an already drawn
/// channel. Propagates SingularMatrixError (rank-deficient Gram at
/// alpha = 0) so the caller can redraw.
TrialOutcome evaluate_channel(const ChannelRealization& chan,
                              const PointConfig& pt, const PrecoderKind& kind);

/// One full Monte-Carlo trial: draw a channel from the stream, then
/// evaluate_channel. SingularMatrixError propagates to the driver, which
/// retries the trial on a fresh substream.
TrialOutcome run_trial(RngStream& stream, const PointConfig& pt,
                       const PrecoderKind& kind);

struct MonteCarloStats {
  double mean = 0.0;            // mean realized sum rate
  double std_error = 0.0;       // standard error of that mean
  double mean_selected_n = 0.0;
  double mean_model_sum_rate = 0.0;
  std::uint64_t redraws = 0;    // singular trials redrawn
  int trials = 0;
};

/// Averages run_trial over `trials` independent trials. Trial t draws from
/// RngStream(seed, t), so results are a pure function of (pt, kind,
/// trials, seed): per-trial outcomes land in a preallocated slot and are
/// reduced pairwise after all workers join, making every statistic
/// byte-identical for any thread count. threads = 0 means hardware
/// concurrency. A trial hitting a singular Gram is redrawn on substream
/// (t, attempt); a trial failing 64 attempts raises std::runtime_error.
MonteCarloStats monte_carlo(const PointConfig& pt, const PrecoderKind& kind,
                            int trials, std::uint64_t seed, int threads);

/// Evaluates every beta candidate on the same channel draws (common random
/// numbers): trial t draws one channel and runs selection + precoding per
/// candidate, so curves across the grid differ only through beta, not
/// noise. Element i aggregates candidate betas[i]. A redraw (singular Gram
/// at any candidate) redraws the trial for the whole grid to keep the
/// draws aligned.
std::vector<MonteCarloStats> beta_grid_stats(const PointConfig& pt,
                                             const PrecoderKind& kind,
                                             std::span<const double> betas,
                                             int trials, std::uint64_t seed,
                                             int threads);

/// Same common-random-numbers scheme over loading candidates, with beta
/// fixed at pt.beta: selection runs once per trial and each alpha reuses
/// the selected subchannel.
std::vector<MonteCarloStats> alpha_grid_stats(const PointConfig& pt,
                                              std::span<const double> alphas,
                                              int trials, std::uint64_t seed,
                                              int threads);

struct GridOptimum {
  double argument = 0.0;  // grid value that maximized the mean sum rate
  int index = 0;          // its position in the grid
  MonteCarloStats stats;  // statistics at that optimum
};

/// Argmax of mean sum rate over the beta grid; ties go to the smaller
/// beta (earlier grid element).
GridOptimum optimize_beta(const PointConfig& pt, const PrecoderKind& kind,
                          std::span<const double> beta_grid, int trials,
                          std::uint64_t seed, int threads);

/// Argmax of mean sum rate over the loading grid; ties go to the smaller
/// alpha.
GridOptimum optimize_alpha(const PointConfig& pt,
                           std::span<const double> alpha_grid, int trials,
                           std::uint64_t seed, int threads);

/// One CSV row of a sweep. mean_model_sum_rate rides along for console
/// summaries but is not part of the serialized schema.
struct SweepRow {
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string scheme;
  int m = 0;
  int k = 0;
  double snr_db = 0.0;
  double e2 = 0.0;
  double beta_used = 0.0;
  double alpha_used = 0.0;
  double mean_sum_rate = 0.0;
  double std_error = 0.0;
  double mean_selected_n = 0.0;
  std::uint64_t redraws = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double mean_model_sum_rate = 0.0;
};

using SweepResult = std::vector<SweepRow>;

inline constexpr std::string_view kCsvHeader =
    "sweep_name,sweep_value,scheme,m,k,snr_db,e2,beta_used,alpha_used,"
    "mean_sum_rate,stderr,mean_selected_n,redraws,trials,seed";

/// Serializes rows under kCsvHeader. Floating-point fields print with
/// %.10g (+infinity as "inf"), so output is byte-stable across runs and
/// thread counts.
std::string to_csv(const SweepResult& rows);

/// Sum rate versus pool size K at fixed SNR: one row per (k, scheme).
/// Requires a single snr_db entry.
SweepResult sweep_over_users(const ExperimentConfig& cfg);

/// Sum rate versus SNR at fixed pool size: one row per (snr_db, scheme).
/// Requires a single k entry.
SweepResult sweep_over_snr(const ExperimentConfig& cfg);

/// Best loading versus selection threshold at one operating point: for
/// each beta (the fixed values, or the beta grid when beta is auto) a row
/// with scheme "CUSTOM", alpha_used = argmax and the statistics at that
/// optimum. Requires single k and snr_db entries; the schemes list is not
/// consulted.
SweepResult sweep_alpha_opt(const ExperimentConfig& cfg);

/// Best threshold per (k, scheme): beta_used = argmax over the beta grid.
/// Requires a single snr_db entry.
SweepResult sweep_beta_opt(const ExperimentConfig& cfg);

}  // namespace bcsim

#endif  // BCSIM_EXPERIMENTS_HPP
