// SPDX-License-Identifier: Apache-2.0
//
// beamalign: beam-alignment training analysis and simulation
// Copyright (C) 2026 The beamalign authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMALIGN_EXPERIMENT_HPP
#define BEAMALIGN_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "beamalign/array_codebook.hpp"
#include "beamalign/channel.hpp"
#include "beamalign/ldp_analysis.hpp"
#include "beamalign/training_sim.hpp"

namespace beamalign
{

enum class Strategy
{
    exhaustive,
    hierarchical_equal,
    hierarchical_unequal,
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct ChannelSpec
{
    ChannelModel model = ChannelModel::single_path;
    double k_factor_db = 13.2;
    double mean_paths = 1.8;
    DegreeRange aod{-30.0, 30.0};
    DegreeRange aoa{0.0, 360.0};
};

/// Arrays, codebooks and scan schedule shared by all strategies of a run.
struct SystemSetup
{
    unsigned n_tx = 64;
    unsigned n_rx = 4;
    std::vector<unsigned> tx_sizes{2, 4, 8, 16, 32};
    std::vector<unsigned> rx_sizes{4, 4, 4, 4, 4};
    Synthesis synthesis = Synthesis::ideal;
    ScanSchedule schedule = ScanSchedule::nested();
};

struct SweepSpec
{
    Strategy strategy = Strategy::exhaustive;
    ChannelSpec channel;
    double snr_db = -15.0;
    std::vector<unsigned> budgets;
    unsigned trials = 100000;
    std::uint64_t base_seed = 1;
};

struct EstimateRow
{
    unsigned budget = 0;
    bool feasible = false;
    unsigned n_tot_used = 0;
    unsigned trials = 0;
    double p_miss = 0.0;
    double ci_halfwidth = 0.0;
    /// misalignment judged against the best pair of the whole finest codebook
    double p_miss_global = 0.0;
    double mean_se = 0.0;
    std::map<int, double> se_quantiles; ///< percentile -> bits/s/Hz
};

struct SweepResult
{
    Strategy strategy;
    std::vector<EstimateRow> rows;
    /// Per-budget spectral efficiencies, indexed like `rows` (empty when infeasible).
    std::vector<std::vector<double>> se_samples;
};

/// 95% normal-approximation half-width for a binomial proportion.
double binomial_ci95(double p, unsigned n);

/// Worker count: BEAMALIGN_THREADS if set, else the hardware concurrency.
unsigned default_thread_count();

/*!
 * Runs several strategies over the same trials. Trial t draws its channel
 * from stream (base_seed, t) and each beam pair's noise from a substream
 * keyed by the pair, so strategies and budgets share common random numbers.
 * Results are reduced in trial order; any thread count gives identical output.
 */
std::vector<SweepResult> run_sweeps(const std::vector<Strategy>& strategies, const SweepSpec& spec,
                                    const SystemSetup& setup, unsigned threads = 0);

SweepResult run_sweep(const SweepSpec& spec, const SystemSetup& setup, unsigned threads = 0);

/// Single-level simulation of a fixed gain profile at the given per-pair pilot lengths.
std::vector<EstimateRow> simulate_level(const LevelGainProfile& profile,
                                        const std::vector<unsigned>& pilots, unsigned trials,
                                        std::uint64_t base_seed, unsigned threads = 0);

class EmpiricalCdf
{
  public:
    explicit EmpiricalCdf(std::vector<double> values);

    /// Linear interpolation between order statistics at position (n - 1) q.
    double quantile(double q) const;
    double percentile(double pct) const { return quantile(pct / 100.0); }
    /// Fraction of samples <= x.
    double operator()(double x) const;
    const std::vector<double>& sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

EmpiricalCdf se_cdf(std::vector<double> values);

/// Figure reproduction recipe.
struct FigurePreset
{
    std::string id;
    std::vector<Strategy> strategies;
    SweepSpec spec;
    SystemSetup setup;
    /// Set for the single-level figure: pairs and combined gain G.
    bool single_level = false;
    unsigned level_pairs = 8;
    double level_gain = 16.0;
    std::vector<unsigned> cdf_budgets;
};

FigurePreset figure_preset(const std::string& id);

/// Locale-independent shortest round-trip formatting; "nan" for NaN.
std::string format_double(double v);

/// budget,n_tot_used,p_miss,ci95,mean_se,se_p10,se_p50,se_p90
void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows);

} // namespace beamalign

#endif
