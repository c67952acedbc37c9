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

#ifndef BEAMALIGN_TRAINING_SIM_HPP
#define BEAMALIGN_TRAINING_SIM_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamalign/array_codebook.hpp"
#include "beamalign/channel.hpp"
#include "beamalign/random.hpp"

namespace beamalign
{

/// The pilot budget cannot give every examined beam pair at least one symbol.
class InfeasibleBudget : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Allocation
{
    equal,
    unequal_gamma,
};

std::string to_string(Allocation a);

struct TrainingConfig
{
    unsigned total_pilots;
    Allocation allocation = Allocation::equal;
    double transmit_power = 1.0;
    double noise_power = 1.0;
};

struct MeasurementStat
{
    double value;
    int pair_index;
    int level;
};

/// (level, tx index, rx index); levels are 0-based.
struct PairChoice
{
    int level;
    int tx;
    int rx;

    friend bool operator==(const PairChoice&, const PairChoice&) = default;
};

struct SearchOutcome
{
    std::vector<PairChoice> chosen;
    std::vector<PairChoice> optimal;
    /// A chosen pair differs from the noiseless best among the pairs scanned at its level.
    bool misaligned = false;
    /// The final pair differs from the noiseless best over the whole finest codebook.
    bool misaligned_global = false;
    /// |f H w^H|^2 of the final chosen pair.
    double final_gain = 0.0;
    unsigned pilots_used = 0;
};

/// f H w^H. Ideal beams are evaluated path by path and need a single-path channel.
std::complex<double> effective_channel(const Beamformer& beam_tx, const Beamformer& beam_rx,
                                       const ChannelRealization& channel);

/// Normalized matched-filter statistic for a given unit-power noise draw z.
double training_statistic(std::complex<double> h, unsigned pilots, const TrainingConfig& cfg,
                          std::complex<double> unit_noise);

/*!
 * Draws T = (2 / sigma^2) |h sqrt(N P_T) + z|^2 with z ~ CN(0, sigma^2), the
 * sufficient statistic of an N-symbol matched filter. T ~ chi^2_2(lambda)
 * with lambda = 2 N P_T |h|^2 / sigma^2.
 */
MeasurementStat measure_statistic(std::complex<double> h, unsigned pilots, const TrainingConfig& cfg,
                                  CounterStream& rng, int pair_index = 0, int level = 0);

/*!
 * Per-pair measurement noise addressed by (level, tx, rx) inside one trial
 * stream. The same pair sees the same noise draw regardless of budget or
 * strategy, which gives common random numbers across compared runs.
 */
class PairNoise
{
  public:
    PairNoise(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}
    std::complex<double> operator()(int level, int tx, int rx) const;

  private:
    std::uint64_t seed_;
    std::uint64_t trial_;
};

/// Effective channels of every (level, tx, rx) codeword pair for one realization.
class ResponseTable
{
  public:
    ResponseTable(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                  const ChannelRealization& channel);

    std::complex<double> operator()(int level, int tx, int rx) const
    {
        return h_[level][std::size_t(tx) * rx_sizes_[level] + rx];
    }
    double gain(int level, int tx, int rx) const { return std::norm((*this)(level, tx, rx)); }

    int num_levels() const { return int(h_.size()); }
    const HierarchicalCodebook& tx() const { return *tx_; }
    const HierarchicalCodebook& rx() const { return *rx_; }

  private:
    const HierarchicalCodebook* tx_;
    const HierarchicalCodebook* rx_;
    std::vector<unsigned> rx_sizes_;
    std::vector<cvec> h_;
};

/// Per-level scan rule for levels after the first, which always scans every pair.
enum class RxRule
{
    children, ///< scan the children of the previous rx winner
    fixed,    ///< keep the previous rx winner
};

struct ScanSchedule
{
    RxRule rx_rule = RxRule::children;

    /// Default plan: full first level, then children(tx) x children(rx).
    static ScanSchedule nested() { return {}; }
};

/// Beam pairs scanned at each level under the schedule.
std::vector<unsigned> pairs_per_level(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                                      const ScanSchedule& schedule);

/// gamma = (sum_k L^(k) / (L_T^(k) L_R^(k)))^-1.
double unequal_gamma(const std::vector<unsigned>& pairs, const std::vector<unsigned>& codebook_products);

/// Per-pair pilot lengths for each level. Throws InfeasibleBudget.
std::vector<unsigned> plan_pilots(const std::vector<unsigned>& pairs,
                                  const std::vector<unsigned>& codebook_products, unsigned n_tot,
                                  Allocation allocation);

/// Exhaustive search over every pair of the finest tx and rx codebooks.
SearchOutcome exhaustive_search(const ResponseTable& table, const TrainingConfig& cfg,
                                const PairNoise& noise);

SearchOutcome hierarchical_search(const ResponseTable& table, const TrainingConfig& cfg,
                                  const ScanSchedule& schedule, const PairNoise& noise);

/// Convenience overloads that evaluate the response table first.
SearchOutcome exhaustive_search(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                                const ChannelRealization& channel, const TrainingConfig& cfg,
                                const PairNoise& noise);
SearchOutcome hierarchical_search(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                                  const ChannelRealization& channel, const TrainingConfig& cfg,
                                  const ScanSchedule& schedule, const PairNoise& noise);

/// log2(1 + P_T g / sigma^2) for the final chosen pair, bits/s/Hz.
double spectral_efficiency(const SearchOutcome& outcome, const TrainingConfig& cfg);

} // namespace beamalign

#endif
