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

#ifndef BEAMALIGN_LDP_ANALYSIS_HPP
#define BEAMALIGN_LDP_ANALYSIS_HPP

#include <span>
#include <vector>

#include "beamalign/specfun.hpp"

namespace beamalign
{

/*!
 * Per-pilot non-centralities xi_l = 2 P_T g_l / sigma^2 of the pairs examined
 * at one search level, with the strongest pair and its runner-up.
 */
struct LevelGainProfile
{
    std::vector<double> xi;
    int opt_index = 0;
    int runner_up_index = -1; ///< -1 for a single-pair level

    /// Picks the best pair and the runner-up; ties resolve to the lowest index.
    static LevelGainProfile from_xi(std::vector<double> xi);
    /// xi_opt on pair 0, zero elsewhere.
    static LevelGainProfile ideal(unsigned pairs, double xi_opt);

    double xi_opt() const { return xi[opt_index]; }
    double xi_runner_up() const { return runner_up_index < 0 ? 0.0 : xi[runner_up_index]; }
    unsigned pairs() const { return unsigned(xi.size()); }
};

double xi_from_gain(double gain, double transmit_power, double noise_power);

struct BoundReport
{
    double p_up;
    double p_low; ///< raw Bonferroni value, may be negative
    double ldp_approx;
    double rate; ///< I1(xi_opt, xi_runner_up), per pilot

    double p_low_clamped() const { return p_low > 0.0 ? p_low : 0.0; }
};

/// Union bound: sum over l != opt of F_(2,2)(1 | N xi_opt, N xi_l).
double upper_bound(const LevelGainProfile& profile, double pilots, double tol = kDefaultCdfTol);

/// Union bound minus the pairwise F_(2,4)(1 | N xi_opt, N (xi_i + xi_j)) corrections.
double lower_bound(const LevelGainProfile& profile, double pilots, double tol = kDefaultCdfTol);

/// (sqrt(a) - sqrt(b))^2 / 4
double rate_I1(double xi_opt, double xi_l);
/// (sqrt(2 a) - sqrt(b + c))^2 / 6
double rate_I2(double xi_opt, double xi_i, double xi_j);

/// (L - 1) exp(-N xi_opt / 4); meant for near-ideal profiles.
double ldp_approximation(const LevelGainProfile& profile, double pilots);

BoundReport bound_report(const LevelGainProfile& profile, double pilots, double tol = kDefaultCdfTol);

/// sum_k p_k prod_{m<k} (1 - p_m)
double overall_miss(std::span<const double> per_level);

struct DominantLevel
{
    int level;
    double rate;
};

/// Level with the smallest I1(xi_opt, xi_runner_up); ties resolve to the lowest level.
DominantLevel dominant_level(std::span<const LevelGainProfile> profiles);

/*!
 * Ideal-beam search configuration: codebook sizes per level, pairs scanned
 * per level, array sizes and pre-beamforming SNR (|alpha| = 1, sigma^2 = 1).
 */
struct IdealSearchConfig
{
    std::vector<unsigned> tx_sizes;
    std::vector<unsigned> rx_sizes;
    std::vector<unsigned> pairs;
    unsigned n_tx;
    unsigned n_rx;
    double snr_db;

    /// 64 x 4 arrays, tx sizes 2^k (k = 1..5), four receive codewords, -15 dB.
    static IdealSearchConfig fig3();

    unsigned exhaustive_pairs() const { return tx_sizes.back() * rx_sizes.back(); }
    unsigned hierarchical_pairs() const;
    double level_xi(std::size_t level) const;
    double gamma() const;
};

/// Per-level ideal profiles (optimal pair first, others zero).
std::vector<LevelGainProfile> ideal_level_profiles(const IdealSearchConfig& cfg);

/// Profiles rescaled by N^(k)/N for the unequal-gamma allocation.
std::vector<LevelGainProfile> unequal_level_profiles(const IdealSearchConfig& cfg);

/// Decay rates per total pilot symbol.
struct AsymptoticExponents
{
    double exhaustive;
    double hierarchical;
    double hierarchical_unequal;
    double gamma;
    double ratio; ///< hierarchical / exhaustive
};

AsymptoticExponents asymptotic_exponents(const IdealSearchConfig& cfg);

/// Joint rate function of the per-pilot statistics of two pairs.
double joint_rate_function(double u, double v, double xi_opt, double xi_l);

} // namespace beamalign

#endif
