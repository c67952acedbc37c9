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

#include "beamalign/ldp_analysis.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "beamalign/array_codebook.hpp"
#include "beamalign/channel.hpp"

namespace beamalign
{

LevelGainProfile LevelGainProfile::from_xi(std::vector<double> xi)
{
    if (xi.empty())
        throw std::invalid_argument("LevelGainProfile: no pairs");
    LevelGainProfile p;
    p.xi = std::move(xi);
    for (std::size_t l = 0; l < p.xi.size(); ++l)
    {
        if (!(p.xi[l] >= 0.0))
            throw std::invalid_argument("LevelGainProfile: xi must be >= 0");
        if (p.xi[l] > p.xi[p.opt_index])
            p.opt_index = int(l);
    }
    for (std::size_t l = 0; l < p.xi.size(); ++l)
    {
        if (int(l) == p.opt_index)
            continue;
        if (p.runner_up_index < 0 || p.xi[l] > p.xi[p.runner_up_index])
            p.runner_up_index = int(l);
    }
    return p;
}

LevelGainProfile LevelGainProfile::ideal(unsigned pairs, double xi_opt)
{
    std::vector<double> xi(pairs, 0.0);
    xi.at(0) = xi_opt;
    return from_xi(std::move(xi));
}

double xi_from_gain(double gain, double transmit_power, double noise_power)
{
    return 2.0 * transmit_power * gain / noise_power;
}

double upper_bound(const LevelGainProfile& profile, double pilots, double tol)
{
    if (pilots < 1.0)
        throw std::invalid_argument("upper_bound: pilots must be >= 1");
    double lam_opt = pilots * profile.xi_opt();
    std::map<double, double> memo;
    double sum = 0.0;
    for (std::size_t l = 0; l < profile.xi.size(); ++l)
    {
        if (int(l) == profile.opt_index)
            continue;
        double lam = pilots * profile.xi[l];
        auto it = memo.find(lam);
        if (it == memo.end())
            it = memo.emplace(lam, pairwise_error_prob(lam_opt, lam, tol)).first;
        sum += it->second;
    }
    return sum;
}

double lower_bound(const LevelGainProfile& profile, double pilots, double tol)
{
    double up = upper_bound(profile, pilots, tol);
    double lam_opt = pilots * profile.xi_opt();
    std::map<double, double> memo;
    double correction = 0.0;
    std::size_t n = profile.xi.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        if (int(i) == profile.opt_index)
            continue;
        for (std::size_t j = i + 1; j < n; ++j)
        {
            if (int(j) == profile.opt_index)
                continue;
            double lam = pilots * (profile.xi[i] + profile.xi[j]);
            auto it = memo.find(lam);
            if (it == memo.end())
                it = memo.emplace(lam, dnc_f_cdf(DoublyNoncentralF(2, 4, lam_opt, lam), 1.0, tol)).first;
            correction += it->second;
        }
    }
    return up - correction;
}

double rate_I1(double xi_opt, double xi_l)
{
    if (xi_opt < 0.0 || xi_l < 0.0)
        throw std::invalid_argument("rate_I1: arguments must be >= 0");
    double d = std::sqrt(xi_opt) - std::sqrt(xi_l);
    return d * d / 4.0;
}

double rate_I2(double xi_opt, double xi_i, double xi_j)
{
    if (xi_opt < 0.0 || xi_i < 0.0 || xi_j < 0.0)
        throw std::invalid_argument("rate_I2: arguments must be >= 0");
    double d = std::sqrt(2.0 * xi_opt) - std::sqrt(xi_i + xi_j);
    return d * d / 6.0;
}

double ldp_approximation(const LevelGainProfile& profile, double pilots)
{
    if (profile.xi_runner_up() > 0.01 * profile.xi_opt())
        std::clog << "beamalign: ldp_approximation applied to a non-ideal profile (runner-up xi "
                  << profile.xi_runner_up() << " vs " << profile.xi_opt() << ")\n";
    return (profile.pairs() - 1.0) * std::exp(-pilots * profile.xi_opt() / 4.0);
}

BoundReport bound_report(const LevelGainProfile& profile, double pilots, double tol)
{
    BoundReport r{};
    r.p_up = upper_bound(profile, pilots, tol);
    r.p_low = lower_bound(profile, pilots, tol);
    r.ldp_approx = ldp_approximation(profile, pilots);
    r.rate = rate_I1(profile.xi_opt(), profile.xi_runner_up());
    return r;
}

double overall_miss(std::span<const double> per_level)
{
    double total = 0.0;
    double survive = 1.0;
    for (double p : per_level)
    {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("overall_miss: probabilities must lie in [0, 1]");
        total += p * survive;
        survive *= 1.0 - p;
    }
    return total;
}

DominantLevel dominant_level(std::span<const LevelGainProfile> profiles)
{
    if (profiles.empty())
        throw std::invalid_argument("dominant_level: no levels");
    DominantLevel best{0, rate_I1(profiles[0].xi_opt(), profiles[0].xi_runner_up())};
    for (std::size_t k = 1; k < profiles.size(); ++k)
    {
        double r = rate_I1(profiles[k].xi_opt(), profiles[k].xi_runner_up());
        if (r < best.rate)
            best = {int(k), r};
    }
    return best;
}

IdealSearchConfig IdealSearchConfig::fig3()
{
    return {{2, 4, 8, 16, 32}, {4, 4, 4, 4, 4}, {8, 2, 2, 2, 2}, 64, 4, -15.0};
}

unsigned IdealSearchConfig::hierarchical_pairs() const
{
    return std::accumulate(pairs.begin(), pairs.end(), 0u);
}

double IdealSearchConfig::level_xi(std::size_t level) const
{
    double g = ideal_gain(tx_sizes.at(level), rx_sizes.at(level), tx_sizes.back(), rx_sizes.back(),
                          n_tx, n_rx, true, true);
    auto snr = calibrate_snr(snr_db);
    return xi_from_gain(g, snr.transmit_power, snr.noise_power);
}

double IdealSearchConfig::gamma() const
{
    double s = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
        s += double(pairs[k]) / (double(tx_sizes[k]) * rx_sizes[k]);
    return 1.0 / s;
}

std::vector<LevelGainProfile> ideal_level_profiles(const IdealSearchConfig& cfg)
{
    std::vector<LevelGainProfile> out;
    for (std::size_t k = 0; k < cfg.pairs.size(); ++k)
        out.push_back(LevelGainProfile::ideal(cfg.pairs[k], cfg.level_xi(k)));
    return out;
}

std::vector<LevelGainProfile> unequal_level_profiles(const IdealSearchConfig& cfg)
{
    // N^(k) / N = (gamma N_tot / (L_T L_R)) / (N_tot / L)
    double gamma = cfg.gamma();
    double total_pairs = cfg.hierarchical_pairs();
    std::vector<LevelGainProfile> out;
    for (std::size_t k = 0; k < cfg.pairs.size(); ++k)
    {
        double scale = gamma * total_pairs / (double(cfg.tx_sizes[k]) * cfg.rx_sizes[k]);
        out.push_back(LevelGainProfile::ideal(cfg.pairs[k], cfg.level_xi(k) * scale));
    }
    return out;
}

AsymptoticExponents asymptotic_exponents(const IdealSearchConfig& cfg)
{
    AsymptoticExponents e{};
    std::size_t top = cfg.tx_sizes.size() - 1;
    e.exhaustive = cfg.level_xi(top) / (4.0 * cfg.exhaustive_pairs());

    // equal allocation: N = N_tot / L for every level; the slowest level dominates
    auto profiles = ideal_level_profiles(cfg);
    auto dom = dominant_level(profiles);
    e.hierarchical = dom.rate / cfg.hierarchical_pairs();

    // unequal allocation: level k decays at N^(k) xi^(k) / 4 per N_tot
    e.gamma = cfg.gamma();
    double slowest = -1.0;
    for (std::size_t k = 0; k < cfg.pairs.size(); ++k)
    {
        double r = e.gamma * cfg.level_xi(k) / (4.0 * double(cfg.tx_sizes[k]) * cfg.rx_sizes[k]);
        if (slowest < 0.0 || r < slowest)
            slowest = r;
    }
    e.hierarchical_unequal = slowest;
    e.ratio = e.hierarchical / e.exhaustive;
    if (cfg.pairs.size() > 1 && !(e.hierarchical <= e.exhaustive))
        throw std::logic_error("asymptotic_exponents: hierarchical rate exceeds exhaustive rate");
    return e;
}

double joint_rate_function(double u, double v, double xi_opt, double xi_l)
{
    if (u < 0.0 || v < 0.0)
        throw std::invalid_argument("joint_rate_function: u and v must be >= 0");
    double a = std::sqrt(xi_opt) - std::sqrt(u);
    double b = std::sqrt(xi_l) - std::sqrt(v);
    return 0.5 * a * a + 0.5 * b * b;
}

} // namespace beamalign
