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

#include "beamalign/training_sim.hpp"

#include <cmath>
#include <numeric>

namespace beamalign
{

std::string to_string(Allocation a)
{
    return a == Allocation::equal ? "equal" : "unequal_gamma";
}

std::complex<double> effective_channel(const Beamformer& beam_tx, const Beamformer& beam_rx,
                                       const ChannelRealization& channel)
{
    bool tx_ideal = beam_tx.synthesis == Synthesis::ideal;
    bool rx_ideal = beam_rx.synthesis == Synthesis::ideal;
    if (tx_ideal || rx_ideal)
    {
        if (channel.model != ChannelModel::single_path)
            throw std::invalid_argument(
                "effective_channel: ideal beam patterns need a single-path channel");
        // Ideal patterns have no phase; only magnitudes are meaningful here.
        UniformLinearArray tx_arr(channel.n_tx), rx_arr(channel.n_rx);
        std::complex<double> h = 0.0;
        for (const auto& p : channel.paths)
        {
            double w = std::abs(array_response(beam_tx, tx_arr, sine_of(p.aod_deg)));
            double f = std::abs(array_response(beam_rx, rx_arr, sine_of(p.aoa_deg)));
            h += p.complex_gain * w * f;
        }
        return h;
    }

    if (beam_tx.weights.size() != channel.n_tx || beam_rx.weights.size() != channel.n_rx)
        throw std::invalid_argument("effective_channel: beam and channel dimensions differ (tx " +
                                    std::to_string(beam_tx.weights.size()) + " vs " +
                                    std::to_string(channel.n_tx) + ", rx " +
                                    std::to_string(beam_rx.weights.size()) + " vs " +
                                    std::to_string(channel.n_rx) + ")");
    std::complex<double> h = 0.0;
    for (unsigned r = 0; r < channel.n_rx; ++r)
    {
        if (beam_rx.weights[r] == 0.0)
            continue;
        std::complex<double> hw = 0.0;
        for (unsigned t = 0; t < channel.n_tx; ++t)
            hw += channel.at(r, t) * std::conj(beam_tx.weights[t]);
        h += beam_rx.weights[r] * hw;
    }
    return h;
}

double training_statistic(std::complex<double> h, unsigned pilots, const TrainingConfig& cfg,
                          std::complex<double> unit_noise)
{
    double sigma = std::sqrt(cfg.noise_power);
    auto y = h * std::sqrt(pilots * cfg.transmit_power) + sigma * unit_noise;
    return 2.0 * std::norm(y) / cfg.noise_power;
}

MeasurementStat measure_statistic(std::complex<double> h, unsigned pilots, const TrainingConfig& cfg,
                                  CounterStream& rng, int pair_index, int level)
{
    if (pilots < 1)
        throw std::invalid_argument("measure_statistic: pilot length must be >= 1");
    return {training_statistic(h, pilots, cfg, rng.complex_normal()), pair_index, level};
}

std::complex<double> PairNoise::operator()(int level, int tx, int rx) const
{
    if (level < 0 || level >= 128 || tx < 0 || tx >= (1 << 14) || rx < 0 || rx >= (1 << 10))
        throw std::out_of_range("PairNoise: pair address out of range");
    std::uint32_t sub = (1u << 31) | (std::uint32_t(level) << 24) | (std::uint32_t(tx) << 10) |
                        std::uint32_t(rx);
    return complex_normal_at(seed_, trial_, sub);
}

ResponseTable::ResponseTable(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                             const ChannelRealization& channel)
    : tx_(&tx), rx_(&rx)
{
    if (tx.num_levels() != rx.num_levels())
        throw std::invalid_argument("ResponseTable: tx and rx codebooks need the same level count");
    int levels = tx.num_levels();
    rx_sizes_.resize(levels);
    h_.resize(levels);

    bool ideal = tx.synthesis() == Synthesis::ideal || rx.synthesis() == Synthesis::ideal;
    if (!ideal && (tx.array().num_elements != channel.n_tx || rx.array().num_elements != channel.n_rx))
        throw std::invalid_argument("ResponseTable: codebook and channel dimensions differ");

    for (int k = 0; k < levels; ++k)
    {
        unsigned nt = tx.level_size(k);
        unsigned nr = rx.level_size(k);
        rx_sizes_[k] = nr;
        h_[k].assign(std::size_t(nt) * nr, 0.0);
        for (unsigned t = 0; t < nt; ++t)
        {
            const auto& wt = tx.codeword(k, int(t));
            if (ideal)
            {
                for (unsigned r = 0; r < nr; ++r)
                    h_[k][std::size_t(t) * nr + r] = effective_channel(wt, rx.codeword(k, int(r)), channel);
                continue;
            }
            // H w^H once per transmit beam, then one inner product per combiner
            cvec hw(channel.n_rx, 0.0);
            for (unsigned t2 = 0; t2 < channel.n_tx; ++t2)
            {
                if (wt.weights[t2] == 0.0)
                    continue;
                auto cw = std::conj(wt.weights[t2]);
                for (unsigned r = 0; r < channel.n_rx; ++r)
                    hw[r] += channel.at(r, t2) * cw;
            }
            for (unsigned r = 0; r < nr; ++r)
            {
                const auto& f = rx.codeword(k, int(r)).weights;
                std::complex<double> acc = 0.0;
                for (unsigned e = 0; e < channel.n_rx; ++e)
                    acc += f[e] * hw[e];
                h_[k][std::size_t(t) * nr + r] = acc;
            }
        }
    }
}

std::vector<unsigned> pairs_per_level(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                                      const ScanSchedule& schedule)
{
    if (tx.num_levels() != rx.num_levels())
        throw std::invalid_argument("pairs_per_level: tx and rx codebooks need the same level count");
    std::vector<unsigned> pairs;
    for (int k = 0; k < tx.num_levels(); ++k)
    {
        if (k == 0)
        {
            pairs.push_back(tx.level_size(0) * rx.level_size(0));
            continue;
        }
        unsigned tx_children = tx.level_size(k) / tx.level_size(k - 1);
        unsigned rx_children = rx.level_size(k) / rx.level_size(k - 1);
        if (schedule.rx_rule == RxRule::fixed)
        {
            if (rx.level_size(k) != rx.level_size(k - 1))
                throw std::invalid_argument("pairs_per_level: fixed rx rule needs equal rx level sizes");
            rx_children = 1;
        }
        pairs.push_back(tx_children * rx_children);
    }
    return pairs;
}

double unequal_gamma(const std::vector<unsigned>& pairs, const std::vector<unsigned>& products)
{
    if (pairs.size() != products.size() || pairs.empty())
        throw std::invalid_argument("unequal_gamma: size mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
        s += double(pairs[k]) / double(products[k]);
    return 1.0 / s;
}

std::vector<unsigned> plan_pilots(const std::vector<unsigned>& pairs,
                                  const std::vector<unsigned>& products, unsigned n_tot,
                                  Allocation allocation)
{
    std::vector<unsigned> n(pairs.size());
    if (allocation == Allocation::equal)
    {
        unsigned total_pairs = std::accumulate(pairs.begin(), pairs.end(), 0u);
        unsigned per = n_tot / total_pairs;
        if (per == 0)
            throw InfeasibleBudget("budget of " + std::to_string(n_tot) + " pilots is below the " +
                                   std::to_string(total_pairs) + " beam pairs to examine");
        std::fill(n.begin(), n.end(), per);
        return n;
    }

    double gamma = unequal_gamma(pairs, products);
    std::uint64_t used = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
    {
        double raw = double(n_tot) * gamma / double(products[k]);
        n[k] = std::max(1u, unsigned(std::floor(raw + 1e-9)));
        used += std::uint64_t(n[k]) * pairs[k];
    }
    if (used > n_tot)
        throw InfeasibleBudget("budget of " + std::to_string(n_tot) +
                               " pilots cannot give every level at least one pilot per pair (needs " +
                               std::to_string(used) + ")");
    return n;
}

namespace
{
std::vector<unsigned> codebook_products(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx)
{
    std::vector<unsigned> p;
    for (int k = 0; k < tx.num_levels(); ++k)
        p.push_back(tx.level_size(k) * rx.level_size(k));
    return p;
}

PairChoice global_best(const ResponseTable& table, int level)
{
    PairChoice best{level, 0, 0};
    double g_best = -1.0;
    for (unsigned t = 0; t < table.tx().level_size(level); ++t)
        for (unsigned r = 0; r < table.rx().level_size(level); ++r)
        {
            double g = table.gain(level, int(t), int(r));
            if (g > g_best)
            {
                g_best = g;
                best = {level, int(t), int(r)};
            }
        }
    return best;
}

struct LevelResult
{
    PairChoice chosen;
    PairChoice optimal;
};

LevelResult scan_level(const ResponseTable& table, int level, const std::vector<int>& txs,
                       const std::vector<int>& rxs, unsigned pilots, const TrainingConfig& cfg,
                       const PairNoise& noise)
{
    LevelResult res{{level, -1, -1}, {level, -1, -1}};
    double t_best = -1.0;
    double g_best = -1.0;
    for (int t : txs)
        for (int r : rxs)
        {
            auto h = table(level, t, r);
            double stat = training_statistic(h, pilots, cfg, noise(level, t, r));
            if (stat > t_best)
            {
                t_best = stat;
                res.chosen = {level, t, r};
            }
            double g = std::norm(h);
            if (g > g_best)
            {
                g_best = g;
                res.optimal = {level, t, r};
            }
        }
    return res;
}

std::vector<int> iota_vec(unsigned n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}
} // namespace

SearchOutcome exhaustive_search(const ResponseTable& table, const TrainingConfig& cfg,
                                const PairNoise& noise)
{
    int top = table.num_levels() - 1;
    unsigned nt = table.tx().level_size(top);
    unsigned nr = table.rx().level_size(top);
    unsigned pairs = nt * nr;
    unsigned per = cfg.total_pilots / pairs;
    if (per == 0)
        throw InfeasibleBudget("exhaustive search needs at least " + std::to_string(pairs) +
                               " pilots, budget is " + std::to_string(cfg.total_pilots));

    auto lr = scan_level(table, top, iota_vec(nt), iota_vec(nr), per, cfg, noise);
    SearchOutcome out;
    out.chosen = {lr.chosen};
    out.optimal = {lr.optimal};
    out.misaligned = !(lr.chosen == lr.optimal);
    out.misaligned_global = out.misaligned;
    out.final_gain = table.gain(top, lr.chosen.tx, lr.chosen.rx);
    out.pilots_used = per * pairs;
    return out;
}

SearchOutcome hierarchical_search(const ResponseTable& table, const TrainingConfig& cfg,
                                  const ScanSchedule& schedule, const PairNoise& noise)
{
    const auto& tx = table.tx();
    const auto& rx = table.rx();
    auto pairs = pairs_per_level(tx, rx, schedule);
    auto pilots = plan_pilots(pairs, codebook_products(tx, rx), cfg.total_pilots, cfg.allocation);

    SearchOutcome out;
    PairChoice prev{-1, -1, -1};
    for (int k = 0; k < table.num_levels(); ++k)
    {
        std::vector<int> txs, rxs;
        if (k == 0)
        {
            txs = iota_vec(tx.level_size(0));
            rxs = iota_vec(rx.level_size(0));
        }
        else
        {
            txs = tx.children(k - 1, prev.tx);
            rxs = schedule.rx_rule == RxRule::fixed ? std::vector<int>{prev.rx}
                                                    : rx.children(k - 1, prev.rx);
        }
        auto lr = scan_level(table, k, txs, rxs, pilots[k], cfg, noise);
        out.chosen.push_back(lr.chosen);
        out.optimal.push_back(lr.optimal);
        if (!(lr.chosen == lr.optimal))
            out.misaligned = true;
        out.pilots_used += unsigned(txs.size() * rxs.size()) * pilots[k];
        prev = lr.chosen;
    }
    int top = table.num_levels() - 1;
    out.misaligned_global = !(prev == global_best(table, top));
    out.final_gain = table.gain(top, prev.tx, prev.rx);
    return out;
}

SearchOutcome exhaustive_search(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                                const ChannelRealization& channel, const TrainingConfig& cfg,
                                const PairNoise& noise)
{
    return exhaustive_search(ResponseTable(tx, rx, channel), cfg, noise);
}

SearchOutcome hierarchical_search(const HierarchicalCodebook& tx, const HierarchicalCodebook& rx,
                                  const ChannelRealization& channel, const TrainingConfig& cfg,
                                  const ScanSchedule& schedule, const PairNoise& noise)
{
    return hierarchical_search(ResponseTable(tx, rx, channel), cfg, schedule, noise);
}

double spectral_efficiency(const SearchOutcome& outcome, const TrainingConfig& cfg)
{
    return std::log2(1.0 + cfg.transmit_power * outcome.final_gain / cfg.noise_power);
}

} // namespace beamalign
