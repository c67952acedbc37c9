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

#include "beamalign/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace beamalign
{

std::string to_string(Strategy s)
{
    switch (s)
    {
    case Strategy::exhaustive:
        return "exhaustive";
    case Strategy::hierarchical_equal:
        return "hierarchical_equal";
    case Strategy::hierarchical_unequal:
        return "hierarchical_unequal";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s)
{
    if (s == "exhaustive")
        return Strategy::exhaustive;
    if (s == "hierarchical_equal" || s == "hierarchical")
        return Strategy::hierarchical_equal;
    if (s == "hierarchical_unequal")
        return Strategy::hierarchical_unequal;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

double binomial_ci95(double p, unsigned n)
{
    if (n == 0)
        return 0.0;
    return 1.96 * std::sqrt(p * (1.0 - p) / n);
}

unsigned default_thread_count()
{
    if (const char* env = std::getenv("BEAMALIGN_THREADS"))
    {
        int v = std::atoi(env);
        if (v >= 1)
            return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void parallel_trials(unsigned trials, unsigned threads,
                     const std::function<void(unsigned, unsigned)>& body)
{
    if (threads == 0)
        threads = default_thread_count();
    threads = std::max(1u, std::min(threads, trials));
    if (threads == 1)
    {
        body(0, trials);
        return;
    }
    std::vector<std::jthread> pool;
    unsigned chunk = (trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w)
    {
        unsigned lo = w * chunk;
        unsigned hi = std::min(trials, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
}

ChannelRealization draw_channel(const ChannelSpec& spec, const UniformLinearArray& tx,
                                const UniformLinearArray& rx, CounterStream& rng)
{
    if (spec.model == ChannelModel::nlos_multipath)
        return nlos_multipath(tx, rx, spec.k_factor_db, spec.mean_paths, spec.aod, spec.aoa, rng);
    double aod = rng.uniform(spec.aod.lo_deg, spec.aod.hi_deg);
    double aoa = fold_angle(rng.uniform(spec.aoa.lo_deg, spec.aoa.hi_deg));
    auto phase = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    if (spec.model == ChannelModel::los_rician)
        return los_rician(aod, aoa, spec.k_factor_db, tx, rx, rng, phase);
    return single_path(aod, aoa, phase, tx, rx);
}

void fill_row_stats(EstimateRow& row, const std::vector<std::uint8_t>& miss,
                    const std::vector<std::uint8_t>& miss_global, const std::vector<double>* se)
{
    std::uint64_t count = 0, count_global = 0;
    for (std::size_t t = 0; t < miss.size(); ++t)
    {
        count += miss[t];
        count_global += miss_global[t];
    }
    row.trials = unsigned(miss.size());
    row.p_miss = double(count) / double(miss.size());
    row.p_miss_global = double(count_global) / double(miss.size());
    row.ci_halfwidth = binomial_ci95(row.p_miss, row.trials);
    if (!se)
    {
        row.mean_se = kNaN;
        for (int pct : {10, 50, 90})
            row.se_quantiles[pct] = kNaN;
        return;
    }
    double sum = 0.0;
    for (double v : *se)
        sum += v;
    row.mean_se = sum / double(se->size());
    EmpiricalCdf cdf(*se);
    for (int pct : {10, 50, 90})
        row.se_quantiles[pct] = cdf.percentile(pct);
}

void validate(const SweepSpec& spec)
{
    if (spec.trials < 1)
        throw std::invalid_argument("sweep: trials must be >= 1");
    if (spec.budgets.empty())
        throw std::invalid_argument("sweep: no budgets");
    if (!std::is_sorted(spec.budgets.begin(), spec.budgets.end()))
        throw std::invalid_argument("sweep: budgets must be sorted ascending");
}

} // namespace

std::vector<SweepResult> run_sweeps(const std::vector<Strategy>& strategies, const SweepSpec& spec,
                                    const SystemSetup& setup, unsigned threads)
{
    validate(spec);
    UniformLinearArray tx_array(setup.n_tx), rx_array(setup.n_rx);
    AngleInterval tx_sector = AngleInterval::from_degrees(spec.channel.aod.lo_deg, spec.channel.aod.hi_deg);
    AngleInterval rx_sector(-1.0, 1.0);
    auto tx_cb = build_hierarchical_codebook(tx_array, tx_sector, setup.tx_sizes, setup.synthesis);
    auto rx_cb = build_hierarchical_codebook(rx_array, rx_sector, setup.rx_sizes, setup.synthesis);
    auto snr = calibrate_snr(spec.snr_db);

    std::size_t ns = strategies.size();
    std::size_t nb = spec.budgets.size();

    // Feasibility and pilot usage do not depend on the channel draw.
    std::vector<std::vector<EstimateRow>> rows(ns, std::vector<EstimateRow>(nb));
    auto pairs = pairs_per_level(tx_cb, rx_cb, setup.schedule);
    std::vector<unsigned> products;
    for (int k = 0; k < tx_cb.num_levels(); ++k)
        products.push_back(tx_cb.level_size(k) * rx_cb.level_size(k));
    unsigned exhaustive_pairs = tx_cb.level_size(tx_cb.num_levels() - 1) *
                                rx_cb.level_size(rx_cb.num_levels() - 1);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t b = 0; b < nb; ++b)
        {
            auto& row = rows[s][b];
            row.budget = spec.budgets[b];
            if (strategies[s] == Strategy::exhaustive)
            {
                unsigned per = row.budget / exhaustive_pairs;
                row.feasible = per > 0;
                row.n_tot_used = per * exhaustive_pairs;
                continue;
            }
            auto alloc = strategies[s] == Strategy::hierarchical_equal ? Allocation::equal
                                                                       : Allocation::unequal_gamma;
            try
            {
                auto n = plan_pilots(pairs, products, row.budget, alloc);
                row.feasible = true;
                for (std::size_t k = 0; k < n.size(); ++k)
                    row.n_tot_used += n[k] * pairs[k];
            }
            catch (const InfeasibleBudget&)
            {
                row.feasible = false;
            }
        }

    using Flags = std::vector<std::uint8_t>;
    std::vector<std::vector<Flags>> miss(ns, std::vector<Flags>(nb)), miss_global = miss;
    std::vector<std::vector<std::vector<double>>> se(ns, std::vector<std::vector<double>>(nb));
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t b = 0; b < nb; ++b)
            if (rows[s][b].feasible)
            {
                miss[s][b].assign(spec.trials, 0);
                miss_global[s][b].assign(spec.trials, 0);
                se[s][b].assign(spec.trials, 0.0);
            }

    parallel_trials(spec.trials, threads, [&](unsigned lo, unsigned hi) {
        for (unsigned t = lo; t < hi; ++t)
        {
            CounterStream rng(spec.base_seed, t, 0);
            auto channel = draw_channel(spec.channel, tx_array, rx_array, rng);
            ResponseTable table(tx_cb, rx_cb, channel);
            PairNoise noise(spec.base_seed, t);
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t b = 0; b < nb; ++b)
                {
                    if (!rows[s][b].feasible)
                        continue;
                    TrainingConfig cfg{spec.budgets[b], Allocation::equal, snr.transmit_power,
                                       snr.noise_power};
                    SearchOutcome out;
                    if (strategies[s] == Strategy::exhaustive)
                        out = exhaustive_search(table, cfg, noise);
                    else
                    {
                        if (strategies[s] == Strategy::hierarchical_unequal)
                            cfg.allocation = Allocation::unequal_gamma;
                        out = hierarchical_search(table, cfg, setup.schedule, noise);
                    }
                    miss[s][b][t] = out.misaligned;
                    miss_global[s][b][t] = out.misaligned_global;
                    se[s][b][t] = spectral_efficiency(out, cfg);
                }
        }
    });

    std::vector<SweepResult> results(ns);
    for (std::size_t s = 0; s < ns; ++s)
    {
        results[s].strategy = strategies[s];
        for (std::size_t b = 0; b < nb; ++b)
        {
            auto& row = rows[s][b];
            if (row.feasible)
                fill_row_stats(row, miss[s][b], miss_global[s][b], &se[s][b]);
            else
            {
                row.trials = spec.trials;
                row.p_miss = row.ci_halfwidth = row.p_miss_global = row.mean_se = kNaN;
                for (int pct : {10, 50, 90})
                    row.se_quantiles[pct] = kNaN;
            }
        }
        results[s].rows = std::move(rows[s]);
        results[s].se_samples = std::move(se[s]);
    }
    return results;
}

SweepResult run_sweep(const SweepSpec& spec, const SystemSetup& setup, unsigned threads)
{
    return std::move(run_sweeps({spec.strategy}, spec, setup, threads).front());
}

std::vector<EstimateRow> simulate_level(const LevelGainProfile& profile,
                                        const std::vector<unsigned>& pilots, unsigned trials,
                                        std::uint64_t base_seed, unsigned threads)
{
    if (trials < 1)
        throw std::invalid_argument("simulate_level: trials must be >= 1");
    // unit transmit and noise power: h = sqrt(xi / 2) gives lambda = N xi
    TrainingConfig cfg{1, Allocation::equal, 1.0, 1.0};
    std::vector<std::complex<double>> h;
    for (double x : profile.xi)
        h.emplace_back(std::sqrt(x / 2.0), 0.0);

    std::size_t nb = pilots.size();
    std::vector<std::vector<std::uint8_t>> miss(nb, std::vector<std::uint8_t>(trials, 0));
    parallel_trials(trials, threads, [&](unsigned lo, unsigned hi) {
        std::vector<std::complex<double>> z(h.size());
        for (unsigned t = lo; t < hi; ++t)
        {
            PairNoise noise(base_seed, t);
            for (std::size_t l = 0; l < h.size(); ++l)
                z[l] = noise(0, int(l), 0);
            for (std::size_t b = 0; b < nb; ++b)
            {
                double best = -1.0;
                int chosen = -1;
                for (std::size_t l = 0; l < h.size(); ++l)
                {
                    double stat = training_statistic(h[l], pilots[b], cfg, z[l]);
                    if (stat > best)
                    {
                        best = stat;
                        chosen = int(l);
                    }
                }
                miss[b][t] = chosen != profile.opt_index;
            }
        }
    });

    std::vector<EstimateRow> rows(nb);
    for (std::size_t b = 0; b < nb; ++b)
    {
        rows[b].budget = pilots[b] * profile.pairs();
        rows[b].n_tot_used = rows[b].budget;
        rows[b].feasible = true;
        fill_row_stats(rows[b], miss[b], miss[b], nullptr);
    }
    return rows;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values))
{
    if (sorted_.empty())
        throw std::invalid_argument("EmpiricalCdf: no samples");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::quantile(double q) const
{
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("EmpiricalCdf::quantile: q must lie in [0, 1]");
    double pos = q * double(sorted_.size() - 1);
    auto i = std::size_t(std::floor(pos));
    if (i + 1 >= sorted_.size())
        return sorted_.back();
    double frac = pos - double(i);
    return sorted_[i] + frac * (sorted_[i + 1] - sorted_[i]);
}

double EmpiricalCdf::operator()(double x) const
{
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return double(it - sorted_.begin()) / double(sorted_.size());
}

EmpiricalCdf se_cdf(std::vector<double> values)
{
    return EmpiricalCdf(std::move(values));
}

FigurePreset figure_preset(const std::string& id)
{
    FigurePreset p;
    p.id = id;
    p.spec.snr_db = -15.0;
    p.spec.trials = 100000;
    p.spec.base_seed = 1;
    const std::vector<unsigned> practical_budgets{16, 32, 64, 128, 256, 384, 512, 640, 768, 896, 1024, 1280};

    if (id == "fig2")
    {
        p.single_level = true;
        p.level_pairs = 8;
        p.level_gain = 16.0;
        for (unsigned n = 1; n <= 100; ++n)
            p.spec.budgets.push_back(n * p.level_pairs);
        p.spec.channel.model = ChannelModel::single_path;
        p.setup.synthesis = Synthesis::ideal;
        return p;
    }
    if (id == "fig3")
    {
        p.strategies = {Strategy::exhaustive, Strategy::hierarchical_equal, Strategy::hierarchical_unequal};
        p.spec.channel.model = ChannelModel::single_path;
        p.setup.synthesis = Synthesis::ideal;
        p.spec.budgets = {16, 32, 64, 128, 256, 384, 512, 640, 768, 1024, 1280, 1536, 2048};
        return p;
    }
    if (id == "fig4" || id == "fig5")
    {
        p.strategies = {Strategy::exhaustive, Strategy::hierarchical_equal, Strategy::hierarchical_unequal};
        p.spec.channel.model = ChannelModel::los_rician;
        p.spec.channel.k_factor_db = 13.2;
        p.setup.synthesis = Synthesis::deactivation;
        p.spec.budgets = practical_budgets;
        if (id == "fig5")
            p.cdf_budgets = {16, 640, 1280};
        return p;
    }
    if (id == "fig6" || id == "fig7")
    {
        p.strategies = {Strategy::exhaustive, Strategy::hierarchical_equal};
        p.spec.channel.model = ChannelModel::nlos_multipath;
        p.spec.channel.k_factor_db = 6.0;
        p.spec.channel.mean_paths = 1.8;
        p.setup.synthesis = Synthesis::deactivation;
        p.spec.budgets = practical_budgets;
        if (id == "fig7")
            p.cdf_budgets = {16, 640, 1280};
        return p;
    }
    throw std::invalid_argument("unknown figure id '" + id + "' (expected fig2..fig7)");
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows)
{
    os << "budget,n_tot_used,p_miss,ci95,mean_se,se_p10,se_p50,se_p90\n";
    for (const auto& r : rows)
    {
        auto q = [&](int pct) {
            auto it = r.se_quantiles.find(pct);
            return format_double(it == r.se_quantiles.end() ? kNaN : it->second);
        };
        os << r.budget << ',' << r.n_tot_used << ',' << format_double(r.p_miss) << ','
           << format_double(r.ci_halfwidth) << ',' << format_double(r.mean_se) << ',' << q(10) << ','
           << q(50) << ',' << q(90) << '\n';
    }
}

} // namespace beamalign
