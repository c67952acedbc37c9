// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "beamalign/channel.hpp"
#include "beamalign/specfun.hpp"
#include "beamalign/training_sim.hpp"

using namespace beamalign;

namespace
{

struct Fig3System
{
    UniformLinearArray tx{64}, rx{4};
    HierarchicalCodebook tx_cb;
    HierarchicalCodebook rx_cb;

    explicit Fig3System(Synthesis s)
        : tx_cb(build_hierarchical_codebook(tx, AngleInterval(-0.5, 0.5), {2, 4, 8, 16, 32}, s)),
          rx_cb(build_hierarchical_codebook(rx, AngleInterval(-1.0, 1.0), {4, 4, 4, 4, 4}, s))
    {
    }
};

// Noncentral chi-square CDF with two degrees of freedom by Poisson mixture of
// central chi2_{2+2i} CDFs, written independently of the library series.
double chi2_2_cdf(double x, double lambda)
{
    double sum = 0.0;
    double w = std::exp(-lambda / 2.0);
    for (int i = 0; i < 400; ++i)
    {
        // central chi2 with 2 + 2i dof: 1 - e^{-x/2} sum_{m<=i} (x/2)^m / m!
        double term = 1.0, tail = 0.0;
        for (int m = 0; m <= i; ++m)
        {
            if (m)
                term *= (x / 2.0) / m;
            tail += term;
        }
        sum += w * (1.0 - std::exp(-x / 2.0) * tail);
        w *= (lambda / 2.0) / (i + 1);
        if (w < 1e-18 && i > lambda)
            break;
    }
    return sum;
}

} // namespace

TEST_SUITE("training_sim")
{
    TEST_CASE("effective channel")
    {
        UniformLinearArray tx(16), rx(4);
        auto zero = single_path(0, 0, 0.0, tx, rx);
        auto bt = synthesize_deactivation(tx, AngleInterval(0.0, 0.125));
        auto br = synthesize_deactivation(rx, AngleInterval(0.0, 0.5));
        CHECK(std::abs(effective_channel(bt, br, zero)) == 0.0);

        // matched steering on both sides: |alpha| sqrt(N_T N_R)
        std::complex<double> alpha{0.6, -0.3};
        auto h = single_path(20.0, -35.0, alpha, tx, rx);
        Beamformer wt{steering_vector(tx, 20.0), AngleInterval(-1, 1), 0, 0, Synthesis::deactivation};
        Beamformer fr{steering_vector(rx, -35.0), AngleInterval(-1, 1), 0, 0, Synthesis::deactivation};
        for (auto& z : wt.weights)
            z /= 4.0;
        for (auto& z : fr.weights)
            z /= 2.0;
        CHECK(std::abs(effective_channel(wt, fr, h)) == doctest::Approx(std::abs(alpha) * 8.0));

        // DFT-orthogonal transmit direction gives an exact null
        auto h0 = single_path(0.0, 0.0, 1.0, tx, rx);
        Beamformer null_tx{steering_vector_sine(tx, 2.0 / 16.0), AngleInterval(-1, 1), 0, 0,
                           Synthesis::deactivation};
        CHECK(std::abs(effective_channel(null_tx, fr, h0)) < 1e-12);

        auto wrong = synthesize_deactivation(UniformLinearArray(8), AngleInterval(0.0, 0.25));
        CHECK_THROWS_AS(effective_channel(wrong, br, h), std::invalid_argument);
    }

    TEST_CASE("ideal beams need a single-path channel")
    {
        Fig3System sys(Synthesis::ideal);
        CounterStream rng(1, 0);
        auto h = los_rician(0, 0, 13.2, sys.tx, sys.rx, rng);
        CHECK_THROWS_AS(effective_channel(sys.tx_cb.codeword(0, 0), sys.rx_cb.codeword(0, 0), h),
                        std::invalid_argument);
    }

    TEST_CASE("measurement statistic moments and determinism")
    {
        TrainingConfig cfg{0, Allocation::equal, 1.0, 1.0};
        CounterStream rng(9, 0);
        const int n = 100000;
        double s0 = 0.0, s8 = 0.0;
        for (int i = 0; i < n; ++i)
        {
            s0 += measure_statistic(0.0, 1, cfg, rng).value;
            s8 += measure_statistic(std::sqrt(4.0), 1, cfg, rng).value; // N P |h|^2 / sigma^2 = 4
        }
        CHECK(std::abs(s0 / n - 2.0) < 0.05);
        CHECK(std::abs(s8 / n - 10.0) < 0.1);
        CounterStream a(3, 1), b(3, 1);
        CHECK(measure_statistic(0.5, 4, cfg, a).value == measure_statistic(0.5, 4, cfg, b).value);
        CHECK_THROWS_AS(measure_statistic(0.5, 0, cfg, a), std::invalid_argument);
    }

    TEST_CASE("measurement statistic follows the noncentral chi-square law (KS)")
    {
        TrainingConfig cfg{0, Allocation::equal, 0.2, 1.5};
        std::complex<double> h{0.7, 0.4};
        unsigned pilots = 6;
        double lambda = 2.0 * pilots * cfg.transmit_power * std::norm(h) / cfg.noise_power;
        CounterStream rng(10, 0);
        const int n = 100000;
        std::vector<double> x(n);
        for (auto& v : x)
            v = measure_statistic(h, pilots, cfg, rng).value;
        std::sort(x.begin(), x.end());
        double d = 0.0;
        for (int i = 0; i < n; i += 7)
        {
            double f = chi2_2_cdf(x[i], lambda);
            d = std::max({d, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
        }
        // KS critical value at level 1e-3: 1.949 / sqrt(n)
        CHECK(d < 1.949 / std::sqrt(double(n)));
    }

    TEST_CASE("empirical pairwise error probability matches the series")
    {
        TrainingConfig cfg{0, Allocation::equal, 1.0, 1.0};
        for (auto [lo, ll] : {std::pair{6.0, 2.0}, std::pair{12.0, 0.0}, std::pair{3.0, 3.0}})
        {
            CounterStream rng(11, std::uint64_t(lo * 100 + ll));
            const int n = 100000;
            int errors = 0;
            for (int i = 0; i < n; ++i)
            {
                double t_opt = measure_statistic(std::sqrt(lo / 2.0), 1, cfg, rng).value;
                double t_l = measure_statistic(std::sqrt(ll / 2.0), 1, cfg, rng).value;
                errors += t_opt < t_l;
            }
            double p = pairwise_error_prob(lo, ll);
            double se = std::sqrt(p * (1 - p) / n);
            CAPTURE(lo);
            CAPTURE(ll);
            CHECK(std::abs(double(errors) / n - p) < 3.0 * se);
        }
    }

    TEST_CASE("pilot planning")
    {
        std::vector<unsigned> pairs{8, 2, 2, 2, 2}, products{8, 16, 32, 64, 128};
        auto eq = plan_pilots(pairs, products, 640, Allocation::equal);
        CHECK(eq == std::vector<unsigned>(5, 40));
        CHECK_THROWS_AS(plan_pilots(pairs, products, 15, Allocation::equal), InfeasibleBudget);
        CHECK(unequal_gamma(pairs, products) == doctest::Approx(1.0 / 1.234375).epsilon(1e-14));
        auto un = plan_pilots(pairs, products, 1280, Allocation::unequal_gamma);
        double g = 1.0 / 1.234375;
        for (std::size_t k = 0; k < 5; ++k)
            CHECK(un[k] == std::max(1u, unsigned(std::floor(1280 * g / products[k]))));
        unsigned used = 0;
        for (std::size_t k = 0; k < 5; ++k)
            used += un[k] * pairs[k];
        CHECK(used <= 1280);
        // clamping every level to one pilot costs 16 symbols
        CHECK_NOTHROW(plan_pilots(pairs, products, 16, Allocation::unequal_gamma));
        CHECK_THROWS_AS(plan_pilots(pairs, products, 12, Allocation::unequal_gamma), InfeasibleBudget);
    }

    TEST_CASE("scan schedule pair counts for the nested plan")
    {
        Fig3System sys(Synthesis::ideal);
        auto p = pairs_per_level(sys.tx_cb, sys.rx_cb, ScanSchedule::nested());
        CHECK(p == std::vector<unsigned>{8, 2, 2, 2, 2});
    }

    TEST_CASE("exhaustive search budgets")
    {
        Fig3System sys(Synthesis::ideal);
        auto h = single_path(7.0, 33.0, 1.0, sys.tx, sys.rx);
        PairNoise noise(1, 0);
        TrainingConfig cfg{128, Allocation::equal, calibrate_snr(-15).transmit_power, 1.0};
        auto out = exhaustive_search(sys.tx_cb, sys.rx_cb, h, cfg, noise);
        CHECK(out.pilots_used == 128);
        cfg.total_pilots = 300;
        CHECK(exhaustive_search(sys.tx_cb, sys.rx_cb, h, cfg, noise).pilots_used == 256);
        cfg.total_pilots = 127;
        CHECK_THROWS_AS(exhaustive_search(sys.tx_cb, sys.rx_cb, h, cfg, noise), InfeasibleBudget);
    }

    TEST_CASE("noiseless limit: searches follow the true path")
    {
        for (auto synth : {Synthesis::ideal, Synthesis::deactivation})
        {
            Fig3System sys(synth);
            CounterStream rng(12, int(synth));
            for (int trial = 0; trial < 50; ++trial)
            {
                double aod = rng.uniform(-29.5, 29.5);
                double aoa = rng.uniform(-89.0, 89.0);
                auto h = single_path(aod, aoa, 1.0, sys.tx, sys.rx);
                PairNoise noise(3, trial);
                TrainingConfig cfg{640, Allocation::equal, 1e6, 1.0};
                auto hs = hierarchical_search(sys.tx_cb, sys.rx_cb, h, cfg, ScanSchedule::nested(), noise);
                auto ex = exhaustive_search(sys.tx_cb, sys.rx_cb, h, cfg, noise);
                CHECK_FALSE(hs.misaligned);
                CHECK_FALSE(ex.misaligned);
                CHECK(hs.pilots_used == 640);
                if (synth == Synthesis::ideal)
                {
                    for (const auto& c : hs.chosen)
                    {
                        CHECK(c.tx == sys.tx_cb.locate(c.level, sine_of(aod)));
                        CHECK(c.rx == sys.rx_cb.locate(c.level, sine_of(aoa)));
                    }
                    CHECK_FALSE(hs.misaligned_global);
                    CHECK(ex.chosen.front().tx == sys.tx_cb.locate(4, sine_of(aod)));
                }
            }
        }
    }

    TEST_CASE("hierarchical search is reproducible")
    {
        Fig3System sys(Synthesis::deactivation);
        CounterStream rng(13, 0);
        auto h = los_rician(5.0, 40.0, 13.2, sys.tx, sys.rx, rng);
        TrainingConfig cfg{640, Allocation::equal, calibrate_snr(-15).transmit_power, 1.0};
        auto a = hierarchical_search(sys.tx_cb, sys.rx_cb, h, cfg, ScanSchedule::nested(), PairNoise(4, 2));
        auto b = hierarchical_search(sys.tx_cb, sys.rx_cb, h, cfg, ScanSchedule::nested(), PairNoise(4, 2));
        CHECK(a.chosen == b.chosen);
        CHECK(a.final_gain == b.final_gain);
    }

    TEST_CASE("spectral efficiency")
    {
        SearchOutcome o;
        TrainingConfig cfg{1, Allocation::equal, 1.0, 1.0};
        o.final_gain = 0.0;
        CHECK(spectral_efficiency(o, cfg) == 0.0);
        o.final_gain = 1.0;
        CHECK(spectral_efficiency(o, cfg) == doctest::Approx(1.0));
        o.final_gain = 3.0;
        CHECK(spectral_efficiency(o, cfg) == doctest::Approx(2.0));
    }

    TEST_CASE("pair noise addressing")
    {
        PairNoise n(1, 2);
        CHECK(n(0, 1, 2) == n(0, 1, 2));
        CHECK(n(0, 1, 2) != n(1, 1, 2));
        CHECK(n(0, 1, 2) != PairNoise(1, 3)(0, 1, 2));
        CHECK_THROWS_AS(n(-1, 0, 0), std::out_of_range);
    }
}
