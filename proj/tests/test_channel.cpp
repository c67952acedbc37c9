// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "beamalign/channel.hpp"

using namespace beamalign;

namespace
{

cvec random_unit_beam(unsigned n, CounterStream& rng)
{
    cvec w(n);
    double s = 0.0;
    for (auto& z : w)
    {
        z = rng.complex_normal();
        s += std::norm(z);
    }
    for (auto& z : w)
        z /= std::sqrt(s);
    return w;
}

// f H w^H written out directly.
std::complex<double> bilinear(const cvec& f, const ChannelRealization& ch, const cvec& w)
{
    std::complex<double> acc = 0.0;
    for (unsigned r = 0; r < ch.n_rx; ++r)
        for (unsigned t = 0; t < ch.n_tx; ++t)
            acc += f[r] * ch.at(r, t) * std::conj(w[t]);
    return acc;
}

std::complex<double> dot_conj(const cvec& a, const cvec& b)
{
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * std::conj(b[i]);
    return acc;
}

} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("model names round trip")
    {
        for (auto m : {ChannelModel::single_path, ChannelModel::los_rician, ChannelModel::nlos_multipath})
            CHECK(channel_model_from_string(to_string(m)) == m);
        CHECK_THROWS_AS(channel_model_from_string("rayleigh"), std::invalid_argument);
    }

    TEST_CASE("single path basics")
    {
        UniformLinearArray two(2);
        auto h = single_path(0.0, 0.0, 1.0, two, two);
        for (auto z : h.matrix)
            CHECK(std::abs(z - 1.0) < 1e-15);
        auto zero = single_path(12.0, -40.0, 0.0, two, two);
        CHECK(zero.frobenius_sq() == 0.0);
        auto big = single_path(12.0, -40.0, 1.0, UniformLinearArray(64), UniformLinearArray(4));
        CHECK(big.frobenius_sq() == doctest::Approx(256.0));
    }

    TEST_CASE("single path factorizes: |f H w^H|^2 = |alpha|^2 |v w^H|^2 |u f^H|^2")
    {
        UniformLinearArray tx(16), rx(4);
        CounterStream rng(21, 0);
        for (int i = 0; i < 100; ++i)
        {
            double aod = rng.uniform(-90, 90), aoa = rng.uniform(-90, 90);
            std::complex<double> alpha = rng.complex_normal();
            auto h = single_path(aod, aoa, alpha, tx, rx);
            auto w = random_unit_beam(16, rng);
            auto f = random_unit_beam(4, rng);
            double lhs = std::norm(bilinear(f, h, w));
            double rhs = std::norm(alpha) * std::norm(dot_conj(steering_vector(tx, aod), w)) *
                         std::norm(dot_conj(steering_vector(rx, aoa), f));
            CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, rhs));
        }
    }

    TEST_CASE("angle folding preserves the steering vector")
    {
        UniformLinearArray a(8);
        for (double th : {0.0, 45.0, 135.0, 200.0, 270.0, 359.0, -120.0})
        {
            double f = fold_angle(th);
            CHECK(f >= -90.0);
            CHECK(f <= 90.0);
            auto v1 = steering_vector(a, th), v2 = steering_vector(a, f);
            for (unsigned m = 0; m < 8; ++m)
                CHECK(std::abs(v1[m] - v2[m]) < 1e-12);
        }
    }

    TEST_CASE("rician: huge K-factor reduces to the single path")
    {
        UniformLinearArray tx(8), rx(4);
        CounterStream rng(5, 0);
        auto h = los_rician(10.0, 30.0, 200.0, tx, rx, rng);
        auto s = single_path(10.0, 30.0, 1.0, tx, rx);
        for (std::size_t i = 0; i < h.matrix.size(); ++i)
            CHECK(std::abs(h.matrix[i] - s.matrix[i]) < 1e-8);
        CHECK_THROWS_AS(los_rician(0, 0, INFINITY, tx, rx, rng), std::invalid_argument);
    }

    TEST_CASE("rician: dominant and diffuse power split")
    {
        UniformLinearArray tx(4), rx(4);
        for (double kdb : {13.2, 0.0})
        {
            double k = std::pow(10.0, kdb / 10.0);
            CounterStream rng(6, std::uint64_t(kdb * 10));
            const int n = 10000;
            double total = 0.0, diffuse = 0.0;
            for (int i = 0; i < n; ++i)
            {
                auto h = los_rician(-20.0, 50.0, kdb, tx, rx, rng);
                auto los = single_path(-20.0, 50.0, std::sqrt(k / (k + 1.0)), tx, rx);
                total += h.frobenius_sq();
                for (std::size_t e = 0; e < h.matrix.size(); ++e)
                    diffuse += std::norm(h.matrix[e] - los.matrix[e]);
            }
            CAPTURE(kdb);
            CHECK(total / n / 16.0 == doctest::Approx(1.0).epsilon(0.01));
            CHECK(1.0 - diffuse / total == doctest::Approx(k / (k + 1.0)).epsilon(0.01));
        }
        CHECK(std::pow(10.0, 1.32) / (std::pow(10.0, 1.32) + 1.0) == doctest::Approx(0.9545).epsilon(1e-4));
    }

    TEST_CASE("nlos: path count, power normalization and calibration")
    {
        UniformLinearArray tx(2), rx(2);
        CounterStream rng(7, 0);
        const int n = 100000;
        const double k = std::pow(10.0, 0.6);
        double paths = 0.0, power = 0.0;
        for (int i = 0; i < n; ++i)
        {
            auto h = nlos_multipath(tx, rx, 6.0, 1.8, {-30, 30}, {0, 360}, rng);
            paths += double(h.paths.size());
            power += h.frobenius_sq() / 4.0;
            double dom = 0.0;
            for (const auto& p : h.paths)
            {
                dom += std::norm(p.complex_gain);
                CHECK(p.aod_deg >= -30.0);
                CHECK(p.aod_deg <= 30.0);
                CHECK(std::abs(p.aoa_deg) <= 90.0);
            }
            // sum of path power fractions is one, each scaled by K / (K + 1)
            REQUIRE(std::abs(dom - k / (k + 1.0)) < 1e-12);
            if (h.paths.size() > 1)
                CHECK(std::norm(h.paths[0].complex_gain) >= std::norm(h.paths[1].complex_gain));
        }
        CHECK(std::abs(paths / n - (1.8 + std::exp(-1.8))) < 0.01);
        CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
    }

    TEST_CASE("snr calibration")
    {
        CHECK(calibrate_snr(-15).transmit_power == doctest::Approx(0.0316228).epsilon(1e-6));
        CHECK(calibrate_snr(-15).noise_power == 1.0);
        CHECK(calibrate_snr(0).transmit_power == 1.0);
        CHECK(calibrate_snr(-10).transmit_power == doctest::Approx(0.1));
    }

    TEST_CASE("json export")
    {
        auto h = single_path(0.0, 0.0, 1.0, UniformLinearArray(2), UniformLinearArray(2));
        auto j = h.to_json();
        CHECK(j["model"] == "single_path");
        CHECK(j["matrix"].size() == 4);
        CHECK(j["paths"].size() == 1);
    }
}
