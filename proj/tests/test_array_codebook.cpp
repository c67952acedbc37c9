// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "beamalign/array_codebook.hpp"

using namespace beamalign;

namespace
{

double norm_sq(const cvec& w)
{
    double s = 0.0;
    for (auto z : w)
        s += std::norm(z);
    return s;
}

// (1/2) integral over sine in [-1, 1]; the pattern is a trigonometric
// polynomial of period 2, so the rectangle rule with enough nodes is exact.
double integrated_gain(const Beamformer& b, const UniformLinearArray& a)
{
    const int n = 4096;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += beam_gain_sine(b, a, -1.0 + 2.0 * i / n);
    return s / n;
}

} // namespace

TEST_SUITE("array_codebook")
{
    TEST_CASE("construction guards")
    {
        CHECK_THROWS_AS(UniformLinearArray(0), std::invalid_argument);
        CHECK_THROWS_AS(UniformLinearArray(4, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(AngleInterval(0.5, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(AngleInterval(-1.5, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(synthesis_from_string("xiao"), std::invalid_argument);
        CHECK(synthesis_from_string(to_string(Synthesis::ideal)) == Synthesis::ideal);
    }

    TEST_CASE("sine of common angles is exact")
    {
        CHECK(sine_of(90.0) == 1.0);
        CHECK(sine_of(-90.0) == -1.0);
        CHECK(sine_of(30.0) == 0.5);
        CHECK(sine_of(-30.0) == -0.5);
        CHECK(sine_of(0.0) == 0.0);
        CHECK(rad2deg(deg2rad(37.0)) == doctest::Approx(37.0));
        auto iv = AngleInterval::from_degrees(-30.0, 30.0);
        CHECK(iv.lo == -0.5);
        CHECK(iv.hi == 0.5);
    }

    TEST_CASE("steering vectors")
    {
        auto v = steering_vector(UniformLinearArray(4), 0.0);
        for (auto z : v)
            CHECK(std::abs(z - 1.0) < 1e-15);
        auto w = steering_vector(UniformLinearArray(2), 90.0);
        CHECK(std::abs(w[0] - 1.0) < 1e-15);
        CHECK(std::abs(w[1] + 1.0) < 1e-15);
    }

    TEST_CASE("matched beam has coherent gain N")
    {
        UniformLinearArray a(64);
        auto v = steering_vector(a, 17.0);
        Beamformer b{v, AngleInterval(-1, 1), 0, 0, Synthesis::deactivation};
        for (auto& z : b.weights)
            z /= 8.0;
        CHECK(beam_gain(b, a, 17.0) == doctest::Approx(64.0).epsilon(1e-12));
    }

    TEST_CASE("deactivation synthesis")
    {
        UniformLinearArray a(64);
        SUBCASE("finest level uses the full array")
        {
            AngleInterval c(0.0, 1.0 / 32.0);
            CHECK(active_elements_for(c.width()) == 64);
            auto b = synthesize_deactivation(a, c);
            auto v = steering_vector_sine(a, c.center());
            for (unsigned m = 0; m < 64; ++m)
                CHECK(std::abs(b.weights[m] - v[m] / 8.0) < 1e-12);
            CHECK(beam_gain_sine(b, a, c.center()) == doctest::Approx(64.0).epsilon(1e-12));
        }
        SUBCASE("first level: four centered elements")
        {
            AngleInterval c(-0.5, 0.0);
            auto b = synthesize_deactivation(a, c);
            int active = 0;
            for (unsigned m = 0; m < 64; ++m)
                if (b.weights[m] != 0.0)
                {
                    ++active;
                    CHECK(m >= 30);
                    CHECK(m <= 33);
                }
            CHECK(active == 4);
            CHECK(std::abs(beam_gain_sine(b, a, c.center()) - 4.0) < 0.2);
        }
        SUBCASE("full range on four elements is one omnidirectional element")
        {
            auto b = synthesize_deactivation(UniformLinearArray(4), AngleInterval(-1.0, 1.0));
            for (double s : {-0.9, -0.3, 0.0, 0.6})
                CHECK(beam_gain_sine(b, UniformLinearArray(4), s) == doctest::Approx(1.0));
        }
        CHECK_THROWS_AS(synthesize_deactivation(UniformLinearArray(4), AngleInterval(0.0, 0.25)),
                        std::invalid_argument);
    }

    TEST_CASE("synthesized beams: unit norm, constant modulus or zero, unit average gain")
    {
        UniformLinearArray a(64);
        auto cb = build_hierarchical_codebook(a, AngleInterval(-0.5, 0.5), {2, 4, 8, 16, 32},
                                              Synthesis::deactivation);
        for (int k = 0; k < cb.num_levels(); ++k)
            for (const auto& b : cb.level(k))
            {
                CHECK(std::abs(norm_sq(b.weights) - 1.0) < 1e-12);
                double mod = 0.0;
                for (auto z : b.weights)
                    if (std::abs(z) > 0.0)
                    {
                        if (mod == 0.0)
                            mod = std::abs(z);
                        CHECK(std::abs(std::abs(z) - mod) < 1e-12);
                    }
                CHECK(std::abs(integrated_gain(b, a) - 1.0) < 1e-6);
            }
    }

    TEST_CASE("deactivation beams: in-coverage floor exceeds out-of-band leakage")
    {
        UniformLinearArray a(64);
        auto cb = build_hierarchical_codebook(a, AngleInterval(-0.5, 0.5), {2, 4, 8, 16, 32},
                                              Synthesis::deactivation);
        for (int k = 0; k < cb.num_levels(); ++k)
        {
            const auto& b = cb.codeword(k, 0);
            double width = b.coverage.width();
            double floor_in = 1e300, leak = 0.0;
            for (int i = 0; i <= 200; ++i)
                floor_in = std::min(floor_in, beam_gain_sine(b, a, b.coverage.lo + width * i / 200.0));
            for (int i = 0; i <= 4000; ++i)
            {
                double s = -1.0 + 2.0 * i / 4000.0;
                if (s < b.coverage.lo - width || s > b.coverage.hi + width)
                    leak = std::max(leak, beam_gain_sine(b, a, s));
            }
            CAPTURE(k);
            CHECK(floor_in > leak);
        }
    }

    TEST_CASE("ideal gains")
    {
        CHECK(ideal_gain(32, 4, 32, 4, 64, 4, true, true) == 256.0);
        CHECK(ideal_gain(2, 4, 32, 4, 64, 4, true, true) == 16.0);
        CHECK(ideal_gain(2, 4, 32, 4, 64, 4, false, true) == 0.0);
        // 2/width calibration of an ideal beam reproduces the same numbers
        Beamformer tx{{}, AngleInterval(-0.5, 0.0), 0, 0, Synthesis::ideal};
        Beamformer rx{{}, AngleInterval(-1.0, -0.5), 0, 0, Synthesis::ideal};
        UniformLinearArray a(64);
        CHECK(beam_gain_sine(tx, a, -0.2) * beam_gain_sine(rx, UniformLinearArray(4), -0.7) == doctest::Approx(16.0));
        CHECK(beam_gain_sine(tx, a, 0.2) == 0.0);
    }

    TEST_CASE("hierarchical codebook structure")
    {
        UniformLinearArray a(64);
        auto cb = build_hierarchical_codebook(a, AngleInterval::from_degrees(-30, 30), {2, 4, 8, 16, 32},
                                              Synthesis::deactivation);
        REQUIRE(cb.num_levels() == 5);
        for (int k = 0; k < 5; ++k)
        {
            CHECK(cb.level_size(k) == (1u << (k + 1)));
            for (const auto& b : cb.level(k))
                CHECK(b.coverage.width() == doctest::Approx(std::ldexp(1.0, -(k + 1))));
        }
        auto rx = build_hierarchical_codebook(UniformLinearArray(4), AngleInterval(-1, 1), {4},
                                              Synthesis::deactivation);
        CHECK(rx.level_size(0) == 4);
        CHECK(rx.codeword(0, 2).coverage.width() == 0.5);
        CHECK_THROWS_AS(build_hierarchical_codebook(a, AngleInterval(-1, 1), {2, 3}, Synthesis::ideal),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_hierarchical_codebook(UniformLinearArray(4), AngleInterval(-1, 1), {64},
                                                    Synthesis::deactivation),
                        std::invalid_argument);
    }

    TEST_CASE("nesting: children tile the parent exactly")
    {
        auto cb = build_hierarchical_codebook(UniformLinearArray(64), AngleInterval(-0.5, 0.5),
                                              {2, 4, 8, 16, 32}, Synthesis::ideal);
        for (int k = 0; k + 1 < cb.num_levels(); ++k)
            for (int i = 0; i < int(cb.level_size(k)); ++i)
            {
                const auto& kids = cb.children(k, i);
                REQUIRE(kids.size() == 2);
                const auto& parent = cb.codeword(k, i).coverage;
                CHECK(cb.codeword(k + 1, kids.front()).coverage.lo == parent.lo);
                CHECK(cb.codeword(k + 1, kids.back()).coverage.hi == parent.hi);
                for (std::size_t c = 0; c + 1 < kids.size(); ++c)
                    CHECK(cb.codeword(k + 1, kids[c]).coverage.hi == cb.codeword(k + 1, kids[c + 1]).coverage.lo);
            }
        CHECK(cb.children(4, 0).empty());
    }

    TEST_CASE("golden codebook")
    {
        std::ifstream in(std::string(BEAMALIGN_GOLDEN_DIR) + "/codebook_n4_full_2_4.json");
        REQUIRE(in);
        auto golden = nlohmann::json::parse(in);
        auto cb = build_hierarchical_codebook(UniformLinearArray(4), AngleInterval(-1, 1), {2, 4},
                                              Synthesis::deactivation);
        auto j = cb.to_json();
        CHECK(j["array"] == golden["array"]);
        CHECK(j["sector"] == golden["sector"]);
        CHECK(j["synthesis"] == golden["synthesis"]);
        CHECK(j["level_sizes"] == golden["level_sizes"]);
        REQUIRE(j["levels"].size() == golden["levels"].size());
        for (std::size_t k = 0; k < j["levels"].size(); ++k)
        {
            const auto& got = j["levels"][k]["codewords"];
            const auto& want = golden["levels"][k]["codewords"];
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i)
            {
                CHECK(got[i]["coverage"] == want[i]["coverage"]);
                CHECK(got[i]["children"] == want[i]["children"]);
                auto wg = complex_from_json(got[i]["weights"]);
                auto ww = complex_from_json(want[i]["weights"]);
                REQUIRE(wg.size() == ww.size());
                for (std::size_t m = 0; m < wg.size(); ++m)
                    CHECK(std::abs(wg[m] - ww[m]) < 1e-12);
            }
        }
    }

    TEST_CASE("JSON round trip")
    {
        auto cb = build_hierarchical_codebook(UniformLinearArray(16), AngleInterval(-0.5, 0.5), {2, 4, 8},
                                              Synthesis::deactivation);
        auto back = HierarchicalCodebook::from_json(nlohmann::json::parse(cb.to_json().dump()));
        CHECK(back.to_json() == cb.to_json());
        CHECK(back.locate(2, 0.3) == cb.locate(2, 0.3));
    }

    TEST_CASE("locate: half-open cells, closed at the top of the sector")
    {
        auto cb = build_hierarchical_codebook(UniformLinearArray(4), AngleInterval(-1, 1), {4}, Synthesis::ideal);
        CHECK(cb.locate(0, -1.0) == 0);
        CHECK(cb.locate(0, -0.5) == 1);
        CHECK(cb.locate(0, 0.0) == 2);
        CHECK(cb.locate(0, 1.0) == 3);
        auto bs = build_hierarchical_codebook(UniformLinearArray(64), AngleInterval(-0.5, 0.5), {2}, Synthesis::ideal);
        CHECK(bs.locate(0, 0.7) == -1);
    }
}
