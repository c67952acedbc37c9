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

#include "beamalign/array_codebook.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamalign
{

UniformLinearArray::UniformLinearArray(unsigned n, double spacing)
    : num_elements(n), spacing_wavelengths(spacing)
{
    if (n < 1)
        throw std::invalid_argument("UniformLinearArray: num_elements must be >= 1");
    if (!(spacing > 0.0))
        throw std::invalid_argument("UniformLinearArray: spacing must be positive");
}

AngleInterval::AngleInterval(double lo_, double hi_) : lo(lo_), hi(hi_)
{
    if (!(lo >= -1.0 && lo < hi && hi <= 1.0))
        throw std::invalid_argument("AngleInterval: need -1 <= lo < hi <= 1, got [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

AngleInterval AngleInterval::from_degrees(double lo_deg, double hi_deg)
{
    return {sine_of(lo_deg), sine_of(hi_deg)};
}

double deg2rad(double deg)
{
    return deg * std::numbers::pi / 180.0;
}

double rad2deg(double rad)
{
    return rad * 180.0 / std::numbers::pi;
}

double sine_of(double angle_deg)
{
    // exact values at the common grid points keep interval bookkeeping clean
    if (angle_deg == 90.0)
        return 1.0;
    if (angle_deg == -90.0)
        return -1.0;
    if (angle_deg == 30.0)
        return 0.5;
    if (angle_deg == -30.0)
        return -0.5;
    return std::sin(deg2rad(angle_deg));
}

std::string to_string(Synthesis s)
{
    return s == Synthesis::ideal ? "ideal" : "deactivation";
}

Synthesis synthesis_from_string(const std::string& s)
{
    if (s == "ideal")
        return Synthesis::ideal;
    if (s == "deactivation")
        return Synthesis::deactivation;
    throw std::invalid_argument("unknown beam synthesis '" + s + "'");
}

cvec steering_vector_sine(const UniformLinearArray& array, double sine)
{
    cvec v(array.num_elements);
    double step = 2.0 * std::numbers::pi * array.spacing_wavelengths * sine;
    for (unsigned m = 0; m < array.num_elements; ++m)
        v[m] = std::polar(1.0, step * m);
    return v;
}

cvec steering_vector(const UniformLinearArray& array, double angle_deg)
{
    return steering_vector_sine(array, sine_of(angle_deg));
}

namespace
{
bool ideal_covers(const AngleInterval& c, double s)
{
    return c.contains(s) || (s == c.hi && c.hi == 1.0);
}
} // namespace

std::complex<double> array_response(const Beamformer& beam, const UniformLinearArray& array,
                                    double sine)
{
    if (beam.synthesis == Synthesis::ideal)
        return ideal_covers(beam.coverage, sine) ? std::sqrt(2.0 / beam.coverage.width()) : 0.0;
    if (beam.weights.size() != array.num_elements)
        throw std::invalid_argument("array_response: beam/array size mismatch");
    double step = 2.0 * std::numbers::pi * array.spacing_wavelengths * sine;
    std::complex<double> acc = 0.0;
    for (unsigned m = 0; m < array.num_elements; ++m)
        if (beam.weights[m] != 0.0)
            acc += std::polar(1.0, step * m) * std::conj(beam.weights[m]);
    return acc;
}

double beam_gain_sine(const Beamformer& beam, const UniformLinearArray& array, double sine)
{
    return std::norm(array_response(beam, array, sine));
}

double beam_gain(const Beamformer& beam, const UniformLinearArray& array, double angle_deg)
{
    return beam_gain_sine(beam, array, sine_of(angle_deg));
}

unsigned active_elements_for(double width)
{
    double raw = 2.0 / width;
    // round half up
    return unsigned(std::floor(raw + 0.5));
}

Beamformer synthesize_deactivation(const UniformLinearArray& array, const AngleInterval& coverage)
{
    unsigned n = array.num_elements;
    unsigned active = active_elements_for(coverage.width());
    if (active > n)
        throw std::invalid_argument("synthesize_deactivation: coverage width " +
                                    std::to_string(coverage.width()) + " needs " +
                                    std::to_string(active) + " active elements but the array has " +
                                    std::to_string(n));
    active = std::max(active, 1u);

    Beamformer b{cvec(n, 0.0), coverage, 0, 0, Synthesis::deactivation};
    unsigned first = (n - active) / 2;
    double amp = 1.0 / std::sqrt(double(active));
    double step = 2.0 * std::numbers::pi * array.spacing_wavelengths * coverage.center();
    for (unsigned m = first; m < first + active; ++m)
        b.weights[m] = std::polar(amp, step * m);
    return b;
}

double ideal_gain(unsigned tx_size, unsigned rx_size, unsigned tx_size_max, unsigned rx_size_max,
                  unsigned n_tx, unsigned n_rx, bool aod_inside, bool aoa_inside)
{
    if (tx_size > tx_size_max || rx_size > rx_size_max)
        throw std::invalid_argument("ideal_gain: level size exceeds finest size");
    if (!aod_inside || !aoa_inside)
        return 0.0;
    double w = double(n_tx) * tx_size / tx_size_max;
    double f = double(n_rx) * rx_size / rx_size_max;
    return w * f;
}

HierarchicalCodebook::HierarchicalCodebook(UniformLinearArray array, AngleInterval sector,
                                           std::vector<unsigned> sizes, Synthesis synthesis)
    : array_(array), sector_(sector), synthesis_(synthesis), sizes_(std::move(sizes))
{
    if (sizes_.empty())
        throw std::invalid_argument("HierarchicalCodebook: at least one level required");
    for (std::size_t k = 0; k < sizes_.size(); ++k)
    {
        if (sizes_[k] == 0)
            throw std::invalid_argument("HierarchicalCodebook: empty level");
        if (k > 0 && sizes_[k] % sizes_[k - 1] != 0)
            throw std::invalid_argument("HierarchicalCodebook: level size " +
                                        std::to_string(sizes_[k]) + " is not a multiple of " +
                                        std::to_string(sizes_[k - 1]) +
                                        " (ragged nesting unsupported)");
    }

    // Endpoints are lo + span * (i / size). Equal rationals divide to the same
    // double, so a parent boundary and the matching child boundary coincide.
    auto edge = [&](unsigned i, unsigned size) {
        if (i == 0)
            return sector_.lo;
        if (i == size)
            return sector_.hi;
        return sector_.lo + (sector_.hi - sector_.lo) * (double(i) / double(size));
    };

    levels_.resize(sizes_.size());
    for (std::size_t k = 0; k < sizes_.size(); ++k)
    {
        for (unsigned l = 0; l < sizes_[k]; ++l)
        {
            AngleInterval cov(edge(l, sizes_[k]), edge(l + 1, sizes_[k]));
            Beamformer b = synthesis_ == Synthesis::deactivation
                               ? synthesize_deactivation(array_, cov)
                               : Beamformer{{}, cov, 0, 0, Synthesis::ideal};
            b.level = int(k);
            b.index = int(l);
            levels_[k].push_back(std::move(b));
        }
    }

    children_.resize(sizes_.size());
    for (std::size_t k = 0; k < sizes_.size(); ++k)
    {
        children_[k].resize(sizes_[k]);
        if (k + 1 == sizes_.size())
            continue;
        for (unsigned c = 0; c < sizes_[k + 1]; ++c)
        {
            const auto& cc = levels_[k + 1][c].coverage;
            int parent = -1;
            for (unsigned p = 0; p < sizes_[k]; ++p)
            {
                const auto& pc = levels_[k][p].coverage;
                if (cc.lo >= pc.lo && cc.hi <= pc.hi)
                {
                    parent = int(p);
                    break;
                }
            }
            if (parent < 0)
                throw std::logic_error("HierarchicalCodebook: child interval has no parent");
            children_[k][parent].push_back(int(c));
        }
    }
}

int HierarchicalCodebook::locate(int level, double sine) const
{
    const auto& lv = levels_.at(level);
    if (sine == sector_.hi)
        return int(lv.size()) - 1;
    for (const auto& b : lv)
        if (b.coverage.contains(sine))
            return b.index;
    return -1;
}

HierarchicalCodebook build_hierarchical_codebook(const UniformLinearArray& array,
                                                 const AngleInterval& sector,
                                                 const std::vector<unsigned>& level_sizes,
                                                 Synthesis synthesis)
{
    return HierarchicalCodebook(array, sector, level_sizes, synthesis);
}

nlohmann::json complex_to_json(std::span<const std::complex<double>> v)
{
    auto arr = nlohmann::json::array();
    for (const auto& z : v)
        arr.push_back({z.real(), z.imag()});
    return arr;
}

cvec complex_from_json(const nlohmann::json& j)
{
    cvec v;
    v.reserve(j.size());
    for (const auto& p : j)
        v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return v;
}

nlohmann::json HierarchicalCodebook::to_json() const
{
    nlohmann::json j;
    j["array"] = {{"num_elements", array_.num_elements},
                  {"spacing_wavelengths", array_.spacing_wavelengths}};
    j["sector"] = {sector_.lo, sector_.hi};
    j["synthesis"] = to_string(synthesis_);
    j["level_sizes"] = sizes_;
    auto levels = nlohmann::json::array();
    for (std::size_t k = 0; k < levels_.size(); ++k)
    {
        auto words = nlohmann::json::array();
        for (const auto& b : levels_[k])
        {
            nlohmann::json w;
            w["index"] = b.index;
            w["coverage"] = {b.coverage.lo, b.coverage.hi};
            w["weights"] = complex_to_json(b.weights);
            w["children"] = children_[k][b.index];
            words.push_back(std::move(w));
        }
        levels.push_back({{"level", k}, {"codewords", std::move(words)}});
    }
    j["levels"] = std::move(levels);
    return j;
}

HierarchicalCodebook HierarchicalCodebook::from_json(const nlohmann::json& j)
{
    HierarchicalCodebook cb;
    cb.array_ = UniformLinearArray(j.at("array").at("num_elements").get<unsigned>(),
                                   j.at("array").at("spacing_wavelengths").get<double>());
    cb.sector_ = AngleInterval(j.at("sector").at(0).get<double>(), j.at("sector").at(1).get<double>());
    cb.synthesis_ = synthesis_from_string(j.at("synthesis").get<std::string>());
    cb.sizes_ = j.at("level_sizes").get<std::vector<unsigned>>();
    for (const auto& lv : j.at("levels"))
    {
        int k = lv.at("level").get<int>();
        std::vector<Beamformer> words;
        std::vector<std::vector<int>> kids;
        for (const auto& w : lv.at("codewords"))
        {
            AngleInterval cov(w.at("coverage").at(0).get<double>(), w.at("coverage").at(1).get<double>());
            words.push_back({complex_from_json(w.at("weights")), cov, k, w.at("index").get<int>(),
                             cb.synthesis_});
            kids.push_back(w.at("children").get<std::vector<int>>());
        }
        cb.levels_.push_back(std::move(words));
        cb.children_.push_back(std::move(kids));
    }
    if (cb.levels_.size() != cb.sizes_.size())
        throw std::invalid_argument("HierarchicalCodebook::from_json: level count mismatch");
    return cb;
}

} // namespace beamalign
