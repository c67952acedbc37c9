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

#include "beamalign/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace beamalign
{

std::string to_string(ChannelModel m)
{
    switch (m)
    {
    case ChannelModel::single_path:
        return "single_path";
    case ChannelModel::los_rician:
        return "los_rician";
    case ChannelModel::nlos_multipath:
        return "nlos_multipath";
    }
    return "?";
}

ChannelModel channel_model_from_string(const std::string& s)
{
    if (s == "single_path")
        return ChannelModel::single_path;
    if (s == "los_rician")
        return ChannelModel::los_rician;
    if (s == "nlos_multipath")
        return ChannelModel::nlos_multipath;
    throw std::invalid_argument("unknown channel model '" + s + "'");
}

double ChannelRealization::frobenius_sq() const
{
    double s = 0.0;
    for (const auto& z : matrix)
        s += std::norm(z);
    return s;
}

nlohmann::json ChannelRealization::to_json() const
{
    nlohmann::json j;
    j["model"] = to_string(model);
    j["n_rx"] = n_rx;
    j["n_tx"] = n_tx;
    j["matrix"] = complex_to_json(matrix);
    auto p = nlohmann::json::array();
    for (const auto& path : paths)
        p.push_back({{"gain", {path.complex_gain.real(), path.complex_gain.imag()}},
                     {"aod_deg", path.aod_deg},
                     {"aoa_deg", path.aoa_deg}});
    j["paths"] = std::move(p);
    return j;
}

double fold_angle(double angle_deg)
{
    return rad2deg(std::asin(std::clamp(std::sin(deg2rad(angle_deg)), -1.0, 1.0)));
}

ChannelRealization single_path(double aod_deg, double aoa_deg, std::complex<double> gain,
                               const UniformLinearArray& tx, const UniformLinearArray& rx)
{
    ChannelRealization ch;
    ch.n_rx = rx.num_elements;
    ch.n_tx = tx.num_elements;
    ch.matrix.assign(std::size_t(ch.n_rx) * ch.n_tx, 0.0);
    ch.paths.push_back({gain, aod_deg, aoa_deg});
    ch.model = ChannelModel::single_path;

    auto v = steering_vector(tx, aod_deg);
    auto u = steering_vector(rx, aoa_deg);
    for (unsigned r = 0; r < ch.n_rx; ++r)
    {
        auto ur = gain * std::conj(u[r]);
        for (unsigned t = 0; t < ch.n_tx; ++t)
            ch.at(r, t) = ur * v[t];
    }
    return ch;
}

ChannelRealization los_rician(double aod_deg, double aoa_deg, double k_factor_db,
                              const UniformLinearArray& tx, const UniformLinearArray& rx,
                              CounterStream& rng, std::complex<double> dominant_gain)
{
    if (!std::isfinite(k_factor_db))
        throw std::invalid_argument("los_rician: K-factor must be finite");
    double k = std::pow(10.0, k_factor_db / 10.0);
    double los_amp = std::sqrt(k / (k + 1.0));
    double diffuse_amp = std::sqrt(1.0 / (k + 1.0));

    auto ch = single_path(aod_deg, aoa_deg, los_amp * dominant_gain, tx, rx);
    for (auto& h : ch.matrix)
        h += diffuse_amp * rng.complex_normal();
    ch.model = ChannelModel::los_rician;
    return ch;
}

ChannelRealization nlos_multipath(const UniformLinearArray& tx, const UniformLinearArray& rx,
                                  double k_factor_db, double mean_paths, DegreeRange aod_range,
                                  DegreeRange aoa_range, CounterStream& rng)
{
    unsigned m = std::max(1u, rng.poisson(mean_paths));

    std::vector<double> power(m);
    double total = 0.0;
    for (auto& p : power)
    {
        p = rng.exponential();
        total += p;
    }
    for (auto& p : power)
        p /= total;
    std::sort(power.begin(), power.end(), std::greater<>());

    ChannelRealization ch;
    ch.n_rx = rx.num_elements;
    ch.n_tx = tx.num_elements;
    ch.matrix.assign(std::size_t(ch.n_rx) * ch.n_tx, 0.0);
    ch.model = ChannelModel::nlos_multipath;
    for (unsigned i = 0; i < m; ++i)
    {
        double aod = rng.uniform(aod_range.lo_deg, aod_range.hi_deg);
        double aoa = fold_angle(rng.uniform(aoa_range.lo_deg, aoa_range.hi_deg));
        auto phase = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
        auto path = los_rician(aod, aoa, k_factor_db, tx, rx, rng, phase);
        double amp = std::sqrt(power[i]);
        for (std::size_t e = 0; e < ch.matrix.size(); ++e)
            ch.matrix[e] += amp * path.matrix[e];
        for (auto p : path.paths)
        {
            p.complex_gain *= amp;
            ch.paths.push_back(p);
        }
    }
    return ch;
}

SnrSpec calibrate_snr(double snr_db)
{
    return {snr_db, std::pow(10.0, snr_db / 10.0), 1.0};
}

} // namespace beamalign
