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

#ifndef BEAMALIGN_CHANNEL_HPP
#define BEAMALIGN_CHANNEL_HPP

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamalign/array_codebook.hpp"
#include "beamalign/random.hpp"

namespace beamalign
{

struct PropagationPath
{
    std::complex<double> complex_gain;
    double aod_deg;
    double aoa_deg;
};

enum class ChannelModel
{
    single_path,
    los_rician,
    nlos_multipath,
};

std::string to_string(ChannelModel m);
ChannelModel channel_model_from_string(const std::string& s);

/*!
 * Narrowband N_R x N_T channel, stored row-major (rx index major).
 *
 * `paths` lists the specular components. For Rician models the matrix also
 * holds a diffuse term that is not represented in `paths`, so only
 * single-path realizations may be evaluated against ideal beam patterns.
 */
struct ChannelRealization
{
    unsigned n_rx = 0;
    unsigned n_tx = 0;
    cvec matrix;
    std::vector<PropagationPath> paths;
    ChannelModel model = ChannelModel::single_path;

    std::complex<double>& at(unsigned r, unsigned t) { return matrix[std::size_t(r) * n_tx + t]; }
    const std::complex<double>& at(unsigned r, unsigned t) const
    {
        return matrix[std::size_t(r) * n_tx + t];
    }
    double frobenius_sq() const;

    nlohmann::json to_json() const;
};

/// Angle range in degrees; angles are drawn uniformly in degrees.
struct DegreeRange
{
    double lo_deg;
    double hi_deg;
};

/// Front-half-plane angle with the same sine, in [-90, 90].
double fold_angle(double angle_deg);

ChannelRealization single_path(double aod_deg, double aoa_deg, std::complex<double> gain,
                               const UniformLinearArray& tx, const UniformLinearArray& rx);

/*!
 * Rician channel: sqrt(K/(K+1)) times a unit-power specular path plus
 * sqrt(1/(K+1)) times an i.i.d. CN(0, 1) matrix, so that the diffuse and
 * specular terms carry the same average Frobenius power at K = 1.
 */
ChannelRealization los_rician(double aod_deg, double aoa_deg, double k_factor_db,
                              const UniformLinearArray& tx, const UniformLinearArray& rx,
                              CounterStream& rng, std::complex<double> dominant_gain = 1.0);

/*!
 * Sum of M = max{1, Poisson(mean_paths)} Rician paths with AoD/AoA drawn
 * uniformly from the given ranges (AoA folded to the front half plane).
 * Power fractions are normalized i.i.d. unit exponentials, sorted in
 * descending order. Each path carries a uniformly random phase.
 */
ChannelRealization nlos_multipath(const UniformLinearArray& tx, const UniformLinearArray& rx,
                                  double k_factor_db, double mean_paths, DegreeRange aod_range,
                                  DegreeRange aoa_range, CounterStream& rng);

/// Transmit/noise power pair realizing a pre-beamforming SNR.
struct SnrSpec
{
    double snr_db;
    double transmit_power;
    double noise_power;
};

/// Noise power is pinned to 1; the SNR is absorbed into the transmit power.
SnrSpec calibrate_snr(double snr_db);

} // namespace beamalign

#endif
