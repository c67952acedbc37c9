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

#ifndef BEAMALIGN_ARRAY_CODEBOOK_HPP
#define BEAMALIGN_ARRAY_CODEBOOK_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace beamalign
{

using cvec = std::vector<std::complex<double>>;

/// Half-wavelength (by default) uniform linear array.
struct UniformLinearArray
{
    unsigned num_elements;
    double spacing_wavelengths = 0.5;

    explicit UniformLinearArray(unsigned n, double spacing = 0.5);
};

/*!
 * Interval of directional cosines (sine space), lo < hi within [-1, 1].
 *
 * Membership is half-open, [lo, hi), except that a point equal to +1 is
 * taken to belong to an interval ending at +1 (see `contains_closed_top`).
 */
struct AngleInterval
{
    double lo;
    double hi;

    AngleInterval(double lo, double hi);

    static AngleInterval from_degrees(double lo_deg, double hi_deg);

    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(double s) const { return s >= lo && s < hi; }
    bool contains_closed_top(double s) const { return s >= lo && s <= hi; }

    friend bool operator==(const AngleInterval&, const AngleInterval&) = default;
};

double deg2rad(double deg);
double rad2deg(double rad);
/// Directional cosine of an angle given in degrees.
double sine_of(double angle_deg);

enum class Synthesis
{
    ideal,        ///< constant gain 2/width inside coverage, zero outside
    deactivation, ///< centered active subarray steered to the coverage center
};

std::string to_string(Synthesis s);
Synthesis synthesis_from_string(const std::string& s);

/*!
 * One codeword. For `Synthesis::deactivation` the weights are a unit-norm,
 * constant-modulus-or-zero vector. Ideal codewords carry no weights; their
 * pattern is defined directly by the coverage interval.
 */
struct Beamformer
{
    cvec weights;
    AngleInterval coverage;
    int level = 0;
    int index = 0;
    Synthesis synthesis = Synthesis::deactivation;
};

cvec steering_vector(const UniformLinearArray& array, double angle_deg);
cvec steering_vector_sine(const UniformLinearArray& array, double sine);

/// Array response v(s) w^H; its squared magnitude is the beamforming gain.
std::complex<double> array_response(const Beamformer& beam, const UniformLinearArray& array,
                                    double sine);

double beam_gain(const Beamformer& beam, const UniformLinearArray& array, double angle_deg);
double beam_gain_sine(const Beamformer& beam, const UniformLinearArray& array, double sine);

/// Number of active elements used for a coverage of the given sine width.
unsigned active_elements_for(double width);

/// Throws std::invalid_argument if the coverage is too narrow for the array.
Beamformer synthesize_deactivation(const UniformLinearArray& array, const AngleInterval& coverage);

/*!
 * Ideal combined in-coverage gain W * F for codebooks of the given sizes,
 * calibrated so the finest codebook reaches the full coherent array gain.
 * Zero when the path lies outside either coverage.
 */
double ideal_gain(unsigned tx_size, unsigned rx_size, unsigned tx_size_max, unsigned rx_size_max,
                  unsigned n_tx, unsigned n_rx, bool aod_inside, bool aoa_inside);

class HierarchicalCodebook
{
  public:
    HierarchicalCodebook(UniformLinearArray array, AngleInterval sector,
                         std::vector<unsigned> level_sizes, Synthesis synthesis);

    const UniformLinearArray& array() const { return array_; }
    const AngleInterval& sector() const { return sector_; }
    Synthesis synthesis() const { return synthesis_; }
    int num_levels() const { return int(levels_.size()); }
    unsigned level_size(int level) const { return unsigned(levels_.at(level).size()); }
    const std::vector<unsigned>& level_sizes() const { return sizes_; }

    const Beamformer& codeword(int level, int index) const { return levels_.at(level).at(index); }
    const std::vector<Beamformer>& level(int level) const { return levels_.at(level); }
    /// Indices at level + 1 nested inside codeword (level, index).
    const std::vector<int>& children(int level, int index) const
    {
        return children_.at(level).at(index);
    }
    /// Index of the codeword at `level` whose coverage contains `sine`, or -1.
    int locate(int level, double sine) const;

    nlohmann::json to_json() const;
    static HierarchicalCodebook from_json(const nlohmann::json& j);

  private:
    HierarchicalCodebook() = default;

    UniformLinearArray array_{1};
    AngleInterval sector_{-1.0, 1.0};
    Synthesis synthesis_ = Synthesis::deactivation;
    std::vector<unsigned> sizes_;
    std::vector<std::vector<Beamformer>> levels_;
    std::vector<std::vector<std::vector<int>>> children_;
};

/// Levels are 0-based in code; level k of the text is level k-1 here.
HierarchicalCodebook build_hierarchical_codebook(const UniformLinearArray& array,
                                                 const AngleInterval& sector,
                                                 const std::vector<unsigned>& level_sizes,
                                                 Synthesis synthesis);

nlohmann::json complex_to_json(std::span<const std::complex<double>> v);
cvec complex_from_json(const nlohmann::json& j);

} // namespace beamalign

#endif
