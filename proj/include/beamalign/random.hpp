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

#ifndef BEAMALIGN_RANDOM_HPP
#define BEAMALIGN_RANDOM_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace beamalign
{

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/*!
 * Counter-based random stream.
 *
 * A stream is addressed by (seed, stream id, substream). Values are a pure
 * function of that address and the draw position, so any trial or beam-pair
 * measurement can be regenerated independently of the order in which other
 * streams were consumed. This is what makes serial and threaded sweeps
 * produce identical output.
 */
class CounterStream
{
  public:
    using result_type = std::uint32_t;

    CounterStream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();
    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();
    double uniform(double lo, double hi);
    double normal();
    /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal();
    /// Unit-mean exponential.
    double exponential();
    /// Poisson by sequential inversion; intended for small means.
    unsigned poisson(double mean);

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    unsigned pos_ = 4;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

/// One complex Gaussian (E|z|^2 = 1) for a fixed (seed, stream, substream) address.
std::complex<double> complex_normal_at(std::uint64_t seed, std::uint64_t stream_id,
                                       std::uint32_t substream);

} // namespace beamalign

#endif
