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

#include "beamalign/random.hpp"

#include <cmath>
#include <numbers>

namespace beamalign
{

namespace
{
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

inline double to_open_unit(std::uint64_t bits)
{
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline std::complex<double> box_muller(std::uint64_t a, std::uint64_t b)
{
    double u1 = to_open_unit(a);
    double u2 = to_open_unit(b);
    // radius for E|z|^2 = 1: each quadrature has variance 1/2
    double r = std::sqrt(-std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}
} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
      counter_{0u, substream, std::uint32_t(stream_id), std::uint32_t(stream_id >> 32)}
{
}

void CounterStream::refill()
{
    block_ = philox4x32(counter_, key_);
    ++counter_[0];
    pos_ = 0;
}

CounterStream::result_type CounterStream::operator()()
{
    if (pos_ == 4)
        refill();
    return block_[pos_++];
}

std::uint64_t CounterStream::next_u64()
{
    std::uint64_t lo = (*this)();
    std::uint64_t hi = (*this)();
    return (hi << 32) | lo;
}

double CounterStream::uniform()
{
    return to_open_unit(next_u64());
}

double CounterStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double CounterStream::normal()
{
    if (has_cached_normal_)
    {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    auto z = box_muller(next_u64(), next_u64());
    // scale the unit-power complex draw to two unit-variance reals
    cached_normal_ = z.imag() * std::numbers::sqrt2;
    has_cached_normal_ = true;
    return z.real() * std::numbers::sqrt2;
}

std::complex<double> CounterStream::complex_normal()
{
    return box_muller(next_u64(), next_u64());
}

double CounterStream::exponential()
{
    return -std::log(uniform());
}

unsigned CounterStream::poisson(double mean)
{
    double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    unsigned n = 0;
    while (u > cdf && p > 0.0)
    {
        ++n;
        p *= mean / n;
        cdf += p;
    }
    return n;
}

std::complex<double> complex_normal_at(std::uint64_t seed, std::uint64_t stream_id,
                                       std::uint32_t substream)
{
    auto b = philox4x32({0u, substream, std::uint32_t(stream_id), std::uint32_t(stream_id >> 32)},
                        {std::uint32_t(seed), std::uint32_t(seed >> 32)});
    return box_muller((std::uint64_t(b[1]) << 32) | b[0], (std::uint64_t(b[3]) << 32) | b[2]);
}

} // namespace beamalign
