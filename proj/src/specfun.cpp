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

#include "beamalign/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace beamalign
{

NoncentralChiSq::NoncentralChiSq(unsigned dof_, double ncp_) : dof(dof_), ncp(ncp_)
{
    if (dof < 1)
        throw std::invalid_argument("NoncentralChiSq: dof must be >= 1");
    if (!(ncp >= 0.0))
        throw std::invalid_argument("NoncentralChiSq: ncp must be >= 0");
}

DoublyNoncentralF::DoublyNoncentralF(unsigned n1, unsigned n2, double eta1, double eta2)
    : dof_num(n1), dof_den(n2), ncp_num(eta1), ncp_den(eta2)
{
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("DoublyNoncentralF: degrees of freedom must be >= 1");
    if (!(eta1 >= 0.0) || !(eta2 >= 0.0))
        throw std::invalid_argument("DoublyNoncentralF: non-centralities must be >= 0");
}

double chisq_sample(const NoncentralChiSq& dist, CounterStream& rng)
{
    if (dist.dof == 2)
    {
        // 2|z + m|^2 with z ~ CN(0, 1) and |m|^2 = ncp / 2
        auto z = rng.complex_normal() + std::sqrt(dist.ncp / 2.0);
        return 2.0 * std::norm(z);
    }
    double first = rng.normal() + std::sqrt(dist.ncp);
    double sum = first * first;
    for (unsigned i = 1; i < dist.dof; ++i)
    {
        double z = rng.normal();
        sum += z * z;
    }
    return sum;
}

namespace
{

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIter = 100000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m)
    {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h;
    }
    throw ConvergenceError("incomplete_beta: continued fraction did not converge (a=" +
                           std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

} // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete_beta: a and b must be positive");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                       b * std::log1p(-x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double log_poisson_pmf(unsigned k, double mean)
{
    if (mean == 0.0)
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return k * std::log(mean) - mean - std::lgamma(k + 1.0);
}

PoissonWindow poisson_window(double mean, double tail, unsigned max_terms)
{
    if (mean == 0.0)
        return {0, 0, {1.0}};

    unsigned mode = unsigned(std::floor(mean));
    unsigned lo = mode;
    unsigned hi = mode;

    // Geometric bounds on the excluded masses: pmf ratios are monotone away
    // from the mode, so each tail is dominated by a geometric series.
    auto upper_tail = [&](unsigned h) {
        double k = h + 1.0;
        double ratio = mean / (k + 1.0);
        return std::exp(log_poisson_pmf(h + 1, mean)) / (1.0 - ratio);
    };
    auto lower_tail = [&](unsigned l) {
        if (l == 0)
            return 0.0;
        double ratio = (l - 1.0) / mean;
        return std::exp(log_poisson_pmf(l - 1, mean)) / (1.0 - ratio);
    };

    while (upper_tail(hi) > tail)
    {
        ++hi;
        if (hi - lo + 1 > max_terms)
            throw ConvergenceError("poisson_window: term budget exceeded for mean " +
                                   std::to_string(mean));
    }
    while (lower_tail(lo) > tail)
    {
        --lo;
        if (hi - lo + 1 > max_terms)
            throw ConvergenceError("poisson_window: term budget exceeded for mean " +
                                   std::to_string(mean));
    }

    PoissonWindow w{lo, hi, {}};
    w.weights.reserve(hi - lo + 1);
    for (unsigned k = lo; k <= hi; ++k)
        w.weights.push_back(std::exp(log_poisson_pmf(k, mean)));
    return w;
}

namespace
{

double mixture_sum(const DoublyNoncentralF& dist, double beta, double tail, unsigned max_terms)
{
    // each index drops at most tail on either side, i.e. 2 * tail per index
    auto wi = poisson_window(dist.ncp_num / 2.0, tail / 4.0, max_terms);
    auto wj = poisson_window(dist.ncp_den / 2.0, tail / 4.0, max_terms);
    if (double(wi.weights.size()) * double(wj.weights.size()) > double(max_terms) * 64.0)
        throw ConvergenceError("dnc_f_cdf: double series exceeds term budget");

    double a0 = dist.dof_num / 2.0;
    double b0 = dist.dof_den / 2.0;
    double sum = 0.0;
    for (std::size_t jj = 0; jj < wj.weights.size(); ++jj)
    {
        double b = b0 + (wj.lo + jj);
        double row = 0.0;
        for (std::size_t ii = 0; ii < wi.weights.size(); ++ii)
        {
            double a = a0 + (wi.lo + ii);
            row += wi.weights[ii] * incomplete_beta(a, b, beta);
        }
        sum += wj.weights[jj] * row;
    }
    return sum;
}

} // namespace

double dnc_f_cdf(const DoublyNoncentralF& dist, double x, double tol, unsigned max_terms)
{
    if (!(x > 0.0))
        throw std::invalid_argument("dnc_f_cdf: x must be positive");
    if (!(tol > 0.0) || tol > 1e-3)
        throw std::invalid_argument("dnc_f_cdf: tol must lie in (0, 1e-3]");

    double beta = dist.dof_num * x / (dist.dof_num * x + double(dist.dof_den));

    double tail = tol;
    double sum = mixture_sum(dist, beta, tail, max_terms);
    // Tighten toward a relative tolerance when the probability is tiny.
    constexpr double kFloor = 1e-290;
    for (int pass = 0; pass < 16; ++pass)
    {
        double wanted = std::max(tol * std::min(1.0, sum), kFloor);
        if (wanted >= 0.5 * tail)
            break;
        tail = wanted;
        sum = mixture_sum(dist, beta, tail, max_terms);
    }
    return std::clamp(sum, 0.0, 1.0);
}

double pairwise_error_prob(double lambda_opt, double lambda_other, double tol)
{
    if (lambda_opt < lambda_other)
        std::clog << "beamalign: pairwise_error_prob called with lambda_opt < lambda_other ("
                  << lambda_opt << " < " << lambda_other << ")\n";
    return dnc_f_cdf(DoublyNoncentralF(2, 2, lambda_opt, lambda_other), 1.0, tol);
}

} // namespace beamalign
