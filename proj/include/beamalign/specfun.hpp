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

#ifndef BEAMALIGN_SPECFUN_HPP
#define BEAMALIGN_SPECFUN_HPP

#include <stdexcept>
#include <vector>

#include "beamalign/random.hpp"

namespace beamalign
{

/// Default absolute tolerance for bound computations.
inline constexpr double kDefaultCdfTol = 1e-10;

/// Thrown when a series fails to reach its tolerance within the term budget.
class ConvergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Non-central chi-square law chi^2_dof(ncp).
struct NoncentralChiSq
{
    unsigned dof;
    double ncp;

    NoncentralChiSq(unsigned dof, double ncp);
};

/// Law of (T1/n1)/(T2/n2) with T1 ~ chi^2_n1(eta1), T2 ~ chi^2_n2(eta2) independent.
struct DoublyNoncentralF
{
    unsigned dof_num;
    unsigned dof_den;
    double ncp_num;
    double ncp_den;

    DoublyNoncentralF(unsigned dof_num, unsigned dof_den, double ncp_num, double ncp_den);
};

double chisq_sample(const NoncentralChiSq& dist, CounterStream& rng);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// log of the Poisson(mean) probability mass at k.
double log_poisson_pmf(unsigned k, double mean);

/*!
 * Index window [lo, hi] of a Poisson(mean) law whose excluded mass is below
 * `tail` on each side. Throws ConvergenceError if the window would exceed
 * `max_terms` indices.
 */
struct PoissonWindow
{
    unsigned lo;
    unsigned hi;
    std::vector<double> weights; ///< pmf at lo..hi
};
PoissonWindow poisson_window(double mean, double tail, unsigned max_terms);

/*!
 * CDF of the doubly non-central F law at x via the double Poisson mixture
 *
 *   sum_{i,j} Pois(i; eta1/2) Pois(j; eta2/2) I_b(n1/2 + i, n2/2 + j),
 *   b = n1 x / (n1 x + n2).
 *
 * The result carries an absolute truncation error of at most `tol`. When the
 * value itself is small the windows are widened so that the error is also
 * below `tol` relative to the result; bounds far down in the tail stay
 * meaningful on a log scale.
 */
double dnc_f_cdf(const DoublyNoncentralF& dist, double x, double tol = kDefaultCdfTol,
                 unsigned max_terms = 200000);

/// Pr{T_opt < T_other} for T ~ chi^2_2(lambda), i.e. F_(2,2)(1 | lambda_opt, lambda_other).
double pairwise_error_prob(double lambda_opt, double lambda_other, double tol = kDefaultCdfTol);

} // namespace beamalign

#endif
