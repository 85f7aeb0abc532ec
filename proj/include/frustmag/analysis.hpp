/*
Copyright 2026 The frustmag authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef FRUSTMAG_ANALYSIS_HPP
#define FRUSTMAG_ANALYSIS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "frustmag/rng.hpp"

namespace frustmag {

struct TimeSeriesPoint {
    double t = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
    long n = 1;
};

using TimeSeries = std::vector<TimeSeriesPoint>;

enum class FitStatus { ok, degenerate, no_convergence };

// Fit of m(t) = (m0 - mf) exp(-t/tau) + mf.  convergence_time is the time
// at which the fit sits `cutoff` away from its terminal value; it is only
// resolved when the fitted amplitude exceeds the cutoff.
struct FitResult {
    FitStatus status = FitStatus::no_convergence;
    double m0 = 0.0;
    double mf = 0.0;
    double tau = 0.0;
    std::array<double, 9> covariance{};  // row-major over (m0, mf, tau)
    double cutoff = 0.05;
    bool resolved = false;
    double convergence_time = 0.0;
    double chi2 = 0.0;
    std::string message;
};

// Weighted Levenberg-Marquardt with a fixed deterministic initialization.
// Points with positive stderr are weighted by 1/stderr^2.
FitResult fit_exponential(const TimeSeries& series, double cutoff = 0.05);

struct RepTime {
    bool resolved = false;
    double time = 0.0;
};

// geometric mean of the CCW and CW convergence times; unresolved if either
// input is unresolved
RepTime representative_time(const FitResult& fit_ccw, const FitResult& fit_cw);

// Percentile bootstrap interval for a statistic of a scalar sample.
std::pair<double, double> bootstrap_ci(const std::vector<double>& samples,
                                       const std::function<double(std::span<const double>)>& statistic,
                                       double level, int resamples, std::uint64_t seed);

// Index-resampling variant for statistics over structured replicas (e.g.
// refitting a mean curve): the statistic receives a multiset of replica
// indices drawn with replacement.
std::pair<double, double> bootstrap_ci_indices(
    std::size_t n_samples, const std::function<double(const std::vector<std::size_t>&)>& statistic,
    double level, int resamples, std::uint64_t seed);

struct CollapseDataset {
    double size = 0.0;                           // linear system size L
    std::vector<std::array<double, 3>> points;   // (T, value, err)
};

struct CollapseResult {
    bool ok = false;
    double a = 0.0;
    double tc = 0.0;
    double quality = 0.0;  // cross-size CV spline residual, normalized
    std::string message;
};

// Kosterlitz-Thouless style collapse: x = L / xi(T), xi = exp(a/sqrt(T-Tc)),
// y = value / L^c with c fixed (7/4 for the 2D XY window).  (a, Tc) minimize
// the leave-one-size-out residual against a cubic-spline master curve.
CollapseResult scaling_collapse(const std::vector<CollapseDataset>& datasets, double c = 1.75);

// master-curve coordinates for plotting a given collapse
std::vector<std::array<double, 3>> collapse_points(const std::vector<CollapseDataset>& datasets,
                                                   double c, double a, double tc);

}  // namespace frustmag

#endif
