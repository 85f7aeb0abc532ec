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

#ifndef FRUSTMAG_STATS_HPP
#define FRUSTMAG_STATS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace frustmag {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size() - 1);
}

inline double stderr_of_mean(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// z statistic for the difference of two independent sample means
inline double two_sample_z(std::span<const double> a, std::span<const double> b) {
    double se = std::sqrt(sample_variance(a) / a.size() + sample_variance(b) / b.size());
    if (se == 0.0) return 0.0;
    return (mean(a) - mean(b)) / se;
}

}  // namespace frustmag

#endif
