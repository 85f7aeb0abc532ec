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

#ifndef FRUSTMAG_RNG_HPP
#define FRUSTMAG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace frustmag {

// Seeded random stream.  Distributions are implemented by hand on top of
// mt19937_64 so that a given seed produces the same draw sequence on every
// platform and compiler; std::*_distribution makes no such guarantee and
// would break golden-file reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // uniform on [0, 1)
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1], safe as a log() argument
    double uniform_pos() { return ((gen_() >> 11) + 1) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire rejection scheme, unbiased
        std::uint64_t x = gen_();
        __uint128_t m = (__uint128_t)x * n;
        std::uint64_t l = (std::uint64_t)m;
        if (l < n) {
            std::uint64_t t = -n % n;
            while (l < t) {
                x = gen_();
                m = (__uint128_t)x * n;
                l = (std::uint64_t)m;
            }
        }
        return (std::uint64_t)(m >> 64);
    }

    bool coin() { return (gen_() >> 63) != 0; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    double normal(double mean = 0.0, double stddev = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives independent child seeds from a master seed (splitmix64 steps).
// Used to give every replica its own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace frustmag

#endif
