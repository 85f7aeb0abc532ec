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

#ifndef FRUSTMAG_BASELINES_HPP
#define FRUSTMAG_BASELINES_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "frustmag/model.hpp"

namespace frustmag {

// --- spin-vector (rotor) Monte Carlo -------------------------------------
// H(theta) = sum J_ij cos t_i cos t_j + sum h_i cos t_i - Gamma sum sin t_i,
// angles in [0, pi].

struct RotorState {
    std::vector<double> theta;
};

RotorState svmc_init(const SpinState& state);                      // cos(theta) = s
RotorState svmc_init_random(const Lattice& lattice, Rng& rng);

// Metropolis sweep at temperature T/J; proposal is a fresh uniform angle
void svmc_sweep(RotorState& state, const Lattice& lattice, const ModelParams& params, Rng& rng);

// s_i = sign(cos theta_i)
SpinState svmc_project(const RotorState& state);

double svmc_energy(const RotorState& state, const Lattice& lattice, const ModelParams& params);

// --- six-state clock model on the honeycomb dual lattice ------------------
// H = -sum_<ij> cos(theta_i - theta_j), theta in {2 pi k/6}.

struct HoneycombLattice {
    int cells = 0;  // L x L unit cells, two sites each, periodic
    int n_sites = 0;
    std::vector<std::pair<int, int>> bonds;
    std::vector<std::vector<int>> adj;
};

HoneycombLattice build_honeycomb(int cells);

struct ClockState {
    std::vector<std::uint8_t> k;  // values 0..5
};

ClockState clock_init_aligned(const HoneycombLattice& lattice);
ClockState clock_init_random(const HoneycombLattice& lattice, Rng& rng);

// Metropolis sweep; proposal is uniform among the other five values
void clock_sweep(ClockState& state, const HoneycombLattice& lattice, double t, Rng& rng);

struct ClockObservables {
    double energy = 0.0;                       // total, H = -sum cos(dtheta)
    std::complex<double> magnetization{0, 0};  // mean exp(i theta)
};

ClockObservables clock_observables(const ClockState& state, const HoneycombLattice& lattice);

// susceptibility accumulator: chi = N (<|m|^2> - <|m|>^2) / T
struct ClockSusceptibility {
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    long n = 0;

    void add(std::complex<double> m) {
        sum_abs += std::abs(m);
        sum_sq += std::norm(m);
        ++n;
    }
    double chi(double t, int n_sites) const {
        const double mean_abs = sum_abs / n;
        const double mean_sq = sum_sq / n;
        return n_sites * (mean_sq - mean_abs * mean_abs) / t;
    }
};

}  // namespace frustmag

#endif
