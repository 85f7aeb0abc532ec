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

#include "frustmag/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace frustmag {

RotorState svmc_init(const SpinState& state) {
    RotorState rs;
    rs.theta.resize(state.spins.size());
    for (std::size_t i = 0; i < state.spins.size(); ++i)
        rs.theta[i] = state.spins[i] > 0 ? 0.0 : M_PI;
    return rs;
}

RotorState svmc_init_random(const Lattice& lattice, Rng& rng) {
    RotorState rs;
    rs.theta.resize(lattice.n_spins);
    for (double& t : rs.theta) t = M_PI * rng.uniform();
    return rs;
}

void svmc_sweep(RotorState& state, const Lattice& lattice, const ModelParams& params, Rng& rng) {
    const double beta = params.beta();
    const auto& couplings = params.classical.couplings;
    const auto& fields = params.classical.fields;
    for (int i = 0; i < lattice.n_spins; ++i) {
        double local = fields[i];
        for (auto [j, bond] : lattice.adj[i]) local += couplings[bond] * std::cos(state.theta[j]);
        const double trial = M_PI * rng.uniform();
        const double dh = (std::cos(trial) - std::cos(state.theta[i])) * local -
                          params.gamma_over_j * (std::sin(trial) - std::sin(state.theta[i]));
        if (dh <= 0.0 || rng.uniform() < std::exp(-beta * dh)) state.theta[i] = trial;
    }
}

SpinState svmc_project(const RotorState& state) {
    SpinState st;
    st.spins.resize(state.theta.size());
    for (std::size_t i = 0; i < state.theta.size(); ++i)
        st.spins[i] = std::cos(state.theta[i]) >= 0.0 ? 1 : -1;
    return st;
}

double svmc_energy(const RotorState& state, const Lattice& lattice, const ModelParams& params) {
    double e = 0.0;
    for (std::size_t b = 0; b < lattice.bonds.size(); ++b)
        e += params.classical.couplings[b] * std::cos(state.theta[lattice.bonds[b].a]) *
             std::cos(state.theta[lattice.bonds[b].b]);
    for (int i = 0; i < lattice.n_spins; ++i) {
        e += params.classical.fields[i] * std::cos(state.theta[i]);
        e -= params.gamma_over_j * std::sin(state.theta[i]);
    }
    return e;
}

HoneycombLattice build_honeycomb(int cells) {
    if (cells < 2) throw std::invalid_argument("honeycomb needs at least 2x2 cells");
    HoneycombLattice lat;
    lat.cells = cells;
    lat.n_sites = 2 * cells * cells;
    auto site = [cells](int x, int y, int sub) {
        x = (x + cells) % cells;
        y = (y + cells) % cells;
        return 2 * (x * cells + y) + sub;
    };
    for (int x = 0; x < cells; ++x)
        for (int y = 0; y < cells; ++y) {
            int a = site(x, y, 0);
            lat.bonds.push_back({a, site(x, y, 1)});
            lat.bonds.push_back({a, site(x - 1, y, 1)});
            lat.bonds.push_back({a, site(x, y - 1, 1)});
        }
    lat.adj.resize(lat.n_sites);
    for (auto [a, b] : lat.bonds) {
        lat.adj[a].push_back(b);
        lat.adj[b].push_back(a);
    }
    return lat;
}

ClockState clock_init_aligned(const HoneycombLattice& lattice) {
    ClockState st;
    st.k.assign(lattice.n_sites, 0);
    return st;
}

ClockState clock_init_random(const HoneycombLattice& lattice, Rng& rng) {
    ClockState st;
    st.k.resize(lattice.n_sites);
    for (auto& v : st.k) v = static_cast<std::uint8_t>(rng.uniform_int(6));
    return st;
}

namespace {

// cos(2 pi d / 6) for d = 0..5
constexpr double kCos6[6] = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};

}  // namespace

void clock_sweep(ClockState& state, const HoneycombLattice& lattice, double t, Rng& rng) {
    const double beta = 1.0 / t;
    for (int i = 0; i < lattice.n_sites; ++i) {
        const int cur = state.k[i];
        const int trial = (cur + 1 + static_cast<int>(rng.uniform_int(5))) % 6;
        double dh = 0.0;
        for (int j : lattice.adj[i]) {
            dh -= kCos6[(trial - state.k[j] + 6) % 6];
            dh += kCos6[(cur - state.k[j] + 6) % 6];
        }
        if (dh <= 0.0 || rng.uniform() < std::exp(-beta * dh))
            state.k[i] = static_cast<std::uint8_t>(trial);
    }
}

ClockObservables clock_observables(const ClockState& state, const HoneycombLattice& lattice) {
    ClockObservables obs;
    for (auto [a, b] : lattice.bonds) obs.energy -= kCos6[(state.k[a] - state.k[b] + 6) % 6];
    std::complex<double> m{0.0, 0.0};
    for (std::uint8_t k : state.k) {
        const double ang = M_PI * k / 3.0;
        m += std::complex<double>{std::cos(ang), std::sin(ang)};
    }
    obs.magnetization = m / static_cast<double>(lattice.n_sites);
    return obs;
}

}  // namespace frustmag
