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

#ifndef FRUSTMAG_STATES_HPP
#define FRUSTMAG_STATES_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "frustmag/lattice.hpp"
#include "frustmag/rng.hpp"

namespace frustmag {

struct SpinState {
    std::vector<std::int8_t> spins;  // values in {-1,+1}

    int size() const { return static_cast<int>(spins.size()); }
    SpinState flipped() const {
        SpinState out = *this;
        for (auto& s : out.spins) s = -s;
        return out;
    }
};

// Classical couplings: J per lattice bond (index-aligned with
// lattice.bonds) and a field h per spin.  Nominal parameters copy the
// lattice couplings and set h = 0; disorder studies perturb a copy.
struct ClassicalParams {
    std::vector<double> couplings;
    std::vector<double> fields;
};

ClassicalParams nominal_params(const Lattice& lattice);

enum class Winding { ccw, cw };

// The six sublattice orderings S_k.  S_k assigns one orientation to all
// chains of a sublattice, pattern up-up-down or down-down-up; its plaquette
// pseudospin is 2 exp(i k pi/3).
std::array<std::int8_t, 3> sublattice_pattern(int k);

// All chains of a sublattice aligned; k in 1..6.
SpinState ordered_state(const Lattice& lattice, int k);

// Six stripes of rows assigned orderings that rotate the pseudospin by a
// full turn around the periodic dimension.  Requires grid_rows % 6 == 0.
// Both twisted states are ground states of the classical potential.
SpinState twisted_state(const Lattice& lattice, Winding direction);

SpinState random_state(const Lattice& lattice, Rng& rng);

double classical_energy(const Lattice& lattice, const SpinState& state,
                        const ClassicalParams& params);

// Readout-quench model: repair broken chains by majority vote (ties by
// fair coin), then greedily flip whole chains while a flip strictly lowers
// the classical energy.  Chains are visited in random order, full passes
// repeat until no flip happens.
SpinState greedy_quench(const Lattice& lattice, const SpinState& state,
                        const ClassicalParams& params, Rng& rng);

// Exhaustive minimum over all 2^n configurations; n_spins <= 24.
double classical_ground_brute_force(const Lattice& lattice, const ClassicalParams& params);

// Reference ground energy for residual-energy observables: brute force on
// small systems, ordered-state energy (exact for nominal couplings) on
// large ones.
double ground_energy_reference(const Lattice& lattice, const ClassicalParams& params);

// one state per line, compact '+'/'-' characters
void write_states_text(std::ostream& os, const std::vector<SpinState>& states);
std::vector<SpinState> read_states_text(std::istream& is);

// 16-byte header (magic "FMSPIN01", u32 n_spins, u32 n_states,
// little-endian) followed by bit-packed spins, one state after another
void write_states_binary(std::ostream& os, const std::vector<SpinState>& states);
std::vector<SpinState> read_states_binary(std::istream& is);

}  // namespace frustmag

#endif
