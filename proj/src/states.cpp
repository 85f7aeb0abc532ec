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

#include "frustmag/states.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace frustmag {

ClassicalParams nominal_params(const Lattice& lattice) {
    ClassicalParams p;
    p.couplings.reserve(lattice.bonds.size());
    for (const Bond& b : lattice.bonds) p.couplings.push_back(b.j);
    p.fields.assign(lattice.n_spins, 0.0);
    return p;
}

std::array<std::int8_t, 3> sublattice_pattern(int k) {
    // S_1..S_6; consecutive patterns differ by one sublattice flip and
    // rotate the pseudospin 2 exp(i k pi/3) by 60 degrees
    static constexpr std::int8_t table[6][3] = {
        {+1, +1, -1}, {-1, +1, -1}, {-1, +1, +1},
        {-1, -1, +1}, {+1, -1, +1}, {+1, -1, -1},
    };
    if (k < 1 || k > 6) throw std::invalid_argument("ordering index k must be in 1..6");
    return {table[k - 1][0], table[k - 1][1], table[k - 1][2]};
}

SpinState ordered_state(const Lattice& lattice, int k) {
    auto pat = sublattice_pattern(k);
    SpinState st;
    st.spins.resize(lattice.n_spins);
    for (int c = 0; c < lattice.n_chains(); ++c) {
        std::int8_t v = pat[lattice.sublattice[c]];
        for (int s : lattice.chains[c]) st.spins[s] = v;
    }
    return st;
}

SpinState twisted_state(const Lattice& lattice, Winding direction) {
    const int rows = lattice.grid_rows;
    if (rows % 6 != 0)
        throw std::invalid_argument("twisted states need the periodic dimension divisible by 6");
    const int m = rows / 6;
    SpinState st;
    st.spins.resize(lattice.n_spins);
    for (int c = 0; c < lattice.n_chains(); ++c) {
        int stripe = lattice.chain_grid[c].first / m;
        // With the winding spectrum's exp(+2 pi i k w / L2) transform, the
        // +1 peak comes from pseudospin phase decreasing along the rows;
        // that direction is labelled counterclockwise.
        int k = direction == Winding::ccw ? ((6 - stripe) % 6) + 1 : stripe + 1;
        std::int8_t v = sublattice_pattern(k)[lattice.sublattice[c]];
        for (int s : lattice.chains[c]) st.spins[s] = v;
    }
    return st;
}

SpinState random_state(const Lattice& lattice, Rng& rng) {
    SpinState st;
    st.spins.resize(lattice.n_spins);
    for (auto& s : st.spins) s = rng.coin() ? 1 : -1;
    return st;
}

double classical_energy(const Lattice& lattice, const SpinState& state,
                        const ClassicalParams& params) {
    double e = 0.0;
    for (size_t b = 0; b < lattice.bonds.size(); ++b)
        e += params.couplings[b] * state.spins[lattice.bonds[b].a] * state.spins[lattice.bonds[b].b];
    for (int i = 0; i < lattice.n_spins; ++i) e += params.fields[i] * state.spins[i];
    return e;
}

namespace {

// energy change of flipping every spin of one chain
double chain_flip_delta(const Lattice& lattice, const SpinState& state,
                        const ClassicalParams& params, int chain) {
    double field = 0.0;
    for (int i : lattice.chains[chain]) {
        double f = params.fields[i];
        for (auto [j, bond] : lattice.adj[i]) {
            if (lattice.chain_of_spin[j] == chain) continue;  // internal, unchanged
            f += params.couplings[bond] * state.spins[j];
        }
        field += f * state.spins[i];
    }
    return -2.0 * field;
}

}  // namespace

SpinState greedy_quench(const Lattice& lattice, const SpinState& state,
                        const ClassicalParams& params, Rng& rng) {
    SpinState out = state;
    // stage 1: majority vote inside each chain
    for (int c = 0; c < lattice.n_chains(); ++c) {
        int sum = 0;
        for (int s : lattice.chains[c]) sum += out.spins[s];
        std::int8_t v = sum > 0 ? 1 : sum < 0 ? -1 : (rng.coin() ? 1 : -1);
        for (int s : lattice.chains[c]) out.spins[s] = v;
    }
    // stage 2: greedy whole-chain descent, random visiting order
    std::vector<int> order(lattice.n_chains());
    for (int c = 0; c < lattice.n_chains(); ++c) order[c] = c;
    bool flipped = true;
    while (flipped) {
        flipped = false;
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_int(i + 1)]);
        for (int c : order) {
            if (chain_flip_delta(lattice, out, params, c) < 0.0) {
                for (int s : lattice.chains[c]) out.spins[s] = -out.spins[s];
                flipped = true;
            }
        }
    }
    return out;
}

double classical_ground_brute_force(const Lattice& lattice, const ClassicalParams& params) {
    if (lattice.n_spins > 24) throw std::invalid_argument("brute force limited to 24 spins");
    const std::uint32_t total = 1u << lattice.n_spins;
    SpinState st;
    st.spins.assign(lattice.n_spins, -1);
    double best = classical_energy(lattice, st, params);
    for (std::uint32_t z = 1; z < total; ++z) {
        for (int i = 0; i < lattice.n_spins; ++i) st.spins[i] = (z >> i) & 1 ? 1 : -1;
        best = std::min(best, classical_energy(lattice, st, params));
    }
    return best;
}

double ground_energy_reference(const Lattice& lattice, const ClassicalParams& params) {
    if (lattice.n_spins <= 20) return classical_ground_brute_force(lattice, params);
    return classical_energy(lattice, ordered_state(lattice, 1), params);
}

void write_states_text(std::ostream& os, const std::vector<SpinState>& states) {
    for (const SpinState& st : states) {
        for (std::int8_t s : st.spins) os.put(s > 0 ? '+' : '-');
        os.put('\n');
    }
}

std::vector<SpinState> read_states_text(std::istream& is) {
    std::vector<SpinState> states;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        SpinState st;
        st.spins.reserve(line.size());
        for (char ch : line) {
            if (ch == '+')
                st.spins.push_back(1);
            else if (ch == '-')
                st.spins.push_back(-1);
            else
                throw std::runtime_error("bad character in spin-state text row");
        }
        states.push_back(std::move(st));
    }
    return states;
}

namespace {

void put_u32_le(std::ostream& os, std::uint32_t v) {
    char buf[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                   static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(buf, 4);
}

std::uint32_t get_u32_le(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    return buf[0] | (buf[1] << 8) | (buf[2] << 16) | (std::uint32_t(buf[3]) << 24);
}

constexpr char kMagic[8] = {'F', 'M', 'S', 'P', 'I', 'N', '0', '1'};

}  // namespace

void write_states_binary(std::ostream& os, const std::vector<SpinState>& states) {
    os.write(kMagic, 8);
    const std::uint32_t n = states.empty() ? 0 : states.front().size();
    put_u32_le(os, n);
    put_u32_le(os, static_cast<std::uint32_t>(states.size()));
    const std::uint32_t bytes = (n + 7) / 8;
    std::vector<char> buf(bytes);
    for (const SpinState& st : states) {
        std::fill(buf.begin(), buf.end(), 0);
        for (std::uint32_t i = 0; i < n; ++i)
            if (st.spins[i] > 0) buf[i / 8] |= char(1u << (i % 8));
        os.write(buf.data(), bytes);
    }
}

std::vector<SpinState> read_states_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("bad spin-state binary magic");
    const std::uint32_t n = get_u32_le(is);
    const std::uint32_t count = get_u32_le(is);
    const std::uint32_t bytes = (n + 7) / 8;
    std::vector<SpinState> states(count);
    std::vector<char> buf(bytes);
    for (std::uint32_t k = 0; k < count; ++k) {
        is.read(buf.data(), bytes);
        if (!is) throw std::runtime_error("truncated spin-state binary");
        states[k].spins.resize(n);
        for (std::uint32_t i = 0; i < n; ++i)
            states[k].spins[i] = (buf[i / 8] >> (i % 8)) & 1 ? 1 : -1;
    }
    return states;
}

}  // namespace frustmag
