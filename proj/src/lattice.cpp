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

/*
   Lattice generators for the fully-frustrated square-octagonal cylinder,
   its triangular contraction, and the 12-spin periodic gadget.

   Chains live on a triangular grid with displacement vectors
       d1 = ( 0,+1)   coupling chain spin 0 -> neighbour spin 2
       d2 = (+1, 0)   coupling chain spin 3 -> neighbour spin 1
       d3 = (+1,-1)   coupling chain spin 3 -> neighbour spin 0
   which makes (row - col) mod 3 a proper three-colouring.  Every square
   face carries 3 AFM bonds and 1 FM bond, every octagonal face 3 AFM and
   5 FM, so all plaquettes are frustrated.

   On cylinders the vertical (d2) AFM bonds in the two open-boundary
   columns have strength +1/2.  Each of those bonds borders only one
   plaquette instead of two; halving them makes the lattice energy exactly
   half the sum of plaquette energies, which keeps the six ordered states
   and the two twisted (wound pseudospin) states degenerate ground states.
*/

#include "frustmag/lattice.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace frustmag {

namespace {

int mod3(int x) { return ((x % 3) + 3) % 3; }

struct Builder {
    Lattice lat;
    // dedup map so adjacency and face bond lookups can reuse bond indices
    std::map<std::pair<int, int>, int> bond_index;

    int add_bond(int a, int b, double j) {
        if (a > b) std::swap(a, b);
        auto [it, fresh] = bond_index.try_emplace({a, b}, static_cast<int>(lat.bonds.size()));
        if (fresh) lat.bonds.push_back({a, b, j});
        return it->second;
    }

    int bond_of(int a, int b) const {
        if (a > b) std::swap(a, b);
        auto it = bond_index.find({a, b});
        if (it == bond_index.end()) throw std::logic_error("missing bond in face cycle");
        return it->second;
    }

    void finish() {
        lat.chain_of_spin.assign(lat.n_spins, -1);
        for (int c = 0; c < lat.n_chains(); ++c)
            for (int s : lat.chains[c]) lat.chain_of_spin[s] = c;
        lat.adj.assign(lat.n_spins, {});
        for (int b = 0; b < static_cast<int>(lat.bonds.size()); ++b) {
            lat.adj[lat.bonds[b].a].push_back({lat.bonds[b].b, b});
            lat.adj[lat.bonds[b].b].push_back({lat.bonds[b].a, b});
        }
    }
};

// Cyclic face boundaries shared by the periodic gadget and the cylinder.
// Chains a, b, c play the roles A, B=A+d1, C=A+d2 (octagon) or
// A, C=A+d2, D=A+d3 (square).
void push_octagon(Builder& bld, int a, int b, int c, int dual_row, int dual_col,
                  const std::vector<int>& sub) {
    const auto& A = bld.lat.chains[a];
    const auto& B = bld.lat.chains[b];
    const auto& C = bld.lat.chains[c];
    Face f;
    f.kind = FaceKind::octagon;
    f.spins = {A[0], B[2], B[3], C[0], C[1], A[3], A[2], A[1]};
    for (size_t i = 0; i < f.spins.size(); ++i)
        f.bonds.push_back(bld.bond_of(f.spins[i], f.spins[(i + 1) % f.spins.size()]));
    f.chain_of_sublattice = {};
    f.chain_of_sublattice[sub[a]] = a;
    f.chain_of_sublattice[sub[b]] = b;
    f.chain_of_sublattice[sub[c]] = c;
    f.dual_row = dual_row;
    f.dual_col = dual_col;
    bld.lat.plaquettes.push_back(std::move(f));
}

void push_square(Builder& bld, int a, int c, int d, int dual_row, int dual_col,
                 const std::vector<int>& sub) {
    const auto& A = bld.lat.chains[a];
    const auto& C = bld.lat.chains[c];
    const auto& D = bld.lat.chains[d];
    Face f;
    f.kind = FaceKind::square;
    f.spins = {A[3], C[1], C[2], D[0]};
    for (size_t i = 0; i < f.spins.size(); ++i)
        f.bonds.push_back(bld.bond_of(f.spins[i], f.spins[(i + 1) % f.spins.size()]));
    f.chain_of_sublattice = {};
    f.chain_of_sublattice[sub[a]] = a;
    f.chain_of_sublattice[sub[c]] = c;
    f.chain_of_sublattice[sub[d]] = d;
    f.dual_row = dual_row;
    f.dual_col = dual_col;
    bld.lat.plaquettes.push_back(std::move(f));
}

void push_triangle(Builder& bld, int a, int b, int c, int dual_row, int dual_col,
                   const std::vector<int>& sub) {
    Face f;
    f.kind = FaceKind::triangle;
    f.spins = {bld.lat.chains[a][0], bld.lat.chains[b][0], bld.lat.chains[c][0]};
    for (size_t i = 0; i < 3; ++i)
        f.bonds.push_back(bld.bond_of(f.spins[i], f.spins[(i + 1) % 3]));
    f.chain_of_sublattice = {};
    f.chain_of_sublattice[sub[a]] = a;
    f.chain_of_sublattice[sub[b]] = b;
    f.chain_of_sublattice[sub[c]] = c;
    f.dual_row = dual_row;
    f.dual_col = dual_col;
    bld.lat.plaquettes.push_back(std::move(f));
}

}  // namespace

Lattice build_square_octagonal(int L) {
    const int R = 2 * L - 6;
    if (L < 4 || R <= 0 || R % 6 != 0)
        throw std::invalid_argument("square-octagonal width L must satisfy 2L-6 > 0 and 2L-6 divisible by 6");
    const int C = L;

    Builder bld;
    Lattice& lat = bld.lat;
    lat.kind = "square_octagonal";
    lat.grid_rows = R;
    lat.grid_cols = C;
    lat.cols_periodic = false;
    lat.n_spins = 4 * R * C;

    lat.chains.resize(R * C);
    lat.chain_grid.resize(R * C);
    lat.sublattice.resize(R * C);
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            int n = r * C + c;
            lat.chains[n] = {4 * n, 4 * n + 1, 4 * n + 2, 4 * n + 3};
            lat.chain_grid[n] = {r, c};
            lat.sublattice[n] = mod3(r - c);
        }

    // chain-internal FM paths
    for (int n = 0; n < R * C; ++n)
        for (int k = 0; k < 3; ++k) bld.add_bond(4 * n + k, 4 * n + k + 1, kChainCoupling);

    // inter-chain AFM bonds; vertical bonds in the boundary columns at half
    // strength (see file comment)
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            int n = lat.chain_at(r, c);
            if (c + 1 < C) {  // d1
                int m = lat.chain_at(r, c + 1);
                bld.add_bond(lat.chains[n][0], lat.chains[m][2], kAfmCoupling);
            }
            {  // d2
                int m = lat.chain_at((r + 1) % R, c);
                double j = (c == 0 || c == C - 1) ? kAfmCoupling / 2 : kAfmCoupling;
                bld.add_bond(lat.chains[n][3], lat.chains[m][1], j);
            }
            if (c - 1 >= 0) {  // d3
                int m = lat.chain_at((r + 1) % R, c - 1);
                bld.add_bond(lat.chains[n][3], lat.chains[m][0], kAfmCoupling);
            }
        }

    // faces: octagon O(r,c) on chains {(r,c),(r,c+1),(r+1,c)} and square
    // S(r,c) on {(r,c-1+1)...}; dual rows alternate octagon, square
    lat.dual_rows = 2 * (C - 1);
    lat.dual_cols = R;
    lat.dual_grid.assign(lat.dual_rows * lat.dual_cols, -1);
    for (int c = 0; c + 1 < C; ++c)
        for (int r = 0; r < R; ++r) {
            int face = static_cast<int>(lat.plaquettes.size());
            push_octagon(bld, lat.chain_at(r, c), lat.chain_at(r, c + 1),
                         lat.chain_at((r + 1) % R, c), 2 * c, r, lat.sublattice);
            lat.dual_grid[(2 * c) * lat.dual_cols + r] = face;

            face = static_cast<int>(lat.plaquettes.size());
            push_square(bld, lat.chain_at(r, c + 1), lat.chain_at((r + 1) % R, c + 1),
                        lat.chain_at((r + 1) % R, c), 2 * c + 1, r, lat.sublattice);
            lat.dual_grid[(2 * c + 1) * lat.dual_cols + r] = face;
        }

    bld.finish();
    return bld.lat;
}

Lattice build_triangular(int rows, int cols, Boundary boundary) {
    if (rows < 3 || cols < 3) throw std::invalid_argument("triangular lattice needs rows, cols >= 3");

    Builder bld;
    Lattice& lat = bld.lat;
    lat.kind = "triangular";
    lat.grid_rows = rows;
    lat.grid_cols = cols;
    lat.cols_periodic = (boundary == Boundary::torus);
    lat.n_spins = rows * cols;

    lat.chains.resize(rows * cols);
    lat.chain_grid.resize(rows * cols);
    lat.sublattice.resize(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int n = r * cols + c;
            lat.chains[n] = {n};
            lat.chain_grid[n] = {r, c};
            lat.sublattice[n] = mod3(r - c);
        }

    const bool torus = lat.cols_periodic;
    auto wrap = [&](int r, int c) { return lat.chain_at((r + rows) % rows, (c + cols) % cols); };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int n = lat.chain_at(r, c);
            if (c + 1 < cols || torus)  // d1
                bld.add_bond(n, wrap(r, c + 1), kAfmCoupling);
            {  // d2
                double j = (!torus && (c == 0 || c == cols - 1)) ? kAfmCoupling / 2 : kAfmCoupling;
                bld.add_bond(n, wrap(r + 1, c), j);
            }
            if (c - 1 >= 0 || torus)  // d3
                bld.add_bond(n, wrap(r + 1, c - 1), kAfmCoupling);
        }

    lat.dual_rows = torus ? 2 * cols : 2 * (cols - 1);
    lat.dual_cols = rows;
    lat.dual_grid.assign(lat.dual_rows * lat.dual_cols, -1);
    const int c_max = torus ? cols : cols - 1;
    for (int c = 0; c < c_max; ++c)
        for (int r = 0; r < rows; ++r) {
            int face = static_cast<int>(lat.plaquettes.size());
            // up-triangle {(r,c),(r,c+1),(r+1,c)}
            push_triangle(bld, lat.chain_at(r, c), wrap(r, c + 1), wrap(r + 1, c), 2 * c, r,
                          lat.sublattice);
            lat.dual_grid[(2 * c) * lat.dual_cols + r] = face;

            face = static_cast<int>(lat.plaquettes.size());
            // down-triangle {(r,c+1),(r+1,c+1),(r+1,c)}
            push_triangle(bld, wrap(r, c + 1), wrap(r + 1, c + 1), wrap(r + 1, c), 2 * c + 1, r,
                          lat.sublattice);
            lat.dual_grid[(2 * c + 1) * lat.dual_cols + r] = face;
        }

    bld.finish();
    return bld.lat;
}

Lattice build_gadget12() {
    Builder bld;
    Lattice& lat = bld.lat;
    lat.kind = "gadget12";
    lat.grid_rows = 3;
    lat.grid_cols = 1;
    lat.cols_periodic = true;
    lat.n_spins = 12;

    lat.chains.resize(3);
    lat.chain_grid.resize(3);
    lat.sublattice.resize(3);
    for (int n = 0; n < 3; ++n) {
        lat.chains[n] = {4 * n, 4 * n + 1, 4 * n + 2, 4 * n + 3};
        lat.chain_grid[n] = {n, 0};
        lat.sublattice[n] = n;
    }
    for (int n = 0; n < 3; ++n)
        for (int k = 0; k < 3; ++k) bld.add_bond(4 * n + k, 4 * n + k + 1, kChainCoupling);

    // quotient of the bulk wiring onto three chains: d1 and d3 advance the
    // sublattice by 2, d2 by 1
    for (int n = 0; n < 3; ++n) {
        int n1 = (n + 1) % 3, n2 = (n + 2) % 3;
        bld.add_bond(lat.chains[n][0], lat.chains[n2][2], kAfmCoupling);  // d1
        bld.add_bond(lat.chains[n][3], lat.chains[n1][1], kAfmCoupling);  // d2
        bld.add_bond(lat.chains[n][3], lat.chains[n2][0], kAfmCoupling);  // d3
    }

    lat.dual_rows = 2;
    lat.dual_cols = 3;
    lat.dual_grid.assign(6, -1);
    for (int n = 0; n < 3; ++n) {
        int n1 = (n + 1) % 3, n2 = (n + 2) % 3;
        int face = static_cast<int>(lat.plaquettes.size());
        push_octagon(bld, n, n2, n1, 0, n, lat.sublattice);
        lat.dual_grid[0 * 3 + n] = face;
        face = static_cast<int>(lat.plaquettes.size());
        push_square(bld, n, n1, n2, 1, n, lat.sublattice);
        lat.dual_grid[1 * 3 + n] = face;
    }

    bld.finish();
    return bld.lat;
}

FrustrationReport validate_frustration(const Lattice& lattice) {
    FrustrationReport rep;
    rep.pass = true;
    rep.faces.reserve(lattice.plaquettes.size());
    for (size_t f = 0; f < lattice.plaquettes.size(); ++f) {
        int afm = 0;
        for (int b : lattice.plaquettes[f].bonds)
            if (lattice.bonds[b].j > 0) ++afm;
        bool odd = (afm % 2) == 1;
        rep.faces.push_back({static_cast<int>(f), afm, odd});
        if (!odd) rep.pass = false;
    }
    return rep;
}

std::vector<std::pair<int, int>> chain_contraction_edges(const Lattice& lattice) {
    std::vector<std::pair<int, int>> edges;
    for (const Bond& b : lattice.bonds) {
        int ca = lattice.chain_of_spin[b.a];
        int cb = lattice.chain_of_spin[b.b];
        if (ca == cb) continue;
        edges.emplace_back(std::min(ca, cb), std::max(ca, cb));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

nlohmann::json lattice_to_json(const Lattice& lattice) {
    nlohmann::json j;
    j["kind"] = lattice.kind;
    j["n_spins"] = lattice.n_spins;
    j["grid"] = {{"rows", lattice.grid_rows},
                 {"cols", lattice.grid_cols},
                 {"cols_periodic", lattice.cols_periodic}};
    auto& bonds = j["bonds"] = nlohmann::json::array();
    for (const Bond& b : lattice.bonds) bonds.push_back({b.a, b.b, b.j});
    j["chains"] = lattice.chains;
    j["sublattice"] = lattice.sublattice;
    auto& faces = j["plaquettes"] = nlohmann::json::array();
    for (const Face& f : lattice.plaquettes) {
        const char* kind = f.kind == FaceKind::square    ? "square"
                           : f.kind == FaceKind::octagon ? "octagon"
                                                         : "triangle";
        faces.push_back({{"kind", kind},
                         {"spins", f.spins},
                         {"bonds", f.bonds},
                         {"chain_of_sublattice", f.chain_of_sublattice},
                         {"dual", {f.dual_row, f.dual_col}}});
    }
    j["dual_grid"] = {{"rows", lattice.dual_rows},
                      {"cols", lattice.dual_cols},
                      {"faces", lattice.dual_grid}};
    return j;
}

}  // namespace frustmag
