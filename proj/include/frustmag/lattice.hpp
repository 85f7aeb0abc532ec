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

#ifndef FRUSTMAG_LATTICE_HPP
#define FRUSTMAG_LATTICE_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace frustmag {

inline constexpr double kChainCoupling = -1.8;  // FM bonds inside a chain
inline constexpr double kAfmCoupling = 1.0;     // bonds between chains

struct Bond {
    int a;
    int b;
    double j;
};

enum class FaceKind { square, octagon, triangle };

// One frustrated plaquette: its boundary (spins and bonds in cyclic order),
// the chain carrying each sublattice label, and its cell in the dual grid.
struct Face {
    FaceKind kind;
    std::vector<int> spins;
    std::vector<int> bonds;
    std::array<int, 3> chain_of_sublattice;
    int dual_row;
    int dual_col;
};

enum class Boundary { cylinder, torus };

// Immutable coupling graph.  Chains sit on an R x C triangular grid (rows
// periodic; columns open unless cols_periodic).  For the square-octagonal
// lattice each chain is a 4-spin ferromagnetic path; for the triangular
// antiferromagnet a chain is a single spin.
struct Lattice {
    std::string kind;
    int n_spins = 0;
    std::vector<Bond> bonds;
    std::vector<std::vector<int>> chains;
    std::vector<std::pair<int, int>> chain_grid;
    int grid_rows = 0;  // periodic dimension
    int grid_cols = 0;
    bool cols_periodic = false;
    std::vector<int> sublattice;  // per chain, in {0,1,2}
    std::vector<Face> plaquettes;
    int dual_rows = 0;  // L1
    int dual_cols = 0;  // L2 = grid_rows, the periodic dimension
    std::vector<int> dual_grid;  // row-major L1 x L2 -> face index
    std::vector<int> chain_of_spin;
    // per spin: (neighbour, bond index) pairs; couplings resolve through a
    // ClassicalParams so disorder realizations reuse the same graph
    std::vector<std::vector<std::pair<int, int>>> adj;

    int n_chains() const { return static_cast<int>(chains.size()); }
    int chain_at(int row, int col) const { return row * grid_cols + col; }
    int face_at(int dual_row, int dual_col) const {
        return dual_grid[dual_row * dual_cols + dual_col];
    }
};

// Cylindrical square-octagonal lattice of width L: 2L-6 rows of chains
// around the cylinder, L chains from one open boundary to the other,
// 4L(2L-6) spins.  Requires 2L-6 to be a positive multiple of 6 so that the
// six-stripe twisted states fit.
Lattice build_square_octagonal(int L);

// Triangular antiferromagnet, rows periodic, one spin per chain.
Lattice build_triangular(int rows, int cols, Boundary boundary);

// Minimal periodic square-octagonal system: three chains, 12 spins, one
// chain per sublattice.  Small enough for exact diagonalization.
Lattice build_gadget12();

struct FaceParity {
    int face;
    int afm_bonds;
    bool odd;
};

struct FrustrationReport {
    std::vector<FaceParity> faces;
    bool pass;  // true iff every face has an odd number of AFM bonds
};

FrustrationReport validate_frustration(const Lattice& lattice);

// Contracts every chain to a vertex; returns the sorted chain-level edge
// list (used to compare against the triangular lattice).
std::vector<std::pair<int, int>> chain_contraction_edges(const Lattice& lattice);

nlohmann::json lattice_to_json(const Lattice& lattice);

}  // namespace frustmag

#endif
