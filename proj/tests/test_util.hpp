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

#ifndef FRUSTMAG_TEST_UTIL_HPP
#define FRUSTMAG_TEST_UTIL_HPP

#include <vector>

#include "frustmag/lattice.hpp"

namespace frustmag::testutil {

// bare lattice with explicit bonds for tiny oracle systems; every spin is
// its own chain unless chain groups are given
inline Lattice tiny_lattice(int n, std::vector<Bond> bonds,
                            std::vector<std::vector<int>> chains = {}) {
    Lattice lat;
    lat.kind = "tiny";
    lat.n_spins = n;
    lat.bonds = std::move(bonds);
    if (chains.empty())
        for (int i = 0; i < n; ++i) chains.push_back({i});
    lat.chains = std::move(chains);
    lat.chain_of_spin.assign(n, -1);
    for (int c = 0; c < lat.n_chains(); ++c)
        for (int s : lat.chains[c]) lat.chain_of_spin[s] = c;
    for (int c = 0; c < lat.n_chains(); ++c) {
        lat.chain_grid.push_back({c, 0});
        lat.sublattice.push_back(c % 3);
    }
    lat.grid_rows = lat.n_chains();
    lat.grid_cols = 1;
    lat.adj.resize(n);
    for (int b = 0; b < static_cast<int>(lat.bonds.size()); ++b) {
        lat.adj[lat.bonds[b].a].push_back({lat.bonds[b].b, b});
        lat.adj[lat.bonds[b].b].push_back({lat.bonds[b].a, b});
    }
    return lat;
}

}  // namespace frustmag::testutil

#endif
