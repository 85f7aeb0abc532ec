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

#ifndef FRUSTMAG_ED_HPP
#define FRUSTMAG_ED_HPP

#include <vector>

#include <Eigen/Dense>

#include "frustmag/lattice.hpp"
#include "frustmag/model.hpp"

namespace frustmag {

// Dense exact-diagonalization oracle for systems of up to 14 spins.
// Basis: sigma^z product states; spin i is bit i (least significant bit is
// spin 0); a set bit means sz = +1.  The off-diagonal part is -Gamma on
// every single-bit flip, so the Hamiltonian is real symmetric.

Eigen::MatrixXd build_hamiltonian(const Lattice& lattice, const ModelParams& params);

struct Spectrum {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXd vectors;   // column n = eigenvector n
};

Spectrum diagonalize(const Eigen::MatrixXd& hamiltonian);

// Boltzmann weights exp(-E_n/T)/Z, computed against the ground state so
// large betas stay finite.
Eigen::VectorXd thermal_weights(const Spectrum& spec, double t_over_j);

// diag(rho) in the sigma^z basis: probability of each classical state
Eigen::VectorXd thermal_diagonal_distribution(const Spectrum& spec, double t_over_j);

// Tr[rho A] for observables diagonal in the sigma^z basis, given as value
// per basis state.
std::vector<double> thermal_expectations(const Spectrum& spec, double t_over_j,
                                         const std::vector<std::vector<double>>& diag_observables);

// full density matrix V diag(w) V^T
Eigen::MatrixXd thermal_density(const Spectrum& spec, double t_over_j);

// partial trace keeping the listed spins (new spin k = old keep[k])
Eigen::MatrixXd reduced_density(const Eigen::MatrixXd& rho, int n_spins,
                                const std::vector<int>& keep);

// Wootters concurrence of a two-spin density matrix (4x4, real)
double concurrence(const Eigen::MatrixXd& rho2);

// Smallest eigenvalue of rho after partial transposition of the given spin
// block; a negative value witnesses entanglement between the block and the
// rest (Peres-Horodecki).
double ppt_min_eigenvalue(const Eigen::MatrixXd& rho, int n_spins,
                          const std::vector<int>& block);

// m(z) for every basis state: the diagonal observable used throughout the
// oracle comparisons
std::vector<double> order_parameter_per_basis_state(const Lattice& lattice);

// classical energy of every basis state under the given couplings
std::vector<double> classical_energy_per_basis_state(const Lattice& lattice,
                                                     const ClassicalParams& params);

}  // namespace frustmag

#endif
