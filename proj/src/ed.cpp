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

#include "frustmag/ed.hpp"

#include <cmath>
#include <stdexcept>

#include <cblas.h>
#include <lapacke.h>

#include "frustmag/observables.hpp"

namespace frustmag {

Eigen::MatrixXd build_hamiltonian(const Lattice& lattice, const ModelParams& params) {
    const int n = lattice.n_spins;
    if (n > 14) throw std::invalid_argument("dense ED limited to 14 spins");
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<double> diag = classical_energy_per_basis_state(lattice, params.classical);
    for (std::size_t z = 0; z < dim; ++z) {
        h(z, z) = diag[z];
        for (int i = 0; i < n; ++i) h(z ^ (std::size_t{1} << i), z) = -params.gamma_over_j;
    }
    return h;
}

Spectrum diagonalize(const Eigen::MatrixXd& hamiltonian) {
    Spectrum spec;
    spec.vectors = hamiltonian;
    spec.energies.resize(hamiltonian.rows());
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L',
                              static_cast<lapack_int>(hamiltonian.rows()), spec.vectors.data(),
                              static_cast<lapack_int>(hamiltonian.rows()), spec.energies.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return spec;
}

Eigen::VectorXd thermal_weights(const Spectrum& spec, double t_over_j) {
    if (t_over_j <= 0.0) throw std::invalid_argument("temperature must be positive");
    const double e0 = spec.energies(0);
    Eigen::VectorXd w = (-(spec.energies.array() - e0) / t_over_j).exp();
    return w / w.sum();
}

Eigen::VectorXd thermal_diagonal_distribution(const Spectrum& spec, double t_over_j) {
    Eigen::VectorXd w = thermal_weights(spec, t_over_j);
    return spec.vectors.array().square().matrix() * w;
}

std::vector<double> thermal_expectations(const Spectrum& spec, double t_over_j,
                                         const std::vector<std::vector<double>>& diag_observables) {
    Eigen::VectorXd p = thermal_diagonal_distribution(spec, t_over_j);
    std::vector<double> out;
    out.reserve(diag_observables.size());
    for (const auto& obs : diag_observables) {
        if (static_cast<Eigen::Index>(obs.size()) != p.size())
            throw std::invalid_argument("observable dimension mismatch");
        double acc = 0.0;
        for (Eigen::Index z = 0; z < p.size(); ++z) acc += p(z) * obs[z];
        out.push_back(acc);
    }
    return out;
}

Eigen::MatrixXd thermal_density(const Spectrum& spec, double t_over_j) {
    Eigen::VectorXd w = thermal_weights(spec, t_over_j);
    Eigen::MatrixXd a = spec.vectors * w.array().sqrt().matrix().asDiagonal();
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd rho(n, n);
    cblas_dsyrk(CblasColMajor, CblasLower, CblasNoTrans, n, n, 1.0, a.data(), n, 0.0, rho.data(),
                n);
    rho.triangularView<Eigen::StrictlyUpper>() = rho.transpose();
    return rho;
}

Eigen::MatrixXd reduced_density(const Eigen::MatrixXd& rho, int n_spins,
                                const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
    for (int s : keep)
        if (s < 0 || s >= n_spins) throw std::invalid_argument("keep spin out of range");
    const int k = static_cast<int>(keep.size());
    std::vector<int> rest;
    for (int s = 0; s < n_spins; ++s)
        if (std::find(keep.begin(), keep.end(), s) == keep.end()) rest.push_back(s);

    const std::size_t dim_k = std::size_t{1} << k;
    const std::size_t dim_r = std::size_t{1} << rest.size();
    std::vector<std::size_t> scatter_keep(dim_k, 0), scatter_rest(dim_r, 0);
    for (std::size_t a = 0; a < dim_k; ++a)
        for (int i = 0; i < k; ++i)
            if (a >> i & 1) scatter_keep[a] |= std::size_t{1} << keep[i];
    for (std::size_t r = 0; r < dim_r; ++r)
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (r >> i & 1) scatter_rest[r] |= std::size_t{1} << rest[i];

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_k, dim_k);
    for (std::size_t a = 0; a < dim_k; ++a)
        for (std::size_t b = 0; b < dim_k; ++b) {
            double acc = 0.0;
            for (std::size_t r = 0; r < dim_r; ++r)
                acc += rho(scatter_keep[a] | scatter_rest[r], scatter_keep[b] | scatter_rest[r]);
            out(a, b) = acc;
        }
    return out;
}

double concurrence(const Eigen::MatrixXd& rho2) {
    if (rho2.rows() != 4 || rho2.cols() != 4)
        throw std::invalid_argument("concurrence needs a 4x4 density matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho2);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("concurrence input is not positive semidefinite");
    Eigen::MatrixXd yy(4, 4);
    yy << 0, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0;
    // rho is real here, so conj(rho) = rho
    Eigen::MatrixXd rho_tilde = yy * rho2 * yy;
    Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd sqrt_rho =
        es.eigenvectors() * clipped.array().sqrt().matrix().asDiagonal() * es.eigenvectors().transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(sqrt_rho * rho_tilde * sqrt_rho);
    Eigen::Vector4d lam = em.eigenvalues().cwiseMax(0.0).array().sqrt();
    // eigenvalues come out ascending
    double c = lam(3) - lam(2) - lam(1) - lam(0);
    return std::max(0.0, c);
}

double ppt_min_eigenvalue(const Eigen::MatrixXd& rho, int n_spins,
                          const std::vector<int>& block) {
    if (block.empty() || block.size() >= static_cast<std::size_t>(n_spins))
        throw std::invalid_argument("partial transpose block must be a proper nonempty subset");
    std::size_t mask = 0;
    for (int s : block) {
        if (s < 0 || s >= n_spins) throw std::invalid_argument("block spin out of range");
        mask |= std::size_t{1} << s;
    }
    const std::size_t dim = std::size_t{1} << n_spins;
    Eigen::MatrixXd pt(dim, dim);
    for (std::size_t z = 0; z < dim; ++z)
        for (std::size_t y = 0; y < dim; ++y) {
            // swap the block bits between row and column indices
            std::size_t zr = (z & ~mask) | (y & mask);
            std::size_t yr = (y & ~mask) | (z & mask);
            pt(zr, yr) = rho(z, y);
        }
    Eigen::VectorXd evals(dim);
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(dim), pt.data(),
                              static_cast<lapack_int>(dim), evals.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return evals(0);
}

std::vector<double> order_parameter_per_basis_state(const Lattice& lattice) {
    const std::size_t dim = std::size_t{1} << lattice.n_spins;
    std::vector<double> out(dim);
    SpinState st;
    st.spins.resize(lattice.n_spins);
    for (std::size_t z = 0; z < dim; ++z) {
        for (int i = 0; i < lattice.n_spins; ++i) st.spins[i] = (z >> i & 1) ? 1 : -1;
        out[z] = order_parameter(lattice, st);
    }
    return out;
}

std::vector<double> classical_energy_per_basis_state(const Lattice& lattice,
                                                     const ClassicalParams& params) {
    const std::size_t dim = std::size_t{1} << lattice.n_spins;
    std::vector<double> out(dim);
    SpinState st;
    st.spins.resize(lattice.n_spins);
    for (std::size_t z = 0; z < dim; ++z) {
        for (int i = 0; i < lattice.n_spins; ++i) st.spins[i] = (z >> i & 1) ? 1 : -1;
        out[z] = classical_energy(lattice, st, params);
    }
    return out;
}

}  // namespace frustmag
