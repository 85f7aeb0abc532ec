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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "frustmag/ed.hpp"
#include "frustmag/observables.hpp"

using namespace frustmag;

namespace {

// bare lattice with explicit bonds, for tiny oracle systems
Lattice tiny_lattice(int n, std::vector<Bond> bonds) {
    Lattice lat;
    lat.kind = "tiny";
    lat.n_spins = n;
    lat.bonds = std::move(bonds);
    lat.chains.resize(n);
    lat.chain_of_spin.resize(n);
    for (int i = 0; i < n; ++i) {
        lat.chains[i] = {i};
        lat.chain_of_spin[i] = i;
        lat.chain_grid.push_back({i, 0});
        lat.sublattice.push_back(i % 3);
    }
    lat.adj.resize(n);
    for (int b = 0; b < static_cast<int>(lat.bonds.size()); ++b) {
        lat.adj[lat.bonds[b].a].push_back({lat.bonds[b].b, b});
        lat.adj[lat.bonds[b].b].push_back({lat.bonds[b].a, b});
    }
    return lat;
}

}  // namespace

namespace {

// the 4096-dim diagonalization costs tens of seconds; share it per gamma
const Spectrum& gadget_spectrum(double gamma) {
    static std::map<double, Spectrum> cache;
    auto it = cache.find(gamma);
    if (it == cache.end()) {
        Lattice g = build_gadget12();
        it = cache.emplace(gamma, diagonalize(build_hamiltonian(g, make_params(g, gamma, 1.0))))
                 .first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("single spin in a transverse field") {
    Lattice one = tiny_lattice(1, {});
    ModelParams params = make_params(one, 1.0, 1.0);
    Spectrum spec = diagonalize(build_hamiltonian(one, params));
    CHECK(spec.energies(0) == doctest::Approx(-1.0));
    CHECK(spec.energies(1) == doctest::Approx(1.0));
}

TEST_CASE("two spins, AFM bond, no field") {
    Lattice two = tiny_lattice(2, {{0, 1, 1.0}});
    ModelParams params = make_params(two, 0.0, 1.0);
    // gamma = 0 keeps the classical kernel; the ED matrix itself is fine
    Spectrum spec = diagonalize(build_hamiltonian(two, params));
    CHECK(spec.energies(0) == doctest::Approx(-1.0));
    CHECK(spec.energies(1) == doctest::Approx(-1.0));
    CHECK(spec.energies(2) == doctest::Approx(1.0));
    CHECK(spec.energies(3) == doctest::Approx(1.0));
}

TEST_CASE("hamiltonian diagonal equals the classical energies") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.736, 0.244);
    Eigen::MatrixXd h = build_hamiltonian(g, params);
    auto diag = classical_energy_per_basis_state(g, params.classical);
    double min_diag = diag[0];
    for (std::size_t z = 0; z < diag.size(); ++z) {
        CHECK(h(z, z) == doctest::Approx(diag[z]));
        min_diag = std::min(min_diag, diag[z]);
    }
    CHECK(min_diag == doctest::Approx(classical_ground_brute_force(g, params.classical)));
    // hermiticity
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    // too many spins rejected
    CHECK_THROWS_AS(build_hamiltonian(build_square_octagonal(6), params), std::invalid_argument);
}

TEST_CASE("thermal state sanity on the gadget") {
    Lattice g = build_gadget12();
    const Spectrum& spec = gadget_spectrum(0.736);

    Eigen::VectorXd p = thermal_diagonal_distribution(spec, 0.244);
    CHECK(p.minCoeff() >= -1e-12);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-10));

    Eigen::MatrixXd rho = thermal_density(spec, 0.244);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((rho - rho.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("infinite temperature reduces to the uniform average") {
    Lattice g = build_gadget12();
    const Spectrum& spec = gadget_spectrum(0.736);
    auto m_diag = order_parameter_per_basis_state(g);
    double uniform = 0.0;
    for (double v : m_diag) uniform += v;
    uniform /= static_cast<double>(m_diag.size());
    auto vals = thermal_expectations(spec, 1e7, {m_diag});
    CHECK(vals[0] == doctest::Approx(uniform).epsilon(1e-4));
}

TEST_CASE("gamma = 0 matches the exhaustive Boltzmann sum") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.0, 0.7);
    const Spectrum& spec = gadget_spectrum(0.0);
    auto m_diag = order_parameter_per_basis_state(g);
    auto e_diag = classical_energy_per_basis_state(g, params.classical);
    auto vals = thermal_expectations(spec, 0.7, {m_diag, e_diag});

    double z = 0.0, m_acc = 0.0, e_acc = 0.0;
    double e0 = *std::min_element(e_diag.begin(), e_diag.end());
    for (std::size_t s = 0; s < e_diag.size(); ++s) {
        double w = std::exp(-(e_diag[s] - e0) / 0.7);
        z += w;
        m_acc += w * m_diag[s];
        e_acc += w * e_diag[s];
    }
    CHECK(vals[0] == doctest::Approx(m_acc / z).epsilon(1e-8));
    CHECK(vals[1] == doctest::Approx(e_acc / z).epsilon(1e-8));
}

TEST_CASE("low temperature, small gamma approaches the classical ground manifold") {
    Lattice g = build_gadget12();
    const Spectrum& spec = gadget_spectrum(1e-3);
    auto vals = thermal_expectations(spec, 0.02, {order_parameter_per_basis_state(g)});
    // all classical ground states have m = 2/sqrt(3)
    CHECK(vals[0] == doctest::Approx(kOrderedOrderParameter).epsilon(1e-3));
}

TEST_CASE("reduced density matrices") {
    Lattice g = build_gadget12();
    const Spectrum& spec = gadget_spectrum(0.736);
    Eigen::MatrixXd rho = thermal_density(spec, 0.244);

    SUBCASE("keeping everything is the identity operation") {
        std::vector<int> all(12);
        for (int i = 0; i < 12; ++i) all[i] = i;
        Eigen::MatrixXd same = reduced_density(rho, 12, all);
        CHECK((same - rho).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("two central chain spins give a valid 4x4 state") {
        Eigen::MatrixXd rho2 = reduced_density(rho, 12, {1, 2});
        CHECK(rho2.rows() == 4);
        CHECK(rho2.trace() == doctest::Approx(1.0).epsilon(1e-10));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho2);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    SUBCASE("partial trace of a product state returns the factor") {
        // two spins: rho = rho_a (x) rho_b with spin 0 the fast index
        Eigen::MatrixXd rho_a(2, 2), rho_b(2, 2);
        rho_a << 0.7, 0.1, 0.1, 0.3;
        rho_b << 0.6, -0.2, -0.2, 0.4;
        Eigen::MatrixXd prod(4, 4);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d)
                        prod(2 * b + a, 2 * d + c) = rho_a(a, c) * rho_b(b, d);
        CHECK((reduced_density(prod, 2, {0}) - rho_a).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((reduced_density(prod, 2, {1}) - rho_b).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("invalid subsets are rejected") {
        CHECK_THROWS_AS(reduced_density(rho, 12, {}), std::invalid_argument);
        CHECK_THROWS_AS(reduced_density(rho, 12, {12}), std::invalid_argument);
    }
}

TEST_CASE("concurrence of known states") {
    // Bell state |01> - |10>
    Eigen::MatrixXd bell = Eigen::MatrixXd::Zero(4, 4);
    bell(1, 1) = 0.5;
    bell(2, 2) = 0.5;
    bell(1, 2) = -0.5;
    bell(2, 1) = -0.5;
    CHECK(concurrence(bell) == doctest::Approx(1.0));

    Eigen::MatrixXd mixed = Eigen::MatrixXd::Identity(4, 4) * 0.25;
    CHECK(concurrence(mixed) == doctest::Approx(0.0));

    // Werner state: concurrence max(0, (3p-1)/2)
    for (double p : {0.2, 0.5, 0.8}) {
        Eigen::MatrixXd werner = p * bell + (1.0 - p) * mixed;
        CHECK(concurrence(werner) == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)));
    }

    CHECK_THROWS_AS(concurrence(Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("ppt witness on product and entangled states") {
    // product of two 4-dim thermal-ish factors over 4 spins: PPT holds
    Eigen::MatrixXd rho_a(4, 4), rho_b(4, 4);
    rho_a.setZero();
    rho_b.setZero();
    rho_a.diagonal() << 0.4, 0.3, 0.2, 0.1;
    rho_b.diagonal() << 0.25, 0.25, 0.25, 0.25;
    rho_a(0, 3) = rho_a(3, 0) = 0.05;
    Eigen::MatrixXd prod(16, 16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                    prod(4 * b + a, 4 * d + c) = rho_a(a, c) * rho_b(b, d);
    CHECK(ppt_min_eigenvalue(prod, 4, {0, 1}) > -1e-10);

    // Bell pair across the cut: negative partial transpose
    Eigen::MatrixXd bell = Eigen::MatrixXd::Zero(4, 4);
    bell(0, 0) = bell(3, 3) = bell(0, 3) = bell(3, 0) = 0.5;
    CHECK(ppt_min_eigenvalue(bell, 2, {0}) == doctest::Approx(-0.5));
}

TEST_CASE("spectrum is invariant under relabeling the gadget chains") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.5, 0.3);
    Spectrum a = diagonalize(build_hamiltonian(g, params));

    // cyclic chain permutation: spin i of chain n -> spin i of chain n+1
    Lattice perm = g;
    for (Bond& b : perm.bonds) {
        b.a = (b.a + 4) % 12;
        b.b = (b.b + 4) % 12;
        if (b.a > b.b) std::swap(b.a, b.b);
    }
    ModelParams params_perm = make_params(perm, 0.5, 0.3);
    Spectrum b = diagonalize(build_hamiltonian(perm, params_perm));
    for (int n = 0; n < 16; ++n) CHECK(a.energies(n) == doctest::Approx(b.energies(n)).epsilon(1e-9));
}

TEST_CASE("entanglement witnesses behave on the gadget") {
    Lattice g = build_gadget12();
    const Spectrum& spec = gadget_spectrum(0.736);
    Eigen::MatrixXd rho_cold = thermal_density(spec, 0.244);
    Eigen::MatrixXd rho_warm = thermal_density(spec, 0.6);

    double c_cold = concurrence(reduced_density(rho_cold, 12, {1, 2}));
    double c_warm = concurrence(reduced_density(rho_warm, 12, {1, 2}));
    CHECK(c_cold > 0.0);
    CHECK(c_cold > c_warm);

    double neg_cold = ppt_min_eigenvalue(rho_cold, 12, {0, 1, 2, 3});
    double neg_warm = ppt_min_eigenvalue(rho_warm, 12, {0, 1, 2, 3});
    CHECK(neg_cold < 0.0);
    CHECK(std::abs(neg_cold) > std::abs(neg_warm));
}
