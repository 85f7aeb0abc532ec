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
#include <numeric>
#include <sstream>

#include "frustmag/ed.hpp"
#include "frustmag/observables.hpp"
#include "frustmag/stats.hpp"
#include "frustmag/worldline.hpp"
#include "test_util.hpp"

using namespace frustmag;
using testutil::tiny_lattice;

namespace {

void check_well_formed(const WorldlineConfig& config) {
    for (const Worldline& l : config.lines) {
        REQUIRE((l.s0 == 1 || l.s0 == -1));
        REQUIRE(l.kinks.size() % 2 == 0);
        for (std::size_t k = 0; k < l.kinks.size(); ++k) {
            REQUIRE(l.kinks[k] >= 0.0);
            REQUIRE(l.kinks[k] < 1.0);
            if (k > 0) REQUIRE(l.kinks[k] > l.kinks[k - 1]);
        }
    }
}

// mean of m over replicas, each averaging every sweep after burn-in
struct MonteCarloEstimate {
    double mean;
    double stderr_;
};

template <typename Measure>
MonteCarloEstimate replica_estimate(const Lattice& lat, const ModelParams& params,
                                    CtEngine::Update update, int n_replicas, int n_sweeps,
                                    std::uint64_t seed, Measure&& measure) {
    std::vector<double> means;
    for (int r = 0; r < n_replicas; ++r) {
        Rng rng(derive_seed(seed, r));
        CtEngine engine(lat, params, update);
        SpinState init = random_state(lat, rng);
        WorldlineConfig config = ct_init(lat, init);
        double acc = 0.0;
        int count = 0;
        for (int t = 1; t <= n_sweeps; ++t) {
            engine.sweep(config, rng);
            if (t > n_sweeps / 2) {
                acc += measure(project_classical(config));
                ++count;
            }
        }
        means.push_back(acc / count);
    }
    return {mean(means), stderr_of_mean(means)};
}

}  // namespace

TEST_CASE("ct_init round trip and classical energy at Gamma = 0") {
    Lattice g = build_gadget12();
    Rng rng(1);
    SpinState s = random_state(g, rng);
    WorldlineConfig config = ct_init(g, s);
    CHECK(config.total_kinks() == 0);
    CHECK(project_classical(config).spins == s.spins);
    ClassicalParams p = nominal_params(g);
    CHECK(classical_energy(g, project_classical(config), p) ==
          doctest::Approx(classical_energy(g, s, p)));
}

TEST_CASE("sweeps preserve worldline well-formedness") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.736, 0.244);
    Rng rng(2);
    CtEngine chain(g, params, CtEngine::Update::chain);
    CtEngine single(g, params, CtEngine::Update::single);
    WorldlineConfig config = ct_init(g, random_state(g, rng));
    for (int t = 0; t < 300; ++t) {
        chain.sweep(config, rng);
        if (t % 2) single.sweep(config, rng);
        if (t % 10 == 0) check_well_formed(config);
    }
    check_well_formed(config);
    CHECK(config.total_kinks() > 0);
}

TEST_CASE("identical seeds give identical trajectories") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.736, 0.3);
    auto run = [&](std::uint64_t seed) {
        Rng rng(seed);
        CtEngine engine(g, params, CtEngine::Update::chain);
        WorldlineConfig config = ct_init(g, ordered_state(g, 1));
        for (int t = 0; t < 200; ++t) engine.sweep(config, rng);
        return config;
    };
    WorldlineConfig a = run(99), b = run(99), c = run(100);
    bool equal_ab = true, equal_ac = true;
    for (int i = 0; i < g.n_spins; ++i) {
        equal_ab &= a.lines[i].s0 == b.lines[i].s0 && a.lines[i].kinks == b.lines[i].kinks;
        equal_ac &= a.lines[i].s0 == c.lines[i].s0 && a.lines[i].kinks == c.lines[i].kinks;
    }
    CHECK(equal_ab);
    CHECK_FALSE(equal_ac);
}

TEST_CASE("free spin reproduces <sigma^x> = tanh(beta Gamma)") {
    Lattice one = tiny_lattice(1, {});
    const double gamma = 0.8, t_over_j = 0.5;
    ModelParams params = make_params(one, gamma, t_over_j);
    CtEngine engine(one, params, CtEngine::Update::single);
    Rng rng(3);
    WorldlineConfig config = ct_init(one, SpinState{{1}});
    const double beta_gamma = gamma / t_over_j;

    const int n_sweeps = 60000;
    std::vector<double> kink_counts;
    for (int t = 0; t < n_sweeps; ++t) {
        engine.sweep(config, rng);
        if (t > n_sweeps / 10) kink_counts.push_back(static_cast<double>(config.lines[0].kinks.size()));
    }
    // <n_kinks> = beta Gamma tanh(beta Gamma) for a free spin
    const double expected = beta_gamma * std::tanh(beta_gamma);
    const double got = mean(kink_counts);
    const double se = stderr_of_mean(kink_counts);
    CHECK(std::abs(got - expected) < std::max(5.0 * se, 0.02));
    // the sigma^x estimator itself
    CHECK(got / beta_gamma == doctest::Approx(std::tanh(beta_gamma)).epsilon(0.02));
}

TEST_CASE("two-spin system matches the exact diagonal distribution") {
    Lattice two = tiny_lattice(2, {{0, 1, 1.0}});
    ModelParams params = make_params(two, 0.7, 0.5);
    Spectrum spec = diagonalize(build_hamiltonian(two, params));
    Eigen::VectorXd exact = thermal_diagonal_distribution(spec, 0.5);

    CtEngine engine(two, params, CtEngine::Update::single);
    Rng rng(5);
    WorldlineConfig config = ct_init(two, SpinState{{1, 1}});
    std::array<long, 4> counts{};
    const int n_sweeps = 80000;
    for (int t = 0; t < n_sweeps; ++t) {
        engine.sweep(config, rng);
        if (t < 100) continue;
        SpinState s = project_classical(config);
        int z = (s.spins[0] > 0 ? 1 : 0) | (s.spins[1] > 0 ? 2 : 0);
        ++counts[z];
    }
    const double n = static_cast<double>(n_sweeps - 100);
    for (int z = 0; z < 4; ++z)
        CHECK(counts[z] / n == doctest::Approx(exact(z)).epsilon(0.08));
}

TEST_CASE("gadget equilibrium matches exact diagonalization") {
    Lattice g = build_gadget12();
    auto m_diag = order_parameter_per_basis_state(g);
    auto e_diag = classical_energy_per_basis_state(g, nominal_params(g));

    SUBCASE("chain updates at the cold experimental point") {
        ModelParams params = make_params(g, 0.736, 0.244);
        Spectrum spec = diagonalize(build_hamiltonian(g, params));
        auto exact = thermal_expectations(spec, 0.244, {m_diag, e_diag});

        auto m_est = replica_estimate(g, params, CtEngine::Update::chain, 48, 2048, 700,
                                      [&](const SpinState& s) { return order_parameter(g, s); });
        CHECK(std::abs(m_est.mean - exact[0]) < std::max(4.0 * m_est.stderr_, 0.01));

        auto e_est = replica_estimate(
            g, params, CtEngine::Update::chain, 48, 2048, 701,
            [&](const SpinState& s) { return classical_energy(g, s, params.classical); });
        CHECK(std::abs(e_est.mean - exact[1]) < std::max(4.0 * e_est.stderr_, 0.05));
    }

    SUBCASE("single-spin updates at a warmer point") {
        ModelParams params = make_params(g, 0.736, 0.44);
        Spectrum spec = diagonalize(build_hamiltonian(g, params));
        auto exact = thermal_expectations(spec, 0.44, {m_diag});
        auto m_est = replica_estimate(g, params, CtEngine::Update::single, 48, 2048, 702,
                                      [&](const SpinState& s) { return order_parameter(g, s); });
        CHECK(std::abs(m_est.mean - exact[0]) < std::max(4.0 * m_est.stderr_, 0.01));
    }
}

TEST_CASE("Gamma -> 0 reduces to classical Gibbs sampling") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.0, 0.7);
    auto m_diag = order_parameter_per_basis_state(g);
    auto e_diag = classical_energy_per_basis_state(g, params.classical);
    double z = 0.0, m_exact = 0.0;
    double e0 = *std::min_element(e_diag.begin(), e_diag.end());
    for (std::size_t s = 0; s < e_diag.size(); ++s) {
        double w = std::exp(-(e_diag[s] - e0) / 0.7);
        z += w;
        m_exact += w * m_diag[s];
    }
    m_exact /= z;

    auto est = replica_estimate(g, params, CtEngine::Update::chain, 32, 1024, 800,
                                [&](const SpinState& s) { return order_parameter(g, s); });
    CHECK(std::abs(est.mean - m_exact) < std::max(4.0 * est.stderr_, 0.01));
}

TEST_CASE("projected distribution matches the ED histogram") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.736, 0.44);
    Spectrum spec = diagonalize(build_hamiltonian(g, params));
    Eigen::VectorXd diag = thermal_diagonal_distribution(spec, 0.44);
    auto m_diag = order_parameter_per_basis_state(g);

    const int bins = 6;
    std::vector<double> exact_hist(bins, 0.0);
    for (int zz = 0; zz < 4096; ++zz) {
        int b = std::min(bins - 1, static_cast<int>(m_diag[zz] / kOrderedOrderParameter * bins));
        exact_hist[b] += diag(zz);
    }

    CtEngine engine(g, params, CtEngine::Update::chain);
    Rng rng(7);
    WorldlineConfig config = ct_init(g, random_state(g, rng));
    std::vector<double> got(bins, 0.0);
    const int n_sweeps = 40000;
    int counted = 0;
    for (int t = 0; t < n_sweeps; ++t) {
        engine.sweep(config, rng);
        if (t < 200) continue;
        double m = order_parameter(g, project_classical(config));
        int b = std::min(bins - 1, static_cast<int>(m / kOrderedOrderParameter * bins));
        got[b] += 1.0;
        ++counted;
    }
    for (int b = 0; b < bins; ++b) CHECK(std::abs(got[b] / counted - exact_hist[b]) < 0.02);
}

TEST_CASE("run_chain records on schedule") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.5, 0.5);
    CtEngine engine(g, params, CtEngine::Update::chain);
    Rng rng(11);
    WorldlineConfig config = ct_init(g, ordered_state(g, 1));

    std::vector<std::int64_t> seen;
    auto observer = [&](std::int64_t t, const SpinState& s) {
        seen.push_back(t);
        CHECK(s.size() == 12);
    };
    SUBCASE("zero sweeps yields only the initial observation") {
        run_chain(engine, config, 0, {}, observer, rng);
        CHECK(seen == std::vector<std::int64_t>{0});
    }
    SUBCASE("log2 schedule") {
        run_chain(engine, config, 20, log2_schedule(20), observer, rng);
        CHECK(seen == std::vector<std::int64_t>{0, 1, 2, 4, 8, 16, 20});
    }
}

TEST_CASE("quench cycles") {
    Lattice g = build_gadget12();
    SUBCASE("t_p = t_q = 0 degenerates to projection") {
        ModelParams params = make_params(g, 0.736, 0.244);
        CtEngine engine(g, params, CtEngine::Update::chain);
        Rng rng(13);
        SpinState init = ordered_state(g, 2);
        WorldlineConfig config = ct_init(g, init);
        SpinState out = gamma_quench_cycle(engine, config, 0, 0, rng);
        CHECK(out.spins == init.spins);
        CHECK(config.total_kinks() == 0);
        SpinState out2 = full_quench_cycle(engine, config, 0, 0, rng);
        CHECK(out2.spins == init.spins);
    }
    SUBCASE("Gamma* = 0 cycles sample the classical Gibbs distribution") {
        ModelParams params = make_params(g, 0.0, 0.7);
        auto m_diag = order_parameter_per_basis_state(g);
        auto e_diag = classical_energy_per_basis_state(g, params.classical);
        double z = 0.0, m_exact = 0.0;
        double e0 = *std::min_element(e_diag.begin(), e_diag.end());
        for (std::size_t s = 0; s < e_diag.size(); ++s) {
            double w = std::exp(-(e_diag[s] - e0) / 0.7);
            z += w;
            m_exact += w * m_diag[s];
        }
        m_exact /= z;

        std::vector<double> means;
        for (int r = 0; r < 16; ++r) {
            Rng rng(derive_seed(1300, r));
            CtEngine engine(g, params, CtEngine::Update::chain);
            WorldlineConfig config = ct_init(g, random_state(g, rng));
            double acc = 0.0;
            int count = 0;
            for (int cycle = 0; cycle < 600; ++cycle) {
                SpinState s = gamma_quench_cycle(engine, config, 1, 2, rng);
                if (cycle > 100) {
                    acc += order_parameter(g, s);
                    ++count;
                }
            }
            means.push_back(acc / count);
        }
        CHECK(std::abs(mean(means) - m_exact) < std::max(4.0 * stderr_of_mean(means), 0.01));
    }
    SUBCASE("full quench cycle produces frozen classical output") {
        ModelParams params = make_params(g, 0.736, 0.3);
        CtEngine engine(g, params, CtEngine::Update::chain);
        Rng rng(17);
        WorldlineConfig config = ct_init(g, ordered_state(g, 3));
        for (int cycle = 0; cycle < 10; ++cycle) {
            SpinState s = full_quench_cycle(engine, config, 5, 3, rng);
            CHECK(s.size() == 12);
            CHECK(config.total_kinks() == 0);
        }
    }
}

TEST_CASE("isolated chain mixes under zero external field") {
    Lattice chain = tiny_lattice(
        4, {{0, 1, -1.8}, {1, 2, -1.8}, {2, 3, -1.8}}, {{0, 1, 2, 3}});
    ModelParams params = make_params(chain, 0.6, 0.9);
    CtEngine engine(chain, params, CtEngine::Update::chain);
    Rng rng(19);
    WorldlineConfig config = ct_init(chain, SpinState{{1, 1, 1, 1}});
    std::vector<double> mags;
    for (int t = 0; t < 20000; ++t) {
        engine.sweep(config, rng);
        SpinState s = project_classical(config);
        mags.push_back(std::accumulate(s.spins.begin(), s.spins.end(), 0.0) / 4.0);
    }
    CHECK(std::abs(mean(mags)) < 0.05);
    // magnetization decorrelates within a few sweeps
    double c0 = 0.0, c5 = 0.0;
    for (std::size_t t = 0; t + 5 < mags.size(); ++t) {
        c0 += mags[t] * mags[t];
        c5 += mags[t] * mags[t + 5];
    }
    CHECK(std::abs(c5) < 0.5 * c0);
    // kinks do appear and vanish
    CHECK(config.total_kinks() >= 0);
}

TEST_CASE("disorder realizations") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.736, 0.244);
    Rng rng(23);
    SUBCASE("sigma = 0 is the identity") {
        ModelParams same = apply_disorder(params, 0.0, rng);
        CHECK(same.classical.couplings == params.classical.couplings);
        CHECK(same.classical.fields == params.classical.fields);
    }
    SUBCASE("negative sigma is rejected") {
        CHECK_THROWS_AS(apply_disorder(params, -0.1, rng), std::invalid_argument);
    }
    SUBCASE("perturbation variance matches sigma^2") {
        const double sigma = 0.02;
        std::vector<double> deltas;
        for (int k = 0; k < 600; ++k) {
            ModelParams d = apply_disorder(params, sigma, rng);
            for (std::size_t b = 0; b < d.classical.couplings.size(); ++b)
                deltas.push_back(d.classical.couplings[b] - params.classical.couplings[b]);
        }
        // 600 x 18 = 10800 draws
        CHECK(sample_variance(deltas) == doctest::Approx(sigma * sigma).epsilon(0.05));
        CHECK(std::abs(mean(deltas)) < 3.0 * sigma / std::sqrt(static_cast<double>(deltas.size())));
    }
}

TEST_CASE("checkpoint round trip") {
    Lattice g = build_gadget12();
    ModelParams params = make_params(g, 0.736, 0.3);
    CtEngine engine(g, params, CtEngine::Update::chain);
    Rng rng(29);
    WorldlineConfig config = ct_init(g, random_state(g, rng));
    for (int t = 0; t < 50; ++t) engine.sweep(config, rng);

    std::stringstream ss;
    write_checkpoint(ss, config);
    WorldlineConfig back = read_checkpoint(ss);
    REQUIRE(back.lines.size() == config.lines.size());
    for (std::size_t i = 0; i < config.lines.size(); ++i) {
        CHECK(back.lines[i].s0 == config.lines[i].s0);
        CHECK(back.lines[i].kinks == config.lines[i].kinks);
    }
    std::stringstream bad("garbage");
    CHECK_THROWS(read_checkpoint(bad));
}
