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

#include "frustmag/analysis.hpp"
#include "frustmag/rng.hpp"
#include "frustmag/stats.hpp"

using namespace frustmag;

namespace {

TimeSeries synthetic_exponential(double m0, double mf, double tau, double noise,
                                 std::uint64_t seed, int n_points = 40, double t_max = 8000.0) {
    Rng rng(seed);
    TimeSeries series;
    for (int k = 0; k < n_points; ++k) {
        double t = t_max * k / (n_points - 1.0);
        TimeSeriesPoint pt;
        pt.t = t;
        double clean = (m0 - mf) * std::exp(-t / tau) + mf;
        pt.mean = clean * (1.0 + noise * rng.normal());
        pt.stderr_ = noise * std::abs(clean);
        pt.n = 100;
        series.push_back(pt);
    }
    return series;
}

}  // namespace

TEST_CASE("exponential fit recovers tau within 2 percent at 0.5 percent noise") {
    TimeSeries series = synthetic_exponential(0.6 + 0.4, 0.4, 1000.0, 0.005, 12345);
    // m(t) = 0.6 exp(-t/1000) + 0.4
    FitResult fit = fit_exponential(series);
    REQUIRE(fit.status == FitStatus::ok);
    CHECK(fit.tau == doctest::Approx(1000.0).epsilon(0.02));
    CHECK(fit.m0 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(fit.mf == doctest::Approx(0.4).epsilon(0.01));
    CHECK(fit.resolved);
    // cutoff time: tau * ln(|m0-mf| / 0.05)
    CHECK(fit.convergence_time ==
          doctest::Approx(fit.tau * std::log(std::abs(fit.m0 - fit.mf) / 0.05)).epsilon(1e-12));
}

TEST_CASE("fit residuals are unbiased over synthetic repetitions") {
    double acc = 0.0;
    const int trials = 50;
    for (int k = 0; k < trials; ++k) {
        TimeSeries series = synthetic_exponential(1.0, 0.4, 1500.0, 0.005, 1000 + k);
        FitResult fit = fit_exponential(series);
        REQUIRE(fit.status == FitStatus::ok);
        acc += (fit.tau - 1500.0) / 1500.0;
    }
    CHECK(std::abs(acc / trials) < 0.01);
}

TEST_CASE("degenerate and malformed inputs") {
    TimeSeries flat;
    for (int k = 0; k < 10; ++k) flat.push_back({static_cast<double>(k), 0.7, 0.0, 1});
    FitResult fit = fit_exponential(flat);
    CHECK(fit.status == FitStatus::degenerate);
    CHECK_FALSE(fit.resolved);

    TimeSeries three;
    for (int k = 0; k < 3; ++k) three.push_back({static_cast<double>(k), 0.1 * k, 0.0, 1});
    CHECK(fit_exponential(three).status == FitStatus::no_convergence);
}

TEST_CASE("amplitude below the cutoff is flagged unresolved") {
    TimeSeries series = synthetic_exponential(0.44, 0.42, 500.0, 0.001, 77);
    FitResult fit = fit_exponential(series, 0.05);
    CHECK(fit.status == FitStatus::ok);
    CHECK_FALSE(fit.resolved);
}

TEST_CASE("representative time") {
    FitResult a, b;
    a.status = b.status = FitStatus::ok;
    a.resolved = b.resolved = true;
    a.convergence_time = 100.0;
    b.convergence_time = 400.0;
    CHECK(representative_time(a, b).time == doctest::Approx(200.0));
    CHECK(representative_time(b, a).time == doctest::Approx(200.0));
    // homogeneous of degree one
    a.convergence_time *= 3.0;
    b.convergence_time *= 3.0;
    CHECK(representative_time(a, b).time == doctest::Approx(600.0));
    // equal times map to themselves
    b.convergence_time = a.convergence_time;
    CHECK(representative_time(a, b).time == doctest::Approx(a.convergence_time));
    // unresolved propagates
    b.resolved = false;
    CHECK_FALSE(representative_time(a, b).resolved);
}

TEST_CASE("cutoff time tracks tau across parameter families") {
    // the scatter of convergence time against tau collapses onto straight
    // lines at fixed amplitude
    for (double amp : {0.3, 0.9}) {
        for (double tau : {200.0, 1000.0, 5000.0}) {
            TimeSeries s = synthetic_exponential(0.2 + amp, 0.2, tau, 0.004,
                                                 static_cast<std::uint64_t>(tau + amp * 100),
                                                 40, 8.0 * tau);
            FitResult fit = fit_exponential(s);
            REQUIRE(fit.resolved);
            CHECK(fit.convergence_time / fit.tau ==
                  doctest::Approx(std::log(amp / 0.05)).epsilon(0.05));
        }
    }
}

TEST_CASE("bootstrap confidence intervals") {
    auto mean_stat = [](std::span<const double> xs) { return mean(xs); };

    SUBCASE("constant sample gives a zero-width interval") {
        std::vector<double> xs(50, 1.25);
        auto [lo, hi] = bootstrap_ci(xs, mean_stat, 0.95, 1000, 1);
        CHECK(lo == doctest::Approx(1.25));
        CHECK(hi == doctest::Approx(1.25));
    }
    SUBCASE("gaussian width matches the analytic interval") {
        Rng rng(2);
        std::vector<double> xs;
        for (int k = 0; k < 1000; ++k) xs.push_back(rng.normal(0.0, 2.0));
        auto [lo, hi] = bootstrap_ci(xs, mean_stat, 0.95, 4000, 3);
        const double expected = 2.0 * 1.96 * 2.0 / std::sqrt(1000.0);
        CHECK(hi - lo == doctest::Approx(expected).epsilon(0.10));
    }
    SUBCASE("deterministic under a fixed seed") {
        Rng rng(4);
        std::vector<double> xs;
        for (int k = 0; k < 100; ++k) xs.push_back(rng.uniform());
        auto a = bootstrap_ci(xs, mean_stat, 0.95, 1000, 42);
        auto b = bootstrap_ci(xs, mean_stat, 0.95, 1000, 42);
        CHECK(a == b);
    }
    SUBCASE("input validation") {
        std::vector<double> few(5, 1.0);
        CHECK_THROWS_AS(bootstrap_ci(few, mean_stat, 0.95, 1000, 1), std::invalid_argument);
        std::vector<double> xs(20, 1.0);
        CHECK_THROWS_AS(bootstrap_ci(xs, mean_stat, 0.95, 10, 1), std::invalid_argument);
    }
    SUBCASE("near-nominal coverage of the true mean") {
        Rng rng(5);
        int covered = 0;
        const int trials = 400;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<double> xs;
            for (int k = 0; k < 60; ++k) xs.push_back(rng.normal(3.0, 1.0));
            auto [lo, hi] = bootstrap_ci(xs, mean_stat, 0.95, 1000, derive_seed(6, trial));
            if (lo <= 3.0 && 3.0 <= hi) ++covered;
        }
        // binomial 95 +- a few percent
        CHECK(covered / static_cast<double>(trials) > 0.90);
        CHECK(covered / static_cast<double>(trials) <= 1.0);
    }
}

namespace {

// forward model with an exact collapse: y = L^c g(L/xi), xi = exp(a/sqrt(T-Tc))
std::vector<CollapseDataset> synthetic_collapse(double a, double tc, double c,
                                                double noise, std::uint64_t seed) {
    Rng rng(seed);
    auto master = [](double x) { return 1.0 / (1.0 + x * x); };
    std::vector<CollapseDataset> datasets;
    for (double l : {8.0, 16.0, 32.0}) {
        CollapseDataset ds;
        ds.size = l;
        for (double t = tc + 0.12; t < tc + 1.2; t += 0.05) {
            double x = l * std::exp(-a / std::sqrt(t - tc));
            double y = std::pow(l, c) * master(x) * (1.0 + noise * rng.normal());
            ds.points.push_back({t, y, noise * y});
        }
        datasets.push_back(std::move(ds));
    }
    return datasets;
}

}  // namespace

TEST_CASE("scaling collapse recovers planted parameters within 5 percent") {
    const double a_true = 2.0, tc_true = 0.8;
    auto datasets = synthetic_collapse(a_true, tc_true, 1.75, 0.01, 99);
    CollapseResult res = scaling_collapse(datasets, 1.75);
    REQUIRE(res.ok);
    CHECK(res.a == doctest::Approx(a_true).epsilon(0.05));
    CHECK(res.tc == doctest::Approx(tc_true).epsilon(0.05));
    CHECK(res.quality < 0.05);
}

TEST_CASE("collapse quality is invariant under dataset relabeling") {
    auto datasets = synthetic_collapse(1.5, 0.6, 1.75, 0.01, 7);
    CollapseResult a = scaling_collapse(datasets, 1.75);
    std::swap(datasets[0], datasets[2]);
    CollapseResult b = scaling_collapse(datasets, 1.75);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(a.quality == doctest::Approx(b.quality).epsilon(1e-9));
    CHECK(a.a == doctest::Approx(b.a).epsilon(1e-6));
}

TEST_CASE("collapse needs at least three sizes") {
    auto datasets = synthetic_collapse(2.0, 0.8, 1.75, 0.01, 3);
    datasets.pop_back();
    CHECK_FALSE(scaling_collapse(datasets, 1.75).ok);
}

TEST_CASE("a mismatched scaling form yields visibly worse quality") {
    // same master curve but one dataset from different (a, Tc): the planted
    // collapse degrades
    auto good = synthetic_collapse(2.0, 0.8, 1.75, 0.01, 11);
    auto spoiled = good;
    auto other = synthetic_collapse(0.7, 0.4, 1.75, 0.01, 11);
    spoiled[1] = other[1];
    CollapseResult res_good = scaling_collapse(good, 1.75);
    CollapseResult res_spoiled = scaling_collapse(spoiled, 1.75);
    REQUIRE(res_good.ok);
    REQUIRE(res_spoiled.ok);
    CHECK(res_spoiled.quality > 5.0 * res_good.quality);
}
