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

#ifndef FRUSTMAG_HARNESS_HPP
#define FRUSTMAG_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "frustmag/analysis.hpp"
#include "frustmag/lattice.hpp"
#include "frustmag/model.hpp"
#include "frustmag/observables.hpp"

namespace frustmag {

inline constexpr const char* kCodeVersion = "frustmag 0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One experiment: a lattice, a parameter point, an engine, an initial
// condition, and replica/recording counts.  Everything is seeded; identical
// configs reproduce identical data files byte for byte.
struct ExperimentConfig {
    std::string lattice = "square_octagonal";  // square_octagonal|triangular|gadget12
    int l = 6;
    int rows = 6, cols = 6;
    std::string boundary = "cylinder";  // triangular only: cylinder|torus

    double gamma_over_j = 0.736;
    double t_over_j = 0.244;
    double disorder_sigma = 0.0;

    std::string engine = "ct";  // ct|ct_single|dt|dt_packed|svmc
    int trotter_m = 64;

    std::string init = "ordered";  // ordered|ccw|cw|random
    int ordered_k = 1;

    int n_replicas = 8;
    std::int64_t n_sweeps = 1024;
    std::string schedule = "log2";  // log2 | every:<k>
    int eq_measure_every = 4;       // post-burn-in equilibrium sampling stride
    bool record_quenched = true;

    std::string protocol = "none";  // none|gamma|full ("t" then counts cycles)
    int t_p = 0, t_q = 0;

    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    std::string output_dir = "out";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
// FNV-1a 64 over the canonical (sorted-key) JSON text
std::string config_hash(const ExperimentConfig& config);

Lattice build_lattice(const ExperimentConfig& config);

struct RunManifest {
    std::string config_hash;
    std::string code_version;
    std::vector<std::uint64_t> replica_seeds;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> files;
    bool complete = true;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

// summary statistics of one run, written to equilibrium.json
struct EquilibriumSummary {
    double m = 0.0, m_stderr = 0.0;
    double m_quenched = 0.0, m_quenched_stderr = 0.0;
    double e_classical = 0.0, e_classical_stderr = 0.0;
    double e_res = 0.0, e_res_stderr = 0.0;
    double f0 = 0.0, f1 = 0.0, fm1 = 0.0;
    int n_replicas = 0;
    std::vector<double> replica_m;  // per-replica equilibrium means
    std::vector<double> replica_m_quenched;
};

struct RunOutput {
    RunManifest manifest;
    std::filesystem::path dir;
    // aggregated time series per column (t in sweeps or cycles)
    TimeSeries m_series;
    TimeSeries m_quenched_series;
    TimeSeries e_res_series;
    TimeSeries f0_series, f1_series, fm1_series;
    EquilibriumSummary equilibrium;
};

// Runs all replicas (replica-parallel, chain-sequential), writes
// config.json, manifest.json, replica_XXXX.jsonl, aggregate.csv,
// equilibrium.csv and equilibrium.json into a fresh directory under
// config.output_dir, and returns the aggregate.
RunOutput run_experiment(const ExperimentConfig& config);

// Recomputes the aggregate from the per-replica files of an existing run
// directory; validates record counts and ignores truncated replicas.
RunOutput load_run(const std::filesystem::path& dir);

struct FitReportEntry {
    std::string label;
    FitResult fit;
    double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap CI of the convergence time
};

// Exponential-fit report over m(t) series of several runs: per-run fitted
// tau and convergence time with bootstrap CIs, plus an SVG of data and fit
// per run.  Entries with unresolved fits carry resolved = false.
std::vector<FitReportEntry> fit_report(const std::vector<std::filesystem::path>& run_dirs,
                                       double cutoff, const std::filesystem::path& out_dir,
                                       int bootstrap_resamples = 1000);

struct ComparePoint {
    double gamma_over_j = 0.0;
    double t_over_j = 0.0;
    double m_a = 0.0, stderr_a = 0.0;
    double m_b = 0.0, stderr_b = 0.0;
    double delta() const { return m_a - m_b; }
    bool significant(double tolerance) const { return std::abs(delta()) > tolerance; }
};

// Engine-vs-engine (or engine-vs-oracle) deviation table at the paper's
// 0.03 tolerance; throws ConfigError on grid mismatch.
nlohmann::json compare_report(const std::vector<ComparePoint>& points, double tolerance = 0.03);

}  // namespace frustmag

#endif
