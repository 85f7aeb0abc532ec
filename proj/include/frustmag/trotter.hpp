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

#ifndef FRUSTMAG_TROTTER_HPP
#define FRUSTMAG_TROTTER_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "frustmag/lattice.hpp"
#include "frustmag/model.hpp"

namespace frustmag {

// Discrete-time PIMC with M Trotter slices.  Spin (i, k) couples to
// (j, k) with K_ij = (beta/M) J_ij and to (i, k+1 mod M) with temporal
// coupling K_tau = -ln(tanh(beta Gamma / M)) / 2.

// N x M array of +-1, spin-major: spins[i*m + k]
struct SliceConfig {
    int n_spins = 0;
    int m = 0;
    std::vector<std::int8_t> spins;

    std::int8_t at(int spin, int slice) const { return spins[spin * m + slice]; }
};

struct DtCouplings {
    double slice_j_scale;  // beta / M, multiplies every J_ij and h_i
    double k_tau;          // temporal ferromagnetic coupling, > 0
};

// Errors out for Gamma = 0 (the temporal coupling diverges; use the
// classical kernel) and for M < 2.
DtCouplings dt_couplings(const ModelParams& params, int m);

SliceConfig dt_init(const Lattice& lattice, int m, const SpinState& state);
SpinState dt_project(const SliceConfig& config);

// Run-length form of a slice configuration: value at slice 0 plus sorted
// flip boundaries in (0, M].  Sweep cost scales with the number of kinks,
// not with M, which is what makes the M = 2^16 limit affordable.
struct DtState {
    int m = 0;
    std::vector<std::int8_t> s0;
    std::vector<std::vector<int>> kinks;
};

DtState dt_compress(const SliceConfig& config);
SliceConfig dt_materialize(const DtState& state);

// Swendsen-Wang chain updates against the exact discrete-time action:
// temporal cuts on aligned slice pairs with probability tanh(beta Gamma/M),
// forced cuts at kinks, spatial joins across intra-chain FM bonds with
// probability 1 - exp(-2|K_FM| * overlap), heat-bath cluster flips against
// frozen out-of-chain neighbours.
class DtEngine {
public:
    DtEngine(const Lattice& lattice, const ModelParams& params, int m);

    void sweep(DtState& state, Rng& rng);

    int m() const { return m_; }
    const ModelParams& params() const { return params_; }
    const Lattice& lattice() const { return *lattice_; }

private:
    struct ExtBond {
        int neighbor;
        double k;  // (beta/M) J
    };
    struct Block {
        std::vector<int> spins;
        std::vector<int> intra_a;
        std::vector<int> intra_b;
        std::vector<double> intra_abs_k;
        std::vector<std::vector<ExtBond>> ext;
        std::vector<double> kh;  // (beta/M) h
    };
    struct LineScratch {
        std::vector<int> interfaces;
        std::vector<std::int8_t> value;
        std::vector<int> length;
        int n_domains = 0;
    };

    void update_block(DtState& state, const Block& block, Rng& rng);

    const Lattice* lattice_;
    ModelParams params_;
    int m_;
    double cut_prob_;  // tanh(beta Gamma / M)
    std::vector<Block> blocks_;
    bool any_fields_ = false;

    std::vector<LineScratch> scratch_;
    std::vector<int> proposals_;
    std::vector<int> dsu_;
    std::vector<double> field_;
    std::vector<std::int8_t> flip_;
};

void dt_sweep_chain(SliceConfig& config, const Lattice& lattice, const ModelParams& params,
                    Rng& rng);

void run_chain_dt(DtEngine& engine, DtState& state, std::int64_t n_sweeps,
                  const std::vector<std::int64_t>& record_at,
                  const std::function<void(std::int64_t, const SpinState&)>& observer, Rng& rng);

// Bit-packed variant for M = 32 or 64: one machine word per spin, the
// temporal ring is word rotation, field integrals are popcounts.
struct PackedConfig {
    int n_spins = 0;
    int m = 0;  // 32 or 64
    std::vector<std::uint64_t> words;
};

PackedConfig dt_pack(const SliceConfig& config);
SliceConfig dt_unpack(const PackedConfig& config);

class PackedDtEngine {
public:
    PackedDtEngine(const Lattice& lattice, const ModelParams& params, int m);

    void sweep(PackedConfig& config, Rng& rng);

    int m() const { return m_; }

private:
    struct ExtBond {
        int neighbor;
        double k;
    };
    struct Block {
        std::vector<int> spins;
        std::vector<int> intra_a;
        std::vector<int> intra_b;
        std::vector<double> intra_abs_k;
        std::vector<std::vector<ExtBond>> ext;
        std::vector<double> kh;
    };

    void update_block(PackedConfig& config, const Block& block, Rng& rng);

    const Lattice* lattice_;
    ModelParams params_;
    int m_;
    double cut_prob_;
    std::vector<Block> blocks_;
};

// bit-packed checkpoint: magic "FMDTCK01", u32 n_spins, u32 m, u64 position
// (caller-defined resume cursor), then row-major slice words little-endian
void write_dt_checkpoint(std::ostream& os, const SliceConfig& config, std::uint64_t position);
SliceConfig read_dt_checkpoint(std::istream& is, std::uint64_t* position = nullptr);

// Wall-time harness for one-thread sweep timing.
enum class KernelKind { ct_chain, ct_single, dt, dt_packed };

struct TimingReport {
    std::string kernel;
    int n_spins = 0;
    int m = 0;  // 0 for continuous time
    int measured_sweeps = 0;
    double median_us = 0.0;
    double mad_us = 0.0;  // median absolute deviation
    double mean_us = 0.0;
};

// Runs a fifth of n_sweeps as warmup from a random state, measures the
// rest.  n_sweeps >= 100.
TimingReport sweep_timer(const Lattice& lattice, const ModelParams& params, KernelKind kernel,
                         int n_sweeps, int m = 64, std::uint64_t seed = 1);

nlohmann::json timing_to_json(const TimingReport& report);

}  // namespace frustmag

#endif
