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

#ifndef FRUSTMAG_WORLDLINE_HPP
#define FRUSTMAG_WORLDLINE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "frustmag/lattice.hpp"
#include "frustmag/model.hpp"

namespace frustmag {

// One spin's trajectory around the imaginary-time circle, stored in units
// of beta: flip positions in [0,1), strictly increasing, even count, plus
// the value on the segment containing u = 0.
struct Worldline {
    std::int8_t s0 = 1;
    std::vector<double> kinks;
};

struct WorldlineConfig {
    std::vector<Worldline> lines;

    std::size_t total_kinks() const {
        std::size_t n = 0;
        for (const auto& l : lines) n += l.kinks.size();
        return n;
    }
};

// kink-free worldlines equal to the classical state at every imaginary time
WorldlineConfig ct_init(const Lattice& lattice, const SpinState& state);

// spin values at u = 0 (the "top slice")
SpinState project_classical(const WorldlineConfig& config);

// Continuous-time PIMC sweeps.  Each update block (a four-spin chain, or a
// single spin) is refreshed by a Swendsen-Wang move in imaginary time:
// cuts fall on each worldline as a Poisson process of rate beta*Gamma with
// existing kinks acting as forced cuts; time domains of ferromagnetically
// coupled chain neighbours are joined on aligned overlaps at rate
// 2|J_FM|*beta; every resulting cluster is flipped with heat-bath
// probability 1/(1+exp(dS)) where dS is the change of interaction action
// against the frozen out-of-block neighbours (a field-free cluster flips
// with probability 1/2).
class CtEngine {
public:
    enum class Update { chain, single };

    CtEngine(const Lattice& lattice, const ModelParams& params, Update update);

    // one full sweep over all blocks at the engine's parameters
    void sweep(WorldlineConfig& config, Rng& rng);
    // same move at overridden couplings scale (quench protocols)
    void sweep_at(WorldlineConfig& config, double gamma_over_j, double t_over_j, Rng& rng);

    const ModelParams& params() const { return params_; }
    const Lattice& lattice() const { return *lattice_; }

private:
    struct ExtBond {
        int neighbor;
        double j;
    };
    struct Block {
        std::vector<int> spins;
        std::vector<int> intra_a;  // local indices
        std::vector<int> intra_b;
        std::vector<double> intra_abs_j;
        std::vector<std::vector<ExtBond>> ext;  // per local spin
        std::vector<double> h;                  // per local spin
    };
    // per-spin scratch of one block update
    struct LineScratch {
        std::vector<double> interfaces;
        std::vector<std::int8_t> value;  // per domain
        std::vector<double> length;      // per domain
        int n_domains = 0;
    };

    void update_block(WorldlineConfig& config, const Block& block, double gamma, double beta,
                      Rng& rng);

    const Lattice* lattice_;
    ModelParams params_;
    std::vector<Block> blocks_;
    bool any_fields_ = false;

    // scratch buffers reused across updates
    std::vector<LineScratch> scratch_;
    std::vector<double> proposals_;
    std::vector<int> dsu_;
    std::vector<double> field_;     // per domain
    std::vector<std::int8_t> flip_; // per domain root
};

// Spec-level convenience wrappers: one sweep with a freshly built engine.
void ct_sweep_chain(WorldlineConfig& config, const Lattice& lattice, const ModelParams& params,
                    Rng& rng);
void ct_sweep_single(WorldlineConfig& config, const Lattice& lattice, const ModelParams& params,
                     Rng& rng);

// Runs n_sweeps chain-update sweeps, invoking the observer on the projected
// state at t = 0 and at every sweep index in record_at (sorted, ascending).
void run_chain(CtEngine& engine, WorldlineConfig& config, std::int64_t n_sweeps,
               const std::vector<std::int64_t>& record_at,
               const std::function<void(std::int64_t, const SpinState&)>& observer, Rng& rng);

// powers-of-two sweep schedule: 0, 1, 2, 4, ... capped at n_sweeps
std::vector<std::int64_t> log2_schedule(std::int64_t n_sweeps);

// One reverse-anneal cycle quenching Gamma only: ramp 0 -> Gamma* over t_q
// sweeps, pause t_p sweeps, ramp back over t_q sweeps, then project the
// configuration onto the classical space (kinks dropped, as dynamics are
// frozen at Gamma = 0).  Returns the projected sample; config carries the
// projected state into the next cycle.
SpinState gamma_quench_cycle(CtEngine& engine, WorldlineConfig& config, int t_p, int t_q,
                             Rng& rng);

// Same cycle ramping both Gamma and T along the straight path between the
// target point (Gamma*, T*) and the frozen endpoint (0, epsilon*T*).  The
// hardware schedule is not public, so the linear path stands in for it.
SpinState full_quench_cycle(CtEngine& engine, WorldlineConfig& config, int t_p, int t_q,
                            Rng& rng, double epsilon = 0.05);

// versioned checkpoint: magic "FMWLCK01", kink positions as 64-bit floats
// in units of beta, little-endian
void write_checkpoint(std::ostream& os, const WorldlineConfig& config);
WorldlineConfig read_checkpoint(std::istream& is);

}  // namespace frustmag

#endif
