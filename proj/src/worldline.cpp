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

/*
   Continuous-time path-integral Monte Carlo.

   A worldline is a piecewise-constant +-1 trajectory on the unit imaginary
   time circle (positions in units of beta).  One block update:

     1. draw cut proposals on each worldline of the block as a Poisson
        process of rate beta*Gamma; existing kinks are forced cuts; the
        union partitions each worldline into domains,
     2. join aligned overlapping domains across ferromagnetic intra-block
        bonds with probability 1 - exp(-2|J| beta * overlap),
     3. flip each connected cluster by heat bath, probability
        1/(1+exp(dS)) with dS the action change against frozen neighbours,
     4. write back the domain values; kinks survive only where adjacent
        domains disagree.

   Steps 1-2 are the Edwards-Sokal decomposition of the imaginary-time
   ferromagnet, so the conditional cluster distribution depends on external
   bonds only and step 3 preserves the Gibbs measure.  Stationarity is
   certified against exact diagonalization in the test suite.
*/

#include "frustmag/worldline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace frustmag {

WorldlineConfig ct_init(const Lattice& lattice, const SpinState& state) {
    if (state.size() != lattice.n_spins) throw std::invalid_argument("state size mismatch");
    WorldlineConfig config;
    config.lines.resize(lattice.n_spins);
    for (int i = 0; i < lattice.n_spins; ++i) config.lines[i].s0 = state.spins[i];
    return config;
}

SpinState project_classical(const WorldlineConfig& config) {
    SpinState st;
    st.spins.reserve(config.lines.size());
    for (const Worldline& l : config.lines) st.spins.push_back(l.s0);
    return st;
}

CtEngine::CtEngine(const Lattice& lattice, const ModelParams& params, Update update)
    : lattice_(&lattice), params_(params) {
    const auto& couplings = params_.classical.couplings;
    const auto& fields = params_.classical.fields;
    const int n_blocks = update == Update::chain ? lattice.n_chains() : lattice.n_spins;
    blocks_.resize(n_blocks);
    for (int b = 0; b < n_blocks; ++b) {
        Block& blk = blocks_[b];
        if (update == Update::chain)
            blk.spins = lattice.chains[b];
        else
            blk.spins = {b};
        const int q = static_cast<int>(blk.spins.size());
        blk.ext.resize(q);
        blk.h.resize(q);
        for (int li = 0; li < q; ++li) {
            int g = blk.spins[li];
            blk.h[li] = fields[g];
            if (blk.h[li] != 0.0) any_fields_ = true;
            for (auto [nb, bond] : lattice.adj[g]) {
                auto in_block = std::find(blk.spins.begin(), blk.spins.end(), nb);
                if (in_block == blk.spins.end()) {
                    blk.ext[li].push_back({nb, couplings[bond]});
                } else if (g < nb) {
                    double j = couplings[bond];
                    if (j >= 0.0)
                        throw std::invalid_argument("intra-block bonds must be ferromagnetic");
                    blk.intra_a.push_back(li);
                    blk.intra_b.push_back(static_cast<int>(in_block - blk.spins.begin()));
                    blk.intra_abs_j.push_back(-j);
                }
            }
        }
    }
    std::size_t max_q = 0;
    for (const Block& blk : blocks_) max_q = std::max(max_q, blk.spins.size());
    scratch_.resize(max_q);
}

namespace {

// domain index after crossing the next interface: interfaces wrap back to
// the u=0 spanning domain 0
inline int advance_domain(std::size_t& ptr, std::size_t n_interfaces) {
    ++ptr;
    return ptr == n_interfaces ? 0 : static_cast<int>(ptr);
}

}  // namespace

void CtEngine::update_block(WorldlineConfig& config, const Block& block, double gamma,
                            double beta, Rng& rng) {
    const int q = static_cast<int>(block.spins.size());
    const double cut_rate = beta * gamma;

    // 1. interfaces and domains per worldline
    int n_dom_total = 0;
    int dom_off[8];
    for (int li = 0; li < q; ++li) {
        const Worldline& line = config.lines[block.spins[li]];
        LineScratch& ls = scratch_[li];
        proposals_.clear();
        if (cut_rate > 0.0) {
            double pos = rng.exponential(cut_rate);
            while (pos < 1.0) {
                proposals_.push_back(pos);
                pos += rng.exponential(cut_rate);
            }
        }
        ls.interfaces.clear();
        ls.value.clear();
        ls.length.clear();
        if (line.kinks.size() + proposals_.size() <= 1) {
            // a circle cut at most once is still a single domain
            ls.n_domains = 1;
            ls.value.push_back(line.s0);
            ls.length.push_back(1.0);
        } else {
            std::size_t pk = 0, pp = 0;
            std::int8_t v = line.s0;
            ls.value.push_back(v);  // wrap domain containing u = 0
            while (pk < line.kinks.size() || pp < proposals_.size()) {
                bool take_kink = pp >= proposals_.size() ||
                                 (pk < line.kinks.size() && line.kinks[pk] <= proposals_[pp]);
                if (take_kink) {
                    ls.interfaces.push_back(line.kinks[pk++]);
                    v = -v;
                } else {
                    ls.interfaces.push_back(proposals_[pp++]);
                }
                ls.value.push_back(v);
            }
            ls.value.pop_back();  // walked full circle: back to the wrap domain
            ls.n_domains = static_cast<int>(ls.interfaces.size());
            ls.length.resize(ls.n_domains);
            ls.length[0] = 1.0 - ls.interfaces.back() + ls.interfaces.front();
            for (int k = 1; k < ls.n_domains; ++k)
                ls.length[k] = ls.interfaces[k] - ls.interfaces[k - 1];
        }
        dom_off[li] = n_dom_total;
        n_dom_total += ls.n_domains;
    }

    // 2. Swendsen-Wang joins across intra-block bonds
    dsu_.resize(n_dom_total);
    for (int d = 0; d < n_dom_total; ++d) dsu_[d] = d;
    auto find = [&](int d) {
        while (dsu_[d] != d) d = dsu_[d] = dsu_[dsu_[d]];
        return d;
    };
    for (std::size_t bond = 0; bond < block.intra_a.size(); ++bond) {
        const LineScratch& a = scratch_[block.intra_a[bond]];
        const LineScratch& b = scratch_[block.intra_b[bond]];
        const int off_a = dom_off[block.intra_a[bond]];
        const int off_b = dom_off[block.intra_b[bond]];
        const double join_rate = 2.0 * block.intra_abs_j[bond] * beta;
        std::size_t pa = 0, pb = 0;
        int da = 0, db = 0;
        double u = 0.0;
        while (true) {
            double next_a = pa < a.interfaces.size() ? a.interfaces[pa] : 2.0;
            double next_b = pb < b.interfaces.size() ? b.interfaces[pb] : 2.0;
            double next = std::min({next_a, next_b, 1.0});
            if (a.value[da] == b.value[db] && next > u &&
                rng.uniform() < -std::expm1(-join_rate * (next - u))) {
                int ra = find(off_a + da), rb = find(off_b + db);
                if (ra != rb) dsu_[ra] = rb;
            }
            if (next >= 1.0) break;
            if (next_a == next) da = advance_domain(pa, a.interfaces.size());
            if (next_b == next) db = advance_domain(pb, b.interfaces.size());
            u = next;
        }
    }

    // 3. external action per domain, then per cluster
    field_.assign(n_dom_total, 0.0);
    for (int li = 0; li < q; ++li) {
        const LineScratch& a = scratch_[li];
        if (any_fields_ && block.h[li] != 0.0) {
            const double bh = beta * block.h[li];
            for (int k = 0; k < a.n_domains; ++k) field_[dom_off[li] + k] += bh * a.length[k];
        }
        for (const ExtBond& eb : block.ext[li]) {
            const Worldline& nb = config.lines[eb.neighbor];
            const double bj = beta * eb.j;
            std::size_t pa = 0, pk = 0;
            int da = 0;
            double vj = nb.s0;
            double u = 0.0;
            while (true) {
                double next_a = pa < a.interfaces.size() ? a.interfaces[pa] : 2.0;
                double next_k = pk < nb.kinks.size() ? nb.kinks[pk] : 2.0;
                double next = std::min({next_a, next_k, 1.0});
                field_[dom_off[li] + da] += bj * vj * (next - u);
                if (next >= 1.0) break;
                if (next_a == next) da = advance_domain(pa, a.interfaces.size());
                if (next_k == next) {
                    vj = -vj;
                    ++pk;
                }
                u = next;
            }
        }
    }

    // cluster fields; flip_ holds the per-root decision
    flip_.assign(n_dom_total, 0);
    {
        // reuse field_ in place: accumulate onto roots
        for (int li = 0; li < q; ++li)
            for (int k = 0; k < scratch_[li].n_domains; ++k) {
                int d = dom_off[li] + k;
                int r = find(d);
                if (r != d) {
                    field_[r] += field_[d];
                    field_[d] = 0.0;
                }
            }
        for (int li = 0; li < q; ++li)
            for (int k = 0; k < scratch_[li].n_domains; ++k) {
                int d = dom_off[li] + k;
                if (find(d) != d) continue;
                double sigma = scratch_[li].value[k];
                double ds = -2.0 * sigma * field_[d];
                // heat-bath on the cluster value: flip probability
                // 1/(1+e^dS), so zero-field clusters flip half the time
                double p_flip = ds > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(ds));
                flip_[d] = rng.uniform() < p_flip ? 1 : 0;
            }
    }

    // 4. write back values and surviving kinks
    for (int li = 0; li < q; ++li) {
        LineScratch& ls = scratch_[li];
        Worldline& line = config.lines[block.spins[li]];
        for (int k = 0; k < ls.n_domains; ++k)
            if (flip_[find(dom_off[li] + k)]) ls.value[k] = -ls.value[k];
        line.s0 = ls.value[0];
        line.kinks.clear();
        for (int k = 0; k < ls.n_domains; ++k)
            if (ls.value[k] != ls.value[(k + 1) % ls.n_domains])
                line.kinks.push_back(ls.interfaces[k]);
    }
}

void CtEngine::sweep(WorldlineConfig& config, Rng& rng) {
    sweep_at(config, params_.gamma_over_j, params_.t_over_j, rng);
}

void CtEngine::sweep_at(WorldlineConfig& config, double gamma_over_j, double t_over_j, Rng& rng) {
    const double beta = 1.0 / t_over_j;
    for (const Block& blk : blocks_) update_block(config, blk, gamma_over_j, beta, rng);
}

void ct_sweep_chain(WorldlineConfig& config, const Lattice& lattice, const ModelParams& params,
                    Rng& rng) {
    CtEngine engine(lattice, params, CtEngine::Update::chain);
    engine.sweep(config, rng);
}

void ct_sweep_single(WorldlineConfig& config, const Lattice& lattice, const ModelParams& params,
                     Rng& rng) {
    CtEngine engine(lattice, params, CtEngine::Update::single);
    engine.sweep(config, rng);
}

void run_chain(CtEngine& engine, WorldlineConfig& config, std::int64_t n_sweeps,
               const std::vector<std::int64_t>& record_at,
               const std::function<void(std::int64_t, const SpinState&)>& observer, Rng& rng) {
    if (n_sweeps < 0) throw std::invalid_argument("n_sweeps must be >= 0");
    std::size_t next = 0;
    while (next < record_at.size() && record_at[next] <= 0) ++next;
    observer(0, project_classical(config));
    for (std::int64_t t = 1; t <= n_sweeps; ++t) {
        engine.sweep(config, rng);
        if (next < record_at.size() && record_at[next] == t) {
            observer(t, project_classical(config));
            while (next < record_at.size() && record_at[next] <= t) ++next;
        }
    }
}

std::vector<std::int64_t> log2_schedule(std::int64_t n_sweeps) {
    std::vector<std::int64_t> at;
    for (std::int64_t t = 1; t <= n_sweeps; t *= 2) at.push_back(t);
    if (at.empty() || at.back() != n_sweeps) at.push_back(n_sweeps);
    return at;
}

SpinState gamma_quench_cycle(CtEngine& engine, WorldlineConfig& config, int t_p, int t_q,
                             Rng& rng) {
    if (t_p < 0 || t_q < 0) throw std::invalid_argument("t_p and t_q must be >= 0");
    const double gamma = engine.params().gamma_over_j;
    const double t = engine.params().t_over_j;
    for (int k = 1; k <= t_q; ++k)  // reverse anneal
        engine.sweep_at(config, gamma * k / t_q, t, rng);
    for (int k = 0; k < t_p; ++k) engine.sweep_at(config, gamma, t, rng);
    for (int k = 1; k <= t_q; ++k)  // quench
        engine.sweep_at(config, gamma * (t_q - k) / t_q, t, rng);
    SpinState sample = project_classical(config);
    config = ct_init(engine.lattice(), sample);  // dynamics frozen at Gamma = 0
    return sample;
}

SpinState full_quench_cycle(CtEngine& engine, WorldlineConfig& config, int t_p, int t_q,
                            Rng& rng, double epsilon) {
    if (t_p < 0 || t_q < 0) throw std::invalid_argument("t_p and t_q must be >= 0");
    const double gamma = engine.params().gamma_over_j;
    const double t_star = engine.params().t_over_j;
    auto point = [&](double u) {
        return std::pair{gamma * (1.0 - u), t_star * (1.0 - u * (1.0 - epsilon))};
    };
    for (int k = 1; k <= t_q; ++k) {  // reverse anneal from the frozen end
        auto [g, t] = point(1.0 - static_cast<double>(k) / t_q);
        engine.sweep_at(config, g, t, rng);
    }
    for (int k = 0; k < t_p; ++k) engine.sweep_at(config, gamma, t_star, rng);
    for (int k = 1; k <= t_q; ++k) {  // quench toward (0, epsilon T*)
        auto [g, t] = point(static_cast<double>(k) / t_q);
        engine.sweep_at(config, g, t, rng);
    }
    SpinState sample = project_classical(config);
    config = ct_init(engine.lattice(), sample);
    return sample;
}

namespace {

constexpr char kCkptMagic[8] = {'F', 'M', 'W', 'L', 'C', 'K', '0', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {char(v & 0xff), char(v >> 8 & 0xff), char(v >> 16 & 0xff), char(v >> 24 & 0xff)};
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return b[0] | b[1] << 8 | b[2] << 16 | std::uint32_t(b[3]) << 24;
}

}  // namespace

void write_checkpoint(std::ostream& os, const WorldlineConfig& config) {
    os.write(kCkptMagic, 8);
    put_u32(os, static_cast<std::uint32_t>(config.lines.size()));
    for (const Worldline& l : config.lines) {
        os.put(static_cast<char>(l.s0));
        put_u32(os, static_cast<std::uint32_t>(l.kinks.size()));
        static_assert(sizeof(double) == 8);
        os.write(reinterpret_cast<const char*>(l.kinks.data()),
                 static_cast<std::streamsize>(l.kinks.size() * 8));
    }
}

WorldlineConfig read_checkpoint(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kCkptMagic, 8) != 0)
        throw std::runtime_error("bad worldline checkpoint magic");
    WorldlineConfig config;
    config.lines.resize(get_u32(is));
    for (Worldline& l : config.lines) {
        l.s0 = static_cast<std::int8_t>(is.get());
        l.kinks.resize(get_u32(is));
        is.read(reinterpret_cast<char*>(l.kinks.data()),
                static_cast<std::streamsize>(l.kinks.size() * 8));
        if (!is) throw std::runtime_error("truncated worldline checkpoint");
    }
    return config;
}

}  // namespace frustmag
