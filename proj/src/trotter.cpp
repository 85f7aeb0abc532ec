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
   Discrete-time PIMC.  The Suzuki-Trotter action on N x M worldlines has
   per-slice spatial couplings (beta/M) J_ij and a temporal ferromagnetic
   coupling K_tau = -ln(tanh(beta Gamma/M))/2 around each spin's time ring.
   The Swendsen-Wang chain update mirrors the continuous-time kernel with
   integer boundaries: aligned temporal pairs are cut with probability
   exp(-2 K_tau) = tanh(beta Gamma/M), kinks are forced cuts, aligned
   domain overlaps join with probability 1 - exp(-2|K| * overlap), and
   clusters flip by heat bath against the frozen exterior.  Cuts are
   placed by geometric skips, so sweeps cost O(kinks), not O(M).
*/

#include "frustmag/trotter.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "frustmag/worldline.hpp"

namespace frustmag {

DtCouplings dt_couplings(const ModelParams& params, int m) {
    if (m < 2) throw std::invalid_argument("need at least 2 Trotter slices");
    if (params.gamma_over_j <= 0.0)
        throw std::invalid_argument(
            "Gamma = 0 has a divergent temporal coupling; use the classical kernel");
    const double x = params.beta() * params.gamma_over_j / m;
    // -log(tanh x)/2 written as log(coth x)/2, stable for large x
    return {params.beta() / m, 0.5 * std::log1p(2.0 / std::expm1(2.0 * x))};
}

SliceConfig dt_init(const Lattice& lattice, int m, const SpinState& state) {
    if (state.size() != lattice.n_spins) throw std::invalid_argument("state size mismatch");
    SliceConfig config;
    config.n_spins = lattice.n_spins;
    config.m = m;
    config.spins.resize(static_cast<std::size_t>(lattice.n_spins) * m);
    for (int i = 0; i < lattice.n_spins; ++i)
        std::fill_n(config.spins.begin() + static_cast<std::size_t>(i) * m, m, state.spins[i]);
    return config;
}

SpinState dt_project(const SliceConfig& config) {
    SpinState st;
    st.spins.resize(config.n_spins);
    for (int i = 0; i < config.n_spins; ++i) st.spins[i] = config.at(i, 0);
    return st;
}

DtState dt_compress(const SliceConfig& config) {
    DtState state;
    state.m = config.m;
    state.s0.resize(config.n_spins);
    state.kinks.resize(config.n_spins);
    for (int i = 0; i < config.n_spins; ++i) {
        state.s0[i] = config.at(i, 0);
        for (int x = 1; x <= config.m; ++x)
            if (config.at(i, x - 1) != config.at(i, x % config.m)) state.kinks[i].push_back(x);
    }
    return state;
}

SliceConfig dt_materialize(const DtState& state) {
    SliceConfig config;
    config.n_spins = static_cast<int>(state.s0.size());
    config.m = state.m;
    config.spins.resize(static_cast<std::size_t>(config.n_spins) * config.m);
    for (int i = 0; i < config.n_spins; ++i) {
        std::int8_t v = state.s0[i];
        std::size_t next = 0;
        for (int k = 0; k < config.m; ++k) {
            config.spins[static_cast<std::size_t>(i) * config.m + k] = v;
            if (next < state.kinks[i].size() && state.kinks[i][next] == k + 1) {
                v = -v;
                ++next;
            }
        }
    }
    return config;
}

namespace {

inline int advance_domain(std::size_t& ptr, std::size_t n_interfaces) {
    ++ptr;
    return ptr == n_interfaces ? 0 : static_cast<int>(ptr);
}

// positions in [1, limit] hit independently with probability q, ascending
template <typename Out>
void sample_bernoulli_positions(double q, int limit, Rng& rng, Out&& emit) {
    const double lq = std::log1p(-q);
    double pos = 0.0;
    while (true) {
        pos += 1.0 + std::floor(std::log(rng.uniform_pos()) / lq);
        if (pos > limit) break;
        emit(static_cast<int>(pos));
    }
}

template <typename Blk, typename EB>
void build_blocks(const Lattice& lattice, const ModelParams& params, double j_scale,
                  std::vector<Blk>& blocks, bool& any_fields) {
    const auto& couplings = params.classical.couplings;
    const auto& fields = params.classical.fields;
    blocks.resize(lattice.n_chains());
    for (int b = 0; b < lattice.n_chains(); ++b) {
        Blk& blk = blocks[b];
        blk.spins = lattice.chains[b];
        const int q = static_cast<int>(blk.spins.size());
        blk.ext.resize(q);
        blk.kh.resize(q);
        for (int li = 0; li < q; ++li) {
            int g = blk.spins[li];
            blk.kh[li] = j_scale * fields[g];
            if (fields[g] != 0.0) any_fields = true;
            for (auto [nb, bond] : lattice.adj[g]) {
                auto in_block = std::find(blk.spins.begin(), blk.spins.end(), nb);
                if (in_block == blk.spins.end()) {
                    blk.ext[li].push_back(EB{nb, j_scale * couplings[bond]});
                } else if (g < nb) {
                    double j = couplings[bond];
                    if (j >= 0.0)
                        throw std::invalid_argument("intra-chain bonds must be ferromagnetic");
                    blk.intra_a.push_back(li);
                    blk.intra_b.push_back(static_cast<int>(in_block - blk.spins.begin()));
                    blk.intra_abs_k.push_back(-j * j_scale);
                }
            }
        }
    }
}

}  // namespace

DtEngine::DtEngine(const Lattice& lattice, const ModelParams& params, int m)
    : lattice_(&lattice), params_(params), m_(m) {
    DtCouplings k = dt_couplings(params, m);
    cut_prob_ = std::exp(-2.0 * k.k_tau);
    build_blocks<Block, ExtBond>(lattice, params, k.slice_j_scale, blocks_, any_fields_);
    std::size_t max_q = 0;
    for (const Block& blk : blocks_) max_q = std::max(max_q, blk.spins.size());
    scratch_.resize(max_q);
}

void DtEngine::update_block(DtState& state, const Block& block, Rng& rng) {
    const int q = static_cast<int>(block.spins.size());

    int n_dom_total = 0;
    int dom_off[8];
    for (int li = 0; li < q; ++li) {
        const auto& kinks = state.kinks[block.spins[li]];
        const std::int8_t s0 = state.s0[block.spins[li]];
        LineScratch& ls = scratch_[li];
        proposals_.clear();
        sample_bernoulli_positions(cut_prob_, m_, rng, [&](int x) { proposals_.push_back(x); });
        ls.interfaces.clear();
        ls.value.clear();
        ls.length.clear();
        // union of kinks and proposals (duplicates collapse)
        std::size_t pk = 0, pp = 0;
        std::int8_t v = s0;
        ls.value.push_back(v);
        while (pk < kinks.size() || pp < proposals_.size()) {
            int xk = pk < kinks.size() ? kinks[pk] : m_ + 1;
            int xp = pp < proposals_.size() ? proposals_[pp] : m_ + 1;
            int x = std::min(xk, xp);
            if (xk == x) {
                ++pk;
                v = -v;
            }
            if (xp == x) ++pp;
            ls.interfaces.push_back(x);
            ls.value.push_back(v);
        }
        ls.value.pop_back();
        if (ls.interfaces.size() <= 1) {
            ls.interfaces.clear();
            ls.n_domains = 1;
            ls.value.assign(1, s0);
            ls.length.assign(1, m_);
        } else {
            ls.n_domains = static_cast<int>(ls.interfaces.size());
            ls.length.resize(ls.n_domains);
            ls.length[0] = m_ - ls.interfaces.back() + ls.interfaces.front();
            for (int k = 1; k < ls.n_domains; ++k)
                ls.length[k] = ls.interfaces[k] - ls.interfaces[k - 1];
        }
        dom_off[li] = n_dom_total;
        n_dom_total += ls.n_domains;
    }

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
        const double rate = 2.0 * block.intra_abs_k[bond];
        std::size_t pa = 0, pb = 0;
        int da = 0, db = 0;
        int u = 0;
        while (true) {
            int next_a = pa < a.interfaces.size() ? a.interfaces[pa] : m_ + 1;
            int next_b = pb < b.interfaces.size() ? b.interfaces[pb] : m_ + 1;
            int next = std::min({next_a, next_b, m_});
            if (a.value[da] == b.value[db] && next > u &&
                rng.uniform() < -std::expm1(-rate * (next - u))) {
                int ra = find(off_a + da), rb = find(off_b + db);
                if (ra != rb) dsu_[ra] = rb;
            }
            if (next >= m_) break;
            if (next_a == next) da = advance_domain(pa, a.interfaces.size());
            if (next_b == next) db = advance_domain(pb, b.interfaces.size());
            u = next;
        }
    }

    field_.assign(n_dom_total, 0.0);
    for (int li = 0; li < q; ++li) {
        const LineScratch& a = scratch_[li];
        if (any_fields_ && block.kh[li] != 0.0)
            for (int k = 0; k < a.n_domains; ++k)
                field_[dom_off[li] + k] += block.kh[li] * a.length[k];
        for (const ExtBond& eb : block.ext[li]) {
            const auto& nb_kinks = state.kinks[eb.neighbor];
            std::size_t pa = 0, pk = 0;
            int da = 0;
            double vj = state.s0[eb.neighbor];
            int u = 0;
            while (true) {
                int next_a = pa < a.interfaces.size() ? a.interfaces[pa] : m_ + 1;
                int next_k = pk < nb_kinks.size() ? nb_kinks[pk] : m_ + 1;
                int next = std::min({next_a, next_k, m_});
                field_[dom_off[li] + da] += eb.k * vj * (next - u);
                if (next >= m_) break;
                if (next_a == next) da = advance_domain(pa, a.interfaces.size());
                if (next_k == next) {
                    vj = -vj;
                    ++pk;
                }
                u = next;
            }
        }
    }

    flip_.assign(n_dom_total, 0);
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

    for (int li = 0; li < q; ++li) {
        LineScratch& ls = scratch_[li];
        const int g = block.spins[li];
        for (int k = 0; k < ls.n_domains; ++k)
            if (flip_[find(dom_off[li] + k)]) ls.value[k] = -ls.value[k];
        state.s0[g] = ls.value[0];
        state.kinks[g].clear();
        for (int k = 0; k < ls.n_domains; ++k)
            if (ls.value[k] != ls.value[(k + 1) % ls.n_domains])
                state.kinks[g].push_back(ls.interfaces[k]);
    }
}

void DtEngine::sweep(DtState& state, Rng& rng) {
    for (const Block& blk : blocks_) update_block(state, blk, rng);
}

void dt_sweep_chain(SliceConfig& config, const Lattice& lattice, const ModelParams& params,
                    Rng& rng) {
    DtEngine engine(lattice, params, config.m);
    DtState state = dt_compress(config);
    engine.sweep(state, rng);
    config = dt_materialize(state);
}

void run_chain_dt(DtEngine& engine, DtState& state, std::int64_t n_sweeps,
                  const std::vector<std::int64_t>& record_at,
                  const std::function<void(std::int64_t, const SpinState&)>& observer, Rng& rng) {
    auto project = [&]() {
        SpinState st;
        st.spins = state.s0;
        return st;
    };
    std::size_t next = 0;
    while (next < record_at.size() && record_at[next] <= 0) ++next;
    observer(0, project());
    for (std::int64_t t = 1; t <= n_sweeps; ++t) {
        engine.sweep(state, rng);
        if (next < record_at.size() && record_at[next] == t) {
            observer(t, project());
            while (next < record_at.size() && record_at[next] <= t) ++next;
        }
    }
}

// ---------------------------------------------------------------------------
// bit-packed kernel

namespace {

inline std::uint64_t low_mask(int x) { return x >= 64 ? ~0ULL : (1ULL << x) - 1; }

// bits for slice indices a..b-1 (b may wrap past m)
inline std::uint64_t range_mask(int a, int b, int m) {
    if (b <= m) return low_mask(b) & ~low_mask(a);
    return (low_mask(m) & ~low_mask(a)) | low_mask(b - m);
}

inline std::uint64_t rotr_m(std::uint64_t w, int m) {
    return ((w >> 1) | (w << (m - 1))) & low_mask(m);
}

}  // namespace

PackedConfig dt_pack(const SliceConfig& config) {
    if (config.m != 32 && config.m != 64)
        throw std::invalid_argument("bit-packed kernel supports M = 32 or 64");
    PackedConfig packed;
    packed.n_spins = config.n_spins;
    packed.m = config.m;
    packed.words.assign(config.n_spins, 0);
    for (int i = 0; i < config.n_spins; ++i)
        for (int k = 0; k < config.m; ++k)
            if (config.at(i, k) > 0) packed.words[i] |= 1ULL << k;
    return packed;
}

SliceConfig dt_unpack(const PackedConfig& packed) {
    SliceConfig config;
    config.n_spins = packed.n_spins;
    config.m = packed.m;
    config.spins.resize(static_cast<std::size_t>(packed.n_spins) * packed.m);
    for (int i = 0; i < packed.n_spins; ++i)
        for (int k = 0; k < packed.m; ++k)
            config.spins[static_cast<std::size_t>(i) * packed.m + k] =
                (packed.words[i] >> k & 1) ? 1 : -1;
    return config;
}

PackedDtEngine::PackedDtEngine(const Lattice& lattice, const ModelParams& params, int m)
    : lattice_(&lattice), params_(params), m_(m) {
    if (m != 32 && m != 64) throw std::invalid_argument("bit-packed kernel supports M = 32 or 64");
    DtCouplings k = dt_couplings(params, m);
    cut_prob_ = std::exp(-2.0 * k.k_tau);
    bool any_fields = false;
    build_blocks<Block, ExtBond>(lattice, params, k.slice_j_scale, blocks_, any_fields);
}

void PackedDtEngine::update_block(PackedConfig& config, const Block& block, Rng& rng) {
    const int q = static_cast<int>(block.spins.size());
    const std::uint64_t ring = low_mask(m_);

    // per spin: sorted interface positions in (0, m], value and mask per domain
    int n_dom_total = 0;
    int dom_off[8];
    int n_dom[8];
    int positions[8][72];
    std::int8_t value[8][72];
    std::uint64_t mask[8][72];
    int length[8][72];
    for (int li = 0; li < q; ++li) {
        const std::uint64_t w = config.words[block.spins[li]];
        std::uint64_t interfaces = (w ^ rotr_m(w, m_)) & ring;  // bit p: slice p != p+1
        sample_bernoulli_positions(cut_prob_, m_, rng,
                                   [&](int x) { interfaces |= 1ULL << (x - 1); });
        const std::uint64_t kink_mask = (w ^ rotr_m(w, m_)) & ring;
        int n = std::popcount(interfaces);
        const std::int8_t s0 = (w & 1) ? 1 : -1;
        if (n <= 1) {
            n_dom[li] = 1;
            value[li][0] = s0;
            mask[li][0] = ring;
            length[li][0] = m_;
        } else {
            // extract boundary positions ascending; the value flips where
            // the boundary is an existing kink
            int idx = 0;
            std::uint64_t rest = interfaces;
            std::int8_t v = s0;
            value[li][0] = s0;  // wrap domain holds slice 0
            while (rest) {
                int p = std::countr_zero(rest);
                rest &= rest - 1;
                positions[li][idx] = p + 1;
                if (kink_mask >> p & 1) v = -v;
                if (idx + 1 < n) value[li][idx + 1] = v;
                ++idx;
            }
            n_dom[li] = n;
            const int last = positions[li][n - 1];
            const int len0 = m_ - last + positions[li][0];
            mask[li][0] = range_mask(last % m_, last % m_ + len0, m_);
            length[li][0] = len0;
            for (int k = 1; k < n; ++k) {
                mask[li][k] = range_mask(positions[li][k - 1], positions[li][k], m_);
                length[li][k] = positions[li][k] - positions[li][k - 1];
            }
        }
        dom_off[li] = n_dom_total;
        n_dom_total += n_dom[li];
    }

    int dsu[288];
    for (int d = 0; d < n_dom_total; ++d) dsu[d] = d;
    auto find = [&](int d) {
        while (dsu[d] != d) d = dsu[d] = dsu[dsu[d]];
        return d;
    };
    for (std::size_t bond = 0; bond < block.intra_a.size(); ++bond) {
        const int la = block.intra_a[bond], lb = block.intra_b[bond];
        const double rate = 2.0 * block.intra_abs_k[bond];
        std::size_t pa = 0, pb = 0;
        int da = 0, db = 0;
        int u = 0;
        const std::size_t na = n_dom[la] > 1 ? n_dom[la] : 0;
        const std::size_t nb = n_dom[lb] > 1 ? n_dom[lb] : 0;
        while (true) {
            int next_a = pa < na ? positions[la][pa] : m_ + 1;
            int next_b = pb < nb ? positions[lb][pb] : m_ + 1;
            int next = std::min({next_a, next_b, m_});
            if (value[la][da] == value[lb][db] && next > u &&
                rng.uniform() < -std::expm1(-rate * (next - u))) {
                int ra = find(dom_off[la] + da), rb = find(dom_off[lb] + db);
                if (ra != rb) dsu[ra] = rb;
            }
            if (next >= m_) break;
            if (next_a == next) da = advance_domain(pa, na);
            if (next_b == next) db = advance_domain(pb, nb);
            u = next;
        }
    }

    double field[288];
    std::fill_n(field, n_dom_total, 0.0);
    for (int li = 0; li < q; ++li) {
        for (int k = 0; k < n_dom[li]; ++k) {
            double f = block.kh[li] * length[li][k];
            for (const ExtBond& eb : block.ext[li]) {
                const std::uint64_t wj = config.words[eb.neighbor];
                f += eb.k * (2 * std::popcount(wj & mask[li][k]) - length[li][k]);
            }
            field[dom_off[li] + k] += f;
        }
    }

    bool flip[288];
    for (int li = 0; li < q; ++li)
        for (int k = 0; k < n_dom[li]; ++k) {
            int d = dom_off[li] + k;
            int r = find(d);
            if (r != d) {
                field[r] += field[d];
                field[d] = 0.0;
            }
        }
    for (int li = 0; li < q; ++li)
        for (int k = 0; k < n_dom[li]; ++k) {
            int d = dom_off[li] + k;
            if (find(d) != d) continue;
            double ds = -2.0 * value[li][k] * field[d];
            double p_flip = ds > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(ds));
            flip[d] = rng.uniform() < p_flip;
        }

    for (int li = 0; li < q; ++li) {
        std::uint64_t w = 0;
        for (int k = 0; k < n_dom[li]; ++k) {
            std::int8_t v = flip[find(dom_off[li] + k)] ? -value[li][k] : value[li][k];
            if (v > 0) w |= mask[li][k];
        }
        config.words[block.spins[li]] = w;
    }
}

void PackedDtEngine::sweep(PackedConfig& config, Rng& rng) {
    for (const Block& blk : blocks_) update_block(config, blk, rng);
}

// ---------------------------------------------------------------------------

void write_dt_checkpoint(std::ostream& os, const SliceConfig& config, std::uint64_t position) {
    static constexpr char magic[8] = {'F', 'M', 'D', 'T', 'C', 'K', '0', '1'};
    os.write(magic, 8);
    auto put_u32 = [&](std::uint32_t v) {
        char b[4] = {char(v & 0xff), char(v >> 8 & 0xff), char(v >> 16 & 0xff),
                     char(v >> 24 & 0xff)};
        os.write(b, 4);
    };
    put_u32(static_cast<std::uint32_t>(config.n_spins));
    put_u32(static_cast<std::uint32_t>(config.m));
    for (int k = 0; k < 8; ++k) os.put(char(position >> (8 * k) & 0xff));
    const int bytes = (config.m + 7) / 8;
    std::vector<char> row(bytes);
    for (int i = 0; i < config.n_spins; ++i) {
        std::fill(row.begin(), row.end(), 0);
        for (int k = 0; k < config.m; ++k)
            if (config.at(i, k) > 0) row[k / 8] |= char(1 << (k % 8));
        os.write(row.data(), bytes);
    }
}

SliceConfig read_dt_checkpoint(std::istream& is, std::uint64_t* position) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "FMDTCK01", 8) != 0)
        throw std::runtime_error("bad slice checkpoint magic");
    auto get_u32 = [&]() {
        unsigned char b[4];
        is.read(reinterpret_cast<char*>(b), 4);
        return b[0] | b[1] << 8 | b[2] << 16 | std::uint32_t(b[3]) << 24;
    };
    SliceConfig config;
    config.n_spins = static_cast<int>(get_u32());
    config.m = static_cast<int>(get_u32());
    std::uint64_t pos = 0;
    for (int k = 0; k < 8; ++k) pos |= std::uint64_t(static_cast<unsigned char>(is.get())) << (8 * k);
    if (position) *position = pos;
    const int bytes = (config.m + 7) / 8;
    config.spins.resize(static_cast<std::size_t>(config.n_spins) * config.m);
    std::vector<char> row(bytes);
    for (int i = 0; i < config.n_spins; ++i) {
        is.read(row.data(), bytes);
        if (!is) throw std::runtime_error("truncated slice checkpoint");
        for (int k = 0; k < config.m; ++k)
            config.spins[static_cast<std::size_t>(i) * config.m + k] =
                (row[k / 8] >> (k % 8)) & 1 ? 1 : -1;
    }
    return config;
}

TimingReport sweep_timer(const Lattice& lattice, const ModelParams& params, KernelKind kernel,
                         int n_sweeps, int m, std::uint64_t seed) {
    if (n_sweeps < 100) throw std::invalid_argument("sweep_timer needs n_sweeps >= 100");
    Rng rng(seed);
    SpinState init = random_state(lattice, rng);
    const int warmup = n_sweeps / 5;
    const int measured = n_sweeps - warmup;
    std::vector<double> us(measured);

    auto time_loop = [&](auto&& one_sweep) {
        for (int t = 0; t < warmup; ++t) one_sweep();
        for (int t = 0; t < measured; ++t) {
            auto t0 = std::chrono::steady_clock::now();
            one_sweep();
            auto t1 = std::chrono::steady_clock::now();
            us[t] = std::chrono::duration<double, std::micro>(t1 - t0).count();
        }
    };

    TimingReport rep;
    rep.n_spins = lattice.n_spins;
    rep.measured_sweeps = measured;
    switch (kernel) {
        case KernelKind::ct_chain: {
            rep.kernel = "ct_chain";
            CtEngine engine(lattice, params, CtEngine::Update::chain);
            WorldlineConfig config = ct_init(lattice, init);
            time_loop([&] { engine.sweep(config, rng); });
            break;
        }
        case KernelKind::ct_single: {
            rep.kernel = "ct_single";
            CtEngine engine(lattice, params, CtEngine::Update::single);
            WorldlineConfig config = ct_init(lattice, init);
            time_loop([&] { engine.sweep(config, rng); });
            break;
        }
        case KernelKind::dt: {
            rep.kernel = "dt";
            rep.m = m;
            DtEngine engine(lattice, params, m);
            DtState state = dt_compress(dt_init(lattice, m, init));
            time_loop([&] { engine.sweep(state, rng); });
            break;
        }
        case KernelKind::dt_packed: {
            rep.kernel = "dt_packed";
            rep.m = m;
            PackedDtEngine engine(lattice, params, m);
            PackedConfig config = dt_pack(dt_init(lattice, m, init));
            time_loop([&] { engine.sweep(config, rng); });
            break;
        }
    }

    std::vector<double> sorted = us;
    std::sort(sorted.begin(), sorted.end());
    rep.median_us = sorted[measured / 2];
    std::vector<double> dev(measured);
    for (int i = 0; i < measured; ++i) dev[i] = std::abs(us[i] - rep.median_us);
    std::sort(dev.begin(), dev.end());
    rep.mad_us = dev[measured / 2];
    double sum = 0.0;
    for (double v : us) sum += v;
    rep.mean_us = sum / measured;
    return rep;
}

nlohmann::json timing_to_json(const TimingReport& report) {
    return {{"kernel", report.kernel},       {"n_spins", report.n_spins},
            {"m", report.m},                 {"measured_sweeps", report.measured_sweeps},
            {"median_us", report.median_us}, {"mad_us", report.mad_us},
            {"mean_us", report.mean_us}};
}

}  // namespace frustmag
