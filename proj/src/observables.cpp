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

#include "frustmag/observables.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace frustmag {

namespace {

const std::complex<double> kOmega{-0.5, 0.8660254037844386};  // exp(2 pi i / 3)

}  // namespace

PseudospinField pseudospin_field(const Lattice& lattice, const SpinState& state) {
    PseudospinField field;
    field.rows = lattice.dual_rows;
    field.cols = lattice.dual_cols;
    field.psi.resize(field.rows * field.cols);
    const std::complex<double> w[3] = {{1.0, 0.0}, kOmega, kOmega * kOmega};
    for (int cell = 0; cell < field.rows * field.cols; ++cell) {
        const Face& face = lattice.plaquettes[lattice.dual_grid[cell]];
        std::complex<double> psi{0.0, 0.0};
        for (int a = 0; a < 3; ++a) {
            const auto& chain = lattice.chains[face.chain_of_sublattice[a]];
            double mu = 0.0;
            for (int s : chain) mu += state.spins[s];
            mu /= static_cast<double>(chain.size());
            psi += mu * w[a];
        }
        field.psi[face.dual_row * field.cols + face.dual_col] = psi;
    }
    return field;
}

std::complex<double> complex_order_parameter(const PseudospinField& field) {
    if (field.psi.empty()) throw std::invalid_argument("empty pseudospin field");
    std::complex<double> sum{0.0, 0.0};
    for (const auto& p : field.psi) sum += p;
    return sum / (std::sqrt(3.0) * static_cast<double>(field.psi.size()));
}

double order_parameter(const PseudospinField& field) {
    return std::abs(complex_order_parameter(field));
}

double order_parameter(const Lattice& lattice, const SpinState& state) {
    return order_parameter(pseudospin_field(lattice, state));
}

double WindingSpectrum::normalized(int w) const {
    double denom = at(0) + at(1) + at(-1);
    return denom > 0.0 ? at(w) / denom : 0.0;
}

int WindingSpectrum::peak() const {
    int best = -l2 / 2;
    for (int w = -l2 / 2; w < l2 / 2; ++w)
        if (at(w) > at(best)) best = w;
    return best;
}

WindingSpectrum winding_spectrum(const PseudospinField& field) {
    const int l1 = field.rows, l2 = field.cols;
    if (l1 <= 0 || l2 <= 0 || static_cast<int>(field.psi.size()) != l1 * l2)
        throw std::invalid_argument("winding spectrum needs a rectangular field");
    // separable DFT: columns first, then rows
    std::vector<std::complex<double>> col_ft(l1 * l2);
    for (int j = 0; j < l1; ++j)
        for (int b = 0; b < l2; ++b) {
            std::complex<double> acc{0.0, 0.0};
            for (int k = 0; k < l2; ++k) {
                double ang = 2.0 * M_PI * k * b / l2;
                acc += field.psi[j * l2 + k] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            col_ft[j * l2 + b] = acc;
        }
    WindingSpectrum spec;
    spec.l2 = l2;
    spec.f.assign(l2, 0.0);
    const double norm = static_cast<double>(l1) * l2;
    for (int b = 0; b < l2; ++b) {
        double sum_sq = 0.0;
        for (int a = 0; a < l1; ++a) {
            std::complex<double> m{0.0, 0.0};
            for (int j = 0; j < l1; ++j) {
                double ang = 2.0 * M_PI * j * a / l1;
                m += col_ft[j * l2 + b] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            double v = std::abs(m) / norm;
            sum_sq += v * v;
        }
        int w = b < (l2 + 1) / 2 ? b : b - l2;  // frequency b -> winding w
        spec.f[w + l2 / 2] = std::sqrt(sum_sq);
    }
    return spec;
}

std::vector<double> two_point_correlation(const std::vector<PseudospinField>& fields) {
    if (fields.size() < 2) throw std::invalid_argument("correlation needs at least 2 samples");
    const int l1 = fields.front().rows, l2 = fields.front().cols;
    const int margin = (l1 + 3) / 4;
    const int j_lo = margin, j_hi = l1 - margin;
    if (j_lo >= j_hi) throw std::invalid_argument("field too narrow for central window");
    std::vector<double> c(l2 / 2 + 1, 0.0);
    for (int d = 0; d <= l2 / 2; ++d) {
        double acc = 0.0;
        long count = 0;
        for (const PseudospinField& fld : fields)
            for (int j = j_lo; j < j_hi; ++j)
                for (int k = 0; k < l2; ++k) {
                    acc += (fld.at(j, k) * std::conj(fld.at(j, (k + d) % l2))).real();
                    ++count;
                }
        c[d] = acc / static_cast<double>(count);
    }
    if (c[0] != 0.0) {
        double c0 = c[0];
        for (double& v : c) v /= c0;
    }
    return c;
}

double residual_energy(const Lattice& lattice, const SpinState& state,
                       const ClassicalParams& params, double reference_energy) {
    return (classical_energy(lattice, state, params) - reference_energy) / lattice.n_spins;
}

Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi) {
    if (values.empty()) throw std::invalid_argument("histogram of empty sample");
    if (bins < 2) throw std::invalid_argument("histogram needs >= 2 bins");
    if (!(hi > lo)) throw std::invalid_argument("histogram needs hi > lo");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.density.assign(bins, 0.0);
    const double width = (hi - lo) / bins;
    for (double v : values) {
        int idx = static_cast<int>((v - lo) / width);
        idx = std::clamp(idx, 0, bins - 1);
        h.density[idx] += 1.0;
    }
    const double norm = 1.0 / (values.size() * width);
    for (double& d : h.density) d *= norm;
    return h;
}

Histogram histogram(const std::vector<double>& values, int bins) {
    if (values.empty()) throw std::invalid_argument("histogram of empty sample");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) hi = lo + 1.0;  // degenerate sample: single occupied bin
    return histogram(values, bins, lo, hi);
}

void write_records_jsonl(std::ostream& os, const std::vector<ObservableRecord>& records) {
    for (const ObservableRecord& r : records) {
        nlohmann::json j{{"t", r.t},   {"m", r.m},       {"f0", r.f0},
                         {"f1", r.f1}, {"fm1", r.fm1},   {"e_res", r.e_res}};
        if (r.m_quenched) j["m_q"] = *r.m_quenched;
        os << j.dump() << '\n';
    }
}

std::vector<ObservableRecord> read_records_jsonl(std::istream& is) {
    std::vector<ObservableRecord> records;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        ObservableRecord r;
        r.t = j.at("t").get<std::int64_t>();
        r.m = j.at("m").get<double>();
        r.f0 = j.at("f0").get<double>();
        r.f1 = j.at("f1").get<double>();
        r.fm1 = j.at("fm1").get<double>();
        r.e_res = j.at("e_res").get<double>();
        if (j.contains("m_q")) r.m_quenched = j["m_q"].get<double>();
        records.push_back(r);
    }
    return records;
}

}  // namespace frustmag
