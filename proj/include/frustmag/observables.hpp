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

#ifndef FRUSTMAG_OBSERVABLES_HPP
#define FRUSTMAG_OBSERVABLES_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "frustmag/lattice.hpp"
#include "frustmag/states.hpp"

namespace frustmag {

inline constexpr double kOrderedOrderParameter = 1.1547005383792515;  // 2/sqrt(3)

// Complex pseudospin per plaquette, laid out on the dual grid (rows = L1,
// cols = L2 periodic).  psi = mu_0 + mu_1 w + mu_2 w^2 with w = exp(2 pi
// i/3) and mu_a the mean spin of the sublattice-a chain on the plaquette.
struct PseudospinField {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> psi;  // row-major

    const std::complex<double>& at(int row, int col) const { return psi[row * cols + col]; }
};

PseudospinField pseudospin_field(const Lattice& lattice, const SpinState& state);

// mean psi / sqrt(3); ordered states sit at (2/sqrt 3) exp(i k pi/3)
std::complex<double> complex_order_parameter(const PseudospinField& field);

double order_parameter(const PseudospinField& field);
double order_parameter(const Lattice& lattice, const SpinState& state);

// f(w) built from the 2D Fourier transform of the pseudospin field,
// collapsing the open-axis frequencies in quadrature.  w runs over
// -L2/2 .. L2/2-1.
struct WindingSpectrum {
    int l2 = 0;
    std::vector<double> f;  // index w + l2/2

    double at(int w) const { return f[w + l2 / 2]; }
    // f(w) / (f(0) + f(1) + f(-1))
    double normalized(int w) const;
    int peak() const;  // argmax over w
};

WindingSpectrum winding_spectrum(const PseudospinField& field);

// Two-point pseudospin correlation along the periodic axis, averaged over
// samples and over dual rows at least L1/4 away from the open boundaries;
// normalized so C(0) = 1.  d = 0 .. L2/2.
std::vector<double> two_point_correlation(const std::vector<PseudospinField>& fields);

// classical energy above a reference ground energy, per spin
double residual_energy(const Lattice& lattice, const SpinState& state,
                       const ClassicalParams& params, double reference_energy);

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> density;  // integrates to 1

    double bin_width() const { return (hi - lo) / static_cast<double>(density.size()); }
};

Histogram histogram(const std::vector<double>& values, int bins);
Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi);

// One measurement row of a time series: sweep index, order parameter, the
// three low winding numbers, residual energy, optional quenched m.
struct ObservableRecord {
    std::int64_t t = 0;
    double m = 0.0;
    double f0 = 0.0;
    double f1 = 0.0;
    double fm1 = 0.0;
    double e_res = 0.0;
    std::optional<double> m_quenched;
};

void write_records_jsonl(std::ostream& os, const std::vector<ObservableRecord>& records);
std::vector<ObservableRecord> read_records_jsonl(std::istream& is);

}  // namespace frustmag

#endif
