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

#ifndef FRUSTMAG_MODEL_HPP
#define FRUSTMAG_MODEL_HPP

#include <stdexcept>

#include "frustmag/states.hpp"

namespace frustmag {

// Transverse-field Ising model in reduced units: H/J = sum J_ij sz sz
// + sum h_i sz - (Gamma/J) sum sx, at temperature T/J.
struct ModelParams {
    double gamma_over_j = 0.0;
    double t_over_j = 1.0;
    ClassicalParams classical;

    double beta() const { return 1.0 / t_over_j; }
};

inline ModelParams make_params(const Lattice& lattice, double gamma_over_j, double t_over_j) {
    if (gamma_over_j < 0.0 || t_over_j <= 0.0)
        throw std::invalid_argument("need Gamma/J >= 0 and T/J > 0");
    return {gamma_over_j, t_over_j, nominal_params(lattice)};
}

// Fresh quenched-disorder realization: i.i.d. Gaussian of width sigma added
// to every coupling and every linear term.  Couplings are perturbed first,
// then fields, so a seed pins the realization.
inline ModelParams apply_disorder(const ModelParams& params, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("disorder sigma must be >= 0");
    ModelParams out = params;
    if (sigma == 0.0) return out;
    for (double& j : out.classical.couplings) j += sigma * rng.normal();
    for (double& h : out.classical.fields) h += sigma * rng.normal();
    return out;
}

}  // namespace frustmag

#endif
