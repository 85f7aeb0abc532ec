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

#include "frustmag/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace frustmag {

namespace {

struct ExpModel {
    // p = (m0, mf, log tau)
    static double eval(const double* p, double t) {
        return (p[0] - p[1]) * std::exp(-t / std::exp(p[2])) + p[1];
    }
    static void jacobian(const double* p, double t, double* j) {
        const double tau = std::exp(p[2]);
        const double e = std::exp(-t / tau);
        j[0] = e;
        j[1] = 1.0 - e;
        j[2] = (p[0] - p[1]) * e * (t / tau);  // d/d(log tau)
    }
};

double chi2_of(const TimeSeries& s, const std::vector<double>& w, const double* p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double r = ExpModel::eval(p, s[i].t) - s[i].mean;
        acc += w[i] * r * r;
    }
    return acc;
}

}  // namespace

FitResult fit_exponential(const TimeSeries& series, double cutoff) {
    FitResult out;
    out.cutoff = cutoff;
    if (series.size() < 4) {
        out.status = FitStatus::no_convergence;
        out.message = "need at least 4 points";
        return out;
    }
    double lo = series.front().mean, hi = series.front().mean;
    for (const auto& pt : series) {
        lo = std::min(lo, pt.mean);
        hi = std::max(hi, pt.mean);
    }
    if (hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) {
        out.status = FitStatus::degenerate;
        out.m0 = out.mf = series.front().mean;
        out.message = "constant series";
        return out;
    }

    std::vector<double> w(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        w[i] = series[i].stderr_ > 0.0 ? 1.0 / (series[i].stderr_ * series[i].stderr_) : 1.0;

    // deterministic initialization: tail average for mf, first point for m0,
    // 1/e crossing for tau
    double p[3];
    {
        std::size_t tail = std::max<std::size_t>(1, series.size() / 4);
        double mf0 = 0.0;
        for (std::size_t i = series.size() - tail; i < series.size(); ++i) mf0 += series[i].mean;
        mf0 /= static_cast<double>(tail);
        double m00 = series.front().mean;
        double target = std::abs(m00 - mf0) / M_E;
        double tau0 = (series.back().t - series.front().t) / 3.0;
        for (const auto& pt : series)
            if (std::abs(pt.mean - mf0) <= target && pt.t > series.front().t) {
                tau0 = pt.t - series.front().t;
                break;
            }
        if (tau0 <= 0.0) tau0 = 1.0;
        p[0] = m00;
        p[1] = mf0;
        p[2] = std::log(tau0);
    }

    double lambda = 1e-3;
    double chi2 = chi2_of(series, w, p);
    Eigen::Matrix3d jtj;
    Eigen::Vector3d jtr;
    bool converged = false;
    for (int iter = 0; iter < 500 && !converged; ++iter) {
        jtj.setZero();
        jtr.setZero();
        for (std::size_t i = 0; i < series.size(); ++i) {
            double j[3];
            ExpModel::jacobian(p, series[i].t, j);
            double r = series[i].mean - ExpModel::eval(p, series[i].t);
            for (int a = 0; a < 3; ++a) {
                jtr(a) += w[i] * j[a] * r;
                for (int b = 0; b < 3; ++b) jtj(a, b) += w[i] * j[a] * j[b];
            }
        }
        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::Matrix3d damped = jtj;
            for (int a = 0; a < 3; ++a)
                damped(a, a) += lambda * std::max(jtj(a, a), 1e-12);
            Eigen::Vector3d delta = damped.ldlt().solve(jtr);
            double trial[3] = {p[0] + delta(0), p[1] + delta(1),
                               std::clamp(p[2] + delta(2), -50.0, 50.0)};
            double trial_chi2 = chi2_of(series, w, trial);
            if (trial_chi2 <= chi2) {
                if (chi2 - trial_chi2 < 1e-12 * (1.0 + chi2) && delta.norm() < 1e-10)
                    converged = true;
                p[0] = trial[0];
                p[1] = trial[1];
                p[2] = trial[2];
                chi2 = trial_chi2;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
        if (!stepped) break;
    }
    // a stalled step with a tiny gradient counts as converged
    if (!converged) converged = jtr.norm() < 1e-8 * (1.0 + chi2);
    if (!converged) {
        out.status = FitStatus::no_convergence;
        out.message = "Levenberg-Marquardt did not converge (chi2=" + std::to_string(chi2) + ")";
        return out;
    }

    out.status = FitStatus::ok;
    out.m0 = p[0];
    out.mf = p[1];
    out.tau = std::exp(p[2]);
    out.chi2 = chi2;
    {
        const double dof = std::max<double>(1.0, static_cast<double>(series.size()) - 3.0);
        Eigen::Matrix3d cov = jtj.inverse() * (chi2 / dof);
        // transform log tau -> tau
        for (int a = 0; a < 3; ++a) {
            cov(a, 2) *= out.tau;
            cov(2, a) *= out.tau;
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.covariance[3 * a + b] = cov(a, b);
    }
    const double amp = std::abs(out.m0 - out.mf);
    if (amp > cutoff) {
        out.resolved = true;
        out.convergence_time = out.tau * std::log(amp / cutoff);
    } else {
        out.resolved = false;
        out.message = "amplitude below cutoff; convergence time unresolved";
    }
    return out;
}

RepTime representative_time(const FitResult& fit_ccw, const FitResult& fit_cw) {
    RepTime rt;
    if (!fit_ccw.resolved || !fit_cw.resolved) return rt;
    rt.resolved = true;
    rt.time = std::sqrt(fit_ccw.convergence_time * fit_cw.convergence_time);
    return rt;
}

namespace {

double quantile(std::vector<double>& xs, double q) {
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(i);
    return xs[i] * (1.0 - frac) + xs[i + 1] * frac;
}

}  // namespace

std::pair<double, double> bootstrap_ci_indices(
    std::size_t n_samples, const std::function<double(const std::vector<std::size_t>&)>& statistic,
    double level, int resamples, std::uint64_t seed) {
    if (n_samples < 10) throw std::invalid_argument("bootstrap needs at least 10 samples");
    if (resamples < 1000) throw std::invalid_argument("bootstrap needs at least 1000 resamples");
    Rng rng(seed);
    std::vector<std::size_t> idx(n_samples);
    std::vector<double> stats(resamples);
    for (int r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < n_samples; ++i) idx[i] = rng.uniform_int(n_samples);
        stats[r] = statistic(idx);
    }
    const double alpha = (1.0 - level) / 2.0;
    return {quantile(stats, alpha), quantile(stats, 1.0 - alpha)};
}

std::pair<double, double> bootstrap_ci(const std::vector<double>& samples,
                                       const std::function<double(std::span<const double>)>& statistic,
                                       double level, int resamples, std::uint64_t seed) {
    std::vector<double> resample(samples.size());
    return bootstrap_ci_indices(
        samples.size(),
        [&](const std::vector<std::size_t>& idx) {
            for (std::size_t i = 0; i < idx.size(); ++i) resample[i] = samples[idx[i]];
            return statistic(std::span<const double>(resample));
        },
        level, resamples, seed);
}

// ---------------------------------------------------------------------------
// scaling collapse

namespace {

// clamped uniform cubic B-spline basis
struct Spline {
    double lo = 0.0, hi = 1.0;
    Eigen::VectorXd coeff;

    static constexpr int kBasis = 8;

    static double bspline(const std::vector<double>& knots, int i, int k, double x) {
        if (k == 1) {
            // half-open, closed at the top knot
            if (knots[i] <= x && (x < knots[i + 1] || (x == knots[i + 1] && knots[i + 1] == knots.back())))
                return 1.0;
            return 0.0;
        }
        double acc = 0.0;
        double d1 = knots[i + k - 1] - knots[i];
        if (d1 > 0.0) acc += (x - knots[i]) / d1 * bspline(knots, i, k - 1, x);
        double d2 = knots[i + k] - knots[i + 1];
        if (d2 > 0.0) acc += (knots[i + k] - x) / d2 * bspline(knots, i + 1, k - 1, x);
        return acc;
    }

    std::vector<double> knots() const {
        std::vector<double> t(kBasis + 4);
        const int interior = kBasis - 4;
        for (int i = 0; i < 4; ++i) {
            t[i] = lo;
            t[kBasis + i] = hi;
        }
        for (int i = 0; i < interior; ++i)
            t[4 + i] = lo + (hi - lo) * (i + 1) / (interior + 1);
        return t;
    }

    void fit(const std::vector<double>& x, const std::vector<double>& y) {
        auto mm = std::minmax_element(x.begin(), x.end());
        lo = *mm.first;
        hi = *mm.second;
        if (hi - lo < 1e-12) hi = lo + 1.0;
        const auto t = knots();
        Eigen::MatrixXd a(x.size(), kBasis);
        for (std::size_t r = 0; r < x.size(); ++r)
            for (int b = 0; b < kBasis; ++b) a(r, b) = bspline(t, b, 4, std::clamp(x[r], lo, hi));
        Eigen::MatrixXd ata = a.transpose() * a;
        ata.diagonal().array() += 1e-9;
        coeff = ata.ldlt().solve(a.transpose() *
                                 Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()));
    }

    double eval(double x) const {
        const auto t = knots();
        double acc = 0.0;
        for (int b = 0; b < kBasis; ++b) acc += coeff(b) * bspline(t, b, 4, std::clamp(x, lo, hi));
        return acc;
    }

    bool in_range(double x) const { return x >= lo && x <= hi; }
};

struct CollapseObjective {
    const std::vector<CollapseDataset>* datasets;
    double c;
    double t_min;

    // leave-one-size-out spline residual, normalized by total variance
    double operator()(double a, double tc) const {
        if (a <= 0.0 || tc >= t_min) return 1e9;
        std::vector<std::vector<std::pair<double, double>>> xy(datasets->size());
        double y_sum = 0.0, y2_sum = 0.0;
        long n_total = 0;
        for (std::size_t d = 0; d < datasets->size(); ++d) {
            for (const auto& pt : (*datasets)[d].points) {
                const double dt = pt[0] - tc;
                if (dt <= 0.0) return 1e9;
                const double u = std::log((*datasets)[d].size) - a / std::sqrt(dt);
                const double y = pt[1] / std::pow((*datasets)[d].size, c);
                xy[d].push_back({u, y});
                y_sum += y;
                y2_sum += y * y;
                ++n_total;
            }
        }
        const double ss_tot =
            y2_sum - y_sum * y_sum / static_cast<double>(n_total);
        if (ss_tot <= 0.0) return 1e9;
        double ss_cv = 0.0;
        long n_cv = 0;
        std::vector<double> xs, ys;
        for (std::size_t leave = 0; leave < datasets->size(); ++leave) {
            xs.clear();
            ys.clear();
            for (std::size_t d = 0; d < datasets->size(); ++d) {
                if (d == leave) continue;
                for (auto [u, y] : xy[d]) {
                    xs.push_back(u);
                    ys.push_back(y);
                }
            }
            if (xs.size() < Spline::kBasis) return 1e9;
            Spline sp;
            sp.fit(xs, ys);
            for (auto [u, y] : xy[leave])
                if (sp.in_range(u)) {
                    const double r = y - sp.eval(u);
                    ss_cv += r * r;
                    ++n_cv;
                }
        }
        if (n_cv == 0) return 1e9;
        // scale per point so skipped out-of-range points do not reward
        return (ss_cv / static_cast<double>(n_cv)) /
               (ss_tot / static_cast<double>(n_total));
    }
};

// deterministic Nelder-Mead on (log a, log(t_min - tc))
std::pair<Eigen::Vector2d, double> nelder_mead(
    const std::function<double(const Eigen::Vector2d&)>& f, Eigen::Vector2d start, int iters) {
    std::array<Eigen::Vector2d, 3> simplex{start, start + Eigen::Vector2d{0.25, 0.0},
                                           start + Eigen::Vector2d{0.0, 0.25}};
    std::array<double, 3> val{f(simplex[0]), f(simplex[1]), f(simplex[2])};
    for (int it = 0; it < iters; ++it) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int i, int j) { return val[i] < val[j]; });
        const int lo = ord[0], mid = ord[1], hi = ord[2];
        if (std::abs(val[hi] - val[lo]) < 1e-12 * (1.0 + std::abs(val[lo]))) break;
        Eigen::Vector2d centroid = 0.5 * (simplex[lo] + simplex[mid]);
        Eigen::Vector2d refl = centroid + (centroid - simplex[hi]);
        double fr = f(refl);
        if (fr < val[lo]) {
            Eigen::Vector2d exp_pt = centroid + 2.0 * (centroid - simplex[hi]);
            double fe = f(exp_pt);
            if (fe < fr) {
                simplex[hi] = exp_pt;
                val[hi] = fe;
            } else {
                simplex[hi] = refl;
                val[hi] = fr;
            }
        } else if (fr < val[mid]) {
            simplex[hi] = refl;
            val[hi] = fr;
        } else {
            Eigen::Vector2d contr = centroid + 0.5 * (simplex[hi] - centroid);
            double fc = f(contr);
            if (fc < val[hi]) {
                simplex[hi] = contr;
                val[hi] = fc;
            } else {
                for (int k : {mid, hi}) {
                    simplex[k] = simplex[lo] + 0.5 * (simplex[k] - simplex[lo]);
                    val[k] = f(simplex[k]);
                }
            }
        }
    }
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (val[k] < val[best]) best = k;
    return {simplex[best], val[best]};
}

}  // namespace

CollapseResult scaling_collapse(const std::vector<CollapseDataset>& datasets, double c) {
    CollapseResult out;
    if (datasets.size() < 3) {
        out.message = "need at least 3 system sizes";
        return out;
    }
    double t_min = std::numeric_limits<double>::max(), t_max = -t_min;
    for (const auto& ds : datasets)
        for (const auto& pt : ds.points) {
            t_min = std::min(t_min, pt[0]);
            t_max = std::max(t_max, pt[0]);
        }
    if (!(t_max > t_min)) {
        out.message = "temperature range is degenerate";
        return out;
    }
    CollapseObjective obj{&datasets, c, t_min};
    const double span = t_max - t_min;

    // coarse deterministic grid, then simplex refinement in transformed
    // coordinates a = exp(pa), tc = t_min - span*exp(pb)
    auto eval = [&](const Eigen::Vector2d& p) {
        return obj(std::exp(p(0)), t_min - span * std::exp(p(1)));
    };
    Eigen::Vector2d best_p{0.0, -2.0};
    double best_v = std::numeric_limits<double>::max();
    for (double pa : {-1.5, -0.75, 0.0, 0.75, 1.5})
        for (double pb : {-4.0, -3.0, -2.0, -1.0, 0.0}) {
            Eigen::Vector2d p{pa, pb};
            double v = eval(p);
            if (v < best_v) {
                best_v = v;
                best_p = p;
            }
        }
    if (best_v >= 1e9) {
        out.message = "no feasible (a, Tc) on the search grid";
        return out;
    }
    auto [popt, vopt] = nelder_mead(eval, best_p, 400);
    out.ok = true;
    out.a = std::exp(popt(0));
    out.tc = t_min - span * std::exp(popt(1));
    out.quality = vopt;
    return out;
}

std::vector<std::array<double, 3>> collapse_points(const std::vector<CollapseDataset>& datasets,
                                                   double c, double a, double tc) {
    std::vector<std::array<double, 3>> pts;
    for (const auto& ds : datasets)
        for (const auto& pt : ds.points) {
            if (pt[0] <= tc) continue;
            const double x = ds.size * std::exp(-a / std::sqrt(pt[0] - tc));
            pts.push_back({x, pt[1] / std::pow(ds.size, c), pt[2] / std::pow(ds.size, c)});
        }
    std::sort(pts.begin(), pts.end(),
              [](const auto& l, const auto& r) { return l[0] < r[0]; });
    return pts;
}

}  // namespace frustmag
