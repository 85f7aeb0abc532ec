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
   Command-line front end.

   Subcommands: lattice (emit/validate), run (experiment), fit (convergence
   report), collapse (finite-size scaling), ed (oracle constants), timing
   (sweep timer), compare (deviation tables).

   Exit codes: 0 success, 2 config error, 3 all fits unresolved, 4 partial
   run.
*/

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "frustmag/analysis.hpp"
#include "frustmag/ed.hpp"
#include "frustmag/harness.hpp"
#include "frustmag/observables.hpp"
#include "frustmag/svg.hpp"
#include "frustmag/trotter.hpp"

using namespace frustmag;

namespace {

int cmd_lattice(const std::string& kind, int l, int rows, int cols, const std::string& boundary,
                const std::string& out_path, bool validate) {
    Lattice lat;
    if (kind == "square_octagonal")
        lat = build_square_octagonal(l);
    else if (kind == "gadget12")
        lat = build_gadget12();
    else if (kind == "triangular")
        lat = build_triangular(rows, cols,
                               boundary == "torus" ? Boundary::torus : Boundary::cylinder);
    else
        throw ConfigError("unknown lattice kind '" + kind + "'");

    if (validate) {
        FrustrationReport rep = validate_frustration(lat);
        int odd = 0;
        for (const auto& f : rep.faces) odd += f.odd;
        std::cout << "faces: " << rep.faces.size() << ", odd AFM parity: " << odd
                  << (rep.pass ? "  [pass]" : "  [FAIL]") << '\n';
        if (!rep.pass) {
            for (const auto& f : rep.faces)
                if (!f.odd)
                    std::cout << "  face " << f.face << " has " << f.afm_bonds << " AFM bonds\n";
            return 1;
        }
    }
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << lattice_to_json(lat).dump(2) << '\n';
        std::cout << "wrote " << out_path << " (" << lat.n_spins << " spins, "
                  << lat.bonds.size() << " bonds, " << lat.plaquettes.size() << " plaquettes)\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides) {
    nlohmann::json j;
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw ConfigError("cannot open config " + config_path);
        j = nlohmann::json::parse(is);
    } else {
        j = nlohmann::json::object();
    }
    for (const std::string& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be key=value: " + kv);
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        // parse numbers/bools when they look like it, else keep the string
        try {
            j[key] = nlohmann::json::parse(val);
        } catch (...) {
            j[key] = val;
        }
    }
    ExperimentConfig config = config_from_json(j);
    RunOutput out = run_experiment(config);
    std::cout << "run " << out.manifest.config_hash << " -> " << out.dir.string() << '\n';
    std::cout << "  equilibrium m = " << out.equilibrium.m << " +- " << out.equilibrium.m_stderr
              << " (quenched " << out.equilibrium.m_quenched << ")\n";
    return out.manifest.complete ? 0 : 4;
}

int cmd_fit(const std::vector<std::string>& runs, double cutoff, const std::string& out_dir,
            int resamples) {
    std::vector<std::filesystem::path> dirs(runs.begin(), runs.end());
    auto entries = fit_report(dirs, cutoff, out_dir, resamples);
    bool any_resolved = false;
    for (const auto& e : entries) {
        std::cout << e.label << ": ";
        if (e.fit.status != FitStatus::ok) {
            std::cout << (e.fit.status == FitStatus::degenerate ? "degenerate" : "no convergence")
                      << " (" << e.fit.message << ")\n";
            continue;
        }
        std::cout << "tau=" << e.fit.tau << " m0=" << e.fit.m0 << " mf=" << e.fit.mf;
        if (e.fit.resolved) {
            any_resolved = true;
            std::cout << " t_conv=" << e.fit.convergence_time << " CI[" << e.ci_lo << ", "
                      << e.ci_hi << "]";
        } else {
            std::cout << " (unresolved: amplitude below cutoff)";
        }
        std::cout << '\n';
    }
    std::cout << "report written to " << out_dir << '\n';
    return any_resolved ? 0 : 3;
}

int cmd_collapse(const std::string& input, double c, const std::string& out_dir) {
    std::ifstream is(input);
    if (!is) throw ConfigError("cannot open " + input);
    nlohmann::json j = nlohmann::json::parse(is);
    std::vector<CollapseDataset> datasets;
    for (const auto& dj : j) {
        CollapseDataset ds;
        ds.size = dj.at("size").get<double>();
        for (const auto& p : dj.at("points"))
            ds.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                 p.size() > 2 ? p.at(2).get<double>() : 0.0});
        datasets.push_back(std::move(ds));
    }
    CollapseResult res = scaling_collapse(datasets, c);
    if (!res.ok) {
        std::cerr << "collapse failed: " << res.message << '\n';
        return 2;
    }
    std::filesystem::create_directories(out_dir);
    nlohmann::json out{{"a", res.a}, {"tc", res.tc}, {"quality", res.quality}, {"c", c}};
    std::ofstream os(std::filesystem::path(out_dir) / "collapse.json");
    os << out.dump(2) << '\n';

    SvgPlot plot("scaling collapse (c=7/4)", "L / xi(T)", "y / L^c");
    plot.set_log_x(true);
    for (const auto& ds : datasets) {
        std::vector<CollapseDataset> one{ds};
        auto pts = collapse_points(one, c, res.a, res.tc);
        std::vector<double> xs, ys;
        for (const auto& p : pts) {
            xs.push_back(p[0]);
            ys.push_back(p[1]);
        }
        plot.add_series("L=" + std::to_string(static_cast<int>(ds.size)), xs, ys, true);
    }
    plot.write((std::filesystem::path(out_dir) / "collapse.svg").string());
    std::cout << "a=" << res.a << " Tc=" << res.tc << " quality=" << res.quality << '\n';
    return 0;
}

int cmd_ed(const std::vector<std::string>& points, bool entanglement, const std::string& out_path) {
    Lattice lat = build_gadget12();
    nlohmann::json out{{"version", 1},
                       {"lattice", "gadget12"},
                       {"code_version", kCodeVersion},
                       {"points", nlohmann::json::array()}};
    auto m_diag = order_parameter_per_basis_state(lat);
    auto e_diag = classical_energy_per_basis_state(lat, nominal_params(lat));

    double last_gamma = -1.0;
    Spectrum spec;
    for (const std::string& pt : points) {
        auto comma = pt.find(',');
        if (comma == std::string::npos) throw ConfigError("point must be gamma,t: " + pt);
        const double gamma = std::stod(pt.substr(0, comma));
        const double t = std::stod(pt.substr(comma + 1));
        ModelParams params = make_params(lat, gamma, t);
        if (gamma != last_gamma) {
            spec = diagonalize(build_hamiltonian(lat, params));
            last_gamma = gamma;
        }
        auto exps = thermal_expectations(spec, t, {m_diag, e_diag});
        nlohmann::json row{{"gamma_over_j", gamma}, {"t_over_j", t}, {"m", exps[0]},
                           {"e_diag", exps[1]}};
        if (entanglement) {
            Eigen::MatrixXd rho = thermal_density(spec, t);
            // two central spins of chain 0
            Eigen::MatrixXd rho2 = reduced_density(rho, lat.n_spins, {1, 2});
            row["concurrence"] = concurrence(rho2);
            row["ppt_min_eigenvalue"] = ppt_min_eigenvalue(rho, lat.n_spins, {0, 1, 2, 3});
        }
        out["points"].push_back(row);
        std::cout << "gamma=" << gamma << " t=" << t << " m=" << exps[0] << " e=" << exps[1]
                  << '\n';
    }
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << out.dump(2) << '\n';
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

int cmd_timing(const std::vector<int>& widths, const std::string& kernel, int sweeps, int m,
               double gamma, double t, const std::string& out_path) {
    KernelKind kind;
    if (kernel == "ct_chain")
        kind = KernelKind::ct_chain;
    else if (kernel == "ct_single")
        kind = KernelKind::ct_single;
    else if (kernel == "dt")
        kind = KernelKind::dt;
    else if (kernel == "dt_packed")
        kind = KernelKind::dt_packed;
    else
        throw ConfigError("kernel must be ct_chain, ct_single, dt or dt_packed");

    nlohmann::json out = nlohmann::json::array();
    for (int l : widths) {
        Lattice lat = build_square_octagonal(l);
        ModelParams params = make_params(lat, gamma, t);
        TimingReport rep = sweep_timer(lat, params, kind, sweeps, m);
        nlohmann::json row = timing_to_json(rep);
        row["l"] = l;
        out.push_back(row);
        std::cout << "L=" << l << " (" << rep.n_spins << " spins): median "
                  << rep.median_us << " us/sweep\n";
    }
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << out.dump(2) << '\n';
    }
    return 0;
}

int cmd_compare(const std::vector<std::string>& a_files, const std::vector<std::string>& b_files,
                double tolerance, const std::string& out_path) {
    if (a_files.size() != b_files.size())
        throw ConfigError("compare needs matching --a and --b lists");
    std::vector<ComparePoint> points;
    for (std::size_t i = 0; i < a_files.size(); ++i) {
        auto load = [](const std::string& path) {
            std::ifstream is(path);
            if (!is) throw ConfigError("cannot open " + path);
            return nlohmann::json::parse(is);
        };
        nlohmann::json a = load(a_files[i]);
        nlohmann::json b = load(b_files[i]);
        ComparePoint pt;
        pt.gamma_over_j = a.value("gamma_over_j", 0.0);
        pt.t_over_j = a.value("t_over_j", 0.0);
        if (std::abs(pt.gamma_over_j - b.value("gamma_over_j", 0.0)) > 1e-12 ||
            std::abs(pt.t_over_j - b.value("t_over_j", 0.0)) > 1e-12)
            throw ConfigError("parameter grids do not match at " + a_files[i]);
        pt.m_a = a.at("m").get<double>();
        pt.stderr_a = a.value("m_stderr", 0.0);
        pt.m_b = b.at("m").get<double>();
        pt.stderr_b = b.value("m_stderr", 0.0);
        points.push_back(pt);
    }
    nlohmann::json rep = compare_report(points, tolerance);
    std::cout << rep.dump(2) << '\n';
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << rep.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frustrated-magnet simulation suite"};
    app.require_subcommand(1);

    // lattice
    auto* lat_cmd = app.add_subcommand("lattice", "emit or validate a lattice");
    std::string lat_kind = "square_octagonal", lat_boundary = "cylinder", lat_out;
    int lat_l = 6, lat_rows = 6, lat_cols = 6;
    bool lat_validate = false;
    lat_cmd->add_option("--kind", lat_kind);
    lat_cmd->add_option("--l", lat_l);
    lat_cmd->add_option("--rows", lat_rows);
    lat_cmd->add_option("--cols", lat_cols);
    lat_cmd->add_option("--boundary", lat_boundary);
    lat_cmd->add_option("--out", lat_out);
    lat_cmd->add_flag("--validate", lat_validate);

    // run
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a JSON config");
    std::string run_config;
    std::vector<std::string> run_set;
    run_cmd->add_option("--config", run_config);
    run_cmd->add_option("--set", run_set, "override config fields, key=value");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "convergence-time report over run directories");
    std::vector<std::string> fit_runs;
    std::string fit_out = "fit_report";
    double fit_cutoff = 0.05;
    int fit_resamples = 1000;
    fit_cmd->add_option("--run", fit_runs)->required();
    fit_cmd->add_option("--cutoff", fit_cutoff);
    fit_cmd->add_option("--out", fit_out);
    fit_cmd->add_option("--resamples", fit_resamples);

    // collapse
    auto* col_cmd = app.add_subcommand("collapse", "finite-size scaling collapse");
    std::string col_input, col_out = "collapse_report";
    double col_c = 1.75;
    col_cmd->add_option("--input", col_input)->required();
    col_cmd->add_option("--c", col_c);
    col_cmd->add_option("--out", col_out);

    // ed
    auto* ed_cmd = app.add_subcommand("ed", "exact-diagonalization oracle constants (gadget12)");
    std::vector<std::string> ed_points;
    std::string ed_out;
    bool ed_ent = false;
    ed_cmd->add_option("--point", ed_points, "gamma,t (repeatable)")->required();
    ed_cmd->add_flag("--entanglement", ed_ent);
    ed_cmd->add_option("--out", ed_out);

    // timing
    auto* tim_cmd = app.add_subcommand("timing", "per-sweep timing across lattice widths");
    std::vector<int> tim_l{6, 9, 12};
    std::string tim_kernel = "ct_chain", tim_out;
    int tim_sweeps = 200, tim_m = 64;
    double tim_gamma = 0.736, tim_t = 0.244;
    tim_cmd->add_option("--l", tim_l);
    tim_cmd->add_option("--kernel", tim_kernel);
    tim_cmd->add_option("--sweeps", tim_sweeps);
    tim_cmd->add_option("--m", tim_m);
    tim_cmd->add_option("--gamma", tim_gamma);
    tim_cmd->add_option("--t", tim_t);
    tim_cmd->add_option("--out", tim_out);

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "deviation table between two engines");
    std::vector<std::string> cmp_a, cmp_b;
    std::string cmp_out;
    double cmp_tol = 0.03;
    cmp_cmd->add_option("--a", cmp_a, "equilibrium.json files, engine A")->required();
    cmp_cmd->add_option("--b", cmp_b, "equilibrium.json files, engine B")->required();
    cmp_cmd->add_option("--tolerance", cmp_tol);
    cmp_cmd->add_option("--out", cmp_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lat_cmd->parsed())
            return cmd_lattice(lat_kind, lat_l, lat_rows, lat_cols, lat_boundary, lat_out,
                               lat_validate);
        if (run_cmd->parsed()) return cmd_run(run_config, run_set);
        if (fit_cmd->parsed()) return cmd_fit(fit_runs, fit_cutoff, fit_out, fit_resamples);
        if (col_cmd->parsed()) return cmd_collapse(col_input, col_c, col_out);
        if (ed_cmd->parsed()) return cmd_ed(ed_points, ed_ent, ed_out);
        if (tim_cmd->parsed())
            return cmd_timing(tim_l, tim_kernel, tim_sweeps, tim_m, tim_gamma, tim_t, tim_out);
        if (cmp_cmd->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_tol, cmp_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
