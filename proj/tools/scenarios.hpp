#pragma once

// Subcommand implementations: each builds its inputs from a flat config,
// runs the library, writes deterministic CSV/JSON and returns a one-line
// summary. Exit codes: 0 ok, 2 config error, 3 solver/integrator failure,
// 4 acceptance-gate failure (estimate --check).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "mtcav/decoherence.hpp"
#include "mtcav/dynamics.hpp"
#include "mtcav/fit.hpp"
#include "mtcav/io.hpp"
#include "mtcav/mtlab.hpp"
#include "mtcav/soliton.hpp"
#include "mtcav/spectra.hpp"

#include "config.hpp"

namespace mtcav::cli {

struct RunResult {
    int exit_code = 0;
    std::string summary;
};

inline std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw ConfigError("grid requires omega_min < omega_max and points >= 2");
    std::vector<double> g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

// ---------------------------------------------------------------- spectrum

inline SpectrumSeries spectrum_series_from_config(ConfigView& cfg, int jobs) {
    const std::string mode = cfg.text("mode", "analytic");
    const double omega0 = cfg.natural("omega0", 5.0);
    const double omega = cfg.natural("omega", omega0);
    const double lambda = cfg.natural("lambda", 1.0);
    const int n_emitters = cfg.integer("n_emitters", 1);
    const double lo = cfg.natural("omega_min", omega0 - 3.0);
    const double hi = cfg.natural("omega_max", omega0 + 3.0);
    const int points = cfg.integer("points", 601);

    if (mode == "analytic") {
        const double gp = cfg.natural("gamma_plus", 0.1);
        const double gm = cfg.natural("gamma_minus", gp);
        SusceptibilityParams p(omega0, omega, lambda, n_emitters, gp, gm);
        cfg.done();
        return analytic_spectrum(p, linear_grid(lo, hi, points));
    }
    if (mode == "numeric") {
        const double kappa = cfg.natural("kappa", 0.05);
        const double gamma = cfg.natural("gamma", kappa);
        const int n_max = cfg.integer("n_max", 2);
        NumericSpectrumSpec spec{TavisCummingsParams(omega0, omega, lambda, n_emitters, n_max),
                                 kappa, gamma};
        spec.probe_strength = cfg.natural("probe", -1.0);
        spec.jobs = jobs;
        cfg.done();
        return numeric_spectrum(spec, linear_grid(lo, hi, points));
    }
    throw ConfigError("key `mode`: expected analytic or numeric, got `" + mode + "`");
}

inline RunResult cmd_spectrum(ConfigView cfg, const std::string& out, int jobs) {
    SpectrumSeries s = spectrum_series_from_config(cfg, jobs);
    CsvWriter csv(out, {"omega", "value"});
    for (size_t i = 0; i < s.omega.size(); ++i) csv.row({s.omega[i], s.value[i]});

    std::ostringstream sum;
    sum << "spectrum(" << s.generator << "): " << s.omega.size() << " points -> " << out;
    auto peaks = find_peaks(s);
    if (peaks.empty()) {
        sum << "; no peaks in grid";
    } else {
        sum << "; peaks at";
        for (const auto& p : peaks) sum << " " << p.omega;
    }
    return {0, sum.str()};
}

// ------------------------------------------------------------------ evolve

inline DensityMatrix uniform_superposition(const SpaceShape& shape) {
    Vector v = Vector::Constant(shape.dim(), Complex(1.0, 0.0));
    return DensityMatrix::pure(shape, v);
}

inline RunResult cmd_evolve(ConfigView cfg, const std::string& out) {
    const std::string model = cfg.text("model", "lindblad");
    const double t_max = cfg.natural("t_max", 10.0);
    const int samples = cfg.integer("samples", 50);
    if (samples < 1 || t_max <= 0.0) throw ConfigError("t_max and samples must be positive");

    std::ostringstream sum;
    if (model == "lindblad") {
        const double omega0 = cfg.natural("omega0", 1.0);
        const double omega = cfg.natural("omega", omega0);
        const double lambda = cfg.natural("lambda", 0.1);
        const int n_emitters = cfg.integer("n_emitters", 1);
        const double kappa = cfg.natural("kappa", 0.1);
        const double n_avg = cfg.natural("n_avg", 1.0);
        const double tol = cfg.natural("tol", 1e-8);
        const std::string initial = cfg.text("initial", "ground_coherent");
        const int n_max = cfg.integer("n_max", default_fock_truncation(n_avg));
        cfg.done();

        TavisCummingsParams p(omega0, omega, lambda, n_emitters, n_max);
        CompositeSpace space = p.space();
        LindbladSpec spec(space, build_tc_hamiltonian(p, space), kappa);
        DensityMatrix state = [&] {
            if (initial == "ground_coherent") {
                Vector psi = Vector::Zero(space.dim());
                Vector coh = coherent_state(space.field, std::sqrt(n_avg));
                for (int n = 0; n < space.field.dim(); ++n) psi(space.index(0, n)) = coh(n);
                return DensityMatrix::pure(space.shape(), psi);
            }
            if (initial == "excited_vacuum") {
                Vector psi = Vector::Zero(space.dim());
                psi(space.index(space.spin.dim() - 1, 0)) = 1.0;
                return DensityMatrix::pure(space.shape(), psi);
            }
            throw ConfigError("key `initial`: expected ground_coherent or excited_vacuum");
        }();

        Operator n_op = embed_field(space, fock_number(space.field));
        Operator sz_op = embed_spin(space, collective_spin(space.spin).sz);
        Operator c_op = tensor_and_excitation(space.spin, space.field).excitation;

        CsvWriter csv(out, {"t", "photon", "sz", "excitation", "trace_error"});
        double t_prev = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double t = t_max * i / samples;
            if (i > 0) state = lindblad_evolve(spec, state, t - t_prev, tol);
            t_prev = t;
            csv.row({t, state.expectation_real(n_op), state.expectation_real(sz_op),
                     state.expectation_real(c_op), state.hygiene().trace_error});
        }
        sum << "evolve(lindblad): t_max " << t_max << ", final photon "
            << state.expectation_real(n_op) << " -> " << out;
        return {0, sum.str()};
    }

    if (model == "secular") {
        std::vector<double> energies = cfg.number_list("energies");
        const double gamma = cfg.natural("gamma", 0.1);
        const int i = cfg.integer("track_i", 0);
        const int j = cfg.integer("track_j", 1);
        cfg.done();
        const auto n = static_cast<Eigen::Index>(energies.size());
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw ConfigError("track_i/track_j must be distinct indices into `energies`");
        Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, gamma);
        g.diagonal().setZero();
        SecularSpec spec(energies, g);
        SpaceShape shape({static_cast<int>(n)});
        DensityMatrix rho0 = uniform_superposition(shape);

        CsvWriter csv(out, {"t", "coh_abs", "coh_re", "coh_im"});
        for (int k = 0; k <= samples; ++k) {
            const double t = t_max * k / samples;
            DensityMatrix rho = secular_evolve(spec, rho0, t);
            const Complex c = rho.matrix()(i, j);
            csv.row({t, std::abs(c), c.real(), c.imag()});
        }
        sum << "evolve(secular): " << (samples + 1) << " samples -> " << out;
        return {0, sum.str()};
    }

    if (model == "phase") {
        const int n_levels = cfg.integer("n_levels", 6);
        const double kappa = cfg.natural("kappa", 1.0);
        const double omega = cfg.natural("omega", 0.0);
        const std::string mode_txt = cfg.text("mode", "analytic");
        const int i = cfg.integer("track_i", 0);
        const int j = cfg.integer("track_j", n_levels - 1);
        cfg.done();
        if (n_levels < 2) throw ConfigError("n_levels must be >= 2");
        if (i < 0 || j < 0 || i >= n_levels || j >= n_levels || i == j)
            throw ConfigError("track_i/track_j must be distinct level indices");
        const EvolveMode mode = [&] {
            if (mode_txt == "analytic") return EvolveMode::analytic;
            if (mode_txt == "numeric") return EvolveMode::numeric;
            throw ConfigError("key `mode`: expected analytic or numeric");
        }();
        PhaseDampingSpec spec(omega, kappa);
        SpaceShape shape({n_levels});
        DensityMatrix rho0 = uniform_superposition(shape);

        CsvWriter csv(out, {"t", "coh_abs", "diag_0"});
        for (int k = 0; k <= samples; ++k) {
            const double t = t_max * k / samples;
            DensityMatrix rho = phase_damping_evolve(spec, rho0, t, mode);
            csv.row({t, std::abs(rho.matrix()(i, j)), rho.matrix()(0, 0).real()});
        }
        sum << "evolve(phase," << mode_txt << "): " << (samples + 1) << " samples -> " << out;
        return {0, sum.str()};
    }

    throw ConfigError("key `model`: expected lindblad, secular or phase, got `" + model + "`");
}

// --------------------------------------------------------------------- cat

inline std::vector<CatDecoherenceResult> cat_results_from_config(ConfigView& cfg) {
    const double n_avg = cfg.natural("n_avg", 4.0);
    std::vector<double> phis;
    if (cfg.has("phi"))
        phis = cfg.number_list("phi");
    else
        phis = {0.3};
    const double kappa = cfg.natural("kappa", 0.05);
    const double t_max = cfg.natural("t_max", 0.1 / kappa);
    const int samples = cfg.integer("samples", 10);
    const int n_max = cfg.integer("n_max", -1);
    const double tol = cfg.natural("tol", 1e-9);
    cfg.done();

    std::vector<double> grid;
    for (int i = 1; i <= samples; ++i) grid.push_back(t_max * i / samples);

    std::vector<CatDecoherenceResult> out;
    for (double phi : phis)
        out.push_back(simulate_cat_decoherence(CatSpec(n_avg, phi, n_max), kappa, grid, tol));
    return out;
}

inline RunResult cmd_cat(ConfigView cfg, const std::string& out) {
    std::vector<CatDecoherenceResult> results = cat_results_from_config(cfg);
    CsvWriter csv(out, {"D", "rate_fit", "rate_pred", "ratio"});
    for (const auto& r : results) csv.row({r.distance, r.rate_fit, r.rate_pred, r.ratio});

    std::ostringstream sum;
    sum << "cat: " << results.size() << " rows -> " << out;
    if (results.size() >= 3) {
        std::vector<double> lx, ly;
        for (const auto& r : results)
            if (r.distance > 0.0 && r.rate_fit > 0.0) {
                lx.push_back(std::log(r.distance));
                ly.push_back(std::log(r.rate_fit));
            }
        if (lx.size() >= 3)
            sum << "; rate-vs-D exponent " << linear_fit(lx, ly).slope;
    }
    return {0, sum.str()};
}

// ----------------------------------------------------------------- soliton

inline KinkSolution kink_from_config(ConfigView& cfg) {
    KinkProblem p;
    p.force = Polynomial{cfg.number_list("coeffs")};
    p.u_minus = cfg.natural_required("u_minus");
    p.u_plus = cfg.natural_required("u_plus");
    p.select_rho = cfg.flag("select_rho", true);
    p.rho_f = cfg.natural("rho", 0.0);
    p.bracket_lo = cfg.natural("bracket_lo", -5.0);
    p.bracket_hi = cfg.natural("bracket_hi", 5.0);
    p.departure = cfg.natural("departure", 1e-6);
    cfg.done();
    return traveling_kink(p);
}

inline RunResult cmd_soliton(ConfigView cfg, const std::string& out) {
    KinkSolution sol = kink_from_config(cfg);
    CsvWriter csv(out, {"xi", "u", "uprime"});
    for (const auto& s : sol.samples) csv.row({s[0], s[1], s[2]});
    std::ostringstream sum;
    sum << "soliton: rho_selected " << sol.rho_selected << ", width " << sol.width
        << ", residual " << sol.residual_max << " -> " << out;
    return {0, sum.str()};
}

// ---------------------------------------------------------------- estimate

inline MTConstants constants_from_config(ConfigView& cfg) {
    MTConstants c;
    c.unit_charge = cfg.quantity("unit_charge", si::dim_charge, c.unit_charge);
    c.mobile_charge = cfg.quantity("mobile_charge", si::dim_charge, c.mobile_charge);
    c.epsilon_rel = cfg.natural("epsilon_rel", c.epsilon_rel);
    c.pocket_distance = cfg.quantity("pocket_distance", si::dim_length, c.pocket_distance);
    c.dimer_spacing = cfg.quantity("dimer_spacing", si::dim_length, c.dimer_spacing);
    c.energy_gap = cfg.quantity("energy_gap", si::dim_energy, c.energy_gap);
    c.water_dipole = cfg.quantity("water_dipole", si::dim_dipole, c.water_dipole);
    c.sound_speed = cfg.quantity("v0", si::dim_speed, c.sound_speed);
    c.d_min = cfg.quantity("d_min", si::dim_length, c.d_min);
    c.kink_energy = cfg.quantity("E_kin", si::dim_energy, c.kink_energy);
    c.omega0_dimer = cfg.quantity("omega0_dimer", si::dim_frequency, c.omega0_dimer);
    c.n_water = cfg.natural("N_w", c.n_water);
    c.length = cfg.quantity("L", si::dim_length, c.length);
    c.volume = cfg.quantity("V", si::dim_volume, c.volume);
    c.n_dimers = cfg.natural("n_dimers", c.n_dimers);
    c.e_ow = cfg.quantity("E_ow", si::dim_efield, c.e_ow);
    c.water_moment_inertia =
        cfg.quantity("water_moment_inertia", si::dim_moment_inertia, c.water_moment_inertia);
    c.kink_speed = cfg.quantity("kink_speed", si::dim_speed, c.kink_speed);
    c.n_lo = cfg.natural("n_lo", c.n_lo);
    c.n_hi = cfg.natural("n_hi", c.n_hi);
    if (cfg.has("T_r")) c.t_r_override = cfg.quantity("T_r", si::dim_time, Quantity{});
    cfg.done();
    return c;
}

inline RunResult cmd_estimate(ConfigView cfg, const std::string& out, bool check) {
    MTConstants c = constants_from_config(cfg);
    PipelineReport rep = run_pipeline(c);
    write_text_file(out, rep.to_json().dump(2));

    int gated = 0, passed = 0;
    for (const auto& e : rep.entries)
        if (e.gated) {
            ++gated;
            if (e.pass) ++passed;
        }
    for (const auto& r : rep.ranges) {
        ++gated;
        if (r.pass) ++passed;
    }
    std::ostringstream sum;
    sum << "estimate: " << passed << "/" << gated << " gates passed, feasible n <= "
        << rep.feasible_n_max << " -> " << out;
    const bool ok = rep.all_gates_pass();
    if (check && !ok) {
        sum << " [CHECK FAILED]";
        return {4, sum.str()};
    }
    return {0, sum.str()};
}

// ------------------------------------------------------------------- sweep

inline RunResult cmd_sweep(ConfigView cfg, const std::string& out, int jobs) {
    const std::string target = cfg.text("target", "");
    const std::string key = cfg.text("key", "");
    if (target.empty() || key.empty())
        throw ConfigError("sweep requires `target` and `key`");
    cfg.mark_used("values");
    const auto raw = cfg.raw();
    if (!raw.count("values")) throw ConfigError("missing required config key `values`");
    std::vector<std::string> tokens;
    {
        std::stringstream ss(raw.at("values"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) tokens.push_back(item);
        }
    }
    if (tokens.empty()) throw ConfigError("key `values`: empty list");

    std::map<std::string, std::string> base;
    for (const auto& [k, v] : raw)
        if (k != "target" && k != "key" && k != "values") base[k] = v;

    std::vector<std::string> header;
    using Row = std::vector<double>;
    std::function<Row(ConfigView&)> row_fn;

    if (target == "spectrum") {
        header = {key, "peak_lo", "peak_hi", "splitting"};
        row_fn = [&](ConfigView& view) -> Row {
            SpectrumSeries s = spectrum_series_from_config(view, 1);
            auto [lo, hi] = doublet(s);
            return {lo.omega, hi.omega, hi.omega - lo.omega};
        };
    } else if (target == "cat") {
        header = {key, "D", "rate_fit", "rate_pred", "ratio"};
        row_fn = [&](ConfigView& view) -> Row {
            auto results = cat_results_from_config(view);
            if (results.size() != 1)
                throw ConfigError("sweep over `cat` requires a single phi per point");
            const auto& r = results.front();
            return {r.distance, r.rate_fit, r.rate_pred, r.ratio};
        };
    } else if (target == "soliton") {
        header = {key, "rho_selected", "width", "residual_max"};
        row_fn = [&](ConfigView& view) -> Row {
            KinkSolution sol = kink_from_config(view);
            return {sol.rho_selected, sol.width, sol.residual_max};
        };
    } else {
        throw ConfigError("key `target`: expected spectrum, cat or soliton, got `" + target + "`");
    }

    std::vector<Row> rows(tokens.size());
    std::vector<std::string> errors(tokens.size());
    auto run_point = [&](size_t i) {
        auto kv = base;
        kv[key] = tokens[i];
        try {
            ConfigView view(kv);
            rows[i] = row_fn(view);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    };

    const int n_jobs = std::max(1, jobs);
    if (n_jobs == 1) {
        for (size_t i = 0; i < tokens.size(); ++i) run_point(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::future<void>> fs;
        for (int j = 0; j < n_jobs; ++j)
            fs.push_back(std::async(std::launch::async, [&] {
                for (size_t i = next.fetch_add(1); i < tokens.size(); i = next.fetch_add(1))
                    run_point(i);
            }));
        for (auto& f : fs) f.get();
    }
    for (size_t i = 0; i < tokens.size(); ++i)
        if (!errors[i].empty())
            throw SolverError("sweep point " + key + " = " + tokens[i] + ": " + errors[i]);

    CsvWriter csv(out, header);
    for (size_t i = 0; i < tokens.size(); ++i) csv.row(tokens[i], rows[i]);

    std::ostringstream sum;
    sum << "sweep(" << target << ") over " << key << ": " << tokens.size() << " rows -> " << out;
    return {0, sum.str()};
}

// ------------------------------------------------------------------ report

namespace report_detail {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty input file: " + path);
    {
        std::stringstream ss(trim(line));
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(trim(cell));
    }
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_plain_number("csv cell", cell));
        if (row.size() != t.header.size())
            throw ConfigError(path + ": row width does not match header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline int column(const Table& t, const std::string& name) {
    for (size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return static_cast<int>(i);
    return -1;
}

} // namespace report_detail

inline RunResult cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
    if (inputs.empty()) throw ConfigError("report: no input files given");

    Json fits;
    Json sources;
    for (const auto& path : inputs) {
        report_detail::Table t = report_detail::read_csv(path);
        Json rec;
        rec["source"] = path;
        rec["points"] = static_cast<long long>(t.rows.size());

        int xcol = -1, ycol = -1;
        std::string kind;
        if (report_detail::column(t, "splitting") >= 0) {
            kind = "splitting_vs_" + t.header.at(0);
            xcol = 0;
            ycol = report_detail::column(t, "splitting");
        } else if (report_detail::column(t, "rate_fit") >= 0) {
            const int dcol = report_detail::column(t, "D");
            kind = "rate_vs_D";
            xcol = dcol >= 0 ? dcol : 0;
            ycol = report_detail::column(t, "rate_fit");
        } else {
            throw ConfigError(path + ": unrecognized schema (need a `splitting` or `rate_fit` column)");
        }

        std::vector<double> lx, ly;
        for (const auto& row : t.rows) {
            const double x = row[static_cast<size_t>(xcol)];
            const double y = row[static_cast<size_t>(ycol)];
            if (x > 0.0 && y > 0.0) {
                lx.push_back(std::log(x));
                ly.push_back(std::log(y));
            }
        }
        if (lx.size() < 2) throw ConfigError(path + ": fewer than two usable rows");
        LinearFit f = linear_fit(lx, ly);
        rec["kind"] = kind;
        rec["exponent"] = f.slope;
        rec["stderr"] = f.slope_stderr;
        Json ci;
        ci.push_back(f.slope - 1.96 * f.slope_stderr);
        ci.push_back(f.slope + 1.96 * f.slope_stderr);
        rec["ci95"] = std::move(ci);
        fits.push_back(std::move(rec));
        sources.push_back(path);
    }

    Json root;
    root["fits"] = std::move(fits);
    root["inputs"] = std::move(sources);
    write_text_file(out, root.dump(2));
    return {0, "report: " + std::to_string(inputs.size()) + " input(s) merged -> " + out};
}

} // namespace mtcav::cli
