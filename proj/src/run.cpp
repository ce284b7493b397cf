#include "otoc/run.hpp"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "otoc/io.hpp"
#include "otoc/lattice.hpp"
#include "otoc/rng.hpp"

namespace otoc {

namespace {

constexpr std::uint64_t kPureInit = 0x10;

OtocSettings make_settings(const RunContext& ctx, PhaseLogBook* book) {
    OtocSettings s;
    s.dynamics.step_size = ctx.cfg.dt;
    s.dynamics.regularization = ctx.cfg.regularization;
    s.dynamics.samples_per_step = ctx.cfg.dyn_samples;
    s.dynamics.n_chains = ctx.cfg.dyn_chains;
    s.dynamics.burn_in_sweeps = ctx.cfg.dyn_burn_in;
    s.dynamics.max_steps = 1 << 30;  // evolution length is set by the time grid
    s.overlap_sampler.n_chains = ctx.cfg.overlap_chains;
    s.overlap_sampler.n_sweeps = ctx.cfg.overlap_sweeps;
    s.overlap_sampler.burn_in_sweeps = ctx.cfg.overlap_burn_in;
    s.overlap_sampler.thinning = ctx.cfg.overlap_thinning;
    s.n_threads = ctx.workers;
    s.log_book = book;
    return s;
}

SrConfig make_training(const RunContext& ctx) {
    SrConfig t;
    t.step_size = ctx.cfg.train_eta;
    t.samples_per_step = ctx.cfg.train_samples;
    t.max_steps = ctx.cfg.train_steps;
    t.n_chains = ctx.cfg.train_chains;
    t.burn_in_sweeps = ctx.cfg.train_burn_in;
    t.regularization = ctx.cfg.regularization;
    t.n_threads = ctx.workers;
    return t;
}

bool oracle_enabled(const RunContext& ctx) {
    if (ctx.cfg.with_oracle == "on") return true;
    if (ctx.cfg.with_oracle == "off") return false;
    return ctx.params.lattice.n_sites() <= ctx.cfg.oracle_cap;
}

RbmState pure_initial_state(const RunContext& ctx) {
    if (!ctx.cfg.load_state.empty()) {
        Checkpoint ck = load_checkpoint(ctx.cfg.load_state);
        if (ck.state.n_visible() != ctx.n_visible) {
            throw std::runtime_error("run: checkpoint size does not match the lattice");
        }
        return ck.state;
    }
    return random_init(ctx.n_visible, ctx.n_hidden, ctx.cfg.sigma,
                       mix_seed(ctx.cfg.seed, kPureInit));
}

void write_fit_summary(const std::string& path, const FitResult& fit) {
    std::ofstream f(path);
    f << "lambda = " << format_double(fit.lambda) << "\n";
    f << "v_f = " << format_double(fit.v_f) << "\n";
    f << "p = " << format_double(fit.p) << "\n";
    f << "residual_norm = " << format_double(fit.residual_norm) << "\n";
    f << "n_points_used = " << fit.n_points_used << "\n";
    f << "window_threshold = " << format_double(fit.window_threshold) << "\n";
}

}  // namespace

RunContext make_context(const RunConfig& cfg) {
    validate_config(cfg);
    RunContext ctx;
    ctx.cfg = cfg;
    ctx.params.h = cfg.h;
    ctx.params.j = cfg.j;
    ctx.params.lattice = build_lattice(cfg.rows, cfg.cols);
    ctx.v1 = PauliOp{pauli_from_name(cfg.v1_pauli),
                     ctx.params.lattice.site_index(cfg.v1_row, cfg.v1_col)};
    ctx.v2 = PauliOp{pauli_from_name(cfg.v2_pauli),
                     ctx.params.lattice.site_index(cfg.v2_row, cfg.v2_col)};
    for (int i = 0; i <= cfg.n_points; ++i) {
        ctx.times.push_back(cfg.t_max * i / cfg.n_points);
    }
    ctx.n_visible = ctx.params.lattice.n_sites();
    ctx.n_hidden = std::max(1, static_cast<int>(std::lround(cfg.alpha * ctx.n_visible)));
    ctx.workers = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
    return ctx;
}

RunArtifacts run_experiment(const RunConfig& cfg_in, const std::string& out_dir) {
    RunContext ctx = make_context(cfg_in);
    std::filesystem::create_directories(out_dir);
    const auto path = [&](const std::string& name) { return out_dir + "/" + name; };

    PhaseLogBook book;
    OtocSettings settings = make_settings(ctx, &book);
    TfimHamiltonian ham(ctx.params);

    RunArtifacts art;
    if (ctx.cfg.experiment == "pure") {
        RbmState psi0 = pure_initial_state(ctx);
        if (!ctx.cfg.save_state.empty()) save_checkpoint(psi0, ctx.cfg.seed, ctx.cfg.save_state);
        art.curve = compute_otoc_pure(psi0, ham, ctx.v1, ctx.v2, ctx.times, settings,
                                      ctx.cfg.seed);
        art.curve.meta.initial_kind = ctx.cfg.load_state.empty() ? "random" : "checkpoint";
        art.curve.meta.sigma = ctx.cfg.sigma;
        art.curve.meta.alpha = ctx.cfg.alpha;
    } else if (ctx.cfg.experiment == "ground") {
        GroundOtocResult res = compute_otoc_ground(ham, ctx.v1, ctx.v2, ctx.times,
                                                   make_training(ctx), settings, ctx.cfg.alpha,
                                                   ctx.cfg.sigma, ctx.cfg.seed);
        if (!ctx.cfg.save_state.empty()) {
            save_checkpoint(res.trained_state, ctx.cfg.seed, ctx.cfg.save_state);
        }
        {
            std::ofstream f(path("training_energy.tsv"));
            f << "# columns: step re_E\n";
            for (std::size_t i = 0; i < res.training_energy.size(); ++i) {
                f << i << '\t' << format_double(res.training_energy[i]) << '\n';
            }
        }
        art.curve = std::move(res.curve);
    } else {  // thermal
        ThermalOtocResult res = compute_otoc_thermal(
            ham, ctx.v1, ctx.v2, ctx.times, ctx.cfg.ensemble_size, make_training(ctx), settings,
            ctx.cfg.alpha, ctx.cfg.thermal_sigma, ctx.cfg.seed);
        for (std::size_t m = 0; m < res.member_curves.size(); ++m) {
            char name[48];
            std::snprintf(name, sizeof(name), "member_%02zu.tsv", m);
            write_curve(path(name), res.member_curves[m]);
        }
        {
            std::ofstream f(path("sign_vectors.tsv"));
            f << "# columns: member xi_0 .. xi_{N-1}, training_energy\n";
            for (std::size_t m = 0; m < res.sign_vectors.size(); ++m) {
                f << m;
                for (int x : res.sign_vectors[m]) f << '\t' << x;
                f << '\t' << format_double(res.training_energies[m]) << '\n';
            }
        }
        for (int m : res.flagged_members) {
            art.warnings.push_back("thermal member " + std::to_string(m) +
                                   " trained more than 1% above the product-state energy");
        }
        art.curve = std::move(res.mean_curve);
    }

    write_curve(path("curve.tsv"), art.curve);
    write_curve_json(path("curve.json"), art.curve);
    write_plot_series(path("plot_re.dat"), art.curve, PlotSeries::re);
    write_plot_series(path("plot_im.dat"), art.curve, PlotSeries::im);
    write_plot_series(path("plot_err.dat"), art.curve, PlotSeries::err);
    write_phase_log(path("phase_log.tsv"), book);

    // Manifest: the resolved configuration; re-running it reproduces this run.
    {
        RunConfig resolved = ctx.cfg;
        resolved.workers = ctx.workers;
        std::ofstream f(path("manifest.cfg"));
        f << serialize_config(resolved);
    }

    if (oracle_enabled(ctx)) {
        art.oracle_curve = compute_oracle_curve(ctx.cfg);
        write_curve(path("oracle.tsv"), *art.oracle_curve);
        CompareReport rep = compare_curves(art.curve, *art.oracle_curve, false, 0.05);
        std::ofstream f(path("oracle_report.txt"));
        f << compare_report_text(rep, 0.05);
    }

    if (ctx.cfg.fit == "on") {
        const double d = ctx.cfg.fit_distance > 0.0
                             ? ctx.cfg.fit_distance
                             : site_distance(ctx.params.lattice, ctx.v1.site, ctx.v2.site);
        try {
            art.fit = fit_wavefront(art.curve, d, ctx.cfg.fit_threshold);
            write_fit_summary(path("fit_summary.txt"), *art.fit);
        } catch (const std::exception& e) {
            art.warnings.push_back(std::string("fit skipped: ") + e.what());
        }
    }

    for (const auto& w : art.warnings) std::cerr << "warning: " << w << '\n';
    return art;
}

OtocCurve compute_oracle_curve(const RunConfig& cfg_in) {
    RunContext ctx = make_context(cfg_in);
    const int n = ctx.params.lattice.n_sites();
    if (n > ctx.cfg.oracle_cap) {
        throw std::runtime_error("run: " + std::to_string(n) +
                                 " sites exceeds oracle_cap = " +
                                 std::to_string(ctx.cfg.oracle_cap));
    }

    DenseEvolver evolver(ctx.params, ctx.cfg.oracle_cap);
    OtocCurve curve;
    curve.meta.rows = ctx.cfg.rows;
    curve.meta.cols = ctx.cfg.cols;
    curve.meta.h = ctx.cfg.h;
    curve.meta.j = ctx.cfg.j;
    curve.meta.v1 = ctx.v1;
    curve.meta.v2 = ctx.v2;
    curve.meta.seed = ctx.cfg.seed;
    curve.meta.source = "ed";
    curve.meta.initial_kind = ctx.cfg.experiment;
    curve.meta.sigma = ctx.cfg.sigma;
    curve.meta.alpha = ctx.cfg.alpha;

    if (ctx.cfg.experiment == "thermal") {
        curve.meta.ensemble_size = ctx.cfg.ensemble_size;
        auto signs = thermal_sign_vectors(n, ctx.cfg.ensemble_size, ctx.cfg.seed);
        for (double t : ctx.times) {
            DenseThermalResult r = dense_thermal_otoc(evolver, ctx.v1, ctx.v2, t, signs);
            curve.points.push_back(OtocPoint{t, r.mean, r.spread, 0.0});
        }
        return curve;
    }

    DenseState psi0;
    if (ctx.cfg.experiment == "ground") {
        psi0 = evolver.ground_state();
    } else {
        RbmState rbm0 = pure_initial_state(ctx);
        psi0 = rbm_to_dense(rbm0, ctx.cfg.oracle_cap);
    }
    for (double t : ctx.times) {
        curve.points.push_back(OtocPoint{t, dense_otoc(psi0, evolver, ctx.v1, ctx.v2, t), 0.0,
                                         0.0});
    }
    return curve;
}

OtocCurve run_oracle(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    OtocCurve curve = compute_oracle_curve(cfg);
    write_curve(out_dir + "/oracle.tsv", curve);
    write_curve_json(out_dir + "/oracle.json", curve);
    return curve;
}

CompareReport compare_curves(const OtocCurve& a, const OtocCurve& b, bool interpolate,
                             double tolerance, double min_ref_re) {
    CompareReport rep;
    auto interp = [&](double t) -> std::optional<Complex> {
        if (b.points.empty() || t < b.points.front().t - 1e-12 ||
            t > b.points.back().t + 1e-12) {
            return std::nullopt;
        }
        for (std::size_t i = 0; i + 1 < b.points.size(); ++i) {
            const auto& lo = b.points[i];
            const auto& hi = b.points[i + 1];
            if (t <= hi.t + 1e-12) {
                const double w = (hi.t - lo.t) > 0 ? (t - lo.t) / (hi.t - lo.t) : 0.0;
                return lo.f + w * (hi.f - lo.f);
            }
        }
        return b.points.back().f;
    };

    if (!interpolate && a.points.size() != b.points.size()) {
        throw std::runtime_error("compare: grids differ (use interpolation)");
    }
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const double t = a.points[i].t;
        Complex ref;
        if (interpolate) {
            auto v = interp(t);
            if (!v) continue;
            ref = *v;
        } else {
            if (std::abs(b.points[i].t - t) > 1e-9) {
                throw std::runtime_error("compare: grids differ (use interpolation)");
            }
            ref = b.points[i].f;
        }
        if (ref.real() < min_ref_re) continue;
        CompareRow row;
        row.t = t;
        row.d_re = a.points[i].f.real() - ref.real();
        row.d_im = a.points[i].f.imag() - ref.imag();
        row.ref_re = ref.real();
        rep.rows.push_back(row);
        rep.max_abs_d_re = std::max(rep.max_abs_d_re, std::abs(row.d_re));
        rep.max_abs_d_im = std::max(rep.max_abs_d_im, std::abs(row.d_im));
        if (rep.first_exceed_t < 0.0 && std::abs(row.d_re) > tolerance) {
            rep.first_exceed_t = t;
        }
        ++rep.n_compared;
    }
    return rep;
}

std::string compare_report_text(const CompareReport& rep, double tolerance) {
    std::string out;
    out += "# columns: t d_re d_im ref_re\n";
    for (const auto& row : rep.rows) {
        out += format_double(row.t) + "\t" + format_double(row.d_re) + "\t" +
               format_double(row.d_im) + "\t" + format_double(row.ref_re) + "\n";
    }
    out += "# n_compared = " + std::to_string(rep.n_compared) + "\n";
    out += "# max_abs_d_re = " + format_double(rep.max_abs_d_re) + "\n";
    out += "# max_abs_d_im = " + format_double(rep.max_abs_d_im) + "\n";
    out += "# tolerance = " + format_double(tolerance) + "\n";
    out += "# first_exceed_t = " + format_double(rep.first_exceed_t) + "\n";
    return out;
}

}  // namespace otoc
