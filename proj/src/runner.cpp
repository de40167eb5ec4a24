#include "psdyn/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "psdyn/beam.hpp"
#include "psdyn/exact.hpp"
#include "psdyn/field_io.hpp"
#include "psdyn/fourier.hpp"

namespace psdyn {

namespace {

HamiltonianModel model_from(const ScenarioConfig& cfg) {
    if (cfg.potential == HamiltonianKind::polynomial) return polynomial_model(cfg.coefficients);
    return builtin(cfg.potential, cfg.dim);
}

bool has_exact(const ScenarioConfig& cfg) {
    return cfg.potential == HamiltonianKind::free || cfg.potential == HamiltonianKind::linear_field ||
           cfg.potential == HamiltonianKind::harmonic;
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    std::string s = buf;
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

ComplexField compute_field(const ScenarioConfig& cfg, const HamiltonianModel& model, Method m, double t,
                           int threads) {
    const WKBInitialData data = standard_gaussian_wkb();
    switch (m) {
        case Method::exact:
            if (!has_exact(cfg)) throw Error(ErrorKind::unsupported, "no exact oracle for this potential");
            return exact_field(cfg.potential, cfg.grid, t, cfg.hbar);
        case Method::aga: {
            InitialFn psi0;
            if (has_exact(cfg)) {
                const ScenarioOracle o = make_oracle(cfg.potential);
                const double hb = cfg.hbar;
                psi0 = [o, hb](const Vec& Y) { return o.Psi(Y[0], Y[1], 0.0, hb); };
            } else {
                const double hb = cfg.hbar;
                psi0 = [data, hb](const Vec& Y) { return prepare_wkb_initial(data, Y, hb).value; };
            }
            return propagate_aga(psi0, cfg.grid, t, model, cfg.hbar, cfg.quad, threads);
        }
        case Method::frozen: {
            InitialFn psi0;
            if (has_exact(cfg)) {
                const ScenarioOracle o = make_oracle(cfg.potential);
                const double hb = cfg.hbar;
                psi0 = [o, hb](const Vec& Y) { return o.Psi(Y[0], Y[1], 0.0, hb); };
            } else {
                const double hb = cfg.hbar;
                psi0 = [data, hb](const Vec& Y) { return prepare_wkb_initial(data, Y, hb).value; };
            }
            return propagate_frozen(psi0, cfg.grid, t, model, cfg.hbar, cfg.quad, threads);
        }
        case Method::fourier:
            return eval_fourier_integral(cfg.grid, t, model, data, cfg.hbar, cfg.quad, threads);
        case Method::beam: {
            const LagrangianChart chart = graph_chart(data, cfg.alpha_min, cfg.alpha_max);
            BeamCache cache = build_beam_cache(chart, cfg.beam_rays, t, cfg.dt, model, data);
            cache.tube_radius = cfg.tube_radius;
            return beam_field(cache, cfg.grid, cfg.hbar, threads).field;
        }
        case Method::transform: {
            if (!has_exact(cfg))
                throw Error(ErrorKind::unsupported, "transform method needs the closed-form psi(x,t)");
            const ScenarioOracle o = make_oracle(cfg.potential);
            const double hb = cfg.hbar;
            auto psi = [o, t, hb](double x) { return o.psi(x, t, hb); };
            return wave_packet_transform(psi, data.support_radius, cfg.grid, cfg.hbar, {}, threads);
        }
    }
    throw Error(ErrorKind::config, "unknown method");
}

}  // namespace

RunSummary run(const ScenarioConfig& config) {
    config.validate();
    const HamiltonianModel model = model_from(config);
    const int threads = resolve_threads(config.threads);
    RunSummary summary;

    std::filesystem::create_directories(config.out_dir);

    for (double t : config.times) {
        std::vector<std::pair<Method, ComplexField>> fields;
        for (Method m : config.methods) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                ComplexField f = compute_field(config, model, m, t, threads);
                fields.emplace_back(m, std::move(f));
            } catch (const Error& e) {
                summary.errors.push_back(std::string(method_name(m)) + " t=" + time_tag(t) + ": " + e.what());
                continue;
            }
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            const std::string base = config.out_dir + "/field_" + method_name(m) + "_t" + time_tag(t);
            if (config.write_csv) {
                write_field_csv(fields.back().second, base + ".csv");
                summary.produced.push_back(base + ".csv");
            }
            if (config.write_bin) {
                write_field_bin(fields.back().second, base + ".bin");
                summary.produced.push_back(base + ".bin");
            }
            (void)ms;
        }

        // comparison reports: every pair that includes the exact oracle
        const ComplexField* exact = nullptr;
        for (const auto& [m, f] : fields)
            if (m == Method::exact) exact = &f;
        if (exact) {
            for (const auto& [m, f] : fields) {
                if (m == Method::exact) continue;
                const auto t0 = std::chrono::steady_clock::now();
                const ErrorNorms n = error_norms(f, *exact);
                ComparisonReport rep;
                rep.method_a = method_name(m);
                rep.method_b = "exact";
                rep.rel_l2 = n.rel_l2;
                rep.sup = n.sup;
                rep.phase_sup = n.phase_sup;
                rep.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
                const std::string path = config.out_dir + "/report_" + method_name(m) + "_vs_exact_t" +
                                         time_tag(t) + ".txt";
                write_report(rep, path);
                summary.produced.push_back(path);
            }
        }
    }

    // summary file
    {
        std::FILE* fp = std::fopen((config.out_dir + "/summary.txt").c_str(), "w");
        if (fp) {
            for (const std::string& s : summary.produced) std::fprintf(fp, "produced %s\n", s.c_str());
            for (const std::string& s : summary.errors) std::fprintf(fp, "error %s\n", s.c_str());
            std::fclose(fp);
        }
    }
    return summary;
}

std::vector<SweepReport> sweep_hbar(const ScenarioConfig& config, const std::vector<double>& hbars) {
    config.validate();
    if (hbars.size() < 2) throw Error(ErrorKind::config, "sweep needs at least 2 hbar values");
    for (size_t k = 1; k < hbars.size(); ++k)
        if (std::abs(hbars[k - 1] / hbars[k] - 2.0) > 1e-9)
            throw Error(ErrorKind::config, "sweep hbar values must halve between entries");
    if (!has_exact(config))
        throw Error(ErrorKind::unsupported, "sweep requires a scenario with an exact oracle");

    const HamiltonianModel model = model_from(config);
    const WKBInitialData data = standard_gaussian_wkb();
    const ScenarioOracle oracle = make_oracle(config.potential);

    std::vector<SweepReport> reports;
    for (double t : config.times) {
        SweepReport rep;
        rep.time = t;

        const LagrangianChart chart = graph_chart(data, config.alpha_min, config.alpha_max);
        BeamCache cache = build_beam_cache(chart, config.beam_rays, t, config.dt, model, data);
        cache.tube_radius = config.tube_radius;

        // on-manifold sample: |alpha| <= 2 where the amplitude is significant
        const int nsamp = 41;
        for (double hb : hbars) {
            double maxabs = 0;
            std::vector<Complex> ex(nsamp);
            std::vector<Vec> pts(nsamp);
            for (int k = 0; k < nsamp; ++k) {
                const double a = -2.0 + 4.0 * k / (nsamp - 1);
                pts[k] = oracle.chart(a, t);
                ex[k] = oracle.Psi(pts[k][0], pts[k][1], t, hb);
                maxabs = std::max(maxabs, std::abs(ex[k]));
            }
            double D = 0;
            for (int k = 0; k < nsamp; ++k) {
                if (std::abs(ex[k]) < 0.1 * maxabs) continue;  // amplitude mask
                const Complex b =
                    beam_amplitude(cache, pts[k], hb) *
                    std::exp(Complex(0, 1) / hb * beam_phase(cache, pts[k]));
                D = std::max(D, std::abs(std::arg(b / ex[k])));
            }
            rep.rows.push_back({hb, D});
        }
        rep.pass = true;
        for (size_t k = 1; k < rep.rows.size(); ++k) {
            const double r = rep.rows[k].D / rep.rows[k - 1].D;
            rep.ratios.push_back(r);
            if (!(r >= 0.35 && r <= 0.65)) rep.pass = false;
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

void write_sweep_report(const std::vector<SweepReport>& reps, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error(ErrorKind::config, "cannot open for writing: " + path);
    for (const SweepReport& rep : reps) {
        std::fprintf(fp, "time = %.17g\n", rep.time);
        for (const SweepRow& row : rep.rows)
            std::fprintf(fp, "hbar = %.17g, D = %.17g\n", row.hbar, row.D);
        for (size_t k = 0; k < rep.ratios.size(); ++k)
            std::fprintf(fp, "ratio_%zu = %.17g\n", k, rep.ratios[k]);
        std::fprintf(fp, "pass = %s\n", rep.pass ? "true" : "false");
    }
    std::fclose(fp);
}

}  // namespace psdyn
