// ptcs command-line front end.  All numerics run in the dimensionless frame;
// values given on the command line and written to files are in the units of
// the active configuration.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ptcs/checks.hpp"
#include "ptcs/cs_quantization.hpp"
#include "ptcs/dynamics.hpp"
#include "ptcs/expression.hpp"
#include "ptcs/io.hpp"
#include "ptcs/physical_model.hpp"

using namespace ptcs;

namespace {

constexpr double pi = std::numbers::pi;

struct Globals {
    std::string config_path;
    std::optional<double> nu;
    int nmax = default_nmax;
    std::string units;
    std::uint64_t seed = 12345;
};

PhysicalConfig resolve_config(const Globals& g) {
    std::optional<UnitSystem> units;
    if (!g.units.empty()) units = unit_system_from_string(g.units);
    PhysicalConfig cfg = dimensionless_config(0.0);
    if (!g.config_path.empty()) {
        cfg = load_config_file(g.config_path);
        if (units && *units != cfg.units()) cfg = make_config(cfg.L(), cfg.mass(), cfg.hbar(), cfg.nu(), *units);
    } else if (units == UnitSystem::SI) {
        cfg = make_config(20.0 * constants::angstrom_si, constants::electron_mass_si, constants::hbar_si, 0.0,
                          UnitSystem::SI);
    }
    if (g.nu) cfg = cfg.with_nu(*g.nu);
    return cfg;
}

// Label in configured units, defaulting to q0 = L/5, p0 = 4 pi hbar / L.
struct Label {
    std::optional<double> q0, p0;

    void add(CLI::App* app) {
        app->add_option("--q0", q0, "Label position (default L/5)");
        app->add_option("--p0", p0, "Label momentum (default 4 pi hbar/L)");
    }
    double q(const PhysicalConfig& cfg) const { return q0 ? cfg.position_to_dimensionless(*q0) : pi / 5.0; }
    double p(const PhysicalConfig& cfg) const { return p0 ? cfg.momentum_to_dimensionless(*p0) : 4.0; }
};

double rho_scale(const PhysicalConfig& cfg) {
    const double dq = cfg.position_from_dimensionless(1.0) - cfg.position_from_dimensionless(0.0);
    const double dp = cfg.momentum_from_dimensionless(1.0) - cfg.momentum_from_dimensionless(0.0);
    return 1.0 / (dq * dp);
}

PhaseSpaceDistribution to_units(PhaseSpaceDistribution rho, const PhysicalConfig& cfg) {
    for (auto& q : rho.q) q = cfg.position_from_dimensionless(q);
    for (auto& p : rho.p) p = cfg.momentum_from_dimensionless(p);
    const double s = rho_scale(cfg);
    for (auto& v : rho.values) v *= s;
    return rho;
}

Metadata base_metadata(const PhysicalConfig& cfg) {
    return {{"units", to_string(cfg.units())},
            {"L", format_double(cfg.L())},
            {"mass", format_double(cfg.mass())},
            {"hbar", format_double(cfg.hbar())},
            {"nu", format_double(cfg.nu())}};
}

std::vector<double> x_grid(int points) {
    std::vector<double> x(points);
    for (int j = 0; j < points; ++j) x[j] = pi * j / (points - 1);
    return x;
}

std::vector<std::complex<double>> state_values(const SpectralState& s, const std::vector<double>& xs, double scale) {
    std::vector<std::complex<double>> out(xs.size());
    std::vector<double> phi(s.coeffs.size());
    const auto norms = norm_constants(s.nmax(), s.nu);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        eigenfunction_values(s.nmax(), s.nu, xs[j], phi, norms);
        std::complex<double> v = 0.0;
        for (std::size_t n = 0; n < phi.size(); ++n) v += s.coeffs[n] * phi[n];
        out[j] = scale * v;
    }
    return out;
}

std::vector<double> scaled_x(const std::vector<double>& xs, const PhysicalConfig& cfg) {
    std::vector<double> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) out[j] = cfg.position_from_dimensionless(xs[j]);
    return out;
}

void print_kv(const std::string& k, double v) { std::printf("%-28s %.17g\n", k.c_str(), v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-space tools for the trigonometric Poschl-Teller well"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration (L, mass, hbar, nu, units)")->check(CLI::ExistingFile);
    app.add_option("--nu", g.nu, "Potential strength nu >= 0");
    app.add_option("--nmax", g.nmax, "Eigenbasis truncation")->check(CLI::NonNegativeNumber);
    app.add_option("--units", g.units, "SI or natural")->check(CLI::IsMember({"SI", "natural"}));
    app.add_option("--seed", g.seed, "Seed for randomized invariant sampling");

    // eigen
    auto* eigen = app.add_subcommand("eigen", "Spectrum and eigenfunctions");
    std::string eigen_table, eigen_functions;
    int eigen_points = 513;
    eigen->add_option("--out", eigen_table, "CSV with n,E_n,Z_n");
    eigen->add_option("--functions", eigen_functions, "CSV with x,phi_0..phi_nmax");
    eigen->add_option("--points", eigen_points, "x samples for --functions")->check(CLI::Range(2, 1 << 20));

    // cs
    auto* cs_cmd = app.add_subcommand("cs", "One coherent state: normalization, moments, wavefunction");
    Label cs_label;
    cs_label.add(cs_cmd);
    std::string cs_wave, cs_coeffs;
    int cs_points = 1025;
    cs_cmd->add_option("--out", cs_wave, "CSV with x,re,im,abs2");
    cs_cmd->add_option("--coeffs", cs_coeffs, "CSV with n,re,im,abs2 (eigenbasis of the same nu)");
    cs_cmd->add_option("--points", cs_points, "x samples for --out")->check(CLI::Range(2, 1 << 20));

    // quantize
    auto* quant = app.add_subcommand("quantize", "Quantize a classical symbol (dimensionless frame)");
    std::string symbol_spec, quant_out;
    quant->add_option("--symbol", symbol_spec, "Built-in name or u-expr:pdeg, e.g. '1/sin(q)^2:0'")->required();
    quant->add_option("--out", quant_out, "Eigenbasis matrix as JSON");

    // symbols
    auto* syms = app.add_subcommand("symbols", "Lower symbols of the basic operators at a label");
    Label sym_label;
    sym_label.add(syms);

    // husimi
    auto* hus = app.add_subcommand("husimi", "Phase-space distribution of an evolved coherent state");
    Label hus_label;
    hus_label.add(hus);
    std::optional<double> nu0cs;
    double hus_nu_evolve = 0.0;
    std::string hus_t = "0", hus_out;
    int qgrid = 256, pgrid = 256, samples = 0;
    std::optional<double> pmax;
    hus->add_option("--nu0cs", nu0cs, "CS parameter of the initial state (default --nu)");
    hus->add_option("--nu-evolve", hus_nu_evolve, "Parameter of the evolving Hamiltonian");
    hus->add_option("--t", hus_t, "Time, or 'avg' for the infinite-time average");
    hus->add_option("--samples", samples, "With --t avg: average over this many times in one period instead");
    hus->add_option("--qgrid", qgrid, "q points")->check(CLI::Range(2, 1 << 16));
    hus->add_option("--pgrid", pgrid, "p points")->check(CLI::Range(2, 1 << 16));
    hus->add_option("--pmax", pmax, "Momentum half-range (default 12 pi hbar/L)");
    hus->add_option("--out", hus_out, "CSV with q,p,rho")->required();

    // evolve
    auto* evo = app.add_subcommand("evolve", "Evolve a coherent state; autocorrelation and mean energy");
    Label evo_label;
    evo_label.add(evo);
    double evo_t = 0.0, evo_nu_evolve = 0.0;
    std::string evo_wave, evo_coeffs;
    int evo_points = 1025;
    evo->add_option("--t", evo_t, "Time");
    evo->add_option("--nu-evolve", evo_nu_evolve, "Parameter of the evolving Hamiltonian");
    evo->add_option("--out", evo_wave, "CSV with x,re,im,abs2 at time t");
    evo->add_option("--coeffs", evo_coeffs, "CSV with n,re,im,abs2 at time t");
    evo->add_option("--points", evo_points, "x samples for --out")->check(CLI::Range(2, 1 << 20));

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "Classical orbit at the mean energy of a label");
    Label traj_label;
    traj_label.add(traj);
    std::optional<double> traj_energy;
    int traj_points = 400;
    std::string traj_out;
    traj->add_option("--energy", traj_energy, "Orbit energy (default: mean energy of the label)");
    traj->add_option("--points", traj_points, "Points per branch")->check(CLI::Range(2, 1 << 20));
    traj->add_option("--out", traj_out, "CSV with q,p")->required();

    // check
    auto* chk = app.add_subcommand("check", "Run invariant suites; exit code 0 iff every case passes");
    std::string suite = "all", chk_json;
    std::vector<std::string> tols;
    bool timing = false;
    chk->add_option("--suite", suite, "Suite name or 'all'");
    chk->add_option("--tol", tols, "Global bound (1e-6) or key=value; repeatable");
    chk->add_option("--json", chk_json, "Write the reports as JSON");
    chk->add_flag("--timing", timing, "Include wall times in the JSON");

    // render
    auto* ren = app.add_subcommand("render", "Render a grid CSV as a PNG heatmap");
    std::string ren_in, ren_overlay, ren_out;
    ren->add_option("--in", ren_in, "Grid CSV")->required();
    ren->add_option("--overlay", ren_overlay, "Trajectory CSV");
    ren->add_option("--out", ren_out, "PNG path")->required();

    // Global flags may also follow the subcommand.
    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const PhysicalConfig cfg = resolve_config(g);
        const double nu = cfg.nu();
        const int nmax = g.nmax;

        if (*eigen) {
            const double es = cfg.energy_from_dimensionless(1.0);
            if (!eigen_table.empty())
                write_eigen_table_csv(eigen_table, nu, nmax, es, cfg.wavefunction_scale(), base_metadata(cfg));
            if (!eigen_functions.empty()) {
                const auto xs = x_grid(eigen_points);
                write_eigenfunctions_csv(eigen_functions, scaled_x(xs, cfg), nu, nmax, cfg.wavefunction_scale(),
                                         base_metadata(cfg));
            }
            if (eigen_table.empty() && eigen_functions.empty()) {
                std::printf("n,E_n\n");
                for (int n = 0; n <= nmax; ++n) std::printf("%d,%.17g\n", n, es * energy(n, nu));
            }
            return 0;
        }

        if (*cs_cmd) {
            const double q = cs_label.q(cfg), p = cs_label.p(cfg);
            const CoherentState cs({q, p, nu});
            const auto m = cs_moments(nu, q, p);
            print_kv("N (dimensionless)", cs.normalization());
            print_kv("N closed form", std::exp(-0.5 * cs_log_inverse_norm_sq_closed_form(nu, q)));
            print_kv("W(q)", superpotential(nu, q));
            print_kv("norm", m.norm);
            print_kv("<P>", cfg.momentum_from_dimensionless(m.mean_p));
            print_kv("dP", cfg.momentum_from_dimensionless(m.delta_p) - cfg.momentum_from_dimensionless(0.0));
            print_kv("<W(Q)>", m.mean_w);
            print_kv("dW dP - <W'>/2", m.saturation_defect);
            print_kv("mean energy", cfg.energy_from_dimensionless(closed_form_mean_energy(nu, q, p, nu)));
            Metadata meta = base_metadata(cfg);
            meta.push_back({"q0", format_double(cfg.position_from_dimensionless(q))});
            meta.push_back({"p0", format_double(cfg.momentum_from_dimensionless(p))});
            if (!cs_wave.empty()) {
                const auto xs = x_grid(cs_points);
                std::vector<std::complex<double>> v(xs.size());
                for (std::size_t j = 0; j < xs.size(); ++j) v[j] = cfg.wavefunction_scale() * cs.value(xs[j]);
                write_wavefunction_csv(cs_wave, scaled_x(xs, cfg), v, meta);
            }
            if (!cs_coeffs.empty()) write_coefficients_csv(cs_coeffs, cs_coefficients(cs, nmax, nu), meta);
            return 0;
        }

        if (*quant) {
            const auto sym = parse_symbol(symbol_spec, nu);
            const auto op = quantize(sym, nu, nmax);
            const bool multiplier = op.kind == QuantizedOperator::Kind::MultiplierFunction;
            std::printf("symbol        %s\n", sym.name.c_str());
            std::printf("kind          %s\n", multiplier ? "multiplication operator" : "eigenbasis matrix");
            if (op.properties.known) {
                std::printf("bounded       %s\n", op.properties.bounded ? "yes" : "no");
                std::printf("self-adjoint  %s\n", op.properties.self_adjoint ? "yes" : "no");
                std::printf("semi-bounded  %s\n", op.properties.semi_bounded ? "yes" : "no");
            }
            if (!op.properties.note.empty()) std::printf("note          %s\n", op.properties.note.c_str());
            if (multiplier) {
                for (double x : {0.1 * pi, 0.25 * pi, 0.5 * pi}) std::printf("F(%.6g) = %.17g\n", x, op.multiplier(x));
            }
            const Eigen::MatrixXcd m = multiplier ? assemble_matrix(op.form, nu, nmax) : op.matrix;
            print_kv("hermiticity defect", hermiticity_defect(m));
            if (!quant_out.empty()) write_matrix_json(quant_out, m);
            return 0;
        }

        if (*syms) {
            const double q = sym_label.q(cfg), p = sym_label.p(cfg);
            std::printf("%-22s %-24s %-24s %s\n", "operator", "lower symbol", "closed form", "error bar");
            auto row = [](const char* name, const LowerSymbol& ls, double closed) {
                std::printf("%-22s %-24.17g %-24.17g %.2e\n", name, ls.value.real(), closed, ls.error_bar);
            };
            row("Q", lower_symbol(operators::position(nu), q, p), lower_symbols::position(nu, q));
            row("P", lower_symbol(operators::momentum(nu), q, p), lower_symbols::momentum(p));
            row("W(Q)", lower_symbol(operators::superpotential(nu), q, p), lower_symbols::superpotential(nu, q));
            row("1/sin^2 Q", lower_symbol(operators::inverse_sin_squared(nu), q, p), lower_symbols::inverse_sin_squared(nu, q));
            row("P^2", lower_symbol(operators::kinetic(nu), q, p), lower_symbols::kinetic(nu, q, p));
            return 0;
        }

        if (*hus) {
            const double q = hus_label.q(cfg), p = hus_label.p(cfg);
            const double nu_cs0 = nu0cs.value_or(nu);
            GridSpec grid = default_phase_grid();
            grid.q_count = qgrid;
            grid.p_count = pgrid;
            if (pmax) grid.p_max = cfg.momentum_to_dimensionless(*pmax) - cfg.momentum_to_dimensionless(0.0);
            const auto state = cs_coefficients(CoherentState({q, p, nu_cs0}), nmax, hus_nu_evolve);
            PhaseSpaceDistribution rho;
            std::string t_meta;
            if (hus_t == "avg") {
                rho = samples > 0 ? sampled_time_average(state, nu, grid, samples, hus_nu_evolve)
                                  : time_averaged_husimi(state, nu, grid);
                t_meta = "avg";
            } else {
                double t = 0.0;
                try {
                    std::size_t used = 0;
                    t = std::stod(hus_t, &used);
                    if (used != hus_t.size()) throw std::invalid_argument(hus_t);
                } catch (const std::exception&) {
                    throw ValidationError("--t expects a number or 'avg', got '" + hus_t + "'");
                }
                const double tt = cfg.time_to_dimensionless(t);
                rho = husimi(evolve(state, tt, hus_nu_evolve), nu, grid);
                t_meta = format_double(t);
            }
            print_kv("grid mass", rho.mass());
            Metadata meta = base_metadata(cfg);
            meta.push_back({"nu0cs", format_double(nu_cs0)});
            meta.push_back({"nu_evolve", format_double(hus_nu_evolve)});
            meta.push_back({"q0", format_double(cfg.position_from_dimensionless(q))});
            meta.push_back({"p0", format_double(cfg.momentum_from_dimensionless(p))});
            meta.push_back({"t", t_meta});
            meta.push_back({"nmax", std::to_string(nmax)});
            write_grid_csv(hus_out, to_units(std::move(rho), cfg), meta);
            return 0;
        }

        if (*evo) {
            const double q = evo_label.q(cfg), p = evo_label.p(cfg);
            const double tt = cfg.time_to_dimensionless(evo_t);
            const auto state = cs_coefficients(CoherentState({q, p, nu}), nmax, evo_nu_evolve);
            const auto evolved = evolve(state, tt, evo_nu_evolve);
            const auto a = autocorrelation(state, tt, evo_nu_evolve);
            const auto me = mean_energy(nu, q, p, evo_nu_evolve);
            print_kv("t (dimensionless)", tt);
            print_kv("|<phi(0)|phi(t)>|", std::abs(a));
            print_kv("arg <phi(0)|phi(t)>", std::arg(a));
            print_kv("norm^2", evolved.norm_squared());
            print_kv("truncation mass", state.truncation_mass);
            print_kv("mean energy, sum", cfg.energy_from_dimensionless(me.coefficient_sum));
            print_kv("mean energy, closed form", cfg.energy_from_dimensionless(me.closed_form));
            print_kv("relative difference", me.relative_difference);
            if (me.truncation_dominated) std::printf("mean energy sum is truncation-dominated at nmax %d\n", me.nmax);
            Metadata meta = base_metadata(cfg);
            meta.push_back({"nu_evolve", format_double(evo_nu_evolve)});
            meta.push_back({"q0", format_double(cfg.position_from_dimensionless(q))});
            meta.push_back({"p0", format_double(cfg.momentum_from_dimensionless(p))});
            meta.push_back({"t", format_double(evo_t)});
            if (!evo_coeffs.empty()) write_coefficients_csv(evo_coeffs, evolved, meta);
            if (!evo_wave.empty()) {
                const auto xs = x_grid(evo_points);
                write_wavefunction_csv(evo_wave, scaled_x(xs, cfg), state_values(evolved, xs, cfg.wavefunction_scale()),
                                       meta);
            }
            return 0;
        }

        if (*traj) {
            const double q = traj_label.q(cfg), p = traj_label.p(cfg);
            const double e = traj_energy ? cfg.energy_to_dimensionless(*traj_energy) : closed_form_mean_energy(nu, q, p, nu);
            auto pts = classical_trajectory(e, nu, traj_points);
            for (auto& pt : pts) {
                pt.q = cfg.position_from_dimensionless(pt.q);
                pt.p = cfg.momentum_from_dimensionless(pt.p);
            }
            print_kv("energy", cfg.energy_from_dimensionless(e));
            Metadata meta = base_metadata(cfg);
            meta.push_back({"energy", format_double(cfg.energy_from_dimensionless(e))});
            write_trajectory_csv(traj_out, pts, meta);
            return 0;
        }

        if (*chk) {
            CheckOptions opts;
            opts.seed = g.seed;
            for (const auto& t : tols) apply_tolerance_argument(opts, t);
            const auto reports = run_suites(suite, opts);
            bool pass = true;
            std::string json = "[\n";
            for (std::size_t i = 0; i < reports.size(); ++i) {
                std::cout << format_report(reports[i]) << std::flush;
                pass = pass && reports[i].pass();
                json += report_to_json(reports[i], timing) + (i + 1 < reports.size() ? ",\n" : "\n");
            }
            json += "]\n";
            if (!chk_json.empty()) {
                std::ofstream f(chk_json);
                if (!(f << json)) throw IoError(chk_json + ": cannot write");
            }
            std::cout << (pass ? "all checks passed" : "some checks FAILED") << "\n";
            return pass ? 0 : 1;
        }

        if (*ren) {
            render_heatmap_files(ren_in, ren_overlay, ren_out);
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
