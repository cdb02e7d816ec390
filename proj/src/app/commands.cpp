#include <cqed/app/commands.hpp>

#include <cqed/app/csv.hpp>
#include <cqed/app/svg.hpp>
#include <cqed/forward.hpp>
#include <cqed/inverse.hpp>
#include <cqed/numerics/dopri5.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

namespace cqed::app {

namespace {

constexpr double verify_threshold = 1e-3;

int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const numerics::StepSizeUnderflow& e) {
        err << "error: forward integration failed: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
}

std::string out_path(const RunConfig& c, const char* fallback)
{
    return c.out.empty() ? std::string(fallback) : c.out;
}

// Largest efficiency the shape supports, for depletion diagnostics.
void depletion_diagnostic(std::ostream& err, const PhotonShape& shape, const CavityParams& cav,
                          const UniformGrid& grid, double eta, double t_m)
{
    err << "depleted: rho_ee reaches zero at t_m = " << format_number(t_m)
        << " us; requested eta = " << format_number(eta) << " is infeasible\n";
    if (ends_smoothly(shape)) {
        err << "feasible: eta_sup = " << format_number(eta_sup(shape, cav)) << '\n';
    } else {
        err << "feasible: eta_max = " << format_number(eta_max(shape, cav, grid).eta) << '\n';
    }
}

Table drive_table(const PhotonShape& shape, const Design& d)
{
    const auto& tr = d.trajectory;
    Table t;
    t.header = {"t_us", "psi0", "omega_rad_per_us", "rho_ee", "rho_xx", "rho_gg", "loss_gamma", "loss_kappa"};
    t.columns.assign(t.header.size(), {});
    for (std::size_t i = 0; i < tr.size(); ++i) {
        t.columns[0].push_back(tr.grid[i]);
        t.columns[1].push_back(shape.value(tr.grid[i]));
        t.columns[2].push_back(d.drive.omega[i]);
        t.columns[3].push_back(tr.rho_ee(i));
        t.columns[4].push_back(tr.rho_xx(i));
        t.columns[5].push_back(tr.rho_gg(i));
        t.columns[6].push_back(tr.loss_gamma[i]);
        t.columns[7].push_back(tr.loss_kappa[i]);
    }
    return t;
}

DrivePulse load_drive(const std::filesystem::path& path)
{
    const Table t = read_csv(path);
    DrivePulse d;
    d.grid = t.column("t_us");
    d.omega = t.column("omega_rad_per_us");
    for (std::size_t i = 0; i < d.omega.size(); ++i)
        if (!std::isfinite(d.omega[i])) {
            d.depleted_at = d.grid[i];
            break;
        }
    return d;
}

std::vector<double> log_axis(double from, double to, std::size_t n)
{
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = from;
        return v;
    }
    const double r = std::log(to / from);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = from * std::exp(r * static_cast<double>(i) / static_cast<double>(n - 1));
    v.back() = to;
    return v;
}

} // namespace

nlohmann::json bounds_json(const EfficiencyReport& r)
{
    nlohmann::json j;
    j["two_c"] = std::isfinite(r.cooperativity_2c) ? nlohmann::json(r.cooperativity_2c) : nlohmann::json();
    j["eta_cav"] = r.eta_cav;
    j["eta_sup"] = r.eta_sup ? nlohmann::json(*r.eta_sup) : nlohmann::json();
    j["eta_max"] = r.eta_max;
    j["t_m_us"] = r.t_m ? nlohmann::json(*r.t_m) : nlohmann::json();
    j["lossless"] = r.lossless;
    return j;
}

int cmd_drive(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        c.validate();
        const PhotonShape shape = c.make_shape();
        const CavityParams cav = c.cavity();
        const UniformGrid grid = c.grid_for(shape);
        const Design d = solve(shape, c.eta, cav, grid);
        const std::string path = out_path(c, "drive.csv");
        write_csv(path, drive_table(shape, d));
        out << "wrote " << path << '\n';
        if (d.drive.depleted_at) {
            depletion_diagnostic(err, shape, cav, grid, c.eta, *d.drive.depleted_at);
            return static_cast<int>(exit_infeasible);
        }
        out << "sign_changes = " << d.drive.sign_changes() << '\n';
        return static_cast<int>(exit_ok);
    });
}

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        c.validate();
        const PhotonShape shape = c.make_shape();
        const EfficiencyReport r = report(shape, c.cavity(), c.grid_for(shape));
        out << bounds_json(r).dump(2) << '\n';
        return static_cast<int>(exit_ok);
    });
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        c.validate();
        const PhotonShape shape = c.make_shape();
        const CavityParams cav = c.cavity();
        const UniformGrid grid = c.grid_for(shape);

        DrivePulse drive;
        if (!c.drive_csv.empty()) {
            drive = load_drive(c.drive_csv);
        } else {
            drive = solve(shape, c.eta, cav, grid).drive;
        }
        if (drive.depleted_at) {
            depletion_diagnostic(err, shape, cav, grid, c.eta, *drive.depleted_at);
            return static_cast<int>(exit_infeasible);
        }

        const ForwardResult r = verify(shape, c.eta, cav, drive);
        Table t;
        t.header = {"t_us", "target", "emitted", "abs_error"};
        t.columns.assign(4, {});
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
            t.columns[0].push_back(r.trajectory.grid[i]);
            t.columns[1].push_back(r.target[i]);
            t.columns[2].push_back(r.emitted[i]);
            t.columns[3].push_back(std::abs(r.emitted[i] - r.target[i]));
        }
        const std::string path = out_path(c, "verify.csv");
        write_csv(path, t);
        out << "wrote " << path << '\n';
        out << "shape_error_l2 = " << format_number(r.shape_error_l2) << '\n';
        out << "eta_achieved = " << format_number(r.eta_achieved) << '\n';
        out << "conservation_residual = " << format_number(r.conservation_residual) << '\n';
        out << "emitted_area_rel = " << format_number(r.emitted_area_rel) << '\n';
        if (!(r.shape_error_l2 < verify_threshold)) {
            err << "mismatch: emitted photon deviates from target (relative L2 error "
                << format_number(r.shape_error_l2) << " >= " << format_number(verify_threshold) << ")\n";
            return static_cast<int>(exit_infeasible);
        }
        return static_cast<int>(exit_ok);
    });
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        c.validate();
        if (c.sweep_axis == "T" && c.shape == "sampled")
            throw std::invalid_argument("sweep: axis T needs a catalog shape");
        const auto axis = log_axis(c.sweep_from, c.sweep_to, c.sweep_points);

        Table t;
        t.header = {c.sweep_axis == "T" ? "T_us" : c.sweep_axis, "eta_sup", "eta_cav", "eta_max"};
        t.columns.assign(4, {});
        for (double v : axis) {
            RunConfig p = c;
            if (c.sweep_axis == "T") p.T_us = v;
            else if (c.sweep_axis == "g") p.g_MHz = v;
            else if (c.sweep_axis == "kappa") p.kappa_MHz = v;
            else p.gamma_MHz = v;
            const PhotonShape shape = p.make_shape();
            const EfficiencyReport r = report(shape, p.cavity(), p.grid_for(shape));
            t.columns[0].push_back(v);
            t.columns[1].push_back(r.eta_sup.value_or(std::nan("")));
            t.columns[2].push_back(r.eta_cav);
            t.columns[3].push_back(r.eta_max);
        }
        const std::string path = out_path(c, "sweep.csv");
        write_csv(path, t);
        out << "wrote " << path << '\n';
        return static_cast<int>(exit_ok);
    });
}

int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& svg, std::ostream& out,
             std::ostream& err)
{
    return guarded(err, [&] {
        const Table t = read_csv(csv);
        write_text_atomic(svg, render_drive_svg(t));
        out << "wrote " << svg.string() << '\n';
        return static_cast<int>(exit_ok);
    });
}

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> shape, shape_csv, out, drive_csv, axis;
    std::optional<double> T_us, t0_us, sigma_us, window_sigmas, eta, g, kappa, gamma, from, to;
    std::optional<std::size_t> grid_points, points;
    bool angular = false;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "flat key = value configuration file");
    sub->add_option("--shape", f.shape, "sin2 | tophat | twinpeak | twinpeak_pi | gaussian | sampled");
    sub->add_option("--T-us", f.T_us, "pulse duration T in us");
    sub->add_option("--t0-us", f.t0_us, "gaussian centre in us");
    sub->add_option("--sigma-us", f.sigma_us, "gaussian width in us");
    sub->add_option("--window-sigmas", f.window_sigmas, "gaussian half window in sigma (>= 8)");
    sub->add_option("--shape-csv", f.shape_csv, "sampled waveform, CSV with header t_us,psi0");
    sub->add_option("--eta", f.eta, "requested efficiency (default 0.95)");
    sub->add_option("--g-mhz", f.g, "coupling g, MHz in the 2pi x f convention");
    sub->add_option("--kappa-mhz", f.kappa, "cavity decay kappa, MHz in the 2pi x f convention");
    sub->add_option("--gamma-mhz", f.gamma, "atomic decay gamma, MHz in the 2pi x f convention");
    sub->add_flag("--angular", f.angular, "read g, kappa, gamma as rad/us instead");
    sub->add_option("--grid-points", f.grid_points, "odd number of time samples (default 4001)");
    sub->add_option("--out", f.out, "output file");
}

RunConfig merge(const Flags& f)
{
    RunConfig c = f.config.empty() ? RunConfig{} : RunConfig::load(f.config);
    if (f.shape) c.shape = *f.shape;
    if (f.shape_csv) {
        c.shape_csv = *f.shape_csv;
        if (!f.shape)
            c.shape = "sampled";
    }
    if (f.T_us) c.T_us = *f.T_us;
    if (f.t0_us) c.t0_us = *f.t0_us;
    if (f.sigma_us) c.sigma_us = *f.sigma_us;
    if (f.window_sigmas) c.window_sigmas = *f.window_sigmas;
    if (f.eta) c.eta = *f.eta;
    if (f.g) c.g_MHz = *f.g;
    if (f.kappa) c.kappa_MHz = *f.kappa;
    if (f.gamma) c.gamma_MHz = *f.gamma;
    if (f.angular) c.angular = true;
    if (f.grid_points) c.grid_points = *f.grid_points;
    if (f.out) c.out = *f.out;
    if (f.drive_csv) c.drive_csv = *f.drive_csv;
    if (f.axis) c.sweep_axis = *f.axis;
    if (f.from) c.sweep_from = *f.from;
    if (f.to) c.sweep_to = *f.to;
    if (f.points) c.sweep_points = *f.points;
    return c;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Design driving pulses for made-to-measure single photons from an atom-cavity system"};
    app.require_subcommand(1);
    Flags f;
    auto* drive = app.add_subcommand("drive", "design Omega(t) for a target photon, write drive.csv");
    auto* bounds = app.add_subcommand("bounds", "efficiency bounds eta_cav, eta_sup, eta_max as JSON");
    auto* ver = app.add_subcommand("verify", "forward-integrate a drive and compare the emitted photon");
    auto* sweep = app.add_subcommand("sweep", "efficiency bounds over a log-spaced parameter axis");
    auto* plot = app.add_subcommand("plot", "two-panel SVG from a drive CSV");
    for (auto* s : {drive, bounds, ver, sweep})
        add_common(s, f);
    ver->add_option("--drive", f.drive_csv, "drive CSV to verify instead of designing one");
    sweep->add_option("--axis", f.axis, "T | g | kappa | gamma");
    sweep->add_option("--from", f.from, "first axis value");
    sweep->add_option("--to", f.to, "last axis value");
    sweep->add_option("--points", f.points, "number of log-spaced points");
    std::string plot_in, plot_out;
    plot->add_option("csv", plot_in, "drive CSV")->required();
    plot->add_option("svg", plot_out, "output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    if (plot->parsed())
        return cmd_plot(plot_in, plot_out, out, err);

    RunConfig c;
    const int merged = guarded(err, [&] {
        c = merge(f);
        return static_cast<int>(exit_ok);
    });
    if (merged != exit_ok)
        return merged;
    if (drive->parsed()) return cmd_drive(c, out, err);
    if (bounds->parsed()) return cmd_bounds(c, out, err);
    if (ver->parsed()) return cmd_verify(c, out, err);
    return cmd_sweep(c, out, err);
}

} // namespace cqed::app
