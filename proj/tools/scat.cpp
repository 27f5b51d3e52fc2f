// Command-line front end: scatter / phaseshifts / verify / boundstates.
//
// Exit codes: 0 success, 1 numerical failure (exceptional energy, failed
// verification), 2 usage or configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scat/io.hpp"
#include "scat/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    bool dump_grids = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_option("--config", opts.config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--dump-grids", opts.dump_grids, "also write the quadrature grids");
}

void maybe_dump_grids(const CommonOpts& opts, const scat::Grids& grids)
{
    if (!opts.dump_grids)
        return;
    {
        auto f = scat::io::open_for_write(fs::path(opts.out_dir) / "grid_volume.txt");
        scat::dump_grid(grids.volume, f.get());
    }
    {
        auto f = scat::io::open_for_write(fs::path(opts.out_dir) / "grid_sphere.txt");
        scat::dump_grid(grids.sphere, f.get());
    }
}

std::string lambda_tag(double lambda)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lambda);
    std::string tag(buf);
    for (char& c : tag)
        if (c == '.')
            c = 'p';
    return tag;
}

int cmd_scatter(const CommonOpts& opts)
{
    const scat::RunConfig cfg = scat::load_config(opts.config_path);
    const scat::Potential p = cfg.make_potential();
    const scat::Grids grids = scat::build_grids(cfg);
    fs::create_directories(opts.out_dir);
    maybe_dump_grids(opts, grids);

    for (double lambda : cfg.lambdas) {
        const scat::LambdaRun run =
            scat::run_lambda(p, grids, lambda, cfg.exceptional_threshold);
        const std::string tag = lambda_tag(lambda);
        const fs::path dir(opts.out_dir);
        if (opts.format == "json")
            scat::io::write_amplitude_json(dir / ("amplitude_" + tag + ".json"), run.amplitude,
                                           cfg.hash);
        else
            scat::io::write_amplitude_csv(dir / ("amplitude_" + tag + ".csv"), run.amplitude,
                                          cfg.hash);
        std::vector<int> degrees;
        if (p.spherically_symmetric())
            degrees = scat::assign_degrees(run.spectrum, grids.sphere, cfg.l_max);
        scat::io::write_spectrum_csv(dir / ("spectrum_" + tag + ".csv"), run.spectrum, degrees,
                                     cfg.hash);
        std::printf("lambda=%g  sigma_min=%.3e  unitarity_defect=%.3e  sigma=%.*e\n", lambda,
                    run.sigma_min, run.s_op.unitarity_defect, 6,
                    scat::cross_section_double(run.amplitude, grids.sphere));
    }
    return 0;
}

int cmd_phaseshifts(const CommonOpts& opts)
{
    const scat::RunConfig cfg = scat::load_config(opts.config_path);
    const scat::Potential p = cfg.make_potential();
    if (!p.spherically_symmetric()) {
        std::fprintf(stderr, "phaseshifts: potential is not spherically symmetric\n");
        return 2;
    }
    fs::create_directories(opts.out_dir);
    for (double lambda : cfg.lambdas) {
        const scat::PhaseShiftTable table =
            scat::build_phase_shifts(p, lambda, cfg.l_max, cfg.tail_tol);
        scat::io::write_phase_shifts_csv(
            fs::path(opts.out_dir) / ("phaseshifts_" + lambda_tag(lambda) + ".csv"), table,
            cfg.hash);
        const scat::SingleCrossSection sx = scat::cross_section_single(table);
        std::printf("lambda=%g  l_max=%d  sigma_angular=%.6e  sigma_pw=%.6e\n", lambda,
                    table.l_max(), sx.angular, sx.partial_wave);
    }
    return 0;
}

int cmd_boundstates(const CommonOpts& opts)
{
    const scat::RunConfig cfg = scat::load_config(opts.config_path);
    const scat::Potential p = cfg.make_potential();
    const scat::Grids grids = scat::build_grids(cfg);
    fs::create_directories(opts.out_dir);
    maybe_dump_grids(opts, grids);
    const auto states = scat::bound_state_scan(p, grids.volume, cfg.kappa_min, cfg.kappa_max,
                                               cfg.kappa_samples);
    scat::io::write_bound_states_csv(fs::path(opts.out_dir) / "boundstates.csv", states,
                                     cfg.hash);
    std::printf("%zu bound state(s) in kappa range [%g, %g]\n", states.size(), cfg.kappa_min,
                cfg.kappa_max);
    for (const auto& s : states)
        std::printf("  kappa=%.10f  energy=%.10f\n", s.kappa, s.energy);
    return 0;
}

int cmd_verify(const CommonOpts& opts)
{
    const scat::RunConfig cfg = scat::load_config(opts.config_path);
    const scat::VerificationReport report = scat::run_verification(cfg);
    fs::create_directories(opts.out_dir);
    scat::io::write_report(fs::path(opts.out_dir) / "verify_report.json", report);
    for (const auto& c : report.checks)
        std::printf("[%s] %-32s value=%.6e threshold=%.6e%s%s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.threshold, c.note.empty() ? "" : "  ",
                    c.note.c_str());
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"3D quantum scattering engine: Lippmann-Schwinger solver, on-shell "
                 "S-matrix spectra, and partial-wave cross checks"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* scatter = app.add_subcommand("scatter", "solve and write amplitude + S spectrum");
    auto* phaseshifts = app.add_subcommand("phaseshifts", "radial partial-wave phase shifts");
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    auto* boundstates = app.add_subcommand("boundstates", "scan for bound states");
    for (auto* cmd : {scatter, phaseshifts, verify, boundstates})
        add_common(cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (scatter->parsed())
            return cmd_scatter(opts);
        if (phaseshifts->parsed())
            return cmd_phaseshifts(opts);
        if (verify->parsed())
            return cmd_verify(opts);
        return cmd_boundstates(opts);
    } catch (const scat::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const scat::ExceptionalValueError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
