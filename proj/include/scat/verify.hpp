#pragma once

// End-to-end verification suite: every analytic identity the engine is built
// to reproduce, evaluated at configured thresholds. Returns a report with one
// pass/fail record per criterion; the CLI maps "any failure" to a nonzero
// exit status.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "scat/pipeline.hpp"

namespace scat {

struct Check {
    std::string name;
    double value = 0.0;     // measured
    double threshold = 0.0; // pass iff value <= threshold (unless flag-style)
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::vector<Check> checks;
    int n_r = 0, n_theta = 0, n_phi = 0;
    double r_max = 0.0;
    std::uint64_t config_hash = 0;

    bool all_pass() const
    {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return true;
    }
};

namespace detail {

inline Check make_check(const std::string& name, double value, double threshold,
                        const std::string& note = "")
{
    return Check{name, value, threshold, value <= threshold, note};
}

// Closed-form s-wave square-well phase shift:
// delta_0 = atan((k/K) tan(K a)) - k a (mod pi), K = sqrt(lambda + V0).
inline double square_well_delta0(double v0, double a, double lambda)
{
    const double k = std::sqrt(lambda);
    const double kin = std::sqrt(lambda + v0);
    double d = std::atan(k / kin * std::tan(kin * a)) - k * a;
    while (d > M_PI / 2.0)
        d -= M_PI;
    while (d <= -M_PI / 2.0)
        d += M_PI;
    return d;
}

} // namespace detail

// Full criteria suite. The configured potential drives the spectral checks;
// the Born, square-well and trivial-potential checks construct their own
// pinned setups (independent oracles with closed forms).
inline VerificationReport run_verification(const RunConfig& cfg)
{
    VerificationReport report;
    report.n_r = cfg.n_r;
    report.n_theta = cfg.n_theta;
    report.n_phi = cfg.n_phi;
    report.config_hash = cfg.hash;

    const Potential p = cfg.make_potential();
    const Grids grids = build_grids(cfg);
    report.r_max = grids.radial.r_max;
    const double lambda = cfg.lambdas.front();
    const LambdaRun run = run_lambda(p, grids, lambda, cfg.exceptional_threshold);

    // 1. Ergodic identity: spectral reconstruction of the amplitude.
    {
        const AmplitudeMatrix rec = ergodic_reconstruct(run.spectrum);
        const double fnorm = run.amplitude.f.norm();
        const double err = fnorm > 0.0 ? (rec.f - run.amplitude.f).norm() / fnorm : 0.0;
        report.checks.push_back(detail::make_check("ergodic_identity", err, cfg.tol_ergodic));
    }

    // 2. Parseval pair: double quadrature of the spectral expansion over the
    // orthonormal basis vs the eigenvalue sum. This is the discrete Parseval
    // identity proper — exact to roundoff given weighted orthonormality of G
    // — so it isolates linear-algebra error from the O(defect) physical
    // anisotropy that criterion 3 measures.
    const double sigma_double = cross_section_double(run.amplitude, grids.sphere);
    {
        const Complex c = 2.0 * M_PI / Complex(0.0, std::sqrt(lambda));
        AmplitudeMatrix expansion;
        expansion.lambda = lambda;
        expansion.f = c * (run.spectrum.g * (run.spectrum.nu.array() - 1.0).matrix().asDiagonal() *
                           run.spectrum.g.adjoint());
        const double sigma_exp = cross_section_double(expansion, grids.sphere);
        const double sigma_spec = cross_section_spectral(run.spectrum);
        const double gap = sigma_spec > 0.0 ? std::abs(sigma_exp - sigma_spec) / sigma_spec : 0.0;
        report.checks.push_back(detail::make_check("parseval_cross_sections", gap,
                                                   cfg.tol_parseval));
    }

    // 3. Unitarity of S at this resolution, plus strict decrease across a
    // grid-doubling pair (coarse = all counts halved, fine = configured).
    {
        report.checks.push_back(detail::make_check("unitarity_defect", run.s_op.unitarity_defect,
                                                   cfg.tol_unitarity));
        RunConfig coarse_cfg = cfg;
        coarse_cfg.n_r = std::max(2, cfg.n_r / 2);
        coarse_cfg.n_theta = std::max(2, cfg.n_theta / 2);
        coarse_cfg.n_phi = std::max(4, cfg.n_phi / 2 + (cfg.n_phi / 2) % 2);
        const Grids coarse = build_grids(coarse_cfg);
        const LambdaRun coarse_run = run_lambda(p, coarse, lambda, cfg.exceptional_threshold);
        Check c;
        c.name = "unitarity_defect_refinement";
        c.value = run.s_op.unitarity_defect;
        c.threshold = coarse_run.s_op.unitarity_defect;
        c.pass = coarse_run.s_op.unitarity_defect == 0.0
                     ? run.s_op.unitarity_defect == 0.0
                     : run.s_op.unitarity_defect < coarse_run.s_op.unitarity_defect;
        std::ostringstream note;
        note << "coarse(" << coarse_cfg.n_r << "," << coarse_cfg.n_theta << ","
             << coarse_cfg.n_phi << ") defect " << coarse_run.s_op.unitarity_defect;
        c.note = note.str();
        report.checks.push_back(c);
    }

    // Radial-only identities.
    if (p.spherically_symmetric()) {
        const PhaseShiftTable table =
            build_phase_shifts(p, lambda, cfg.l_max, cfg.tail_tol);

        // 4. Eigenvalue correspondence nu_l = exp(2 i delta_l) with the
        // 2l+1 multiplicity pattern for l <= 4.
        {
            const int l_check = 4;
            const CorrespondenceReport corr =
                verify_eigen_correspondence(run.spectrum, grids.sphere, table, l_check);
            double worst = 0.0;
            bool multiplicities_ok = true;
            for (const auto& row : corr.rows) {
                if (row.multiplicity != 2 * row.l + 1)
                    multiplicities_ok = false;
                if (std::isfinite(row.distance))
                    worst = std::max(worst, row.distance);
                else
                    multiplicities_ok = false;
            }
            Check c = detail::make_check("eigenvalue_correspondence", worst,
                                         cfg.tol_correspondence);
            if (p.coupling() != 0.0 && !multiplicities_ok) {
                c.pass = false;
                c.note = "multiplicity pattern differs from 1,3,5,7,9";
            }
            report.checks.push_back(c);
        }

        const SingleCrossSection single = cross_section_single(table);

        // 5. Cross-section convention reconciliation: sigma_double = 4 pi sigma_single.
        {
            const double expected = 4.0 * M_PI * single.angular;
            const double gap = expected > 0.0 ? std::abs(sigma_double / expected - 1.0)
                                              : sigma_double;
            report.checks.push_back(detail::make_check("sigma_double_vs_4pi_single", gap,
                                                       cfg.tol_sigma_ratio));
        }

        // 6. Partial-wave internal consistency (angular quadrature vs sum).
        {
            const double scale = std::max(single.angular, single.partial_wave);
            const double gap =
                scale > 0.0 ? std::abs(single.angular - single.partial_wave) / scale : 0.0;
            report.checks.push_back(detail::make_check("partial_wave_consistency", gap,
                                                       cfg.tol_pw_consistency));
        }
    }

    // 7. Born limit: weak-coupling Yukawa amplitude against the closed form
    // -g / (q^2 + mu^2) over all grid angle pairs.
    {
        const double born_g = 0.01, born_mu = 1.0, born_lambda = 1.0;
        const Potential yp = Potential::yukawa(born_g, born_mu);
        RunConfig ycfg = cfg;
        ycfg.r_max = yp.support_radius();
        const Grids ygrids = build_grids(ycfg);
        const LambdaRun yrun = run_lambda(yp, ygrids, born_lambda, cfg.exceptional_threshold);
        const double kb = std::sqrt(born_lambda);
        double worst = 0.0;
        for (int a = 0; a < ygrids.sphere.size(); ++a) {
            for (int b = 0; b < ygrids.sphere.size(); ++b) {
                const double q =
                    kb * (ygrids.sphere.directions[a] - ygrids.sphere.directions[b]).norm();
                const Complex closed = -born_g / (q * q + born_mu * born_mu);
                worst = std::max(worst,
                                 std::abs(yrun.amplitude.f(a, b) - closed) / std::abs(closed));
            }
        }
        report.checks.push_back(detail::make_check("born_limit_yukawa", worst, 0.02));
    }

    // 8. Radial solver accuracy: square-well delta_0 vs the closed form.
    {
        const Potential sw = Potential::square_well(2.0, 1.0);
        double worst = 0.0;
        for (double lam : {0.5, 1.0, 2.0}) {
            const double numeric = phase_shift(sw, 0, lam);
            const double closed = detail::square_well_delta0(2.0, 1.0, lam);
            worst = std::max(worst, std::abs(numeric - closed));
        }
        report.checks.push_back(detail::make_check("square_well_delta0", worst, 1e-6));
    }

    // 9. Far field: R * |phi - plane - f e^{ikR}/R| decreasing over the probes.
    {
        const std::vector<double> radii{20.0, 40.0, 80.0};
        const auto rows = farfield_check(run.wave, run.amplitude, p, grids.volume, grids.sphere,
                                         radii, {0, grids.sphere.size() / 2});
        bool decreasing = true;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (p.coupling() != 0.0 && rows[i].scaled_residual >= rows[i - 1].scaled_residual)
                decreasing = false;
        Check c;
        c.name = "farfield_residual_decreasing";
        c.value = rows.back().scaled_residual;
        c.threshold = rows.front().scaled_residual;
        c.pass = decreasing;
        report.checks.push_back(c);
    }

    // 10. Bound-state threshold: square well a=1 has no state at V0=2 and
    // exactly one at V0=3 (s-wave threshold V0 a^2 = pi^2/4).
    {
        RunConfig scfg;
        scfg.n_r = 16;
        scfg.n_theta = 8;
        scfg.n_phi = 16;
        scfg.r_max = 1.0;
        const Grids sgrids = build_grids(scfg);
        const auto below = bound_state_scan(Potential::square_well(2.0, 1.0), sgrids.volume,
                                            cfg.kappa_min, cfg.kappa_max, cfg.kappa_samples);
        const auto above = bound_state_scan(Potential::square_well(3.0, 1.0), sgrids.volume,
                                            cfg.kappa_min, cfg.kappa_max, cfg.kappa_samples);
        Check c;
        c.name = "bound_state_threshold";
        c.value = static_cast<double>(below.size() * 100 + above.size());
        c.threshold = 1.0;
        c.pass = below.empty() && above.size() == 1;
        std::ostringstream note;
        note << "V0=2: " << below.size() << " states, V0=3: " << above.size();
        if (!above.empty())
            note << " (kappa=" << above.front().kappa << ")";
        c.note = note.str();
        report.checks.push_back(c);
    }

    // 11. Trivial potential: V = 0 collapses everything to the identity.
    {
        const Potential zero = Potential::gaussian(0.0, 1.0);
        RunConfig zcfg;
        zcfg.n_r = 8;
        zcfg.n_theta = 6;
        zcfg.n_phi = 12;
        zcfg.r_max = 2.0;
        const Grids zgrids = build_grids(zcfg);
        const LambdaRun zrun = run_lambda(zero, zgrids, 1.0);
        double worst = zrun.amplitude.f.cwiseAbs().maxCoeff();
        worst = std::max(worst, zrun.s_op.unitarity_defect);
        worst = std::max(worst, (zrun.spectrum.nu.array() - 1.0).abs().maxCoeff());
        worst = std::max(worst, cross_section_double(zrun.amplitude, zgrids.sphere));
        for (int l = 0; l <= 4; ++l)
            worst = std::max(worst, std::abs(phase_shift(zero, l, 1.0)));
        // Threshold is the Numerov roundoff floor of the free radial march
        // (~1e-10 at the default step); the 3D pipeline terms are exact zeros.
        report.checks.push_back(detail::make_check("trivial_potential", worst, 1e-9));
    }

    return report;
}

} // namespace scat
