#pragma once

// One-energy orchestration of the full chain:
// potential -> grids -> kernel -> wave table -> amplitude -> S -> spectrum.
// The kernel matrix and its factorization are released once the solve is
// done; everything downstream needs only the wave table and the amplitude.

#include <optional>

#include "scat/amplitude.hpp"
#include "scat/config.hpp"
#include "scat/ls_solver.hpp"
#include "scat/potential.hpp"
#include "scat/quadrature.hpp"
#include "scat/radial.hpp"
#include "scat/smatrix.hpp"

namespace scat {

struct Grids {
    RadialGrid radial;
    SphereGrid sphere;
    VolumeGrid volume;
};

inline Grids build_grids(const RunConfig& cfg)
{
    Grids g;
    g.radial = build_radial_grid(cfg.grid_r_max(), cfg.n_r);
    g.sphere = build_sphere_grid(cfg.n_theta, cfg.n_phi);
    g.volume = build_volume_grid(g.radial, g.sphere);
    return g;
}

struct LambdaRun {
    double lambda = 0.0;
    double sigma_min = 0.0;     // of I+K
    double sigma_max = 0.0;
    WaveTable wave;
    AmplitudeMatrix amplitude;
    SOperator s_op;
    SMatrixSpectrum spectrum;
    double hs_norm_k = 0.0;     // Hilbert-Schmidt estimates
    double hs_norm_ff = 0.0;
};

inline LambdaRun run_lambda(const Potential& p, const Grids& grids, double lambda,
                            double exceptional_threshold = 1e-8,
                            DiagonalRule rule = DiagonalRule::EqualVolumeShell)
{
    LambdaRun run;
    run.lambda = lambda;
    {
        KernelMatrix km = assemble_kernel(p, grids.volume, lambda, rule);
        run.sigma_min = smallest_singular_value(km);
        run.wave = solve_modified_ls(km, p, grids.volume, grids.sphere, exceptional_threshold);
        MatrixXcd a = km.m;
        a.diagonal().array() += 1.0;
        run.sigma_max = sigma_max_estimate(a);
    } // kernel matrix and factorization released here
    run.amplitude = scattering_amplitude(run.wave, p, grids.volume, grids.sphere);
    run.s_op = assemble_S(assemble_T(run.amplitude), grids.sphere, lambda);
    run.spectrum = eigendecompose(run.s_op, grids.sphere);
    auto [hk, hff] = hs_norms(p, grids.volume, lambda, rule);
    run.hs_norm_k = hk;
    run.hs_norm_ff = hff;
    return run;
}

} // namespace scat
