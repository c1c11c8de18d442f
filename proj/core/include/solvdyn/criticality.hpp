#pragma once

#include <span>
#include <string>
#include <vector>

#include "solvdyn/model.hpp"
#include "solvdyn/observables.hpp"
#include "solvdyn/pde.hpp"

namespace solvdyn {

/// Shared setup for criticality runs: one PDE evolution plus classification
/// per (alpha, k, epsilon0) point.
struct CriticalityConfig {
    double d0 = 1.0;
    double sigma = 0.1;
    Grid1D grid;
    SolverConfig solver;     ///< solver.t_end is the base horizon; see run_horizon
    double delta = 1e-4;     ///< non-monotonicity threshold on S_max - 1
    double fit_lo = 0.1;
    double fit_hi = 0.9;
    double tol_eps = 0.01;   ///< bisection tolerance on epsilon0_critical
    double bracket_hi = 8.0; ///< upper end of the epsilon0 search bracket
    double t_end_cap = 50.0; ///< horizon cap (binds for free diffusion, k = 0)
    int workers = 0;         ///< sweep worker count; 0 = hardware concurrency
};

/// Per-cell horizon: max(solver.t_end, 5/(d0 k)) capped at t_end_cap, so slow
/// relaxation at small k is still resolved. k = 0 uses the cap.
double run_horizon(const CriticalityConfig& config, double k);

/// Runs one relaxation and classifies it.
RelaxationClassification classify_run(double alpha, double k, double epsilon0,
                                      const CriticalityConfig& config);

/// Largest epsilon0 with a non-monotonic relaxation at (alpha, k), located by
/// bisection over the bracket [sigma, bracket_hi] to within tol_eps. Returns 0
/// when even epsilon0 = sigma relaxes monotonically. Throws NonMonotoneBoundary
/// when the bracket does not contain a single monotone crossing (still
/// non-monotonic at the top of the bracket).
double find_critical_epsilon(double alpha, double k, const CriticalityConfig& config);

/// S_Max as a function of the initial gap at fixed (alpha, k).
struct SMaxCurve {
    double alpha = 0.0;
    double k = 0.0;
    std::vector<double> epsilon0s;
    std::vector<double> s_max;
};

/// Full PDE run + classification per sample; samples must lie in (0, bracket_hi].
SMaxCurve s_max_curve(double alpha, double k, std::span<const double> epsilon0s,
                      const CriticalityConfig& config);

/// epsilon0_critical over a rectangular (alpha, k) grid. Cells are independent
/// and gathered in index order, so the matrix is bit-identical regardless of
/// worker count. Cell failures are recorded in status, not thrown.
struct PhasePortrait {
    std::vector<double> alphas;
    std::vector<double> ks;
    std::vector<double> critical;    ///< k-major: index = ik * alphas.size() + ia
    std::vector<std::string> status; ///< "ok" or the cell's error message

    int index(int ia, int ik) const { return ik * static_cast<int>(alphas.size()) + ia; }
};

PhasePortrait sweep_portrait(std::span<const double> alphas, std::span<const double> ks,
                             const CriticalityConfig& config);

/// count evenly spaced values on [lo, hi]; count = 1 collapses to lo.
std::vector<double> linspace(double lo, double hi, int count);

} // namespace solvdyn
