#pragma once

#include <cstdint>
#include <vector>

#include "solvdyn/model.hpp"
#include "solvdyn/observables.hpp"

namespace solvdyn {

/// Monte Carlo ensemble parameters. Trajectories are keyed by (seed, index),
/// so results are bit-identical for a given (seed, n_traj, dt_sde) no matter
/// how many workers execute the blocks.
struct EnsembleConfig {
    std::int64_t n_traj = 100000;
    double dt_sde = 1e-3;
    double t_end = 5.0;
    std::uint64_t seed = 12345;
    std::vector<double> record_times; ///< must be (near-)multiples of dt_sde, ascending
    int workers = 0;                  ///< 0 = hardware concurrency
    double tail_bound = 10.0;         ///< |eps| beyond this counts toward the tail diagnostic
    bool flip_spurious_drift = false; ///< test hook: wrong sign on the D'(eps) drift term

    /// Lattice on which the Brownian increments are drawn; 0 means dt_sde.
    /// Runs with different dt_sde but the same seed and path_resolution share
    /// Brownian paths, so their difference isolates the step-size bias
    /// (common-random-number refinement).
    double path_resolution = 0.0;

    void validate() const;
};

/// Ensemble mean of <eps^n> at one record time with its standard error.
struct MomentEstimate {
    double time = 0.0;
    int order = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Ensemble output: moment estimates (orders 1 and 2, record-time major) and
/// the fraction of trajectories beyond the tail bound at each record time.
/// The SDE runs on the open line; excursions past the PDE's truncation are
/// legal and only logged here so PDE/MC discrepancies stay attributable.
struct EnsembleResult {
    std::vector<MomentEstimate> moments;
    std::vector<double> record_times;
    std::vector<double> tail_fraction;

    const MomentEstimate& at(int record_index, int order) const;
};

/// Euler-Maruyama simulation of the Ito process equivalent to the PDE:
///   d eps = [D'(eps) - D(eps) V'(eps)] dt + sqrt(2 D(eps)) dW,
/// started from Gaussian draws with mean epsilon0 and std sigma / sqrt(2).
EnsembleResult simulate_ensemble(const DiffusionProfile& profile, const HarmonicPotential& potential,
                                 const GaussianWavepacket& packet, const EnsembleConfig& config);

/// Per-time z-scores between PDE moment series and ensemble estimates.
struct ComparisonReport {
    std::vector<double> times;
    std::vector<double> z_order1;
    std::vector<double> z_order2;
    double max_abs_z = 0.0;
    double fraction_within = 0.0; ///< fraction of |z| <= 3 over both orders
    bool pass = false;            ///< fraction_within >= 0.99
};

/// Compares PDE moment series (orders 1 and 2) against ensemble estimates on
/// the same record schedule. Throws ScheduleMismatch if the times differ.
ComparisonReport compare_with_pde(const std::vector<ObservableSeries>& pde_moments,
                                  const EnsembleResult& mc);

} // namespace solvdyn
