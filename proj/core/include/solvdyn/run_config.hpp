#pragma once

#include <cstdint>
#include <string>

#include "solvdyn/criticality.hpp"
#include "solvdyn/model.hpp"
#include "solvdyn/pde.hpp"
#include "solvdyn/sde.hpp"

namespace solvdyn {

struct PhysicsConfig {
    double d0 = 1.0;
    double alpha = 0.0;
    double k = 1.0;
    double epsilon0 = 1.0;
    double sigma = 0.1;
};

struct GridConfig {
    double eps_min = -10.0;
    double eps_max = 10.0;
    int n = 2001;

    Grid1D to_grid() const { return Grid1D{eps_min, eps_max, n}; }
};

struct AnalysisConfig {
    double delta = 1e-4;
    double fit_lo = 0.1;
    double fit_hi = 0.9;
    int max_moment = 4;
};

struct SweepRangeConfig {
    double alpha_min = 0.0;
    double alpha_max = 1.0;
    int alpha_points = 5;
    double k_min = 0.25;
    double k_max = 1.0;
    int k_points = 5;
    double tol_eps = 0.01;
    double bracket_hi = 8.0;
};

struct OracleConfig {
    std::int64_t n_traj = 100000;
    double dt_sde = 1e-3;
    std::uint64_t seed = 12345;
};

/// Full run configuration, grouped as it appears in config files. Every field
/// has a default reproducing the reference numerics (sigma = 0.1, domain
/// [-10, 10], h = 0.01, dt = 1e-3). Unknown keys in config files are rejected.
struct RunConfig {
    PhysicsConfig physics;
    GridConfig grid;
    SolverConfig solver;
    AnalysisConfig analysis;
    SweepRangeConfig sweep;
    OracleConfig oracle;

    /// Throws ConfigError with a one-line reason on the first violated rule.
    void validate() const;

    DiffusionProfile profile() const { return DiffusionProfile{physics.d0, physics.alpha}; }
    HarmonicPotential potential() const { return HarmonicPotential{physics.k}; }
    GaussianWavepacket packet() const { return GaussianWavepacket{physics.epsilon0, physics.sigma}; }
    CriticalityConfig criticality(int workers = 0) const;

    std::string to_json_text() const;
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
    void save_json_file(const std::string& path) const;
};

} // namespace solvdyn
