#pragma once

#include <span>
#include <vector>

#include "solvdyn/errors.hpp"

namespace solvdyn {

/// Quadratic diffusion coefficient field D(eps) = d0 * (1 + alpha * eps^2).
/// D is even in eps and bounded below by d0 > 0.
struct DiffusionProfile {
    double d0 = 1.0;    ///< baseline diffusivity, reduced units, > 0
    double alpha = 0.0; ///< inhomogeneity strength, 1/eps^2 units, >= 0

    void validate() const;
};

/// Harmonic restoring potential V(eps) = k * eps^2 / 2. k = 0 is free diffusion.
struct HarmonicPotential {
    double k = 1.0; ///< restoring strength, reduced units, >= 0

    void validate() const;
};

/// Normalized Gaussian initial condition
///   P(eps, 0) = exp(-((eps - epsilon0)/sigma)^2) / (sqrt(pi) * sigma),
/// i.e. mean epsilon0 and variance sigma^2 / 2.
struct GaussianWavepacket {
    double epsilon0 = 1.0; ///< initial energy-gap center, > 0
    double sigma = 0.1;    ///< width parameter, > 0

    void validate() const;
};

/// Uniform 1-D grid on [eps_min, eps_max] with n nodes (n odd so that eps = 0
/// is a node on symmetric domains). Nodes are evaluated with a symmetric blend
/// so that node(i) == -node(n-1-i) bit-exactly when eps_max == -eps_min.
struct Grid1D {
    double eps_min = -10.0;
    double eps_max = 10.0;
    int n = 2001;

    double spacing() const { return (eps_max - eps_min) / static_cast<double>(n - 1); }

    double node(int i) const {
        return (eps_min * static_cast<double>(n - 1 - i) + eps_max * static_cast<double>(i))
               / static_cast<double>(n - 1);
    }

    /// Midpoint between nodes i and i+1.
    double half_node(int i) const { return 0.5 * (node(i) + node(i + 1)); }

    void validate() const;
};

/// Probability density sampled on a grid at a given time.
struct DensityField {
    Grid1D grid;
    std::vector<double> values;
    double time = 0.0;

    /// Trapezoid mass of the field.
    double mass() const;
};

/// Trapezoid quadrature of uniformly sampled values with spacing h.
double trapezoid(std::span<const double> values, double h);

/// D(eps) = d0 * (1 + alpha * eps^2); strictly positive.
double diffusion_at(const DiffusionProfile& profile, double eps);

/// D'(eps) = 2 * d0 * alpha * eps.
double diffusion_slope_at(const DiffusionProfile& profile, double eps);

/// V'(eps) = k * eps.
double potential_slope_at(const HarmonicPotential& potential, double eps);

/// Ito drift of the process equivalent to the flux-form PDE:
///   a(eps) = D'(eps) - D(eps) * V'(eps).
/// Odd in eps; a(0) = 0.
double drift_at(const DiffusionProfile& profile, const HarmonicPotential& potential, double eps);

/// Samples the Gaussian packet on the grid and renormalizes to trapezoid mass 1.
/// Throws PacketTooWide unless the packet center keeps 6 sigma clear of both
/// domain edges.
DensityField initial_density(const GaussianWavepacket& packet, const Grid1D& grid);

/// Grid-normalized zero-flux solution exp(-k * eps^2 / 2) / Z. Independent of
/// the diffusion profile. Throws NoStationaryDensity for k = 0.
DensityField stationary_density(const HarmonicPotential& potential, const Grid1D& grid);

} // namespace solvdyn
