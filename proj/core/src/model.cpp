#include "solvdyn/model.hpp"

#include <cmath>

namespace solvdyn {

void DiffusionProfile::validate() const {
    if (!(d0 > 0.0))
        throw ConfigError("diffusion baseline d0 must be > 0");
    if (!(alpha >= 0.0))
        throw ConfigError("diffusion inhomogeneity alpha must be >= 0");
}

void HarmonicPotential::validate() const {
    if (!(k >= 0.0))
        throw ConfigError("restoring strength k must be >= 0");
}

void GaussianWavepacket::validate() const {
    if (!(epsilon0 > 0.0))
        throw ConfigError("initial gap epsilon0 must be > 0");
    if (!(sigma > 0.0))
        throw ConfigError("packet width sigma must be > 0");
}

void Grid1D::validate() const {
    if (n < 3 || n % 2 == 0)
        throw ConfigError("grid point count must be odd and >= 3");
    if (!(eps_min < 0.0 && 0.0 < eps_max))
        throw ConfigError("grid must straddle eps = 0");
}

double trapezoid(std::span<const double> values, double h) {
    double sum = 0.0;
    for (double v : values)
        sum += v;
    sum -= 0.5 * (values.front() + values.back());
    return sum * h;
}

double DensityField::mass() const {
    return trapezoid(values, grid.spacing());
}

double diffusion_at(const DiffusionProfile& profile, double eps) {
    return profile.d0 * (1.0 + profile.alpha * (eps * eps));
}

double diffusion_slope_at(const DiffusionProfile& profile, double eps) {
    return 2.0 * profile.d0 * profile.alpha * eps;
}

double potential_slope_at(const HarmonicPotential& potential, double eps) {
    return potential.k * eps;
}

double drift_at(const DiffusionProfile& profile, const HarmonicPotential& potential, double eps) {
    return diffusion_slope_at(profile, eps)
           - diffusion_at(profile, eps) * potential_slope_at(potential, eps);
}

DensityField initial_density(const GaussianWavepacket& packet, const Grid1D& grid) {
    packet.validate();
    grid.validate();
    const double clearance = 6.0 * packet.sigma;
    if (grid.eps_max - packet.epsilon0 < clearance || packet.epsilon0 - grid.eps_min < clearance)
        throw PacketTooWide("initial packet within 6 sigma of the domain edge");

    DensityField field;
    field.grid = grid;
    field.time = 0.0;
    field.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double z = (grid.node(i) - packet.epsilon0) / packet.sigma;
        field.values[i] = std::exp(-z * z);
    }
    const double mass = field.mass();
    for (double& v : field.values)
        v /= mass;
    return field;
}

DensityField stationary_density(const HarmonicPotential& potential, const Grid1D& grid) {
    potential.validate();
    grid.validate();
    if (potential.k == 0.0)
        throw NoStationaryDensity("free diffusion has no normalizable stationary state");

    DensityField field;
    field.grid = grid;
    field.time = 0.0;
    field.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double eps = grid.node(i);
        field.values[i] = std::exp(-0.5 * potential.k * eps * eps);
    }
    const double mass = field.mass();
    for (double& v : field.values)
        v /= mass;
    return field;
}

} // namespace solvdyn
