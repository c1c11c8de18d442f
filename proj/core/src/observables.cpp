#include "solvdyn/observables.hpp"

#include <cmath>

namespace solvdyn {

double raw_moment(const DensityField& field, int order) {
    if (order < 0)
        throw ConfigError("moment order must be >= 0");
    if (order == 0)
        return field.mass();
    const Grid1D& grid = field.grid;
    std::vector<double> weighted(field.values.size());
    for (int i = 0; i < grid.n; ++i) {
        const double eps = grid.node(i);
        double power = eps;
        for (int p = 1; p < order; ++p)
            power *= eps;
        weighted[i] = field.values[i] * power;
    }
    return trapezoid(weighted, grid.spacing());
}

ObservableSeries s_of_t(const std::vector<DensityField>& snapshots, const GaussianWavepacket& packet) {
    if (packet.epsilon0 == 0.0)
        throw ZeroInitialGap("S(t) is undefined for epsilon0 = 0");
    ObservableSeries series;
    series.kind = ObservableSeries::Kind::SolvationS;
    series.times.reserve(snapshots.size());
    series.values.reserve(snapshots.size());
    for (const DensityField& field : snapshots) {
        series.times.push_back(field.time);
        series.values.push_back(raw_moment(field, 1) / packet.epsilon0);
    }
    return series;
}

ObservableSeries moment_series(const std::vector<DensityField>& snapshots, int order) {
    if (order < 1)
        throw ConfigError("moment series order must be >= 1");
    ObservableSeries series;
    series.kind = ObservableSeries::Kind::RawMoment;
    series.order = order;
    series.times.reserve(snapshots.size());
    series.values.reserve(snapshots.size());
    for (const DensityField& field : snapshots) {
        series.times.push_back(field.time);
        series.values.push_back(raw_moment(field, order));
    }
    return series;
}

RelaxationClassification classify_relaxation(const ObservableSeries& series, double delta,
                                             double equilibrium, double fit_lo, double fit_hi) {
    if (series.values.size() < 2)
        throw SeriesTooShort("need at least two samples to classify");

    const double scale = series.values.front() - equilibrium;
    if (scale == 0.0)
        throw SeriesTooShort("series starts at its equilibrium value");

    // Normalize toward equilibrium: u starts at 1 and should relax to 0.
    std::vector<double> u(series.values.size());
    for (size_t i = 0; i < u.size(); ++i)
        u[i] = (series.values[i] - equilibrium) / scale;

    double u_max = u[0];
    double t_max = series.times[0];
    for (size_t i = 1; i < u.size(); ++i) {
        if (u[i] > u_max) {
            u_max = u[i];
            t_max = series.times[i];
        }
    }
    if (!(u.back() < 0.5 * u_max))
        throw SeriesTooShort("series does not cover enough of the decay");

    RelaxationClassification out;
    out.s_max = u_max;
    out.t_max = t_max;
    if (u_max > 1.0 + delta) {
        out.label = RelaxationLabel::NonMonotonic;
        return out;
    }
    out.label = RelaxationLabel::Monotonic;

    // log-linear least squares over the fit window
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long m = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] < fit_lo || u[i] > fit_hi)
            continue;
        const double x = series.times[i];
        const double y = std::log(u[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (m >= 2 && denom != 0.0)
        out.rate = -(static_cast<double>(m) * sxy - sx * sy) / denom;
    return out;
}

double initial_slope(const DiffusionProfile& profile, const HarmonicPotential& potential,
                     const GaussianWavepacket& packet) {
    const double e0sq = packet.epsilon0 * packet.epsilon0;
    const double sigsq = packet.sigma * packet.sigma;
    return profile.d0
           * (2.0 * profile.alpha - potential.k
              - potential.k * profile.alpha * (e0sq + 1.5 * sigsq));
}

double stationary_raw_moment(const HarmonicPotential& potential, int order) {
    if (potential.k == 0.0)
        throw NoStationaryDensity("free diffusion has no stationary moments");
    if (order % 2 == 1)
        return 0.0;
    // <eps^(2m)> = (2m-1)!! / k^m
    double value = 1.0;
    for (int j = 1; j < order; j += 2)
        value *= static_cast<double>(j);
    return value / std::pow(potential.k, order / 2);
}

} // namespace solvdyn
