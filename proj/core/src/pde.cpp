#include "solvdyn/pde.hpp"

#include <cmath>
#include <cstdlib>

namespace solvdyn {

void SolverConfig::validate() const {
    if (!(dt > 0.0))
        throw ConfigError("time step dt must be > 0");
    if (!(t_end > 0.0))
        throw ConfigError("horizon t_end must be > 0");
    if (!(theta >= 0.5 && theta <= 1.0))
        throw ConfigError("implicitness theta must lie in [0.5, 1]");
    if (snapshot_stride < 1)
        throw ConfigError("snapshot stride must be >= 1");
    if (!(tol_mass > 0.0))
        throw ConfigError("mass tolerance must be > 0");
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> x) const {
    const int n = size();
    std::vector<double> y(n, 0.0);
    for (int i = 1; i + 1 < n; ++i)
        y[i] = sub[i] * x[i - 1] + diag[i] * x[i] + super[i] * x[i + 1];
    return y;
}

TridiagonalOperator assemble_operator(const Grid1D& grid, const DiffusionProfile& profile,
                                      const HarmonicPotential& potential) {
    grid.validate();
    profile.validate();
    potential.validate();

    const int n = grid.n;
    const double h = grid.spacing();
    TridiagonalOperator op;
    op.sub.assign(n, 0.0);
    op.diag.assign(n, 0.0);
    op.super.assign(n, 0.0);

    // dP_i/dt = (F_{i+1/2} - F_{i-1/2}) / h with
    // F_{i+1/2} = D_{i+1/2} [ (P_{i+1} - P_i)/h + B_{i+1/2} (P_{i+1} + P_i)/2 ].
    // Row i only needs the two half-node (D, B) pairs around it.
    auto face = [&](int i, double& d, double& b) {
        const double eps = grid.half_node(i);
        d = diffusion_at(profile, eps);
        b = (2.0 / h) * std::tanh(0.5 * potential.k * eps * h);
    };
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 1.0 / (2.0 * h);
    for (int i = 1; i + 1 < n; ++i) {
        double d_plus, b_plus, d_minus, b_minus;
        face(i, d_plus, b_plus);
        face(i - 1, d_minus, b_minus);
        op.super[i] = d_plus * (inv_h2 + b_plus * inv_2h);
        op.diag[i] = d_plus * (-inv_h2 + b_plus * inv_2h) - d_minus * (inv_h2 + b_minus * inv_2h);
        op.sub[i] = d_minus * (inv_h2 - b_minus * inv_2h);
    }
    return op;
}

ThetaScheme::ThetaScheme(TridiagonalOperator op, double dt, double theta)
    : op_(std::move(op)), dt_(dt), theta_(theta) {
    const int n = op_.size();
    lower_.resize(n);
    pivot_inv_.resize(n);
    upper_ratio_.resize(n);
    scratch_.resize(n);

    // Thomas elimination of A = I - theta dt L, prepared once. Boundary rows
    // of L are zero, so A has unit pivots there.
    std::vector<double> upper(n);
    double prev_ratio = 0.0;
    for (int i = 0; i < n; ++i) {
        lower_[i] = -theta_ * dt_ * op_.sub[i];
        upper[i] = -theta_ * dt_ * op_.super[i];
        const double b = 1.0 - theta_ * dt_ * op_.diag[i];
        const double pivot = (i == 0) ? b : b - lower_[i] * prev_ratio;
        if (std::abs(pivot) < 1e-300)
            throw SolveFailure("singular implicit tridiagonal system");
        pivot_inv_[i] = 1.0 / pivot;
        prev_ratio = upper[i] * pivot_inv_[i];
        upper_ratio_[i] = prev_ratio;
    }
}

void ThetaScheme::advance(std::vector<double>& values) const {
    const int n = op_.size();
    const double expl = (1.0 - theta_) * dt_;
    std::vector<double>& rhs = scratch_;

    rhs[0] = values[0];
    for (int i = 1; i + 1 < n; ++i)
        rhs[i] = values[i]
                 + expl * (op_.sub[i] * values[i - 1] + op_.diag[i] * values[i]
                           + op_.super[i] * values[i + 1]);
    rhs[n - 1] = values[n - 1];

    // forward sweep
    rhs[0] *= pivot_inv_[0];
    for (int i = 1; i < n; ++i)
        rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * pivot_inv_[i];
    // back substitution
    values[n - 1] = rhs[n - 1];
    for (int i = n - 2; i >= 0; --i)
        values[i] = rhs[i] - upper_ratio_[i] * values[i + 1];
}

DensityField step(const DensityField& state, const TridiagonalOperator& op, double dt, double theta) {
    if (!(dt > 0.0))
        throw ConfigError("time step dt must be > 0");
    ThetaScheme scheme(op, dt, theta);
    DensityField next = state;
    scheme.advance(next.values);
    next.time = state.time + dt;
    return next;
}

EvolveResult evolve_streaming(const GaussianWavepacket& packet, const DiffusionProfile& profile,
                              const HarmonicPotential& potential, const Grid1D& grid,
                              const SolverConfig& config,
                              const std::function<void(const DensityField&)>& on_snapshot) {
    config.validate();
    DensityField state = initial_density(packet, grid);
    const TridiagonalOperator op = assemble_operator(grid, profile, potential);
    const ThetaScheme scheme(op, config.dt, config.theta);

    const long n_steps = std::lround(config.t_end / config.dt);
    if (n_steps < 1)
        throw ConfigError("t_end shorter than one time step");

    EvolveResult result;
    auto record = [&](const DensityField& field) {
        const double m = field.mass();
        result.mass_times.push_back(field.time);
        result.mass_values.push_back(m);
        result.max_mass_drift = std::max(result.max_mass_drift, std::abs(m - 1.0));
        if (on_snapshot)
            on_snapshot(field);
    };

    record(state);
    for (long s = 1; s <= n_steps; ++s) {
        scheme.advance(state.values);
        state.time = static_cast<double>(s) * config.dt;
        if (s % config.snapshot_stride == 0 || s == n_steps)
            record(state);
    }
    result.mass_leak = result.max_mass_drift > config.tol_mass;
    return result;
}

EvolveResult evolve(const GaussianWavepacket& packet, const DiffusionProfile& profile,
                    const HarmonicPotential& potential, const Grid1D& grid,
                    const SolverConfig& config) {
    std::vector<DensityField> snapshots;
    EvolveResult result = evolve_streaming(packet, profile, potential, grid, config,
                                           [&](const DensityField& f) { snapshots.push_back(f); });
    result.snapshots = std::move(snapshots);
    return result;
}

} // namespace solvdyn
