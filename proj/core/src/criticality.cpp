#include "solvdyn/criticality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace solvdyn {

double run_horizon(const CriticalityConfig& config, double k) {
    double t = config.solver.t_end;
    if (k > 0.0)
        t = std::max(t, 5.0 / (config.d0 * k));
    else
        t = config.t_end_cap;
    return std::min(t, config.t_end_cap);
}

RelaxationClassification classify_run(double alpha, double k, double epsilon0,
                                      const CriticalityConfig& config) {
    const DiffusionProfile profile{config.d0, alpha};
    const HarmonicPotential potential{k};
    const GaussianWavepacket packet{epsilon0, config.sigma};

    SolverConfig solver = config.solver;
    solver.t_end = run_horizon(config, k);

    ObservableSeries series;
    series.kind = ObservableSeries::Kind::SolvationS;
    evolve_streaming(packet, profile, potential, config.grid, solver,
                     [&](const DensityField& field) {
                         series.times.push_back(field.time);
                         series.values.push_back(raw_moment(field, 1) / epsilon0);
                     });
    return classify_relaxation(series, config.delta, 0.0, config.fit_lo, config.fit_hi);
}

double find_critical_epsilon(double alpha, double k, const CriticalityConfig& config) {
    if (!(config.tol_eps > 0.0))
        throw ConfigError("bisection tolerance must be > 0");
    double lo = config.sigma;
    double hi = std::min(config.bracket_hi, config.grid.eps_max - 6.0 * config.sigma);
    if (!(lo < hi))
        throw ConfigError("empty epsilon0 search bracket");

    // no phase at all: even the smallest admissible packet relaxes monotonically
    if (classify_run(alpha, k, lo, config).label == RelaxationLabel::Monotonic)
        return 0.0;
    // still non-monotonic at the top of the bracket: no crossing to bisect
    if (classify_run(alpha, k, hi, config).label == RelaxationLabel::NonMonotonic)
        throw NonMonotoneBoundary("non-monotonic relaxation persists at the bracket top");

    while (hi - lo > config.tol_eps) {
        const double mid = 0.5 * (lo + hi);
        if (classify_run(alpha, k, mid, config).label == RelaxationLabel::NonMonotonic)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

SMaxCurve s_max_curve(double alpha, double k, std::span<const double> epsilon0s,
                      const CriticalityConfig& config) {
    SMaxCurve curve;
    curve.alpha = alpha;
    curve.k = k;
    curve.epsilon0s.assign(epsilon0s.begin(), epsilon0s.end());
    curve.s_max.reserve(epsilon0s.size());
    for (double epsilon0 : epsilon0s) {
        if (!(epsilon0 > 0.0 && epsilon0 <= config.bracket_hi))
            throw ConfigError("curve samples must lie in (0, bracket_hi]");
        curve.s_max.push_back(classify_run(alpha, k, epsilon0, config).s_max);
    }
    return curve;
}

PhasePortrait sweep_portrait(std::span<const double> alphas, std::span<const double> ks,
                             const CriticalityConfig& config) {
    if (alphas.empty() || ks.empty())
        throw ConfigError("sweep ranges must be non-empty");

    PhasePortrait portrait;
    portrait.alphas.assign(alphas.begin(), alphas.end());
    portrait.ks.assign(ks.begin(), ks.end());
    const int n_cells = static_cast<int>(alphas.size() * ks.size());
    portrait.critical.assign(n_cells, 0.0);
    portrait.status.assign(n_cells, "ok");

    auto run_cell = [&](int cell) {
        const int ia = cell % static_cast<int>(alphas.size());
        const int ik = cell / static_cast<int>(alphas.size());
        try {
            portrait.critical[cell] = find_critical_epsilon(alphas[ia], ks[ik], config);
        } catch (const Error& e) {
            portrait.critical[cell] = 0.0;
            portrait.status[cell] = e.what();
        }
    };

    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    workers = std::min(workers, n_cells);
    if (workers == 1) {
        for (int cell = 0; cell < n_cells; ++cell)
            run_cell(cell);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int cell = next.fetch_add(1); cell < n_cells; cell = next.fetch_add(1))
                run_cell(cell);
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }
    return portrait;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1)
        throw ConfigError("linspace needs at least one point");
    std::vector<double> points(count);
    if (count == 1) {
        points[0] = lo;
        return points;
    }
    for (int i = 0; i < count; ++i)
        points[i] = (lo * static_cast<double>(count - 1 - i) + hi * static_cast<double>(i))
                    / static_cast<double>(count - 1);
    return points;
}

} // namespace solvdyn
