// Acceptance suite: one checker per criterion, each printing a single
// [PASS]/[FAIL] line (details indented below it). Run with no arguments for
// the full suite or with criterion numbers to run a subset. Exit code is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "solvdyn/criticality.hpp"
#include "solvdyn/model.hpp"
#include "solvdyn/observables.hpp"
#include "solvdyn/pde.hpp"
#include "solvdyn/sde.hpp"

using namespace solvdyn;

namespace {

const Grid1D kGrid{};
constexpr double kSigma = 0.1;

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool condition, const std::string& note) {
        ok = ok && condition;
        notes.push_back(std::string(condition ? "  ok   " : "  FAIL ") + note);
    }

    void info(const std::string& note) { notes.push_back("  info " + note); }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

SolverConfig figure_solver(double t_end) {
    SolverConfig config;
    config.t_end = t_end;
    return config;
}

struct FigureRun {
    EvolveResult evolution;
    ObservableSeries s;
    RelaxationClassification classification;
};

FigureRun run_figure(double alpha, double k, double epsilon0, double t_end, double delta = 1e-4) {
    FigureRun run;
    run.evolution = evolve({epsilon0, kSigma}, {1.0, alpha}, {k}, kGrid, figure_solver(t_end));
    run.s = s_of_t(run.evolution.snapshots, {epsilon0, kSigma});
    run.classification = classify_relaxation(run.s, delta);
    return run;
}

std::vector<double> snapshot_times(double t_end) {
    std::vector<double> times{0.0};
    for (long s = 10; s <= std::lround(t_end / 1e-3); s += 10)
        times.push_back(static_cast<double>(s) * 1e-3);
    return times;
}

std::vector<ObservableSeries> pde_moment_pair(const std::vector<DensityField>& snapshots) {
    return {moment_series(snapshots, 1), moment_series(snapshots, 2)};
}

// criterion 1: homogeneous diffusion relaxes as exp(-t) independent of the
// initial level
Check criterion1() {
    Check check;
    std::vector<double> rates;
    for (double e0 : {1.0, 2.0, 3.0, 4.0}) {
        const FigureRun run = run_figure(0.0, 1.0, e0, 5.0);
        double worst_rel = 0.0;
        for (size_t i = 0; i < run.s.times.size(); ++i) {
            const double expected = std::exp(-run.s.times[i]);
            worst_rel = std::max(worst_rel, std::fabs(run.s.values[i] - expected) / expected);
        }
        check.require(worst_rel <= 1e-3,
                      "eps0=" + num(e0) + ": |S - exp(-t)|/exp(-t) max " + num(worst_rel)
                          + " <= 1e-3");
        check.require(run.classification.rate.has_value(), "eps0=" + num(e0) + ": rate fitted");
        const double rate = run.classification.rate.value_or(0.0);
        rates.push_back(rate);
        check.require(std::fabs(rate - 1.0) <= 0.01,
                      "eps0=" + num(e0) + ": rate " + num(rate) + " within 1.00 +- 0.01");
    }
    for (size_t i = 1; i < rates.size(); ++i)
        check.require(std::fabs(rates[i] - rates[0]) <= 0.005 * rates[0],
                      "rates for eps0=1 and eps0=" + num(i + 1.0) + " equal within 0.5%");
    return check;
}

// criterion 2: inhomogeneity lifts the degeneracy; higher initial levels
// relax faster
Check criterion2() {
    Check check;
    std::vector<double> rates;
    for (double e0 : {1.0, 2.0, 3.0, 4.0}) {
        const FigureRun run = run_figure(1.0, 1.0, e0, 5.0);
        check.require(run.classification.rate.has_value(), "eps0=" + num(e0) + ": rate fitted");
        rates.push_back(run.classification.rate.value_or(0.0));
        check.info("eps0=" + num(e0) + ": effective rate " + num(rates.back()));
    }
    for (size_t i = 1; i < rates.size(); ++i)
        check.require(rates[i] > rates[i - 1], "rate(eps0=" + num(i + 1.0) + ") > rate(eps0="
                                                   + num(static_cast<double>(i)) + ")");
    return check;
}

// criterion 3: the non-monotonic phase at (0.25, 0.25), confirmed by the
// stochastic ensemble
Check criterion3() {
    Check check;
    const FigureRun run = run_figure(0.25, 0.25, 0.5, 5.0);
    check.require(run.classification.label == RelaxationLabel::NonMonotonic,
                  "classification NonMonotonic");
    check.require(run.classification.s_max > 1.0 + 1e-3,
                  "S_Max " + num(run.classification.s_max) + " > 1 + 1e-3");

    EnsembleConfig mc;
    mc.n_traj = 100000;
    mc.dt_sde = 1e-3;
    mc.t_end = 5.0;
    mc.seed = 1003;
    mc.record_times = snapshot_times(5.0);
    const EnsembleResult ensemble = simulate_ensemble({1.0, 0.25}, {0.25}, {0.5, kSigma}, mc);
    double best_z = -1e300;
    for (size_t r = 1; r < ensemble.record_times.size(); ++r) {
        if (ensemble.record_times[r] > 2.5)
            break; // the rise is an early-time feature
        const MomentEstimate& m = ensemble.at(static_cast<int>(r), 1);
        best_z = std::max(best_z, (m.mean - 0.5) / m.std_error);
    }
    check.require(best_z >= 3.0,
                  "ensemble mean rises above eps0 by " + num(best_z) + " standard errors (>= 3)");
    return check;
}

// criterion 4: odd moments inherit the non-monotonicity, even moments relax
// monotonically onto the potential's stationary values
Check criterion4() {
    Check check;
    const HarmonicPotential potential{1.0};
    for (double alpha : {1.0, 4.0, 7.0, 10.0}) {
        const EvolveResult result =
            evolve({0.2, kSigma}, {1.0, alpha}, potential, kGrid, figure_solver(20.0));
        for (int order : {1, 3, 5, 7}) {
            const ObservableSeries series = moment_series(result.snapshots, order);
            const auto c = classify_relaxation(series, 1e-4, 0.0);
            check.require(c.label == RelaxationLabel::NonMonotonic,
                          "alpha=" + num(alpha) + " order " + std::to_string(order)
                              + " non-monotonic");
        }
        for (int order : {2, 4, 6}) {
            const double stationary = stationary_raw_moment(potential, order);
            const ObservableSeries series = moment_series(result.snapshots, order);
            const auto c = classify_relaxation(series, 1e-4, stationary);
            check.require(c.label == RelaxationLabel::Monotonic,
                          "alpha=" + num(alpha) + " order " + std::to_string(order) + " monotonic");
            const double final_value = series.values.back();
            check.require(std::fabs(final_value - stationary) <= 1e-3,
                          "alpha=" + num(alpha) + " order " + std::to_string(order) + " final "
                              + num(final_value) + " -> " + num(stationary) + " +- 1e-3");
        }
    }
    return check;
}

// criterion 5: S_Max grows with inhomogeneity and shrinks with confinement
Check criterion5() {
    Check check;
    CriticalityConfig crit;
    crit.solver.snapshot_stride = 20;

    std::vector<double> by_alpha;
    for (double alpha : {1.0, 3.0, 5.0, 7.0})
        by_alpha.push_back(s_max_curve(alpha, 1.0, std::vector<double>{0.5}, crit).s_max[0]);
    for (size_t i = 1; i < by_alpha.size(); ++i)
        check.require(by_alpha[i] > by_alpha[i - 1],
                      "S_Max(alpha idx " + std::to_string(i) + ") " + num(by_alpha[i]) + " > "
                          + num(by_alpha[i - 1]));

    std::vector<double> by_k;
    for (double k : {0.0, 0.5, 1.0, 4.0})
        by_k.push_back(s_max_curve(1.0, k, std::vector<double>{0.5}, crit).s_max[0]);
    for (size_t i = 1; i < by_k.size(); ++i)
        check.require(by_k[i] < by_k[i - 1], "S_Max(k idx " + std::to_string(i) + ") "
                                                 + num(by_k[i]) + " < " + num(by_k[i - 1]));
    return check;
}

// criterion 6: the phase portrait structure and its sign-criterion boundary
Check criterion6() {
    Check check;
    CriticalityConfig crit;
    crit.solver.snapshot_stride = 20;
    crit.tol_eps = 0.01;

    const std::vector<double> alphas = linspace(0.0, 1.0, 5);
    const std::vector<double> ks = linspace(0.25, 1.0, 5);
    const PhasePortrait portrait = sweep_portrait(alphas, ks, crit);

    int nonzero_cells = 0;
    for (size_t ik = 0; ik < ks.size(); ++ik) {
        for (size_t ia = 0; ia < alphas.size(); ++ia) {
            const int cell = portrait.index(static_cast<int>(ia), static_cast<int>(ik));
            check.require(portrait.status[cell] == "ok",
                          "cell (" + num(alphas[ia]) + ", " + num(ks[ik]) + ") status ok");
            const double critical = portrait.critical[cell];
            if (ia == 0)
                check.require(std::fabs(critical) <= 0.01, "alpha=0, k=" + num(ks[ik])
                                                               + ": critical " + num(critical)
                                                               + " = 0 +- 0.01");
            if (critical > 0.0)
                ++nonzero_cells;

            // sign criterion at the bottom of the bracket decides zero vs nonzero
            const double slope_at_lo =
                initial_slope({1.0, alphas[ia]}, {ks[ik]}, {kSigma, kSigma});
            const bool predicted_nonzero = slope_at_lo > 0.0;
            // cells whose predicted boundary falls within one bisection
            // tolerance of the bracket floor may land either way
            const double inner = alphas[ia] > 0.0 && ks[ik] > 0.0
                                     ? (2.0 * alphas[ia] - ks[ik]) / (ks[ik] * alphas[ia])
                                           - 1.5 * kSigma * kSigma
                                     : -1.0;
            const double predicted_root = inner > 0.0 ? std::sqrt(inner) : 0.0;
            if (std::fabs(predicted_root - kSigma) <= crit.tol_eps) {
                check.info("cell (" + num(alphas[ia]) + ", " + num(ks[ik])
                           + ") within one tolerance of the boundary, skipped");
                continue;
            }
            check.require((critical > 0.0) == predicted_nonzero,
                          "cell (" + num(alphas[ia]) + ", " + num(ks[ik]) + "): critical "
                              + num(critical) + " matches sign criterion ("
                              + (predicted_nonzero ? "nonzero" : "zero") + ")");
        }
    }
    check.info("nonzero cells: " + std::to_string(nonzero_cells) + " of 25");
    check.require(nonzero_cells > 0, "the non-monotonic phase appears off the alpha = 0 line");
    return check;
}

// criterion 7: conservation, stationarity, and the moment-derivative identity
Check criterion7() {
    Check check;

    // mass conservation over the confining figure runs (criteria 1, 2, 4)
    double worst_drift = 0.0;
    for (double alpha : {0.0, 1.0})
        for (double e0 : {1.0, 2.0, 3.0, 4.0}) {
            const FigureRun run = run_figure(alpha, 1.0, e0, 5.0);
            worst_drift = std::max(worst_drift, run.evolution.max_mass_drift);
        }
    for (double alpha : {1.0, 4.0, 7.0, 10.0}) {
        const EvolveResult result =
            evolve({0.2, kSigma}, {1.0, alpha}, {1.0}, kGrid, figure_solver(20.0));
        worst_drift = std::max(worst_drift, result.max_mass_drift);
    }
    check.require(worst_drift <= 1e-6,
                  "mass drift " + num(worst_drift) + " <= 1e-6 over the k=1 figure runs");

    // the weakly confined run leaks physically through the Dirichlet walls;
    // it is flagged, reported, and excluded from the budget above
    const FigureRun leaky = run_figure(0.25, 0.25, 0.5, 5.0);
    check.info("alpha=0.25, k=0.25 run: drift " + num(leaky.evolution.max_mass_drift)
               + " (MassLeak flag " + (leaky.evolution.mass_leak ? "raised)" : "not raised)"));

    // evolving the sampled stationary density must not move it
    for (double alpha : {0.0, 0.7, 4.0}) {
        const DensityField eq = stationary_density({1.0}, kGrid);
        const TridiagonalOperator op = assemble_operator(kGrid, {1.0, alpha}, {1.0});
        const ThetaScheme scheme(op, 1e-3, 0.5);
        std::vector<double> values = eq.values;
        for (int s = 0; s < 1000; ++s)
            scheme.advance(values);
        double change = 0.0;
        for (size_t i = 0; i < values.size(); ++i)
            change = std::max(change, std::fabs(values[i] - eq.values[i]));
        check.require(change <= 1e-8, "alpha=" + num(alpha) + ": stationary density moved by "
                                          + num(change) + " <= 1e-8 over 1000 steps");
    }

    // d<eps>/dt from dt-spaced snapshots vs quadrature of the drift, sampled
    // once the packet has widened past the (h/sigma)^4 resolution transient
    const DiffusionProfile profile{1.0, 1.0};
    const HarmonicPotential potential{1.0};
    SolverConfig dense = figure_solver(2.0);
    dense.snapshot_stride = 1;
    const EvolveResult result = evolve({2.0, kSigma}, profile, potential, kGrid, dense);
    double worst_gap = 0.0;
    const auto& snaps = result.snapshots;
    for (size_t i = 200; i + 1 < snaps.size(); i += 100) {
        const double numeric = (raw_moment(snaps[i + 1], 1) - raw_moment(snaps[i - 1], 1))
                               / (snaps[i + 1].time - snaps[i - 1].time);
        std::vector<double> weighted(snaps[i].values.size());
        for (int j = 0; j < kGrid.n; ++j)
            weighted[j] = drift_at(profile, potential, kGrid.node(j)) * snaps[i].values[j];
        worst_gap = std::max(worst_gap,
                             std::fabs(numeric - trapezoid(weighted, kGrid.spacing())));
    }
    check.require(worst_gap <= 1e-4,
                  "max |d<eps>/dt - <a(eps)>| " + num(worst_gap) + " <= 1e-4");
    return check;
}

// criterion 8: PDE vs Monte Carlo moments, plus the spurious-drift isolation
Check criterion8() {
    Check check;

    auto compare_run = [&](double alpha, double k, double e0, std::int64_t n_traj,
                           std::uint64_t seed) {
        const EvolveResult pde = evolve({e0, kSigma}, {1.0, alpha}, {k}, kGrid, figure_solver(5.0));
        EnsembleConfig mc;
        mc.n_traj = n_traj;
        mc.dt_sde = 1e-3;
        mc.t_end = 5.0;
        mc.seed = seed;
        mc.record_times = snapshot_times(5.0);
        const EnsembleResult ensemble = simulate_ensemble({1.0, alpha}, {k}, {e0, kSigma}, mc);
        const ComparisonReport report = compare_with_pde(pde_moment_pair(pde.snapshots), ensemble);
        check.require(report.pass, "alpha=" + num(alpha) + ", k=" + num(k) + ", eps0=" + num(e0)
                                       + ": " + num(100.0 * report.fraction_within)
                                       + "% of z within 3 (max |z| " + num(report.max_abs_z) + ")");
    };

    // Fixed seeds: the z-band test is a draw from a stochastic gate (record
    // times are correlated through shared trajectories, so a single ordinary
    // ~3 sigma excursion can cover >1% of the run). A drift or diffusivity
    // bug moves z by orders of magnitude at any seed (see the flipped-drift
    // control), so pinning seeds keeps the gate deterministic without losing
    // discriminative power.
    std::uint64_t seed = 9000;
    for (double e0 : {1.0, 2.0, 3.0, 4.0}) {
        compare_run(0.0, 1.0, e0, 30000, seed);
        seed += 10;
    }
    compare_run(0.25, 0.25, 0.5, 100000, seed);

    // k = 0, alpha > 0: the mean ODE closes, <eps>(t) = eps0 e^{2 alpha t};
    // only the D'(eps) drift term can produce this growth
    EnsembleConfig mc;
    mc.n_traj = 30000;
    mc.dt_sde = 1e-3;
    mc.t_end = 0.25;
    mc.seed = 8100;
    mc.record_times = {0.0, 0.125, 0.25};
    const EnsembleResult free_run = simulate_ensemble({1.0, 1.0}, {0.0}, {1.0, kSigma}, mc);
    const MomentEstimate& last = free_run.at(2, 1);
    const double target = std::exp(0.5);
    check.require(std::fabs(last.mean - target) <= 3.0 * last.std_error,
                  "free-diffusion drift: <eps>(0.25) = " + num(last.mean) + " vs " + num(target)
                      + " within 3 standard errors");
    return check;
}

// criterion 9: second-order convergence of S(t) under h, dt refinement
Check criterion9() {
    Check check;
    auto run_series = [&](int n, double dt, int stride) {
        const Grid1D grid{-10.0, 10.0, n};
        SolverConfig config;
        config.dt = dt;
        config.t_end = 2.0;
        config.snapshot_stride = stride;
        const EvolveResult result = evolve({1.0, kSigma}, {1.0, 0.0}, {1.0}, grid, config);
        return s_of_t(result.snapshots, {1.0, kSigma});
    };
    // snapshots every 0.1 time units at every resolution
    const ObservableSeries coarse = run_series(501, 2e-3, 50);
    const ObservableSeries medium = run_series(1001, 1e-3, 100);
    const ObservableSeries reference = run_series(4001, 2.5e-4, 400);

    double err_coarse = 0.0, err_medium = 0.0;
    for (size_t i = 0; i < reference.values.size(); ++i) {
        err_coarse = std::max(err_coarse, std::fabs(coarse.values[i] - reference.values[i]));
        err_medium = std::max(err_medium, std::fabs(medium.values[i] - reference.values[i]));
    }
    const double ratio = err_coarse / err_medium;
    check.info("err(h=0.04) = " + num(err_coarse) + ", err(h=0.02) = " + num(err_medium));
    check.require(ratio >= 3.5 && ratio <= 4.5,
                  "halving h (and dt) shrinks the S(t) error by " + num(ratio) + " in [3.5, 4.5]");
    return check;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Check()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "OU degeneracy: exp(-t) relaxation independent of the initial level", criterion1},
    {2, "rate ordering: relaxation speeds up with the initial level", criterion2},
    {3, "non-monotonic phase at (alpha, k) = (0.25, 0.25), PDE and ensemble", criterion3},
    {4, "odd/even moment dichotomy and stationary values", criterion4},
    {5, "S_Max trends in inhomogeneity and restoring strength", criterion5},
    {6, "phase portrait: zero alpha = 0 column and sign-criterion boundary", criterion6},
    {7, "mass conservation, stationarity, derivative consistency", criterion7},
    {8, "cross-method oracle: PDE vs Monte Carlo, spurious-drift isolation", criterion8},
    {9, "second-order convergence of S(t)", criterion9},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (!selected.empty()
            && std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
            continue;
        Check check;
        try {
            check = criterion.run();
        } catch (const std::exception& e) {
            check.ok = false;
            check.notes.push_back(std::string("  FAIL unexpected exception: ") + e.what());
        }
        std::printf("[%s] criterion %d: %s\n", check.ok ? "PASS" : "FAIL", criterion.id,
                    criterion.title);
        for (const std::string& note : check.notes)
            std::printf("%s\n", note.c_str());
        std::fflush(stdout);
        if (!check.ok)
            ++failures;
    }
    return failures;
}
