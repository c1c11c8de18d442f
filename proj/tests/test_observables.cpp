#include <cmath>

#include <doctest.h>

#include "solvdyn/model.hpp"
#include "solvdyn/observables.hpp"
#include "solvdyn/pde.hpp"

using namespace solvdyn;

namespace {

const Grid1D kDefaultGrid{};

ObservableSeries synthetic_exponential(double rate, double t_end, double dt) {
    ObservableSeries series;
    for (double t = 0.0; t <= t_end + 1e-12; t += dt) {
        series.times.push_back(t);
        series.values.push_back(std::exp(-rate * t));
    }
    return series;
}

} // namespace

TEST_CASE("raw moments of reference fields") {
    const DensityField init = initial_density({1.0, 0.1}, kDefaultGrid);
    CHECK(raw_moment(init, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(raw_moment(init, 1) == doctest::Approx(1.0).epsilon(1e-6));

    const DensityField eq = stationary_density({1.0}, kDefaultGrid);
    CHECK(raw_moment(eq, 4) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("s_of_t normalizes by the initial gap") {
    const GaussianWavepacket packet{2.0, 0.1};
    const std::vector<DensityField> only_start{initial_density(packet, kDefaultGrid)};
    const ObservableSeries series = s_of_t(only_start, packet);
    REQUIRE(series.values.size() == 1);
    CHECK(series.values[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(series.kind == ObservableSeries::Kind::SolvationS);

    CHECK_THROWS_AS(s_of_t(only_start, GaussianWavepacket{0.0, 0.1}), ZeroInitialGap);
}

TEST_CASE("classify: clean exponential is monotonic with the right rate") {
    const ObservableSeries series = synthetic_exponential(1.0, 5.0, 0.01);
    const RelaxationClassification c = classify_relaxation(series, 1e-4);
    CHECK(c.label == RelaxationLabel::Monotonic);
    REQUIRE(c.rate.has_value());
    CHECK(*c.rate == doctest::Approx(1.0).epsilon(0.01));
    CHECK(c.s_max == doctest::Approx(1.0));
    CHECK(c.t_max == 0.0);
}

TEST_CASE("classify: rising series is non-monotonic, truncated series throws") {
    ObservableSeries rising;
    for (int i = 0; i <= 500; ++i) {
        const double t = i * 0.01;
        rising.times.push_back(t);
        rising.values.push_back((1.0 + 2.0 * t) * std::exp(-t)); // peaks at t = 0.5
    }
    const RelaxationClassification c = classify_relaxation(rising, 1e-4);
    CHECK(c.label == RelaxationLabel::NonMonotonic);
    CHECK(c.s_max > 1.0 + 1e-4);
    CHECK_FALSE(c.rate.has_value());

    ObservableSeries constant;
    for (int i = 0; i < 10; ++i) {
        constant.times.push_back(i * 0.1);
        constant.values.push_back(1.0);
    }
    CHECK_THROWS_AS(classify_relaxation(constant, 1e-4), SeriesTooShort);
}

TEST_CASE("classify: normalization toward a nonzero equilibrium") {
    // rises from 0.1 toward 2.0 without overshoot: monotonic approach
    ObservableSeries series;
    for (int i = 0; i <= 600; ++i) {
        const double t = i * 0.01;
        series.times.push_back(t);
        series.values.push_back(2.0 - 1.9 * std::exp(-t));
    }
    const RelaxationClassification c = classify_relaxation(series, 1e-4, 2.0);
    CHECK(c.label == RelaxationLabel::Monotonic);
    REQUIRE(c.rate.has_value());
    CHECK(*c.rate == doctest::Approx(1.0).epsilon(0.01));

    // dips away from the equilibrium before approaching: non-monotonic
    ObservableSeries dipping;
    for (int i = 0; i <= 600; ++i) {
        const double t = i * 0.01;
        dipping.times.push_back(t);
        dipping.values.push_back(2.0 - 1.9 * (1.0 + 2.0 * t) * std::exp(-t));
    }
    CHECK(classify_relaxation(dipping, 1e-4, 2.0).label == RelaxationLabel::NonMonotonic);
}

TEST_CASE("initial slope: closed form") {
    // OU limit: slope = -d0 k for any packet
    CHECK(initial_slope({1.0, 0.0}, {1.0}, {3.0, 0.2}) == -1.0);
    // frozen from the Gaussian-moment formula d0 (2a - k - k a (e0^2 + 1.5 s^2))
    CHECK(initial_slope({1.0, 0.25}, {0.25}, {0.5, 0.1})
          == doctest::Approx(0.2334375).epsilon(1e-12));
    CHECK(initial_slope({1.0, 1.0}, {1.0}, {2.0, 0.1})
          == doctest::Approx(-3.015).epsilon(1e-12));
}

TEST_CASE("initial slope agrees with the PDE's finite-difference slope") {
    struct Case {
        double alpha, k, epsilon0;
    };
    for (const Case& c : {Case{0.25, 0.25, 0.5}, Case{1.0, 1.0, 2.0}, Case{4.0, 1.0, 0.8}}) {
        const DiffusionProfile profile{1.0, c.alpha};
        const HarmonicPotential potential{c.k};
        const GaussianWavepacket packet{c.epsilon0, 0.1};

        SolverConfig config;
        config.dt = 1e-4;
        config.t_end = 2e-4;
        config.snapshot_stride = 1;
        const EvolveResult result = evolve(packet, profile, potential, kDefaultGrid, config);
        const ObservableSeries series = s_of_t(result.snapshots, packet);
        // second-order one-sided difference at t = 0
        const double numeric =
            (4.0 * series.values[1] - series.values[2] - 3.0 * series.values[0]) / (2.0 * config.dt);

        CHECK(std::fabs(numeric - initial_slope(profile, potential, packet)) <= 1e-3);
    }
}

TEST_CASE("initial slope sign predicts the first PDE move over the figure sets") {
    struct Case {
        double alpha, k, epsilon0;
    };
    std::vector<Case> cases;
    for (double e0 : {1.0, 2.0, 3.0, 4.0}) {
        cases.push_back({0.0, 1.0, e0});
        cases.push_back({1.0, 1.0, e0});
    }
    for (double alpha : {1.0, 4.0, 7.0, 10.0})
        for (double e0 : {0.2, 0.5, 0.8, 1.3})
            cases.push_back({alpha, 1.0, e0});
    cases.push_back({0.25, 0.25, 0.5});

    for (const Case& c : cases) {
        const DiffusionProfile profile{1.0, c.alpha};
        const HarmonicPotential potential{c.k};
        const GaussianWavepacket packet{c.epsilon0, 0.1};
        const double slope = initial_slope(profile, potential, packet);
        if (std::fabs(slope) <= 1e-3)
            continue;

        SolverConfig config;
        config.dt = 1e-3;
        config.t_end = 1e-3;
        config.snapshot_stride = 1;
        const EvolveResult result = evolve(packet, profile, potential, kDefaultGrid, config);
        const ObservableSeries series = s_of_t(result.snapshots, packet);
        CHECK(std::signbit(series.values[1] - series.values[0]) == std::signbit(slope));
    }
}

TEST_CASE("moment series: stationary start stays constant") {
    const DensityField eq = stationary_density({1.0}, kDefaultGrid);
    std::vector<DensityField> snapshots(3, eq);
    snapshots[1].time = 1.0;
    snapshots[2].time = 2.0;
    for (int n : {1, 2, 3, 4}) {
        const ObservableSeries series = moment_series(snapshots, n);
        CHECK(series.values[0] == series.values[1]);
        CHECK(series.values[0] == series.values[2]);
        CHECK(series.order == n);
    }
}

TEST_CASE("odd/even moment dichotomy at alpha = 4") {
    SolverConfig config;
    config.t_end = 8.0;
    const EvolveResult result = evolve({0.2, 0.1}, {1.0, 4.0}, {1.0}, kDefaultGrid, config);
    const HarmonicPotential potential{1.0};

    const ObservableSeries odd = moment_series(result.snapshots, 3);
    CHECK(classify_relaxation(odd, 1e-4, stationary_raw_moment(potential, 3)).label
          == RelaxationLabel::NonMonotonic);

    const ObservableSeries even = moment_series(result.snapshots, 2);
    CHECK(classify_relaxation(even, 1e-4, stationary_raw_moment(potential, 2)).label
          == RelaxationLabel::Monotonic);
}

TEST_CASE("stationary raw moments") {
    CHECK(stationary_raw_moment({1.0}, 0) == 1.0);
    CHECK(stationary_raw_moment({1.0}, 1) == 0.0);
    CHECK(stationary_raw_moment({1.0}, 6) == 15.0);
    CHECK(stationary_raw_moment({0.5}, 2) == 2.0);
    CHECK(stationary_raw_moment({4.0}, 4) == doctest::Approx(3.0 / 16.0));
    CHECK_THROWS_AS(stationary_raw_moment({0.0}, 2), NoStationaryDensity);
}
