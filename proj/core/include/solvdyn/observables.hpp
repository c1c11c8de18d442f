#pragma once

#include <optional>
#include <vector>

#include "solvdyn/model.hpp"

namespace solvdyn {

/// Time-stamped observable samples: either the solvation correlation S(t)
/// or a raw moment <eps^n>(t). Times are strictly increasing.
struct ObservableSeries {
    enum class Kind { SolvationS, RawMoment };

    Kind kind = Kind::SolvationS;
    int order = 0; ///< moment order when kind == RawMoment
    std::vector<double> times;
    std::vector<double> values;
};

/// Trapezoid quadrature of the raw moment integral(eps^n P deps), n >= 0.
double raw_moment(const DensityField& field, int order);

/// S(t_i) = <eps>(t_i) / epsilon0. S(0) = 1 up to quadrature error.
/// Throws ZeroInitialGap if the packet center is 0.
ObservableSeries s_of_t(const std::vector<DensityField>& snapshots, const GaussianWavepacket& packet);

/// <eps^n>(t_i) over the snapshots, n >= 1.
ObservableSeries moment_series(const std::vector<DensityField>& snapshots, int order);

enum class RelaxationLabel { Monotonic, NonMonotonic };

/// Outcome of classifying a relaxation series. s_max and t_max refer to the
/// series normalized toward its equilibrium value (for S(t) this is S itself);
/// rate is present only for monotonic decays.
struct RelaxationClassification {
    RelaxationLabel label = RelaxationLabel::Monotonic;
    double s_max = 0.0;
    double t_max = 0.0;
    std::optional<double> rate;
};

/// Classifies a relaxation as monotonic or non-monotonic.
///
/// The series is normalized toward its equilibrium value,
///   u_i = (v_i - equilibrium) / (v_0 - equilibrium),
/// so u starts at 1 and relaxes to 0; for kind-S series with equilibrium 0
/// this is the series itself. The label is NonMonotonic iff max u > 1 + delta.
/// For monotonic decays the exponential rate comes from a log-linear least
/// squares fit over samples with u in [fit_lo, fit_hi].
///
/// Throws SeriesTooShort unless the series covers enough of the decay
/// (final u < 0.5 * max u).
RelaxationClassification classify_relaxation(const ObservableSeries& series, double delta,
                                             double equilibrium = 0.0, double fit_lo = 0.1,
                                             double fit_hi = 0.9);

/// Closed-form initial slope of S(t) for a Gaussian packet:
///   dS/dt|_0 = d0 * (2 alpha - k - k alpha (epsilon0^2 + 1.5 sigma^2)).
/// A positive slope predicts a non-monotonic relaxation.
double initial_slope(const DiffusionProfile& profile, const HarmonicPotential& potential,
                     const GaussianWavepacket& packet);

/// Raw moment of the stationary density: 0 for odd n,
/// (n-1)!! / k^(n/2) for even n. Throws NoStationaryDensity for k = 0.
double stationary_raw_moment(const HarmonicPotential& potential, int order);

} // namespace solvdyn
