#pragma once

#include <span>
#include <string>
#include <vector>

#include "solvdyn/criticality.hpp"
#include "solvdyn/observables.hpp"
#include "solvdyn/sde.hpp"

namespace solvdyn {

/// 17-significant-digit decimal rendering ("%.17g"): enough digits to round-trip
/// any double, so identical runs produce byte-identical files.
std::string format_double(double value);

/// Series file: header "t,value", one sample per row.
void write_series_csv(const std::string& path, const ObservableSeries& series);
ObservableSeries read_series_csv(const std::string& path);

/// Moments file: header "t,n,value", long format, one observation per row,
/// time-major then order.
void write_moments_csv(const std::string& path, std::span<const ObservableSeries> series);
std::vector<ObservableSeries> read_moments_csv(const std::string& path);

/// Portrait file: header "alpha,k,epsilon0_critical,status", k-major row order.
void write_portrait_csv(const std::string& path, const PhasePortrait& portrait);

/// S_Max curve file: header "alpha,k,epsilon0,s_max".
void write_smax_csv(const std::string& path, std::span<const SMaxCurve> curves);

/// Ensemble file: header "t,n,mean,stderr".
void write_oracle_csv(const std::string& path, const EnsembleResult& result);

} // namespace solvdyn
