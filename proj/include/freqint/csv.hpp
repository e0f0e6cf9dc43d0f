#pragma once

// CSV and JSON writers for every result type. Output is locale independent:
// '.' decimal separator, no digit grouping, LF line endings.

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqint/freq_analysis.hpp"
#include "freqint/integrators.hpp"
#include "freqint/simulate.hpp"
#include "freqint/stability.hpp"

namespace freqint::csv {

/// Shortest text that round-trips to the same double; "inf", "-inf", "nan"
/// for non-finite values. Negative zero prints as "0".
std::string number(double value);

/// Fixed notation with `decimals` digits after the point.
std::string fixed(double value, int decimals);

void write_coefficients(std::ostream& os, const CoefficientSet& coeffs);

/// Columns: omega_rad_s,err_re,err_im,err_mag
void write_sweep(std::ostream& os, std::span<const ErrorSample> samples);

/// Header row "re\im" followed by the Im(lambda*h) values; then one row per
/// Re(lambda*h): the Re value followed by |g| per column.
void write_stability_map(std::ostream& os, const StabilityMap& map);

/// Sidecar {kind, theta, ranges, n} describing a stability map.
nlohmann::json stability_map_metadata(const StabilityMap& map);

/// Columns: t_s,x_0[,x_1,...]
void write_trace(std::ostream& os, const Trace& trace);

/// Columns: t_s followed by one column per named trace. All traces must
/// share sampling.
void write_traces(std::ostream& os, std::span<const std::string> names,
                  std::span<const Trace> traces);

/// Columns: step_us,A,B,C,D,TR,BE; cells are percent error to 4 decimals.
void write_case_table(std::ostream& os, const CaseTable& table);

struct GainRow {
  double lambda_h = 0.0;
  std::vector<double> gains;  // one per kind in kAllKinds order
  double exact = 0.0;
};

/// Columns: lambda_h,gain_A,gain_B,gain_C,gain_D,gain_TR,gain_BE,exact
void write_gain_curve(std::ostream& os, std::span<const GainRow> rows);

/// One row per checked derivative order:
/// location_re,location_im,multiplicity,order,scaled_magnitude,threshold,expect,pass
void write_root_reports(std::ostream& os, std::span<const RootReport> reports);

}  // namespace freqint::csv
