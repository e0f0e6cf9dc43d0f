#include "freqint/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace freqint::csv {

namespace {

std::string non_finite(double value) {
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string number(double value) {
  if (!std::isfinite(value)) return non_finite(value);
  if (value == 0.0) return "0";  // no "-0" in diffable output
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string fixed(double value, int decimals) {
  if (!std::isfinite(value)) return non_finite(value);
  char buf[128];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (res.ec != std::errc{}) throw std::runtime_error("number does not fit in buffer");
  return std::string(buf, res.ptr);
}

void write_coefficients(std::ostream& os, const CoefficientSet& c) {
  os << "kind,h_s,omega_select_rad_s,a_prev,b_now,b_prev,c_now,c_prev\n";
  os << to_string(c.kind) << ',' << number(c.h) << ',' << number(c.omega_select)
     << ',' << number(c.a_prev) << ',' << number(c.b_now) << ','
     << number(c.b_prev) << ',' << number(c.c_now) << ',' << number(c.c_prev)
     << '\n';
}

void write_sweep(std::ostream& os, std::span<const ErrorSample> samples) {
  os << "omega_rad_s,err_re,err_im,err_mag\n";
  for (const auto& s : samples) {
    os << number(s.omega) << ',' << number(s.error.real()) << ','
       << number(s.error.imag()) << ',' << number(s.magnitude) << '\n';
  }
}

void write_stability_map(std::ostream& os, const StabilityMap& map) {
  os << "re\\im";
  for (double im : map.im_axis) os << ',' << number(im);
  os << '\n';
  for (std::size_t row = 0; row < map.re_axis.size(); ++row) {
    os << number(map.re_axis[row]);
    for (std::size_t col = 0; col < map.im_axis.size(); ++col) {
      os << ',' << number(map.at(row, col));
    }
    os << '\n';
  }
}

nlohmann::json stability_map_metadata(const StabilityMap& map) {
  return {
      {"kind", std::string(to_string(map.kind))},
      {"theta", map.theta},
      {"ranges",
       {{"re", {map.re_axis.front(), map.re_axis.back()}},
        {"im", {map.im_axis.front(), map.im_axis.back()}}}},
      {"n", {{"re", map.re_axis.size()}, {"im", map.im_axis.size()}}},
  };
}

void write_trace(std::ostream& os, const Trace& trace) {
  const Eigen::Index n = trace.values.empty() ? 0 : trace.values.front().size();
  os << "t_s";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x_" << i;
  os << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    os << number(trace.time(k));
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << number(trace.values[k](i));
    os << '\n';
  }
}

void write_traces(std::ostream& os, std::span<const std::string> names,
                  std::span<const Trace> traces) {
  if (names.size() != traces.size() || traces.empty()) {
    throw std::invalid_argument("need one name per trace and at least one trace");
  }
  for (const auto& t : traces) {
    if (t.size() != traces.front().size() || t.h != traces.front().h) {
      throw std::invalid_argument("traces must share sampling");
    }
  }
  os << "t_s";
  for (const auto& name : names) os << ',' << name;
  os << '\n';
  for (std::size_t k = 0; k < traces.front().size(); ++k) {
    os << number(traces.front().time(k));
    for (const auto& t : traces) os << ',' << number(t.values[k](0));
    os << '\n';
  }
}

void write_case_table(std::ostream& os, const CaseTable& table) {
  os << "step_us";
  for (auto kind : kAllKinds) os << ',' << to_string(kind);
  os << '\n';
  for (std::size_t row = 0; row < table.step_us.size(); ++row) {
    os << number(table.step_us[row]);
    for (double cell : table.percent[row]) os << ',' << fixed(cell, 4);
    os << '\n';
  }
}

void write_gain_curve(std::ostream& os, std::span<const GainRow> rows) {
  os << "lambda_h";
  for (auto kind : kAllKinds) os << ",gain_" << to_string(kind);
  os << ",exact\n";
  for (const auto& r : rows) {
    os << number(r.lambda_h);
    for (double g : r.gains) os << ',' << number(g);
    os << ',' << number(r.exact) << '\n';
  }
}

void write_root_reports(std::ostream& os, std::span<const RootReport> reports) {
  os << "location_re,location_im,multiplicity,order,scaled_magnitude,threshold,"
        "expect,pass\n";
  for (const auto& r : reports) {
    auto row = [&](int order, double mag, const char* expect, bool ok) {
      os << number(r.location.real()) << ',' << number(r.location.imag()) << ','
         << r.claimed_multiplicity << ',' << order << ',' << number(mag) << ','
         << number(r.threshold) << ',' << expect << ',' << (ok ? 1 : 0) << '\n';
    };
    for (std::size_t k = 0; k < r.derivative_magnitudes.size(); ++k) {
      row(static_cast<int>(k), r.derivative_magnitudes[k], "zero", r.order_pass[k]);
    }
    row(r.claimed_multiplicity, r.next_order_magnitude, "nonzero",
        r.next_order_nonzero);
  }
}

}  // namespace freqint::csv
