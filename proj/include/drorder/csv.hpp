#pragma once

#include <ostream>
#include <string>

#include "drorder/splitting.hpp"

namespace drorder {

/// %.17g, enough digits to round-trip a double.
std::string format_double(double v);

/// Header `n,x_1..x_d,shadow_1..shadow_d,residual`; the residual of row n
/// is ||T x_n - x_n||.
void write_orbit_csv(std::ostream& out, const Orbit& orbit);

/// Header `n,red_1..red_d,blue_1..blue_d,residual` for the orbits
/// red_m = T_{A,B}^m R_A x0 and blue_m = T_{B,A}^m x0; residual is
/// ||blue_m - R_A red_m||.
void write_compare_csv(std::ostream& out, const Orbit& red, const Orbit& blue,
                       const std::vector<double>& residuals);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace drorder
