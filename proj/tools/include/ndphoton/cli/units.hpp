#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ndphoton::cli {

enum class Dimension { None, Length, Wavenumber, Angle };

const char* to_string(Dimension d);

/// Canonical unit suffix: "um", "rad/um", "rad" or "".
const char* canonical_unit(Dimension d);

/// Parses "<number> <unit>" into canonical units (um, rad/um, rad).
/// Accepted length units: nm, um, µm, mm, cm, m. Wavenumbers: rad/um,
/// 1/um, rad/mm, 1/mm, rad/m, 1/m. Angles: deg, rad, mrad. Dimensionless
/// quantities must carry no unit. Throws ConfigError with a readable reason.
double parse_quantity(std::string_view text, Dimension dim);

/// Comma-separated numbers sharing one trailing unit, e.g. "0, 2.5, 5 cm".
std::vector<double> parse_quantity_list(std::string_view text, Dimension dim);

/// Round-trip exact text in canonical units ("%.17g um").
std::string format_quantity(double value, Dimension dim);
std::string format_quantity_list(const std::vector<double>& values, Dimension dim);

std::string_view trim(std::string_view s);

}  // namespace ndphoton::cli
