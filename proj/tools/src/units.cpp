#include "ndphoton/cli/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ndphoton/error.hpp"

namespace ndphoton::cli {
namespace {

struct UnitFactor {
  std::string_view name;
  Dimension dim;
  double factor;
  bool divide;  // value / factor keeps sub-unit conversions correctly rounded
};

constexpr UnitFactor kUnits[] = {
    {"nm", Dimension::Length, 1e3, true},
    {"um", Dimension::Length, 1.0, false},
    {"\xC2\xB5m", Dimension::Length, 1.0, false},
    {"mm", Dimension::Length, 1e3, false},
    {"cm", Dimension::Length, 1e4, false},
    {"m", Dimension::Length, 1e6, false},
    {"rad/um", Dimension::Wavenumber, 1.0, false},
    {"1/um", Dimension::Wavenumber, 1.0, false},
    {"rad/\xC2\xB5m", Dimension::Wavenumber, 1.0, false},
    {"1/\xC2\xB5m", Dimension::Wavenumber, 1.0, false},
    {"rad/mm", Dimension::Wavenumber, 1e3, true},
    {"1/mm", Dimension::Wavenumber, 1e3, true},
    {"rad/m", Dimension::Wavenumber, 1e6, true},
    {"1/m", Dimension::Wavenumber, 1e6, true},
    {"rad", Dimension::Angle, 1.0, false},
    {"mrad", Dimension::Angle, 1e3, true},
    {"deg", Dimension::Angle, 180.0, true},
};

double parse_number(std::string_view s, std::string_view whole) {
  s = trim(s);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(whole) + "' is not a number");
  }
  return v;
}

bool is_number(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

// Splits "12.5 cm" (or "12.5cm") into number text and unit text.
std::pair<std::string_view, std::string_view> split_unit(std::string_view s) {
  s = trim(s);
  const std::size_t space = s.find_last_of(" \t");
  if (space != std::string_view::npos) {
    const std::string_view last = s.substr(space + 1);
    if (!is_number(last) && last.back() != ',') return {trim(s.substr(0, space)), last};
    return {s, {}};
  }
  std::size_t i = s.size();
  while (i > 0) {
    const auto c = static_cast<unsigned char>(s[i - 1]);
    if (!(std::isalpha(c) || c == '/' || c >= 0x80)) break;
    --i;
  }
  return {s.substr(0, i), s.substr(i)};
}

double convert(double v, std::string_view unit, Dimension dim, std::string_view whole) {
  if (dim == Dimension::None) {
    if (!unit.empty()) {
      throw ConfigError("'" + std::string(whole) + "' is dimensionless and takes no unit");
    }
    return v;
  }
  if (unit.empty()) {
    throw ConfigError("'" + std::string(whole) + "' needs a " + to_string(dim) + " unit");
  }
  for (const auto& u : kUnits) {
    if (u.name != unit) continue;
    if (u.dim != dim) {
      throw ConfigError("unit '" + std::string(unit) + "' is not a " + to_string(dim) + " unit");
    }
    if (u.name == "deg") return v / 180.0 * std::numbers::pi;
    return u.divide ? v / u.factor : v * u.factor;
  }
  throw ConfigError("unknown unit '" + std::string(unit) + "' in '" + std::string(whole) + "'");
}

}  // namespace

const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::None: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Wavenumber: return "wavenumber";
    case Dimension::Angle: return "angle";
  }
  return "?";
}

const char* canonical_unit(Dimension d) {
  switch (d) {
    case Dimension::None: return "";
    case Dimension::Length: return "um";
    case Dimension::Wavenumber: return "rad/um";
    case Dimension::Angle: return "rad";
  }
  return "";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_quantity(std::string_view text, Dimension dim) {
  const auto [num, unit] = split_unit(text);
  return convert(parse_number(num, text), unit, dim, text);
}

std::vector<double> parse_quantity_list(std::string_view text, Dimension dim) {
  const auto [nums, unit] = split_unit(text);
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = nums.find(',', start);
    const std::string_view item =
        nums.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(convert(parse_number(item, text), unit, dim, text));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_quantity(double value, Dimension dim) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s = buf;
  if (dim != Dimension::None) s += std::string(" ") + canonical_unit(dim);
  return s;
}

std::string format_quantity_list(const std::vector<double>& values, Dimension dim) {
  std::string s;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i > 0) s += ", ";
    s += buf;
  }
  if (dim != Dimension::None) s += std::string(" ") + canonical_unit(dim);
  return s;
}

}  // namespace ndphoton::cli
