#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ndphoton/field.hpp"

namespace ndphoton {

/// .cfld container: a 64-byte header
///   [0,4)   magic "CFLD"
///   [4,8)   u32 version (1)
///   [8,16)  u64 n
///   [16,24) f64 dx (um, position-domain pitch of the grid)
///   [24,28) u32 domain (0 position, 1 momentum)
///   [28,32) u32 kind (0 complex amplitude, 1 intensity stored as re with im = 0)
///   [32,64) zero
/// followed by n*n little-endian f64 (re, im) pairs, row-major.
enum class CfldKind : std::uint32_t { Amplitude = 0, Intensity = 1 };

struct CfldContents {
  GridSpec grid;
  Domain domain;
  CfldKind kind;
  std::vector<cplx> values;

  ComplexField as_field() const;
  /// Real parts for intensity files, |v|^2 for amplitude files.
  RealMap as_map() const;
};

void write_cfld(const std::filesystem::path& path, const ComplexField& field);
/// The map must cover a full grid (map.grid set).
void write_cfld(const std::filesystem::path& path, const RealMap& map);
/// Throws IoError on a missing, truncated or malformed file.
CfldContents read_cfld(const std::filesystem::path& path);

/// Matrix CSV: a header row of x coordinates, then one row per y with the
/// y coordinate first. Coordinates carry their unit in the corner cell.
void write_map_csv(const std::filesystem::path& path, const RealMap& map);

/// 8-bit binary PGM, max-normalized, highest y row at the top.
void write_pgm(const std::filesystem::path& path, const RealMap& map);

}  // namespace ndphoton
