#include "ndphoton/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "ndphoton/error.hpp"

namespace ndphoton {
namespace {

constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 64;

template <class T>
void put_le(unsigned char* dst, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  std::memcpy(dst, bytes, sizeof(T));
}

template <class T>
T get_le(const unsigned char* src) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, src, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void write_raw(const std::filesystem::path& path, const GridSpec& grid, Domain domain,
               CfldKind kind, std::size_t count, auto&& sample) {
  std::vector<unsigned char> buf(kHeaderBytes + count * 16, 0);
  std::memcpy(buf.data(), "CFLD", 4);
  put_le<std::uint32_t>(buf.data() + 4, kVersion);
  put_le<std::uint64_t>(buf.data() + 8, grid.n());
  put_le<double>(buf.data() + 16, grid.dx());
  put_le<std::uint32_t>(buf.data() + 24, domain == Domain::Position ? 0u : 1u);
  put_le<std::uint32_t>(buf.data() + 28, static_cast<std::uint32_t>(kind));
  unsigned char* p = buf.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += 16) {
    const cplx v = sample(i);
    put_le<double>(p, v.real());
    put_le<double>(p + 8, v.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::FILE* open_text(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

ComplexField CfldContents::as_field() const { return ComplexField(grid, domain, values); }

RealMap CfldContents::as_map() const {
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = kind == CfldKind::Intensity ? values[i].real() : std::norm(values[i]);
  }
  return RealMap::on_grid(grid, domain, std::move(v));
}

void write_cfld(const std::filesystem::path& path, const ComplexField& field) {
  const auto v = field.values();
  write_raw(path, field.grid(), field.domain(), CfldKind::Amplitude, v.size(),
            [&](std::size_t i) { return v[i]; });
}

void write_cfld(const std::filesystem::path& path, const RealMap& map) {
  if (!map.grid) throw IoError("only full-grid maps can be stored as .cfld");
  write_raw(path, *map.grid, map.domain, CfldKind::Intensity, map.values.size(),
            [&](std::size_t i) { return cplx{map.values[i], 0.0}; });
}

CfldContents read_cfld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), "CFLD", 4) != 0) {
    throw IoError(path.string() + ": not a CFLD container");
  }
  if (get_le<std::uint32_t>(buf.data() + 4) != kVersion) {
    throw IoError(path.string() + ": unsupported CFLD version");
  }
  const auto n = get_le<std::uint64_t>(buf.data() + 8);
  const double dx = get_le<double>(buf.data() + 16);
  const auto dom = get_le<std::uint32_t>(buf.data() + 24);
  const auto kind = get_le<std::uint32_t>(buf.data() + 28);
  if (dom > 1 || kind > 1 || n > (1u << 16)) throw IoError(path.string() + ": corrupt header");
  GridSpec grid = [&] {
    try {
      return GridSpec::make(n, dx);
    } catch (const Error& e) {
      throw IoError(path.string() + ": corrupt header (" + e.what() + ")");
    }
  }();
  const std::size_t count = grid.size();
  if (buf.size() != kHeaderBytes + count * 16) {
    throw IoError(path.string() + ": truncated or oversized body (" +
                  std::to_string(buf.size()) + " bytes, expected " +
                  std::to_string(kHeaderBytes + count * 16) + ")");
  }
  std::vector<cplx> values(count);
  const unsigned char* p = buf.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += 16) {
    values[i] = {get_le<double>(p), get_le<double>(p + 8)};
  }
  return {grid, dom == 0 ? Domain::Position : Domain::Momentum, static_cast<CfldKind>(kind),
          std::move(values)};
}

void write_map_csv(const std::filesystem::path& path, const RealMap& map) {
  std::FILE* f = open_text(path);
  const char* unit = map.domain == Domain::Position ? "um" : "rad/um";
  std::fprintf(f, "y_%s\\x_%s", unit, unit);
  for (std::size_t c = 0; c < map.nx; ++c) std::fprintf(f, ",%.17g", map.x(c));
  std::fputc('\n', f);
  for (std::size_t r = 0; r < map.ny; ++r) {
    std::fprintf(f, "%.17g", map.y(r));
    for (std::size_t c = 0; c < map.nx; ++c) std::fprintf(f, ",%.17g", map.at(r, c));
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0) throw IoError("write failed for " + path.string());
}

void write_pgm(const std::filesystem::path& path, const RealMap& map) {
  const double peak = map.max();
  std::FILE* f = open_text(path);
  std::fprintf(f, "P5\n%zu %zu\n255\n", map.nx, map.ny);
  std::vector<unsigned char> row(map.nx);
  for (std::size_t r = map.ny; r-- > 0;) {
    for (std::size_t c = 0; c < map.nx; ++c) {
      const double v = peak > 0.0 ? std::clamp(map.at(r, c) / peak, 0.0, 1.0) : 0.0;
      row[c] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    std::fwrite(row.data(), 1, row.size(), f);
  }
  if (std::fclose(f) != 0) throw IoError("write failed for " + path.string());
}

}  // namespace ndphoton
