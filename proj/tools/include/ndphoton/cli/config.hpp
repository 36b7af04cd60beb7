#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ndphoton::cli {

/// Where a value came from, for diagnostics.
struct Origin {
  std::string source;  ///< file path, "preset <name>" or "--set"
  std::size_t line = 0;

  std::string describe() const;
};

struct Entry {
  std::string key;
  std::string value;
  Origin origin;
};

struct Section {
  std::vector<Entry> entries;
  Origin origin;

  const Entry* find(const std::string& key) const;
  void set(Entry e);
};

/// One [train] line: "element = kind; key = value; ...".
struct TrainRecord {
  std::vector<Entry> fields;
  Origin origin;
};

/// Untyped configuration: sections of key/value pairs plus the ordered
/// train records.
struct RawConfig {
  std::map<std::string, Section> sections;
  std::optional<std::vector<TrainRecord>> train;

  bool has(const std::string& section) const;

  /// Keys in `over` replace keys here; a [train] in `over` replaces the
  /// whole train.
  void merge(const RawConfig& over);
};

/// Parses the text format. Throws ConfigError with "source:line:" prefixes.
RawConfig parse_config(const std::string& text, const std::string& source);
RawConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value".
void apply_override(RawConfig& cfg, const std::string& assignment);

}  // namespace ndphoton::cli
