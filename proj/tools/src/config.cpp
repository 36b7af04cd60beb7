#include "ndphoton/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "ndphoton/cli/units.hpp"
#include "ndphoton/error.hpp"

namespace ndphoton::cli {
namespace {

const char* const kSections[] = {"grid", "pump", "train", "herald", "scan", "output"};

bool known_section(const std::string& name) {
  for (const char* s : kSections) {
    if (name == s) return true;
  }
  return false;
}

[[noreturn]] void fail(const Origin& at, const std::string& what) {
  throw ConfigError(at.describe() + ": " + what);
}

Entry parse_assignment(std::string_view text, const Origin& at) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) fail(at, "expected 'key = value', got '" + std::string(text) + "'");
  const std::string key(trim(text.substr(0, eq)));
  const std::string value(trim(text.substr(eq + 1)));
  if (key.empty()) fail(at, "missing key before '='");
  if (value.empty()) fail(at, "missing value for '" + key + "'");
  return {key, value, at};
}

}  // namespace

std::string Origin::describe() const {
  return line > 0 ? source + ":" + std::to_string(line) : source;
}

const Entry* Section::find(const std::string& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void Section::set(Entry e) {
  for (auto& old : entries) {
    if (old.key == e.key) {
      old = std::move(e);
      return;
    }
  }
  entries.push_back(std::move(e));
}

bool RawConfig::has(const std::string& section) const {
  if (section == "train") return train.has_value();
  return sections.count(section) > 0;
}

void RawConfig::merge(const RawConfig& over) {
  for (const auto& [name, sec] : over.sections) {
    auto [it, inserted] = sections.try_emplace(name, Section{{}, sec.origin});
    for (const auto& e : sec.entries) it->second.set(e);
  }
  if (over.train) train = over.train;
}

RawConfig parse_config(const std::string& text, const std::string& source) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const Origin at{source, line_no};
    std::string_view line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(at, "malformed section header '" + std::string(line) + "'");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(current)) fail(at, "unknown section [" + current + "]");
      if (cfg.has(current)) fail(at, "duplicate section [" + current + "]");
      if (current == "train") {
        cfg.train.emplace();
      } else {
        cfg.sections[current] = Section{{}, at};
      }
      continue;
    }
    if (current.empty()) fail(at, "'" + std::string(line) + "' appears before any [section]");

    if (current == "train") {
      TrainRecord rec{{}, at};
      std::size_t start = 0;
      while (start <= line.size()) {
        const std::size_t semi = line.find(';', start);
        const std::string_view part = trim(line.substr(
            start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
        if (!part.empty()) {
          Entry e = parse_assignment(part, at);
          for (const auto& f : rec.fields) {
            if (f.key == e.key) fail(at, "duplicate field '" + e.key + "' in train element");
          }
          rec.fields.push_back(std::move(e));
        }
        if (semi == std::string_view::npos) break;
        start = semi + 1;
      }
      if (rec.fields.empty() || rec.fields.front().key != "element") {
        fail(at, "train lines must start with 'element = <kind>'");
      }
      cfg.train->push_back(std::move(rec));
      continue;
    }

    Entry e = parse_assignment(line, at);
    Section& sec = cfg.sections[current];
    if (sec.find(e.key) != nullptr) fail(at, "duplicate key '" + e.key + "' in [" + current + "]");
    sec.entries.push_back(std::move(e));
  }
  return cfg;
}

RawConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void apply_override(RawConfig& cfg, const std::string& assignment) {
  const Origin at{"--set " + assignment, 0};
  const Entry e = parse_assignment(assignment, at);
  const std::size_t dot = e.key.find('.');
  if (dot == std::string::npos) fail(at, "expected section.key=value");
  const std::string section = e.key.substr(0, dot);
  const std::string key = e.key.substr(dot + 1);
  if (section == "train") fail(at, "train elements can only be changed in a config file");
  if (!known_section(section)) fail(at, "unknown section [" + section + "]");
  auto [it, inserted] = cfg.sections.try_emplace(section, Section{{}, at});
  it->second.set(Entry{key, e.value, at});
}

}  // namespace ndphoton::cli
