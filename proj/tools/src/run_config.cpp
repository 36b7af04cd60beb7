#include "ndphoton/cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ndphoton/cli/units.hpp"
#include "ndphoton/error.hpp"

namespace ndphoton::cli {
namespace {

[[noreturn]] void fail(const Origin& at, const std::string& what) {
  throw ConfigError(at.describe() + ": " + what);
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
  return s;
}

// Typed access to one list of entries; rejects keys outside `allowed`.
class Reader {
public:
  Reader(const std::vector<Entry>& entries, std::string where, const Origin& origin,
         std::vector<std::string> allowed)
      : entries_(entries), where_(std::move(where)), origin_(origin), allowed_(std::move(allowed)) {
    for (const auto& e : entries_) {
      if (std::find(allowed_.begin(), allowed_.end(), e.key) == allowed_.end()) {
        fail(e.origin, "unknown key '" + e.key + "' in " + where_ + " (expected one of: " +
                           join(allowed_) + ")");
      }
    }
  }

  const Entry* find(const std::string& key) const {
    for (const auto& e : entries_) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  const Entry& require(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) fail(origin_, where_ + " needs '" + key + "'");
    return *e;
  }

  template <class F>
  auto convert(const Entry& e, F&& f) const {
    try {
      return f(e.value);
    } catch (const ConfigError& err) {
      fail(e.origin, where_ + " " + e.key + ": " + err.what());
    }
  }

  double quantity(const std::string& key, Dimension dim, double fallback) const {
    const Entry* e = find(key);
    return e ? quantity(*e, dim) : fallback;
  }
  double quantity(const Entry& e, Dimension dim) const {
    return convert(e, [&](const std::string& v) { return parse_quantity(v, dim); });
  }
  std::optional<double> optional_quantity(const std::string& key, Dimension dim) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return quantity(*e, dim);
  }
  std::vector<double> list(const std::string& key, Dimension dim,
                           std::vector<double> fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    return convert(*e, [&](const std::string& v) { return parse_quantity_list(v, dim); });
  }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    const double v = quantity(*e, Dimension::None);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
      fail(e->origin, where_ + " " + key + ": expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  }
  std::string word(const std::string& key, const std::string& fallback,
                   const std::vector<std::string>& choices) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (!choices.empty() && std::find(choices.begin(), choices.end(), e->value) == choices.end()) {
      fail(e->origin, where_ + " " + key + ": '" + e->value + "' is not one of " + join(choices));
    }
    return e->value;
  }
  bool is_auto(const std::string& key) const {
    const Entry* e = find(key);
    return e != nullptr && e->value == "auto";
  }
  const Origin& origin() const { return origin_; }

private:
  const std::vector<Entry>& entries_;
  std::string where_;
  Origin origin_;
  std::vector<std::string> allowed_;
};

const std::vector<Entry> kNoEntries;

Reader section_reader(const RawConfig& raw, const std::string& name,
                      std::vector<std::string> allowed) {
  const auto it = raw.sections.find(name);
  if (it == raw.sections.end()) {
    return Reader(kNoEntries, "[" + name + "]", Origin{"defaults", 0}, std::move(allowed));
  }
  return Reader(it->second.entries, "[" + name + "]", it->second.origin, std::move(allowed));
}

void positive(const Reader& r, const std::string& key, double v) {
  if (!(v > 0.0)) {
    const Entry* e = r.find(key);
    fail(e ? e->origin : r.origin(), key + " must be > 0");
  }
}

Stage parse_stage(const TrainRecord& rec, std::size_t index) {
  const std::string kind = rec.fields.front().value;
  const std::string where = "[train] element " + std::to_string(index) + " (" + kind + ")";
  std::vector<Entry> fields(rec.fields.begin() + 1, rec.fields.end());
  auto reader = [&](std::vector<std::string> allowed) {
    allowed.push_back("tap");
    return Reader(fields, where, rec.origin, std::move(allowed));
  };
  Stage stage;
  std::string tap;
  if (kind == "free_space") {
    const Reader r = reader({"z", "model"});
    const std::string model = r.word("model", "paraxial", {"paraxial", "exact"});
    stage.element = FreeSpace{r.quantity(r.require("z"), Dimension::Length),
                              model == "exact" ? PropagationModel::Exact
                                               : PropagationModel::Paraxial};
    if (const Entry* t = r.find("tap")) tap = t->value;
  } else if (kind == "thin_lens") {
    const Reader r = reader({"f", "radius"});
    ThinLens lens;
    lens.f = r.quantity(r.require("f"), Dimension::Length);
    lens.radius = r.quantity("radius", Dimension::Length, lens.radius);
    stage.element = lens;
    if (const Entry* t = r.find("tap")) tap = t->value;
  } else if (kind == "aperture") {
    const Reader r = reader({"radius"});
    stage.element = CircularAperture{r.quantity(r.require("radius"), Dimension::Length)};
    if (const Entry* t = r.find("tap")) tap = t->value;
  } else if (kind == "magnifier") {
    const Reader r = reader({"m"});
    stage.element = IdealMagnifier{r.quantity(r.require("m"), Dimension::None)};
    if (const Entry* t = r.find("tap")) tap = t->value;
  } else if (kind == "fourier_system") {
    const Reader r = reader({"f"});
    stage.element = FourierSystem{r.quantity(r.require("f"), Dimension::Length)};
    if (const Entry* t = r.find("tap")) tap = t->value;
  } else if (kind == "axicon") {
    const Reader r = reader({"apex_angle", "base_angle", "index"});
    const double index = r.quantity("index", Dimension::None, 1.46);
    if (r.has("apex_angle") == r.has("base_angle")) {
      fail(rec.origin, where + " needs exactly one of apex_angle, base_angle");
    }
    stage.element = Axicon{
        r.has("apex_angle")
            ? AxiconSpec{r.quantity(r.require("apex_angle"), Dimension::Angle), index}
            : AxiconSpec::from_base_angle(r.quantity(r.require("base_angle"), Dimension::Angle),
                                          index)};
    if (const Entry* t = r.find("tap")) tap = t->value;
  } else {
    fail(rec.origin, "unknown train element '" + kind +
                         "' (expected free_space, thin_lens, aperture, magnifier, "
                         "fourier_system or axicon)");
  }
  stage.tap = tap;
  return stage;
}

std::string stage_text(const Stage& s) {
  std::string out = std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return "element = free_space; z = " + format_quantity(e.z, Dimension::Length) +
                 "; model = " + (e.model == PropagationModel::Exact ? "exact" : "paraxial");
        } else if constexpr (std::is_same_v<T, ThinLens>) {
          std::string t = "element = thin_lens; f = " + format_quantity(e.f, Dimension::Length);
          if (std::isfinite(e.radius)) t += "; radius = " + format_quantity(e.radius, Dimension::Length);
          return t;
        } else if constexpr (std::is_same_v<T, CircularAperture>) {
          return "element = aperture; radius = " + format_quantity(e.radius, Dimension::Length);
        } else if constexpr (std::is_same_v<T, IdealMagnifier>) {
          return "element = magnifier; m = " + format_quantity(e.m, Dimension::None);
        } else if constexpr (std::is_same_v<T, FourierSystem>) {
          return "element = fourier_system; f = " + format_quantity(e.f, Dimension::Length);
        } else {
          return "element = axicon; apex_angle = " +
                 format_quantity(e.spec.apex_angle, Dimension::Angle) +
                 "; index = " + format_quantity(e.spec.refractive_index, Dimension::None);
        }
      },
      s.element);
  if (!s.tap.empty()) out += "; tap = " + s.tap;
  return out;
}

std::vector<double> default_sheet_z() {
  std::vector<double> z;
  for (int i = 0; i <= 10; ++i) z.push_back(25.0 * i * 1e4);
  return z;
}

std::vector<double> default_scan_z() {
  return {0.0, 2.5e4, 5e4, 10e4, 15e4, 20e4, 25e4, 30e4, 35e4, 40e4};
}

const char* kLabDefaults = R"(# Geometry and beam parameters of the Bessel-Gauss SPDC experiment.
[grid]
n = 1024
dx = 12 um

[pump]
mode = bg
wavelength = 406 nm
w0 = 1.85 mm
kt = 0.046 rad/um
sheet_z = 0, 25, 50, 75, 100, 125, 150, 175, 200, 225, 250 cm
sheet_half_width = 600 um

# signal arm: crystal -> f-f (FP1) -> f-f (FP2)
[train]
element = fourier_system; f = 10 cm; tap = FP1
element = fourier_system; f = 30 cm; tap = FP2

[herald]
kx = auto
ky = 0 rad/um
fiber_diameter = 200 um
focal_length = 10 cm
n_radial = 6
n_azimuthal = 16
sampling = polar

[scan]
fp1_fiber_diameter = 200 um
fp2_fiber_diameter = 50 um
window_half_width = 0.08 rad/um
z = 0, 2.5, 5, 10, 15, 20, 25, 30, 35, 40 cm
step = auto
half_width = auto
count_rate = 0
singles_threshold = 1e-4
singles_n_radial = 24
singles_n_azimuthal = 48
route = auto
fwhm_tolerance = 0.2

[output]
dir = ndphoton_run
formats = csv, pgm, cfld
)";

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::PumpSim: return "pump-sim";
    case Scenario::SpdcSim: return "spdc-sim";
    case Scenario::Sweep: return "sweep";
  }
  return "?";
}

AxiconSpec PumpConfig::axicon() const {
  if (axicon_apex_angle) return AxiconSpec{*axicon_apex_angle, axicon_index};
  if (axicon_base_angle) return AxiconSpec::from_base_angle(*axicon_base_angle, axicon_index);
  // "2 degree" axicon read as the base angle; the apex reading is not paraxial
  return AxiconSpec::from_base_angle(2.0 * std::numbers::pi / 180.0, axicon_index);
}

double RunConfig::signal_wavelength() const {
  return pump.signal_wavelength ? *pump.signal_wavelength : 2.0 * pump.wavelength;
}

double RunConfig::idler_wavelength() const {
  return pump.idler_wavelength ? *pump.idler_wavelength : 2.0 * pump.wavelength;
}

OpticalTrain RunConfig::signal_train() const {
  if (!train) throw ConfigError("this scenario needs a [train] block");
  return OpticalTrain{signal_wavelength(), *train};
}

RunConfig resolve(const RawConfig& raw, Scenario scenario) {
  std::vector<std::string> required = {"grid", "pump"};
  if (scenario != Scenario::PumpSim) {
    required.insert(required.end(), {"train", "herald"});
  }
  if (scenario == Scenario::Sweep) required.push_back("scan");
  for (const auto& s : required) {
    if (!raw.has(s)) {
      throw ConfigError(std::string(to_string(scenario)) + " needs a [" + s + "] block");
    }
  }

  RunConfig cfg;
  {
    const Reader r = section_reader(raw, "grid", {"n", "dx"});
    cfg.grid.n = r.count("n", cfg.grid.n);
    cfg.grid.dx = r.quantity("dx", Dimension::Length, cfg.grid.dx);
    try {
      make_grid(cfg.grid.n, cfg.grid.dx);
    } catch (const Error& e) {
      const std::size_t n = cfg.grid.n;
      const Entry* bad = r.find(n >= 16 && (n & (n - 1)) == 0 ? "dx" : "n");
      fail(bad ? bad->origin : r.origin(), std::string("[grid] ") + e.what());
    }
  }
  {
    const Reader r = section_reader(
        raw, "pump",
        {"mode", "wavelength", "w0", "kt", "input_waist", "axicon_apex_angle", "axicon_base_angle",
         "axicon_index", "magnification", "signal_wavelength", "idler_wavelength", "sheet_z",
         "sheet_half_width"});
    PumpConfig& p = cfg.pump;
    p.mode = r.word("mode", "bg", {"bg", "axicon-chain"}) == "bg" ? PumpMode::BesselGauss
                                                                 : PumpMode::AxiconChain;
    p.wavelength = r.quantity("wavelength", Dimension::Length, p.wavelength);
    p.w0 = r.quantity("w0", Dimension::Length, p.w0);
    p.kt = r.quantity("kt", Dimension::Wavenumber, p.kt);
    p.input_waist = r.quantity("input_waist", Dimension::Length, p.input_waist);
    p.axicon_apex_angle = r.optional_quantity("axicon_apex_angle", Dimension::Angle);
    p.axicon_base_angle = r.optional_quantity("axicon_base_angle", Dimension::Angle);
    if (p.axicon_apex_angle && p.axicon_base_angle) {
      fail(r.find("axicon_base_angle")->origin,
           "[pump] give axicon_apex_angle or axicon_base_angle, not both");
    }
    p.axicon_index = r.quantity("axicon_index", Dimension::None, p.axicon_index);
    p.magnification = r.quantity("magnification", Dimension::None, p.magnification);
    p.signal_wavelength = r.optional_quantity("signal_wavelength", Dimension::Length);
    p.idler_wavelength = r.optional_quantity("idler_wavelength", Dimension::Length);
    if (p.signal_wavelength.has_value() != p.idler_wavelength.has_value()) {
      fail(r.origin(), "[pump] signal_wavelength and idler_wavelength go together");
    }
    p.sheet_z = r.list("sheet_z", Dimension::Length, default_sheet_z());
    p.sheet_half_width = r.quantity("sheet_half_width", Dimension::Length, p.sheet_half_width);
    positive(r, "wavelength", p.wavelength);
    positive(r, "w0", p.w0);
    positive(r, "input_waist", p.input_waist);
    positive(r, "sheet_half_width", p.sheet_half_width);
    if (!(p.kt >= 0.0)) fail(r.origin(), "[pump] kt must be >= 0");
    if (p.magnification == 0.0) fail(r.origin(), "[pump] magnification must be != 0");
    try {
      p.axicon().validate();
    } catch (const Error& e) {
      fail(r.origin(), std::string("[pump] ") + e.what());
    }
  }
  if (raw.train) {
    std::vector<Stage> stages;
    for (std::size_t i = 0; i < raw.train->size(); ++i) {
      stages.push_back(parse_stage((*raw.train)[i], i));
    }
    if (stages.empty()) throw ConfigError("[train] block has no elements");
    cfg.train = std::move(stages);
    try {
      cfg.signal_train().validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[train] ") + e.what());
    }
  }
  {
    const Reader r = section_reader(
        raw, "herald",
        {"kx", "ky", "fiber_diameter", "focal_length", "n_radial", "n_azimuthal", "sampling"});
    HeraldConfig& h = cfg.herald;
    if (!r.is_auto("kx")) h.kx = r.optional_quantity("kx", Dimension::Wavenumber);
    h.ky = r.quantity("ky", Dimension::Wavenumber, h.ky);
    h.fiber_diameter = r.quantity("fiber_diameter", Dimension::Length, h.fiber_diameter);
    h.focal_length = r.quantity("focal_length", Dimension::Length, h.focal_length);
    h.n_radial = r.count("n_radial", h.n_radial);
    h.n_azimuthal = r.count("n_azimuthal", h.n_azimuthal);
    h.sampling = r.word("sampling", "polar", {"polar", "exact_disk"}) == "polar"
                     ? HeraldSampling::Polar
                     : HeraldSampling::ExactDisk;
    if (!(h.fiber_diameter >= 0.0)) fail(r.origin(), "[herald] fiber_diameter must be >= 0");
    if (h.focal_length == 0.0) fail(r.origin(), "[herald] focal_length must be != 0");
    if (h.n_radial == 0 || h.n_azimuthal == 0) {
      const Entry* e = r.find(h.n_radial == 0 ? "n_radial" : "n_azimuthal");
      fail(e ? e->origin : r.origin(), "[herald] quadrature node counts must be >= 1");
    }
  }
  {
    const Reader r = section_reader(
        raw, "scan",
        {"fp1_fiber_diameter", "fp2_fiber_diameter", "window_half_width", "z", "step",
         "half_width", "count_rate", "singles_threshold", "singles_n_radial",
         "singles_n_azimuthal", "route", "fwhm_tolerance"});
    ScanConfig& s = cfg.scan;
    s.fp1_fiber_diameter = r.quantity("fp1_fiber_diameter", Dimension::Length, s.fp1_fiber_diameter);
    s.fp2_fiber_diameter = r.quantity("fp2_fiber_diameter", Dimension::Length, s.fp2_fiber_diameter);
    s.window_half_width = r.quantity("window_half_width", Dimension::Wavenumber, s.window_half_width);
    s.z = r.list("z", Dimension::Length, default_scan_z());
    if (!r.is_auto("step")) s.step = r.quantity("step", Dimension::Length, s.step);
    if (!r.is_auto("half_width")) s.half_width = r.quantity("half_width", Dimension::Length, s.half_width);
    s.count_rate = r.quantity("count_rate", Dimension::None, s.count_rate);
    s.singles_threshold = r.quantity("singles_threshold", Dimension::None, s.singles_threshold);
    s.singles_n_radial = r.count("singles_n_radial", s.singles_n_radial);
    s.singles_n_azimuthal = r.count("singles_n_azimuthal", s.singles_n_azimuthal);
    const std::string route = r.word("route", "auto", {"auto", "literal", "covariant"});
    s.route = route == "auto"      ? MixtureRoute::Auto
              : route == "literal" ? MixtureRoute::Literal
                                   : MixtureRoute::Covariant;
    s.fwhm_tolerance = r.quantity("fwhm_tolerance", Dimension::None, s.fwhm_tolerance);
    if (!(s.fp1_fiber_diameter >= 0.0) || !(s.fp2_fiber_diameter >= 0.0)) {
      fail(r.origin(), "[scan] fiber diameters must be >= 0");
    }
    positive(r, "window_half_width", s.window_half_width);
    if (!(s.step >= 0.0) || !(s.half_width >= 0.0) || !(s.count_rate >= 0.0)) {
      fail(r.origin(), "[scan] step, half_width and count_rate must be >= 0");
    }
    if (!(s.singles_threshold > 0.0 && s.singles_threshold < 1.0)) {
      fail(r.origin(), "[scan] singles_threshold must lie in (0, 1)");
    }
    if (s.singles_n_radial == 0 || s.singles_n_azimuthal == 0) {
      fail(r.origin(), "[scan] singles quadrature node counts must be >= 1");
    }
    for (std::size_t i = 1; i < s.z.size(); ++i) {
      if (!(s.z[i] > s.z[i - 1])) fail(r.find("z")->origin, "[scan] z must be strictly increasing");
    }
    positive(r, "fwhm_tolerance", s.fwhm_tolerance);
  }
  {
    const Reader r = section_reader(raw, "output", {"dir", "formats"});
    cfg.output.dir = r.word("dir", cfg.output.dir, {});
    if (const Entry* e = r.find("formats")) {
      cfg.output.csv = cfg.output.pgm = cfg.output.cfld = false;
      std::stringstream ss(e->value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::string f(trim(item));
        if (f == "csv") cfg.output.csv = true;
        else if (f == "pgm") cfg.output.pgm = true;
        else if (f == "cfld") cfg.output.cfld = true;
        else fail(e->origin, "[output] formats: unknown format '" + f + "' (csv, pgm, cfld)");
      }
    }
  }
  return cfg;
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream o;
  auto q = [](double v, Dimension d) { return format_quantity(v, d); };
  o << "[grid]\n"
    << "n = " << cfg.grid.n << "\n"
    << "dx = " << q(cfg.grid.dx, Dimension::Length) << "\n\n";

  const PumpConfig& p = cfg.pump;
  o << "[pump]\n"
    << "mode = " << (p.mode == PumpMode::BesselGauss ? "bg" : "axicon-chain") << "\n"
    << "wavelength = " << q(p.wavelength, Dimension::Length) << "\n"
    << "w0 = " << q(p.w0, Dimension::Length) << "\n"
    << "kt = " << q(p.kt, Dimension::Wavenumber) << "\n"
    << "input_waist = " << q(p.input_waist, Dimension::Length) << "\n"
    << "axicon_apex_angle = " << q(p.axicon().apex_angle, Dimension::Angle) << "\n"
    << "axicon_index = " << q(p.axicon_index, Dimension::None) << "\n"
    << "magnification = " << q(p.magnification, Dimension::None) << "\n";
  if (p.signal_wavelength) {
    o << "signal_wavelength = " << q(*p.signal_wavelength, Dimension::Length) << "\n"
      << "idler_wavelength = " << q(*p.idler_wavelength, Dimension::Length) << "\n";
  }
  o << "sheet_z = " << format_quantity_list(p.sheet_z, Dimension::Length) << "\n"
    << "sheet_half_width = " << q(p.sheet_half_width, Dimension::Length) << "\n\n";

  if (cfg.train) {
    o << "[train]\n";
    for (const auto& s : *cfg.train) o << stage_text(s) << "\n";
    o << "\n";
  }

  const HeraldConfig& h = cfg.herald;
  o << "[herald]\n"
    << "kx = " << (h.kx ? q(*h.kx, Dimension::Wavenumber) : std::string("auto")) << "\n"
    << "ky = " << q(h.ky, Dimension::Wavenumber) << "\n"
    << "fiber_diameter = " << q(h.fiber_diameter, Dimension::Length) << "\n"
    << "focal_length = " << q(h.focal_length, Dimension::Length) << "\n"
    << "n_radial = " << h.n_radial << "\n"
    << "n_azimuthal = " << h.n_azimuthal << "\n"
    << "sampling = " << to_string(h.sampling) << "\n\n";

  const ScanConfig& s = cfg.scan;
  o << "[scan]\n"
    << "fp1_fiber_diameter = " << q(s.fp1_fiber_diameter, Dimension::Length) << "\n"
    << "fp2_fiber_diameter = " << q(s.fp2_fiber_diameter, Dimension::Length) << "\n"
    << "window_half_width = " << q(s.window_half_width, Dimension::Wavenumber) << "\n"
    << "z = " << format_quantity_list(s.z, Dimension::Length) << "\n"
    << "step = " << (s.step > 0.0 ? q(s.step, Dimension::Length) : std::string("auto")) << "\n"
    << "half_width = "
    << (s.half_width > 0.0 ? q(s.half_width, Dimension::Length) : std::string("auto")) << "\n"
    << "count_rate = " << q(s.count_rate, Dimension::None) << "\n"
    << "singles_threshold = " << q(s.singles_threshold, Dimension::None) << "\n"
    << "singles_n_radial = " << s.singles_n_radial << "\n"
    << "singles_n_azimuthal = " << s.singles_n_azimuthal << "\n"
    << "route = " << to_string(s.route) << "\n"
    << "fwhm_tolerance = " << q(s.fwhm_tolerance, Dimension::None) << "\n\n";

  std::vector<std::string> formats;
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.pgm) formats.push_back("pgm");
  if (cfg.output.cfld) formats.push_back("cfld");
  o << "[output]\n"
    << "dir = " << cfg.output.dir << "\n"
    << "formats = " << join(formats) << "\n";
  return o.str();
}

std::vector<std::string> preset_names() { return {"paper-defaults"}; }

std::string preset_text(const std::string& name) {
  if (name == "paper-defaults") return kLabDefaults;
  throw ConfigError("unknown preset '" + name + "' (available: " + join(preset_names()) + ")");
}

}  // namespace ndphoton::cli
