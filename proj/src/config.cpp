#include "ffdpat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ffdpat/error.hpp"

namespace ffdpat {

std::string_view to_string(MaskType t) {
  switch (t) {
    case MaskType::full: return "full";
    case MaskType::strip: return "strip";
    case MaskType::file: return "file";
  }
  return "unknown";
}

MaskType parse_mask_type(std::string_view name) {
  for (auto t : {MaskType::full, MaskType::strip, MaskType::file}) {
    if (name == to_string(t)) return t;
  }
  throw ConfigError("unknown mask type '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(std::string_view key, std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(s) + "'");
}

template <typename Fn>
auto translate(std::string_view key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number(T ExperimentConfig::*m, std::string_view key) {
  return {[m, key](ExperimentConfig& c, std::string_view v) {
            if constexpr (std::is_floating_point_v<T>) {
              c.*m = parse_double(key, v);
            } else {
              c.*m = parse_int<T>(key, v);
            }
          },
          [m](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*m);
            } else {
              return std::to_string(c.*m);
            }
          }};
}

Field speed_number(double SoundSpeedSpec::*m, std::string_view key) {
  return {[m, key](ExperimentConfig& c, std::string_view v) {
            c.sound_speed.*m = parse_double(key, v);
          },
          [m](const ExperimentConfig& c) { return format_double(c.sound_speed.*m); }};
}

Field flag(bool ExperimentConfig::*m, std::string_view key) {
  return {[m, key](ExperimentConfig& c, std::string_view v) { c.*m = parse_bool(key, v); },
          [m](const ExperimentConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

/// Keys in serialisation order.
const std::vector<std::pair<std::string_view, Field>>& fields() {
  static const std::vector<std::pair<std::string_view, Field>> table = [] {
    std::vector<std::pair<std::string_view, Field>> t;
    auto add = [&t](std::string_view key, auto make) { t.emplace_back(key, make(key)); };
    using C = ExperimentConfig;
    add("source.n", [](auto k) { return number(&C::source_n, k); });
    add("source.half_width", [](auto k) { return number(&C::source_half_width, k); });
    add("solver.n", [](auto k) { return number(&C::solver_n, k); });
    add("solver.half_width", [](auto k) { return number(&C::solver_half_width, k); });
    add("phantom.kind", [](auto k) {
      return Field{[k](C& c, std::string_view v) {
                     c.phantom_kind = translate(k, [&] { return parse_phantom_kind(v); });
                   },
                   [](const C& c) { return std::string(to_string(c.phantom_kind)); }};
    });
    add("phantom.support_radius", [](auto k) { return number(&C::phantom_support_radius, k); });
    add("sound_speed.kind", [](auto k) {
      return Field{[k](C& c, std::string_view v) {
                     c.sound_speed.kind = translate(k, [&] { return parse_sound_speed_kind(v); });
                   },
                   [](const C& c) { return std::string(to_string(c.sound_speed.kind)); }};
    });
    add("sound_speed.c0", [](auto k) { return speed_number(&SoundSpeedSpec::c0, k); });
    add("sound_speed.amplitude", [](auto k) { return speed_number(&SoundSpeedSpec::amplitude, k); });
    add("sound_speed.ring_radius",
        [](auto k) { return speed_number(&SoundSpeedSpec::ring_radius, k); });
    add("sound_speed.ring_width",
        [](auto k) { return speed_number(&SoundSpeedSpec::ring_width, k); });
    add("wave.t_final", [](auto k) { return number(&C::t_final, k); });
    add("wave.cfl", [](auto k) { return number(&C::cfl, k); });
    add("wave.dt", [](auto k) { return number(&C::dt, k); });
    add("wave.c0_ref", [](auto k) { return number(&C::c0_ref, k); });
    add("detector.n_angles", [](auto k) { return number(&C::n_angles, k); });
    add("detector.half_width", [](auto k) { return number(&C::detector_half_width, k); });
    add("detector.d_offset", [](auto k) { return number(&C::d_offset, k); });
    add("mask.type", [](auto) {
      return Field{[](C& c, std::string_view v) { c.mask_type = parse_mask_type(v); },
                   [](const C& c) { return std::string(to_string(c.mask_type)); }};
    });
    add("mask.half_width", [](auto k) { return number(&C::mask_half_width, k); });
    add("mask.file", [](auto) {
      return Field{[](C& c, std::string_view v) { c.mask_file = std::string(v); },
                   [](const C& c) { return c.mask_file; }};
    });
    add("noise.std_fraction", [](auto k) { return number(&C::noise_std_fraction, k); });
    add("noise.seed", [](auto k) { return number(&C::noise_seed, k); });
    add("recon.algorithm", [](auto k) {
      return Field{[k](C& c, std::string_view v) {
                     c.algorithm = translate(k, [&] { return parse_algorithm(v); });
                   },
                   [](const C& c) { return std::string(to_string(c.algorithm)); }};
    });
    add("recon.step_size", [](auto k) { return number(&C::step_size, k); });
    add("recon.lambda", [](auto k) { return number(&C::lambda, k); });
    add("recon.max_iters", [](auto k) { return number(&C::max_iters, k); });
    add("recon.stop_tol", [](auto k) { return number(&C::stop_tol, k); });
    add("recon.line_search", [](auto k) { return flag(&C::line_search, k); });
    add("recon.assume_constant_speed", [](auto k) { return flag(&C::assume_constant_speed, k); });
    add("output.dir", [](auto) {
      return Field{[](C& c, std::string_view v) { c.output_dir = std::string(v); },
                   [](const C& c) { return c.output_dir; }};
    });
    return t;
  }();
  return table;
}

constexpr std::string_view kComponentPrefix = "phantom.component.";

PhantomComponent parse_component(std::string_view key, std::string_view v) {
  std::vector<double> nums;
  while (!v.empty()) {
    const auto sp = v.find_first_of(" \t");
    nums.push_back(parse_double(key, v.substr(0, sp)));
    if (sp == std::string_view::npos) break;
    v = trim(v.substr(sp));
  }
  if (nums.size() < 5 || nums.size() > 7) {
    throw ConfigError(std::string(key) +
                      ": expected 'cx cy size amplitude sigma [half_width [angle]]'");
  }
  nums.resize(7, 0.0);
  return {nums[0], nums[1], nums[2], nums[3], nums[4], nums[5], nums[6]};
}

}  // namespace

ExperimentConfig ExperimentConfig::preset(std::string_view scale) {
  ExperimentConfig c;
  c.phantom_components = lookalike_components();
  if (scale == "desk") return c;
  if (scale == "paper") {
    c.source_n = 201;
    c.solver_n = 601;
    c.n_angles = 1000;
    c.max_iters = 60;
    return c;
  }
  throw ConfigError("unknown scale '" + std::string(scale) + "' (expected paper or desk)");
}

ExperimentConfig ExperimentConfig::parse(std::string_view text, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  std::map<std::string, bool> seen;
  std::map<std::size_t, PhantomComponent> components;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (seen[key]) throw ConfigError(where + ": repeated key '" + key + "'");
    seen[key] = true;

    if (key.starts_with(kComponentPrefix)) {
      const auto idx = parse_int<std::size_t>(key, std::string_view(key).substr(kComponentPrefix.size()));
      components[idx] = parse_component(key, value);
      continue;
    }
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& f) { return f.first == key; });
    if (it == table.end()) throw ConfigError(where + ": unknown key '" + key + "'");
    it->second.set(c, value);
  }
  if (!components.empty()) {
    c.phantom_components.clear();
    std::size_t expect = 0;
    for (const auto& [idx, comp] : components) {
      if (idx != expect++) {
        throw ConfigError("phantom components must be numbered 0, 1, 2, ... without gaps");
      }
      c.phantom_components.push_back(comp);
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path,
                                        const ExperimentConfig& base) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), base);
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [key, field] : fields()) {
    out += std::string(key) + " = " + field.get(*this) + "\n";
    if (key == "phantom.support_radius") {
      for (std::size_t n = 0; n < phantom_components.size(); ++n) {
        const auto& p = phantom_components[n];
        out += std::string(kComponentPrefix) + std::to_string(n) + " =";
        for (double v : {p.cx, p.cy, p.size, p.amplitude, p.sigma, p.half_width, p.angle}) {
          out += " " + format_double(v);
        }
        out += "\n";
      }
    }
  }
  return out;
}

GridSpec ExperimentConfig::source_grid() const {
  return GridSpec::centered(source_n, source_half_width);
}

GridSpec ExperimentConfig::solver_grid() const {
  return GridSpec::centered(solver_n, solver_half_width);
}

SinogramSpec ExperimentConfig::sinogram_spec() const {
  const double d = d_offset > 0.0 ? d_offset : solver_grid().dx;
  return SinogramSpec::covering(n_angles, detector_half_width, d);
}

PhantomSpec ExperimentConfig::phantom_spec() const {
  return {phantom_kind, phantom_components, source_grid(), phantom_support_radius};
}

ReconConfig ExperimentConfig::recon_config() const {
  ReconConfig r;
  r.algorithm = algorithm;
  r.step_size = step_size;
  r.lambda = lambda;
  r.max_iters = max_iters;
  r.stop_tol = stop_tol;
  r.line_search = line_search;
  return r;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(source_n >= 2 && solver_n >= 2, "grids need at least 2 samples per axis");
  require(source_half_width > 0.0 && solver_half_width > 0.0, "grid half widths must be positive");
  require(source_half_width <= solver_half_width, "source grid must lie inside the solver grid");
  const GridSpec src = source_grid();
  const GridSpec sol = solver_grid();
  translate("grids", [&] { return node_offset(src, sol); });
  require(phantom_support_radius > 0.0, "phantom.support_radius must be positive");
  require(phantom_support_radius <= source_half_width * (1.0 + 1e-12),
          "phantom.support_radius exceeds the source grid");
  translate("phantom", [&] {
    phantom_spec().validate();
    return 0;
  });
  translate("sound_speed", [&] {
    sound_speed.validate();
    return 0;
  });
  require(sound_speed.support_radius() < solver_half_width,
          "sound speed inhomogeneity must lie inside the solver grid");
  require(t_final > 0.0, "wave.t_final must be positive");
  require(cfl > 0.0, "wave.cfl must be positive");
  require(dt >= 0.0, "wave.dt must be non-negative (0 selects it from the cfl number)");
  require(c0_ref >= 0.0, "wave.c0_ref must be non-negative (0 selects the mean speed)");
  require(n_angles >= 1, "detector.n_angles must be at least 1");
  require(d_offset >= 0.0, "detector.d_offset must be non-negative (0 selects the solver spacing)");
  const double reach = phantom_support_radius + sound_speed.c0 * t_final;
  require(detector_half_width >= reach * (1.0 - 1e-9),
          "detector.half_width must reach phantom.support_radius + c0 * t_final = " +
              format_double(reach));
  require(mask_half_width >= 0.0, "mask.half_width must be non-negative");
  require(mask_type != MaskType::file || !mask_file.empty(), "mask.type = file needs mask.file");
  require(noise_std_fraction >= 0.0, "noise.std_fraction must be non-negative");
  translate("recon", [&] {
    recon_config().validate();
    return 0;
  });
  require(!output_dir.empty(), "output.dir must not be empty");
}

}  // namespace ffdpat
