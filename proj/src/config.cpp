#include "smig/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <system_error>

#include "smig/error.hpp"

namespace smig {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::config, "config", key + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, std::string_view v) {
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    fail(key, "expected a real number, got '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int to_integer(const std::string& key, std::string_view v) {
  Int out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    fail(key, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key, "expected true or false, got '" + std::string(v) + "'");
}

template <typename E>
E to_enum(const std::string& key, std::string_view v,
          std::initializer_list<std::pair<std::string_view, E>> names) {
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (v == name) return value;
    allowed += (allowed.empty() ? "" : "|") + std::string(name);
  }
  fail(key, "expected one of " + allowed + ", got '" + std::string(v) + "'");
}

template <typename E>
std::string enum_name(E value, std::initializer_list<std::pair<std::string_view, E>> names) {
  for (const auto& [name, v] : names)
    if (v == value) return std::string(name);
  return "?";
}

using KindNames = std::initializer_list<std::pair<std::string_view, MatrixKind>>;
using ModeNames = std::initializer_list<std::pair<std::string_view, RankPolicy::Mode>>;
using ContrastNames = std::initializer_list<std::pair<std::string_view, ContrastDenominator>>;
using SteeringNames = std::initializer_list<std::pair<std::string_view, SteeringModel>>;
using GeneratorNames = std::initializer_list<std::pair<std::string_view, Generator>>;
using ContamNames = std::initializer_list<std::pair<std::string_view, ContaminationMode>>;
using FormatNames = std::initializer_list<std::pair<std::string_view, OutputFormat>>;

const KindNames kKinds{{"full", MatrixKind::full}, {"zero_diagonal", MatrixKind::zero_diagonal}};
const ModeNames kModes{{"threshold", RankPolicy::Mode::relative_threshold},
                       {"fixed", RankPolicy::Mode::fixed}};
const ContrastNames kContrasts{{"conductivity", ContrastDenominator::conductivity},
                               {"permittivity", ContrastDenominator::permittivity}};
const SteeringNames kSteering{{"hankel", SteeringModel::hankel},
                              {"plane_wave", SteeringModel::plane_wave}};
const GeneratorNames kGenerators{{"born", Generator::born}, {"exact_disc", Generator::exact_disc}};
const ContamNames kContam{{"constant", ContaminationMode::constant},
                          {"random", ContaminationMode::random}};
const FormatNames kFormats{{"csv", OutputFormat::csv}, {"pgm", OutputFormat::pgm},
                           {"both", OutputFormat::both}};

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field real_field(std::string key, double RunConfig::*member) {
  return {std::move(key),
          [member](RunConfig& c, const std::string& k, std::string_view v) { c.*member = to_double(k, v); },
          [member](const RunConfig& c) { return format_double(c.*member); }};
}

Field int_field(std::string key, int RunConfig::*member) {
  return {std::move(key),
          [member](RunConfig& c, const std::string& k, std::string_view v) {
            c.*member = to_integer<int>(k, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field text_field(std::string key, std::string RunConfig::*member) {
  return {std::move(key),
          [member](RunConfig& c, const std::string&, std::string_view v) { c.*member = std::string(v); },
          [member](const RunConfig& c) { return c.*member; }};
}

Field grid_field(std::string key, double ImagingGrid::*member) {
  return {std::move(key),
          [member](RunConfig& c, const std::string& k, std::string_view v) {
            c.grid.*member = to_double(k, v);
          },
          [member](const RunConfig& c) { return format_double(c.grid.*member); }};
}

template <typename E>
Field enum_field(std::string key, E RunConfig::*member,
                 std::initializer_list<std::pair<std::string_view, E>> names) {
  return {std::move(key),
          [member, names](RunConfig& c, const std::string& k, std::string_view v) {
            c.*member = to_enum(k, v, names);
          },
          [member, names](const RunConfig& c) { return enum_name(c.*member, names); }};
}

Field anomaly_field(std::size_t index, const std::string& name, double AnomalyConfig::*member) {
  return {"anomaly." + std::to_string(index + 1) + "." + name,
          [index, member](RunConfig& c, const std::string& k, std::string_view v) {
            c.anomalies[index].*member = to_double(k, v);
          },
          [index, member](const RunConfig& c) { return format_double(c.anomalies[index].*member); }};
}

// Serialization order. "scenario" and "anomalies.count" are handled before
// the rest because they shape the defaults other keys refine.
std::vector<Field> registry(std::size_t anomaly_count) {
  std::vector<Field> f;
  f.push_back(real_field("medium.eps_rel", &RunConfig::eps_rel));
  f.push_back(real_field("medium.sigma", &RunConfig::sigma));
  f.push_back(real_field("medium.frequency_hz", &RunConfig::frequency_hz));
  f.push_back(int_field("array.n", &RunConfig::antennas));
  f.push_back(real_field("array.radius", &RunConfig::array_radius));
  for (std::size_t i = 0; i < anomaly_count; ++i) {
    f.push_back(anomaly_field(i, "center_x", &AnomalyConfig::center_x));
    f.push_back(anomaly_field(i, "center_y", &AnomalyConfig::center_y));
    f.push_back(anomaly_field(i, "radius", &AnomalyConfig::radius));
    f.push_back(anomaly_field(i, "eps_rel", &AnomalyConfig::eps_rel));
    f.push_back(anomaly_field(i, "sigma", &AnomalyConfig::sigma));
  }
  f.push_back(grid_field("grid.x_min", &ImagingGrid::x_min));
  f.push_back(grid_field("grid.x_max", &ImagingGrid::x_max));
  f.push_back(grid_field("grid.y_min", &ImagingGrid::y_min));
  f.push_back(grid_field("grid.y_max", &ImagingGrid::y_max));
  f.push_back(grid_field("grid.step", &ImagingGrid::step));
  f.push_back(enum_field("imaging.kind", &RunConfig::kind, kKinds));
  f.push_back({"imaging.rank_mode",
               [](RunConfig& c, const std::string& k, std::string_view v) {
                 c.rank.mode = to_enum(k, v, kModes);
               },
               [](const RunConfig& c) { return enum_name(c.rank.mode, kModes); }});
  f.push_back({"imaging.rank_threshold",
               [](RunConfig& c, const std::string& k, std::string_view v) {
                 c.rank.threshold = to_double(k, v);
               },
               [](const RunConfig& c) { return format_double(c.rank.threshold); }});
  f.push_back({"imaging.rank_fixed",
               [](RunConfig& c, const std::string& k, std::string_view v) {
                 c.rank.fixed_m = to_integer<int>(k, v);
               },
               [](const RunConfig& c) { return std::to_string(c.rank.fixed_m); }});
  f.push_back({"imaging.lossless_k",
               [](RunConfig& c, const std::string& k, std::string_view v) { c.lossless_k = to_bool(k, v); },
               [](const RunConfig& c) { return std::string(c.lossless_k ? "true" : "false"); }});
  f.push_back(enum_field("imaging.steering", &RunConfig::steering, kSteering));
  f.push_back(enum_field("synthesis.generator", &RunConfig::generator, kGenerators));
  f.push_back(enum_field("synthesis.contrast_denominator", &RunConfig::contrast, kContrasts));
  f.push_back(int_field("synthesis.series_margin", &RunConfig::series_margin));
  f.push_back(real_field("synthesis.series_tol", &RunConfig::series_tol));
  f.push_back(real_field("synthesis.contamination", &RunConfig::contamination));
  f.push_back(enum_field("synthesis.contamination_mode", &RunConfig::contamination_mode, kContam));
  f.push_back(real_field("synthesis.snr_db", &RunConfig::snr_db));
  f.push_back({"synthesis.seed",
               [](RunConfig& c, const std::string& k, std::string_view v) {
                 c.seed = to_integer<std::uint64_t>(k, v);
               },
               [](const RunConfig& c) { return std::to_string(c.seed); }});
  f.push_back(int_field("structure.s_max", &RunConfig::structure_s_max));
  f.push_back(int_field("structure.lattice", &RunConfig::structure_lattice));
  f.push_back(text_field("output.dir", &RunConfig::out_dir));
  f.push_back(text_field("output.prefix", &RunConfig::out_prefix));
  f.push_back(enum_field("output.format", &RunConfig::format, kFormats));
  return f;
}

constexpr int kMaxAnomalies = 64;

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) fail(key, msg);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

void validate(const RunConfig& c) {
  require(finite_positive(c.eps_rel), "medium.eps_rel", "must be > 0");
  require(finite_nonnegative(c.sigma), "medium.sigma", "must be >= 0");
  require(finite_positive(c.frequency_hz), "medium.frequency_hz", "must be > 0");
  require(c.antennas >= 2 && c.antennas <= 4096, "array.n", "must lie in [2, 4096]");
  require(finite_positive(c.array_radius), "array.radius", "must be > 0");
  for (std::size_t i = 0; i < c.anomalies.size(); ++i) {
    const auto& a = c.anomalies[i];
    const std::string p = "anomaly." + std::to_string(i + 1) + ".";
    require(std::isfinite(a.center_x), p + "center_x", "must be finite");
    require(std::isfinite(a.center_y), p + "center_y", "must be finite");
    require(finite_positive(a.radius), p + "radius", "must be > 0");
    require(finite_positive(a.eps_rel), p + "eps_rel", "must be > 0");
    require(finite_nonnegative(a.sigma), p + "sigma", "must be >= 0");
    require(a.eps_rel != c.eps_rel || a.sigma != c.sigma, p + "eps_rel",
            "anomaly has zero contrast with the background");
  }
  require(finite_positive(c.grid.step), "grid.step", "must be > 0");
  require(std::isfinite(c.grid.x_min) && std::isfinite(c.grid.x_max) && c.grid.x_max >= c.grid.x_min,
          "grid.x_max", "bounds must be finite and ordered");
  require(std::isfinite(c.grid.y_min) && std::isfinite(c.grid.y_max) && c.grid.y_max >= c.grid.y_min,
          "grid.y_max", "bounds must be finite and ordered");
  require((c.grid.x_max - c.grid.x_min) / c.grid.step <= 1e5 &&
              (c.grid.y_max - c.grid.y_min) / c.grid.step <= 1e5,
          "grid.step", "more than 1e5 points per axis");
  require(c.rank.threshold > 0.0 && c.rank.threshold < 1.0, "imaging.rank_threshold",
          "must lie in (0, 1)");
  require(c.rank.fixed_m >= 1 && c.rank.fixed_m <= c.antennas, "imaging.rank_fixed",
          "must lie in [1, array.n]");
  require(c.contrast != ContrastDenominator::conductivity || c.sigma > 0.0,
          "synthesis.contrast_denominator",
          "conductivity denominator needs medium.sigma > 0; use permittivity");
  require(c.series_margin >= 1 && c.series_margin < specfun::kMaxOrder, "synthesis.series_margin",
          "must lie in [1, 511]");
  require(finite_positive(c.series_tol), "synthesis.series_tol", "must be > 0");
  require(finite_nonnegative(c.contamination), "synthesis.contamination", "must be >= 0");
  require(!std::isnan(c.snr_db) && c.snr_db != -std::numeric_limits<double>::infinity(),
          "synthesis.snr_db", "must be finite or inf");
  require(c.structure_s_max >= 1 && c.structure_s_max < specfun::kMaxOrder, "structure.s_max",
          "must lie in [1, 511]");
  require(c.structure_lattice >= 2 && c.structure_lattice <= 2001, "structure.lattice",
          "must lie in [2, 2001]");
  require(!c.out_dir.empty(), "output.dir", "must not be empty");
  require(!c.out_prefix.empty() && c.out_prefix.find('/') == std::string::npos, "output.prefix",
          "must be a non-empty file name");
}

struct Entry {
  std::string value;
  std::string origin;
};

std::pair<std::string, std::string> split_assignment(std::string_view line, const std::string& origin) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorKind::config, "config", origin + ": expected key = value");
  const auto key = trim(line.substr(0, eq));
  const auto value = trim(line.substr(eq + 1));
  if (key.empty()) throw Error(ErrorKind::config, "config", origin + ": empty key");
  return {std::string(key), std::string(value)};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

AnomalyConfig scenario_anomaly(std::string_view scenario) {
  if (scenario == "small") return AnomalyConfig{};
  if (scenario == "extended") return AnomalyConfig{0.01, 0.02, 0.05, 15.0, 0.5};
  fail("scenario", "expected small|extended, got '" + std::string(scenario) + "'");
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = "line " + std::to_string(line_no);
    auto [key, value] = split_assignment(line, origin);
    if (entries.count(key)) fail(key, "duplicate key at " + origin);
    entries[key] = {value, origin};
  }
  std::map<std::string, bool> seen_override;
  for (const auto& o : overrides) {
    auto [key, value] = split_assignment(trim(o), "override '" + o + "'");
    if (seen_override[key]) fail(key, "given twice in overrides");
    seen_override[key] = true;
    entries[key] = {value, "override"};
  }

  RunConfig c;
  if (auto it = entries.find("scenario"); it != entries.end()) {
    c.anomalies[0] = scenario_anomaly(it->second.value);
    c.scenario = it->second.value;
    entries.erase(it);
  }
  if (auto it = entries.find("anomalies.count"); it != entries.end()) {
    const int count = to_integer<int>("anomalies.count", it->second.value);
    require(count >= 1 && count <= kMaxAnomalies, "anomalies.count", "must lie in [1, 64]");
    c.anomalies.resize(static_cast<std::size_t>(count));
    entries.erase(it);
  }
  const auto fields = registry(c.anomalies.size());
  std::map<std::string, const Field*> by_key;
  for (const auto& f : fields) by_key[f.key] = &f;
  for (const auto& [key, entry] : entries) {
    const auto it = by_key.find(key);
    if (it == by_key.end()) fail(key, "unknown key (" + entry.origin + ")");
    it->second->set(c, key, entry.value);
  }
  validate(c);
  return c;
}

std::string serialize(const RunConfig& c) {
  std::string out;
  out += "scenario = " + c.scenario + "\n";
  out += "anomalies.count = " + std::to_string(c.anomalies.size()) + "\n";
  for (const auto& f : registry(c.anomalies.size())) out += f.key + " = " + f.get(c) + "\n";
  return out;
}

std::uint64_t config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : serialize(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

MediumParams medium_of(const RunConfig& c) {
  return MediumParams::from_relative(c.eps_rel, c.sigma, c.frequency_hz);
}

AntennaArray array_of(const RunConfig& c) { return antenna_array(c.antennas, c.array_radius); }

std::vector<Anomaly> anomalies_of(const RunConfig& c) {
  std::vector<Anomaly> out;
  for (const auto& a : c.anomalies) {
    Anomaly x;
    x.center = Vec2(a.center_x, a.center_y);
    x.radius = a.radius;
    x.eps_star = a.eps_rel * kVacuumPermittivity;
    x.sigma_star = a.sigma;
    out.push_back(x);
  }
  return out;
}

ComplexWavenumber steering_k(const RunConfig& c) {
  const auto medium = medium_of(c);
  if (c.lossless_k) return {cplx{lossless_wavenumber(medium), 0.0}};
  return wavenumber(medium);
}

}  // namespace smig
