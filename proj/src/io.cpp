#include "smig/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "smig/config.hpp"
#include "smig/error.hpp"

namespace smig {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, "io", msg); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) return out;
    s = s.substr(p + 1);
  }
}

bool parse_real(std::string_view v, double& out) {
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc{} && p == v.data() + v.size();
}

bool parse_int(std::string_view v, long& out) {
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc{} && p == v.data() + v.size();
}

std::string entry_name(long m, long n) {
  return "(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

}  // namespace

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) fail(ErrorKind::io, "write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string sparams_to_string(const ScatteringMatrix& s) {
  const int n = s.size();
  std::string out = "# smig-sparams v1, N=" + std::to_string(n) +
                    ", f_hz=" + format_double(s.frequency_hz) + "\n";
  out += "# provenance=" + to_string(s.provenance) + "\n";
  out += "m,n,re,im\n";
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      out += std::to_string(m + 1) + "," + std::to_string(j + 1) + "," +
             format_double(s.entries(m, j).real()) + "," + format_double(s.entries(m, j).imag()) + "\n";
  return out;
}

ScatteringMatrix sparams_from_string(std::string_view text) {
  const auto nl = text.find('\n');
  const std::string_view header = trim(text.substr(0, nl));
  constexpr std::string_view magic = "# smig-sparams v1, N=";
  if (header.substr(0, magic.size()) != magic)
    fail(ErrorKind::data, "missing '# smig-sparams v1' header");
  const auto fields = split(header.substr(magic.size()), ',');
  long n = 0;
  double f_hz = 0.0;
  if (fields.size() != 2 || !parse_int(fields[0], n) || fields[1].substr(0, 5) != "f_hz=" ||
      !parse_real(fields[1].substr(5), f_hz))
    fail(ErrorKind::data, "malformed header '" + std::string(header) + "'");
  if (n < 1 || n > 4096) fail(ErrorKind::data, "N out of range in header");

  ScatteringMatrix s;
  s.entries = Eigen::MatrixXcd::Zero(n, n);
  s.frequency_hz = f_hz;
  s.provenance = Provenance::measured_subtracted;
  std::vector<char> seen(static_cast<std::size_t>(n * n), 0);

  std::string_view rest = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  int line_no = 1;
  while (!rest.empty()) {
    const auto p = rest.find('\n');
    const auto line = trim(rest.substr(0, p));
    rest = p == std::string_view::npos ? std::string_view{} : rest.substr(p + 1);
    ++line_no;
    if (line.empty() || line == "m,n,re,im") continue;
    if (line.front() == '#') {
      constexpr std::string_view tag = "# provenance=";
      if (line.substr(0, tag.size()) == tag) {
        const auto name = line.substr(tag.size());
        for (auto pv : {Provenance::born, Provenance::exact_disc, Provenance::measured_subtracted,
                        Provenance::plane_wave})
          if (name == to_string(pv)) s.provenance = pv;
      }
      continue;
    }
    const auto cols = split(line, ',');
    long m = 0;
    long j = 0;
    double re = 0.0;
    double im = 0.0;
    if (cols.size() != 4 || !parse_int(cols[0], m) || !parse_int(cols[1], j))
      fail(ErrorKind::data, "line " + std::to_string(line_no) + ": expected m,n,re,im");
    if (m < 1 || m > n || j < 1 || j > n)
      fail(ErrorKind::data, "entry " + entry_name(m, j) + " outside 1.." + std::to_string(n));
    if (!parse_real(cols[2], re) || !parse_real(cols[3], im) || !std::isfinite(re) ||
        !std::isfinite(im))
      fail(ErrorKind::data, "entry " + entry_name(m, j) + " is not a finite number");
    auto& flag = seen[static_cast<std::size_t>((m - 1) * n + (j - 1))];
    if (flag) fail(ErrorKind::data, "duplicate entry " + entry_name(m, j));
    flag = 1;
    s.entries(m - 1, j - 1) = cplx{re, im};
  }
  std::string missing;
  int missing_count = 0;
  for (long m = 1; m <= n; ++m)
    for (long j = 1; j <= n; ++j)
      if (!seen[static_cast<std::size_t>((m - 1) * n + (j - 1))]) {
        if (missing_count < 8) missing += (missing.empty() ? "" : " ") + entry_name(m, j);
        ++missing_count;
      }
  if (missing_count > 0)
    fail(ErrorKind::data, "missing " + std::to_string(missing_count) + " entries: " + missing +
                              (missing_count > 8 ? " ..." : ""));
  s.history.push_back("read_sparams");
  return s;
}

void write_sparams(const ScatteringMatrix& s, const std::filesystem::path& path) {
  write_text(path, sparams_to_string(s));
}

ScatteringMatrix read_sparams(const std::filesystem::path& path) {
  try {
    return sparams_from_string(read_text(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(e.kind(), "io", path.string() + ": " + std::string(e.what()).substr(4));
  }
}

void write_map(const ImageMap& map, const std::filesystem::path& path, MapFormat format,
               const MapMetadata& meta) {
  const double peak = map.values.empty() ? 0.0 : *std::max_element(map.values.begin(), map.values.end());
  if (format == MapFormat::csv) {
    std::string out = "x,y,value\n";
    out.reserve(map.values.size() * 40);
    for (int iy = 0; iy < map.ny; ++iy)
      for (int ix = 0; ix < map.nx; ++ix)
        out += format_double(map.grid.x(ix)) + "," + format_double(map.grid.y(iy)) + "," +
               format_double(map.at(ix, iy)) + "\n";
    write_text(path, out);
  } else {
    std::string out = "P5\n" + std::to_string(map.nx) + " " + std::to_string(map.ny) + "\n255\n";
    for (int iy = map.ny - 1; iy >= 0; --iy)
      for (int ix = 0; ix < map.nx; ++ix) {
        const double v = peak > 0.0 ? map.at(ix, iy) / peak : 0.0;
        out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
      }
    write_text(path, out);
  }
  std::string side;
  side += "label=" + meta.label + "\n";
  side += "format=" + std::string(format == MapFormat::csv ? "csv" : "pgm") + "\n";
  side += "nx=" + std::to_string(map.nx) + "\n";
  side += "ny=" + std::to_string(map.ny) + "\n";
  side += "x_min=" + format_double(map.grid.x_min) + "\n";
  side += "y_min=" + format_double(map.grid.y_min) + "\n";
  side += "step=" + format_double(map.grid.step) + "\n";
  side += "frequency_hz=" + format_double(map.frequency_hz) + "\n";
  side += "kind=" + to_string(map.kind) + "\n";
  side += "rank=" + std::to_string(map.rank) + "\n";
  side += "normalization=" + format_double(format == MapFormat::pgm ? peak : 1.0) + "\n";
  side += "max_value=" + format_double(peak) + "\n";
  side += "excluded_points=" + std::to_string(map.excluded_points) + "\n";
  side += "seed=" + std::to_string(meta.seed) + "\n";
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(meta.config_hash));
  side += "config_hash=" + std::string(hash) + "\n";
  write_text(path.string() + ".meta", side);
}

std::vector<MapSample> read_map_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<MapSample> out;
  std::string_view rest = text;
  bool header = true;
  while (!rest.empty()) {
    const auto p = rest.find('\n');
    const auto line = trim(rest.substr(0, p));
    rest = p == std::string_view::npos ? std::string_view{} : rest.substr(p + 1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line == "x,y,value") continue;
    }
    const auto cols = split(line, ',');
    MapSample s{};
    if (cols.size() != 3 || !parse_real(cols[0], s.x) || !parse_real(cols[1], s.y) ||
        !parse_real(cols[2], s.value))
      fail(ErrorKind::data, path.string() + ": malformed map row '" + std::string(line) + "'");
    out.push_back(s);
  }
  return out;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::string data = read_text(path);
  std::istringstream in(data);
  std::string magic;
  int maxval = 0;
  GrayImage img;
  in >> magic >> img.width >> img.height >> maxval;
  if (magic != "P5" || img.width <= 0 || img.height <= 0 || maxval != 255)
    fail(ErrorKind::data, path.string() + ": not an 8-bit P5 image");
  in.get();
  const auto offset = static_cast<std::size_t>(in.tellg());
  const auto count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (data.size() < offset + count) fail(ErrorKind::data, path.string() + ": truncated pixel data");
  img.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(offset),
                    data.begin() + static_cast<std::ptrdiff_t>(offset + count));
  return img;
}

void write_spectrum(const SvdResult& svd, const std::filesystem::path& path) {
  std::string out = "m,tau,ratio\n";
  const double top = svd.tau.size() > 0 ? svd.tau(0) : 0.0;
  for (Eigen::Index i = 0; i < svd.tau.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(svd.tau(i)) + "," +
           format_double(top > 0.0 ? svd.tau(i) / top : 0.0) + "\n";
  write_text(path, out);
}

}  // namespace smig
