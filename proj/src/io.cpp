#include "amalgam/io.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace amalgam {

namespace {

using nlohmann::ordered_json;

constexpr char kMagic[4] = {'A', 'M', 'G', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename U>
void put_le(std::ostream& out, U v) {
  unsigned char b[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), sizeof(U));
}

template <typename U>
U get_le(std::istream& in) {
  unsigned char b[sizeof(U)];
  in.read(reinterpret_cast<char*>(b), sizeof(U));
  if (!in) throw IoError("truncated grid-function record");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) { put_le(out, std::bit_cast<std::uint64_t>(d)); }
void put_f32(std::ostream& out, float d) { put_le(out, std::bit_cast<std::uint32_t>(d)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }
float get_f32(std::istream& in) { return std::bit_cast<float>(get_le<std::uint32_t>(in)); }

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

GridSpec checked_spec(std::uint64_t n, double extent, std::uint64_t samples) {
  if (n != 1 && n != 2) throw IoError("grid-function record: bad dimension");
  if (samples > (1u << 30)) throw IoError("grid-function record: sample count too large");
  try {
    return GridSpec::make(static_cast<int>(n), extent, static_cast<int>(samples));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("grid-function record: ") + e.what());
  }
}

}  // namespace

void write_grid_function(std::ostream& out, const GridFunction& f, SamplePrecision precision) {
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.spec.n));
  put_le<std::uint32_t>(out, f.domain == Domain::Space ? 0u : 1u);
  put_le<std::uint32_t>(out, precision == SamplePrecision::Complex128 ? 128u : 64u);
  put_le<std::uint32_t>(out, 0u);
  put_f64(out, f.spec.extent);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(f.spec.samples));
  for (const auto& v : f.values) {
    if (precision == SamplePrecision::Complex128) {
      put_f64(out, v.real());
      put_f64(out, v.imag());
    } else {
      put_f32(out, static_cast<float>(v.real()));
      put_f32(out, static_cast<float>(v.imag()));
    }
  }
}

GridFunction read_grid_function(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a grid-function record");
  if (get_le<std::uint32_t>(in) != kFormatVersion) throw IoError("unsupported grid-function version");
  const auto n = get_le<std::uint32_t>(in);
  const auto domain = get_le<std::uint32_t>(in);
  const auto bits = get_le<std::uint32_t>(in);
  (void)get_le<std::uint32_t>(in);
  const double extent = get_f64(in);
  const auto samples = get_le<std::uint64_t>(in);
  if (domain > 1) throw IoError("grid-function record: bad domain");
  if (bits != 64 && bits != 128) throw IoError("grid-function record: bad precision");
  auto f = GridFunction::zeros(checked_spec(n, extent, samples), domain == 0 ? Domain::Space : Domain::Frequency);
  for (auto& v : f.values) {
    if (bits == 128) {
      const double re = get_f64(in);
      v = Complex(re, get_f64(in));
    } else {
      const double re = get_f32(in);
      v = Complex(re, get_f32(in));
    }
  }
  return f;
}

void save_grid_function(const std::string& path, const GridFunction& f, SamplePrecision precision) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_grid_function(out, f, precision);
  if (!out) throw IoError("write failed: " + path);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return read_grid_function(in);
}

void write_grid_function_text(std::ostream& out, const GridFunction& f) {
  out << "# amalgam grid function v" << kFormatVersion << "\n";
  out << "n=" << f.spec.n << "\n";
  out << "extent=" << num(f.spec.extent) << "\n";
  out << "samples=" << f.spec.samples << "\n";
  out << "domain=" << (f.domain == Domain::Space ? "space" : "frequency") << "\n";
  for (const auto& v : f.values) out << num(v.real()) << ' ' << num(v.imag()) << '\n';
}

GridFunction read_grid_function_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# amalgam grid function", 0) != 0) {
    throw IoError("not a grid-function text file");
  }
  std::uint64_t n = 0, samples = 0;
  double extent = 0.0;
  std::string domain;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(in, line)) throw IoError("truncated grid-function header");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("bad header line: " + line);
    const auto key = line.substr(0, eq);
    const auto val = line.substr(eq + 1);
    try {
      if (key == "n") n = std::stoull(val);
      else if (key == "extent") extent = std::stod(val);
      else if (key == "samples") samples = std::stoull(val);
      else if (key == "domain") domain = val;
      else throw IoError("unknown header key: " + key);
    } catch (const std::logic_error&) {
      throw IoError("bad header value: " + line);
    }
  }
  if (domain != "space" && domain != "frequency") throw IoError("bad domain: " + domain);
  auto f = GridFunction::zeros(checked_spec(n, extent, samples), domain == "space" ? Domain::Space : Domain::Frequency);
  for (auto& v : f.values) {
    double re = 0, im = 0;
    if (!(in >> re >> im)) throw IoError("truncated grid-function samples");
    v = Complex(re, im);
  }
  return f;
}

GridFunction load_any_grid_function(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  char head[4] = {0, 0, 0, 0};
  in.read(head, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kMagic, 4) == 0) return read_grid_function(in);
  return read_grid_function_text(in);
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "parameter,source_norm,target_norm,ratio\n";
  for (const auto& p : report.points) {
    out << num(p.parameter) << ',' << num(p.source_norm) << ',' << num(p.target_norm) << ',' << num(p.ratio) << '\n';
  }
}

void write_report_jsonl(std::ostream& out, const ExperimentReport& report, const std::string& manifest_path) {
  ordered_json head;
  head["record"] = "report";
  head["experiment"] = report.experiment;
  head["manifest"] = manifest_path;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : report.config) cfg[k] = v;
  head["config"] = cfg;
  head["seed"] = report.seed;
  head["verdict"] = std::string(to_string(report.verdict));
  head["slope"] = json_number(report.fit.slope);
  head["intercept"] = json_number(report.fit.intercept);
  head["residual"] = json_number(report.fit.residual);
  head["relative_residual"] = json_number(report.fit.relative_residual);
  head["expected_slope"] = report.expected_slope ? json_number(*report.expected_slope) : ordered_json(nullptr);
  if (report.classifier) {
    head["classifier"] = {{"holds", report.classifier->holds},
                          {"critical_s", to_string(report.classifier->critical_s)},
                          {"strict_required", report.classifier->strict_required}};
  } else {
    head["classifier"] = nullptr;
  }
  head["disagreement"] = report.disagreement;
  ordered_json diag = ordered_json::object();
  for (const auto& [k, v] : report.diagnostics) diag[k] = json_number(v);
  head["diagnostics"] = diag;
  head["notes"] = report.notes;
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    ordered_json rec;
    rec["record"] = "point";
    rec["index"] = i;
    rec["parameter"] = json_number(p.parameter);
    rec["source_norm"] = json_number(p.source_norm);
    rec["target_norm"] = json_number(p.target_norm);
    rec["ratio"] = json_number(p.ratio);
    out << rec.dump() << '\n';
  }
}

void write_atlas_csv(std::ostream& out, const std::vector<AtlasRow>& rows) {
  out << "u_p,u_q,alpha_region,beta_region,defined,critical_s,s,holds,strict_required,note\n";
  for (const auto& r : rows) {
    std::string note = r.note;
    for (auto& c : note) {
      if (c == '"') c = '\'';
    }
    out << to_string(r.u_p) << ',' << to_string(r.u_q) << ',' << to_string(r.alpha_label) << ','
        << to_string(r.beta_label) << ',' << (r.defined ? "true" : "false") << ',';
    if (r.defined) {
      out << to_string(r.critical_s) << ',' << to_string(r.s) << ',' << (r.holds ? "true" : "false") << ','
          << (r.strict_required ? "true" : "false");
    } else {
      out << ",,,";
    }
    out << ",\"" << note << "\"\n";
  }
}

std::string config_hash(const std::vector<std::pair<std::string, std::string>>& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : config) feed(k + "=" + v + "\n");
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  ordered_json j;
  j["command_line"] = command_line;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["grid"] = grid;
  j["version"] = version;
  j["timestamp"] = timestamp;
  j["outputs"] = outputs;
  j["runtime_seconds"] = runtime_seconds;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    const auto j = ordered_json::parse(text);
    m.command_line = j.at("command_line").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("config").items()) m.config.emplace_back(k, v.get<std::string>());
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.grid = j.at("grid").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.runtime_seconds = j.value("runtime_seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void save_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << manifest.to_json();
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return RunManifest::from_json(ss.str());
}

std::string manifest_path_for(const std::string& output_path) {
  const auto slash = output_path.find_last_of('/');
  const auto dot = output_path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? output_path.substr(0, dot) : output_path) + ".manifest.json";
}

}  // namespace amalgam
