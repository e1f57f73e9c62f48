#pragma once

// Persistence: grid functions (binary and text), experiment reports (CSV and
// line-delimited JSON), atlas tables and run manifests. Layouts are described
// in docs/formats.md.

#include "amalgam/experiments.hpp"
#include "amalgam/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amalgam {

/// Unreadable or malformed input file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kLibraryVersion = "1.0.0";

enum class SamplePrecision { Complex64, Complex128 };

/// "AMGF" record: fixed 40-byte header then the samples as little-endian
/// (re, im) pairs of float32 or float64.
void write_grid_function(std::ostream& out, const GridFunction& f,
                         SamplePrecision precision = SamplePrecision::Complex128);
GridFunction read_grid_function(std::istream& in);
void save_grid_function(const std::string& path, const GridFunction& f,
                        SamplePrecision precision = SamplePrecision::Complex128);
GridFunction load_grid_function(const std::string& path);

/// Debug text format: key=value header lines, then one "re im" line per sample.
void write_grid_function_text(std::ostream& out, const GridFunction& f);
GridFunction read_grid_function_text(std::istream& in);

/// Loads either format, sniffing the magic bytes.
GridFunction load_any_grid_function(const std::string& path);

/// header "parameter,source_norm,target_norm,ratio", doubles printed with 17
/// significant digits.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
/// One "report" record followed by one "point" record per schedule point.
/// Runtime is not written. Non-finite numbers become the strings "inf",
/// "-inf", "nan".
void write_report_jsonl(std::ostream& out, const ExperimentReport& report, const std::string& manifest_path);

void write_atlas_csv(std::ostream& out, const std::vector<AtlasRow>& rows);

struct RunManifest {
  std::vector<std::string> command_line;  ///< argv without the program name
  std::vector<std::pair<std::string, std::string>> config;
  std::string config_hash;                ///< FNV-1a 64 of the canonical config, hex
  std::uint64_t seed = 0;
  std::string grid;
  std::string version = kLibraryVersion;
  std::string timestamp;                  ///< UTC, ISO 8601
  std::vector<std::string> outputs;
  double runtime_seconds = 0.0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

/// FNV-1a 64-bit of "key=value\n" lines in the given order, as 16 hex digits.
std::string config_hash(const std::vector<std::pair<std::string, std::string>>& config);

/// Current UTC time, or SOURCE_DATE_EPOCH when that variable is set.
std::string utc_timestamp();

void save_manifest(const std::string& path, const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

/// Manifest path that sits next to an output file: "<stem>.manifest.json".
std::string manifest_path_for(const std::string& output_path);

}  // namespace amalgam
