#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qclab {

inline constexpr int report_schema_version = 1;

struct VerificationReport {
  std::string identity;
  nlohmann::json params;
  double value = 0.0;   // the measured quantity (defect, slope, count)
  double defect = 0.0;  // compared against the tolerance
  double tolerance = 0.0;
  bool pass = false;
};

// Columns: schema_version, identity, params, value, defect, tolerance, pass.
void write_reports_csv(std::ostream& os, const std::vector<VerificationReport>& reports, bool header = true);
// Appends to `path`, writing the header only when the file is new or empty.
void append_reports_csv(const std::string& path, const std::vector<VerificationReport>& reports);
std::vector<VerificationReport> read_reports_csv(const std::string& path);

// Names accepted in a suite manifest.
const std::vector<std::string>& registered_identities();

// Every registered identity with default parameters on the perturbed circle.
nlohmann::json default_suite();

// Manifest: {domain, identities: [{name, params, tolerance}]}. Entries run as independent
// jobs on up to `threads` threads; the result order follows the manifest.
// Throws invalid_argument for unknown names.
std::vector<VerificationReport> run_suite(const nlohmann::json& manifest, std::uint64_t seed, int threads = 1);

}  // namespace qclab
