#pragma once

#include <string>
#include <vector>

#include "nclab/chern.hpp"
#include "nclab/config.hpp"
#include "nclab/singular_trace.hpp"

namespace nclab {

// One verified statement: pass iff |value - expected| <= tolerance.  Bound
// checks set expected = 0 so the tolerance doubles as the bound.
struct AssertionRecord {
  std::string suite;
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;  // free-form context: complex values, windows, words
};

AssertionRecord check_close(const std::string& suite, const std::string& name, double value,
                            double expected, double tolerance, std::string detail = "");
AssertionRecord check_below(const std::string& suite, const std::string& name, double value,
                            double bound, std::string detail = "");
AssertionRecord check_at_least(const std::string& suite, const std::string& name, double value,
                               double bound, std::string detail = "");

// Estimates are kept whole so the serialized report carries every
// per-profile value, not just the aggregated number.
struct NamedEstimate {
  std::string suite;
  std::string name;
  DixmierEstimate estimate;
};

struct RunReport {
  std::string model;
  std::vector<int> sizes;
  double mass = 0.0;
  unsigned seed = 0;
  std::vector<std::string> suites;
  std::vector<AssertionRecord> assertions;
  std::vector<NamedEstimate> estimates;
  std::vector<PairingReport> pairings;

  void add(AssertionRecord r) { assertions.push_back(std::move(r)); }
  bool all_pass() const;
};

std::string to_json(const RunReport& report);
// One row per assertion: suite, name, value, expected, tolerance, pass.
std::string to_csv(const RunReport& report);

// Serializes to the configured format and destination (stdout when the path
// is empty).  Throws std::runtime_error when the file cannot be written.
void write_report(const RunReport& report, const OutputConfig& out);

}  // namespace nclab
