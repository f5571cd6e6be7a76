#include "nclab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "json.hpp"

namespace nclab {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json estimate_json(const DixmierEstimate& e) {
  ordered_json j;
  j["value"] = complex_json(e.value);
  ordered_json profiles;
  for (const auto& [name, v] : e.per_profile) profiles[name] = complex_json(v);
  j["per_profile"] = std::move(profiles);
  j["spread"] = e.spread;
  j["relative_spread"] = e.relative_spread();
  j["window"] = ordered_json::array({e.window.lo, e.window.hi});
  j["method"] = e.method;
  return j;
}

ordered_json pairing_json(const PairingReport& p) {
  ordered_json j;
  j["model"] = p.model;
  j["cycle"] = p.cycle;
  j["degree"] = p.degree;
  j["mass"] = p.mass;
  ordered_json rows = ordered_json::array();
  for (const PairingRow& r : p.rows) {
    ordered_json row;
    row["size"] = r.size;
    row["chern"] = complex_json(r.chern);
    row["psi"] = complex_json(r.psi);
    row["zeta"] = complex_json(r.zeta);
    row["phi"] = complex_json(r.phi);
    row["spread"] = r.spread;
    row["zeta_profile_spread"] = r.zeta_spread;
    row["phi_profile_spread"] = r.phi_spread;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["worst_spread"] = p.worst_spread;
  j["drift"] = p.drift;
  if (p.has_index) {
    j["index"] = p.index;
    j["index_gap"] = p.index_gap;
  }
  return j;
}

// Fixed-width decimal keeps the CSV diffable across platforms.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

AssertionRecord check_close(const std::string& suite, const std::string& name, double value,
                            double expected, double tolerance, std::string detail) {
  AssertionRecord r;
  r.suite = suite;
  r.name = name;
  r.value = value;
  r.expected = expected;
  r.tolerance = tolerance;
  r.pass = std::isfinite(value) && std::abs(value - expected) <= tolerance;
  r.detail = std::move(detail);
  return r;
}

AssertionRecord check_below(const std::string& suite, const std::string& name, double value,
                            double bound, std::string detail) {
  AssertionRecord r;
  r.suite = suite;
  r.name = name;
  r.value = value;
  r.expected = 0.0;
  r.tolerance = bound;
  r.pass = std::isfinite(value) && value <= bound;
  r.detail = std::move(detail);
  return r;
}

AssertionRecord check_at_least(const std::string& suite, const std::string& name, double value,
                               double bound, std::string detail) {
  AssertionRecord r;
  r.suite = suite;
  r.name = name;
  r.value = value;
  r.expected = bound;
  r.tolerance = 0.0;
  r.pass = std::isfinite(value) && value >= bound;
  r.detail = std::move(detail);
  return r;
}

bool RunReport::all_pass() const {
  for (const AssertionRecord& a : assertions)
    if (!a.pass) return false;
  return true;
}

std::string to_json(const RunReport& report) {
  ordered_json j;
  j["model"] = report.model;
  j["sizes"] = report.sizes;
  j["mass"] = report.mass;
  j["seed"] = report.seed;
  j["suites"] = report.suites;
  j["all_pass"] = report.all_pass();

  ordered_json assertions = ordered_json::array();
  for (const AssertionRecord& a : report.assertions) {
    ordered_json row;
    row["suite"] = a.suite;
    row["name"] = a.name;
    row["value"] = a.value;
    row["expected"] = a.expected;
    row["tolerance"] = a.tolerance;
    row["pass"] = a.pass;
    if (!a.detail.empty()) row["detail"] = a.detail;
    assertions.push_back(std::move(row));
  }
  j["assertions"] = std::move(assertions);

  ordered_json estimates = ordered_json::array();
  for (const NamedEstimate& e : report.estimates) {
    ordered_json row = estimate_json(e.estimate);
    row["suite"] = e.suite;
    row["name"] = e.name;
    estimates.push_back(std::move(row));
  }
  j["estimates"] = std::move(estimates);

  ordered_json pairings = ordered_json::array();
  for (const PairingReport& p : report.pairings) pairings.push_back(pairing_json(p));
  j["pairings"] = std::move(pairings);

  return j.dump(2) + "\n";
}

std::string to_csv(const RunReport& report) {
  std::string out = "suite,name,value,expected,tolerance,pass\n";
  for (const AssertionRecord& a : report.assertions) {
    out += a.suite;
    out += ',';
    out += a.name;
    out += ',';
    out += num(a.value);
    out += ',';
    out += num(a.expected);
    out += ',';
    out += num(a.tolerance);
    out += ',';
    out += a.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

void write_report(const RunReport& report, const OutputConfig& out) {
  const std::string text = out.format == "csv" ? to_csv(report) : to_json(report);
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw std::runtime_error("cannot write report to '" + out.path + "'");
  f << text;
}

}  // namespace nclab
