#pragma once

#include <map>
#include <string>
#include <vector>

#include "nclab/hochschild.hpp"

namespace nclab {

// A run is described by one JSON document plus command line overrides; the
// structs below mirror the document section by section.

struct ModelConfig {
  std::string name = "circle";
  std::vector<int> sizes = {256};  // single truncation or a strictly increasing sweep
  int summability = 0;             // optional cross-check against the model, 0 = trust it
  double mass = 1.0;               // doubling mass
};

struct TraceConfig {
  std::vector<std::string> profiles;  // subset of the registered weight profiles; empty = all
  double window_lo = 0.0;             // sample window override; 0 = pick from the dimension
  double window_hi = 0.0;
};

struct RegulatorConfig {
  double t_min_factor = 4.0;  // lower end of the scale grid, in units of 1/edge
  double t_max = 0.2;
  double tail_k = 0.0;  // odd-exponent tail matching point; 0 = built-in default
  int tail_l = 0;       // tail smoothness order; 0 = built-in default
};

struct OutputConfig {
  std::string format = "json";  // "json" or "csv"
  std::string path;             // empty = stdout
};

struct RunConfig {
  ModelConfig model;
  std::vector<std::string> suites = {"exact"};
  TraceConfig trace;
  RegulatorConfig regulator;
  std::map<std::string, HochschildChain> cycles;  // named chains, on top of the built-ins
  std::string cycle;                              // selected cycle; empty = model default
  OutputConfig output;
  unsigned seed = 1;
};

// Built-in cycles, always available by name.
const std::map<std::string, HochschildChain>& registered_cycles();
std::string default_cycle_for(const std::string& model_name);

// Canonical suite names, in execution order.
const std::vector<std::string>& suite_names();

// Chain literal: JSON array of [coefficient, [word, ...]] terms, the
// coefficient either a number or a [re, im] pair.
HochschildChain parse_chain_literal(const std::string& json_text);

RunConfig default_config();
RunConfig load_config(const std::string& path);

// Full consistency pass; throws std::invalid_argument with a diagnostic.
void validate_config(const RunConfig& cfg);

// Selected cycle resolved against the registry; throws when the name is
// unknown or the degree does not match the model.
const HochschildChain& selected_cycle(const RunConfig& cfg);

}  // namespace nclab
