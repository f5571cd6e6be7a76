#include "nclab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nclab/models.hpp"
#include "nclab/singular_trace.hpp"

namespace nclab {

namespace {

using nlohmann::json;

Complex parse_coefficient(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("chain coefficient must be a number or a [re, im] pair");
}

HochschildChain parse_chain(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("chain literal must be a non-empty array of terms");
  std::vector<ChainTerm> terms;
  int degree = -1;
  for (const json& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[1].is_array())
      throw std::invalid_argument("chain term must be [coefficient, [word, ...]]");
    ChainTerm term;
    term.coefficient = parse_coefficient(t[0]);
    for (const json& w : t[1]) {
      if (!w.is_string()) throw std::invalid_argument("chain words must be strings");
      term.factors.push_back(w.get<std::string>());
    }
    if (term.factors.empty()) throw std::invalid_argument("chain terms need at least one word");
    const int d = static_cast<int>(term.factors.size()) - 1;
    if (degree < 0) degree = d;
    if (d != degree) throw std::invalid_argument("all chain terms must have the same degree");
    terms.push_back(std::move(term));
  }
  return HochschildChain(degree, std::move(terms));
}

void expect_object(const json& j, const std::string& key) {
  if (!j.is_object())
    throw std::invalid_argument("config section '" + key + "' must be an object");
}

}  // namespace

const std::map<std::string, HochschildChain>& registered_cycles() {
  static const std::map<std::string, HochschildChain> table = [] {
    std::map<std::string, HochschildChain> m;
    m.emplace("winding", HochschildChain(1, {{Complex(1.0, 0.0), {"u*", "u"}}}));
    m.emplace("winding2", HochschildChain(1, {{Complex(1.0, 0.0), {"u*u*", "uu"}}}));
    m.emplace("fundamental",
              HochschildChain(2, {{Complex(1.0, 0.0), {"u*v*", "u", "v"}},
                                  {Complex(-1.0, 0.0), {"u*v*", "v", "u"}}}));
    return m;
  }();
  return table;
}

std::string default_cycle_for(const std::string& model_name) {
  if (model_name == "circle") return "winding";
  if (model_name == "torus2") return "fundamental";
  throw std::invalid_argument("no default cycle for model '" + model_name + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"exact",   "regulator", "scaling",
                                                 "dixmier", "pairing",   "appendix"};
  return names;
}

HochschildChain parse_chain_literal(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("chain literal is not valid JSON: ") + e.what());
  }
  return parse_chain(j);
}

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  expect_object(j, path);

  RunConfig cfg;
  if (j.contains("model")) {
    const json& m = j["model"];
    expect_object(m, "model");
    if (m.contains("name")) cfg.model.name = m["name"].get<std::string>();
    const bool has_n = m.contains("N");
    const bool has_sweep = m.contains("N_sweep");
    if (has_n && has_sweep)
      throw std::invalid_argument("give model.N or model.N_sweep, not both");
    if (has_n) cfg.model.sizes = {m["N"].get<int>()};
    if (has_sweep) cfg.model.sizes = m["N_sweep"].get<std::vector<int>>();
    if (m.contains("p")) cfg.model.summability = m["p"].get<int>();
    if (m.contains("m")) cfg.model.mass = m["m"].get<double>();
  }
  if (j.contains("suites")) cfg.suites = j["suites"].get<std::vector<std::string>>();
  if (j.contains("trace")) {
    const json& t = j["trace"];
    expect_object(t, "trace");
    if (t.contains("profiles")) cfg.trace.profiles = t["profiles"].get<std::vector<std::string>>();
    if (t.contains("window")) {
      const json& w = t["window"];
      if (!w.is_array() || w.size() != 2)
        throw std::invalid_argument("trace.window must be [lo, hi]");
      cfg.trace.window_lo = w[0].get<double>();
      cfg.trace.window_hi = w[1].get<double>();
    }
  }
  if (j.contains("regulator")) {
    const json& r = j["regulator"];
    expect_object(r, "regulator");
    if (r.contains("t_min_factor")) cfg.regulator.t_min_factor = r["t_min_factor"].get<double>();
    if (r.contains("t_max")) cfg.regulator.t_max = r["t_max"].get<double>();
    if (r.contains("tail")) {
      const json& tail = r["tail"];
      expect_object(tail, "regulator.tail");
      if (!tail.contains("k") || !tail.contains("l"))
        throw std::invalid_argument("regulator.tail needs both k and l");
      cfg.regulator.tail_k = tail["k"].get<double>();
      cfg.regulator.tail_l = tail["l"].get<int>();
    }
  }
  if (j.contains("cycles")) {
    const json& c = j["cycles"];
    expect_object(c, "cycles");
    for (const auto& [name, literal] : c.items()) {
      if (name.empty()) throw std::invalid_argument("cycle names must be non-empty");
      cfg.cycles.insert_or_assign(name, parse_chain(literal));
    }
  }
  if (j.contains("cycle")) cfg.cycle = j["cycle"].get<std::string>();
  if (j.contains("output")) {
    const json& o = j["output"];
    expect_object(o, "output");
    if (o.contains("format")) cfg.output.format = o["format"].get<std::string>();
    if (o.contains("path")) cfg.output.path = o["path"].get<std::string>();
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  const auto& models = model_names();
  if (std::find(models.begin(), models.end(), cfg.model.name) == models.end()) {
    std::ostringstream os;
    os << "unknown model '" << cfg.model.name << "'; known:";
    for (const auto& n : models) os << ' ' << n;
    throw std::invalid_argument(os.str());
  }
  if (cfg.model.sizes.empty()) throw std::invalid_argument("model needs N or N_sweep");
  for (std::size_t i = 0; i < cfg.model.sizes.size(); ++i) {
    if (cfg.model.sizes[i] < 8)
      throw std::invalid_argument("truncation sizes must be at least 8");
    if (i > 0 && cfg.model.sizes[i] <= cfg.model.sizes[i - 1])
      throw std::invalid_argument("N_sweep must be strictly increasing");
  }
  if (cfg.model.summability != 0) {
    const int actual = build_model(cfg.model.name, 8).summability();
    if (cfg.model.summability != actual) {
      std::ostringstream os;
      os << "model '" << cfg.model.name << "' has summability exponent " << actual
         << ", config asked for " << cfg.model.summability;
      throw std::invalid_argument(os.str());
    }
  }
  if (!(cfg.model.mass > 0.0)) throw std::invalid_argument("doubling mass must be positive");

  if (cfg.suites.empty()) throw std::invalid_argument("suites must be non-empty");
  const auto& known = suite_names();
  for (const auto& s : cfg.suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      std::ostringstream os;
      os << "unknown suite '" << s << "'; known:";
      for (const auto& n : known) os << ' ' << n;
      throw std::invalid_argument(os.str());
    }
  }

  for (const auto& p : cfg.trace.profiles) {
    const auto& profiles = standard_profiles();
    const bool ok = std::any_of(profiles.begin(), profiles.end(),
                                [&](const WeightProfile& w) { return w.name == p; });
    if (!ok) throw std::invalid_argument("unknown trace profile '" + p + "'");
  }
  const bool has_window = cfg.trace.window_lo != 0.0 || cfg.trace.window_hi != 0.0;
  if (has_window && !(0.0 < cfg.trace.window_lo && cfg.trace.window_lo < cfg.trace.window_hi))
    throw std::invalid_argument("trace.window must satisfy 0 < lo < hi");

  if (!(cfg.regulator.t_min_factor > 0.0))
    throw std::invalid_argument("regulator.t_min_factor must be positive");
  if (!(cfg.regulator.t_max > 0.0))
    throw std::invalid_argument("regulator.t_max must be positive");
  if ((cfg.regulator.tail_k != 0.0) != (cfg.regulator.tail_l != 0))
    throw std::invalid_argument("regulator.tail needs both k and l");
  if (cfg.regulator.tail_k < 0.0 || cfg.regulator.tail_l < 0)
    throw std::invalid_argument("regulator.tail values must be positive");

  if (cfg.output.format != "json" && cfg.output.format != "csv")
    throw std::invalid_argument("output.format must be json or csv");

  if (!cfg.cycle.empty()) selected_cycle(cfg);
}

const HochschildChain& selected_cycle(const RunConfig& cfg) {
  const std::string name = cfg.cycle.empty() ? default_cycle_for(cfg.model.name) : cfg.cycle;
  const auto local = cfg.cycles.find(name);
  if (local != cfg.cycles.end()) return local->second;
  const auto& builtin = registered_cycles();
  const auto reg = builtin.find(name);
  if (reg != builtin.end()) return reg->second;

  std::ostringstream os;
  os << "unknown cycle '" << name << "'; known:";
  for (const auto& [n, c] : builtin) os << ' ' << n;
  for (const auto& [n, c] : cfg.cycles) os << ' ' << n;
  throw std::invalid_argument(os.str());
}

}  // namespace nclab
