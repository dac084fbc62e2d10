#pragma once

// Run configuration and the proof certificate, with their JSON forms.
// Reals are written as hexadecimal floating literals so that a certificate
// parses back to the same bits and re-serializes to the same bytes.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "packcert/error.hpp"
#include "packcert/interval.hpp"
#include "packcert/potentials.hpp"
#include "packcert/prover.hpp"

namespace packcert {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "packcert 1.0.0";

enum class Stage { Constants, Potentials, Corona, Tight, Prove };

inline constexpr std::array<Stage, 5> kAllStages{Stage::Constants, Stage::Potentials, Stage::Corona, Stage::Tight,
                                                 Stage::Prove};

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::Constants: return "constants";
    case Stage::Potentials: return "potentials";
    case Stage::Corona: return "corona";
    case Stage::Tight: return "tight";
    case Stage::Prove: return "prove";
  }
  return "?";
}

inline Stage stage_from_string(std::string_view name) {
  for (auto s : kAllStages)
    if (name == to_string(s)) return s;
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

struct RunConfig {
  int precision_bits = 53;
  double epsilon = 0.056;
  PotentialParams params;
  std::optional<int> k_max_override;
  int jobs = 0;
  int max_depth = 40;
  std::vector<Stage> stages{kAllStages.begin(), kAllStages.end()};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// ---- JSON helpers

inline Json real_to_json(double x) { return to_hex(x); }

/// Accepts a JSON number or a string holding a hexadecimal or decimal literal.
inline double real_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    try {
      if (text.find("0x") != std::string::npos || text.find("0X") != std::string::npos || text == "inf" ||
          text == "-inf") {
        return from_hex<double>(text);
      }
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("'" + what + "' must be a real number");
}

inline Json interval_to_json(const Interval& x) { return Json{{"lo", to_hex(x.lo())}, {"hi", to_hex(x.hi())}}; }

inline Interval interval_from_json(const Json& j) {
  return {from_hex<double>(j.at("lo").get<std::string>()), from_hex<double>(j.at("hi").get<std::string>())};
}

template <std::floating_point F>
Interval to_record(const BasicInterval<F>& x) {
  return convert<double>(x);
}

inline std::string size_key(CircleSize c) { return std::string(1, tag(c)); }

// ---- configuration

inline Json config_to_json(const RunConfig& c) {
  Json j;
  j["precision_bits"] = c.precision_bits;
  j["epsilon"] = real_to_json(c.epsilon);
  Json m, l, q;
  for (auto s : kAllSizes) m[size_key(s)] = real_to_json(c.params.m[index_of(s)]);
  for (auto p : kAllPairs) {
    l[p.name()] = real_to_json(c.params.l[p.index()]);
    q[p.name()] = real_to_json(c.params.q[p.index()]);
  }
  j["m"] = m;
  j["l"] = l;
  j["q"] = q;
  j["caps"] = c.params.caps;
  j["k_max"] = c.k_max_override ? Json(*c.k_max_override) : Json(nullptr);
  j["jobs"] = c.jobs;
  j["max_depth"] = c.max_depth;
  Json stages = Json::array();
  for (auto s : c.stages) stages.push_back(to_string(s));
  j["stages"] = stages;
  return j;
}

/// Missing keys keep their defaults.
inline RunConfig config_from_json(const Json& j, RunConfig c = {}) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::array<const char*, 10> known{"precision_bits", "epsilon", "m",        "l",         "q",
                                                 "caps",           "k_max",   "jobs",     "max_depth", "stages"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  try {
    if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<int>();
    if (j.contains("epsilon")) c.epsilon = real_from_json(j.at("epsilon"), "epsilon");
    if (j.contains("m")) {
      for (const auto& [key, value] : j.at("m").items()) {
        if (key.size() != 1) throw ConfigError("m keys are single size tags");
        c.params.m[index_of(size_from_tag(key[0]))] = real_from_json(value, "m." + key);
      }
    }
    for (const char* table : {"l", "q"}) {
      if (!j.contains(table)) continue;
      auto& target = std::string(table) == "l" ? c.params.l : c.params.q;
      for (const auto& [key, value] : j.at(table).items()) {
        target[pair_from_name(key).index()] = real_from_json(value, std::string(table) + "." + key);
      }
    }
    if (j.contains("caps")) c.params.caps = j.at("caps").get<bool>();
    if (j.contains("k_max")) {
      const auto& k = j.at("k_max");
      c.k_max_override = k.is_null() ? std::nullopt : std::optional<int>(k.get<int>());
    }
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
    if (j.contains("max_depth")) c.max_depth = j.at("max_depth").get<int>();
    if (j.contains("stages")) {
      c.stages.clear();
      for (const auto& s : j.at("stages")) c.stages.push_back(stage_from_string(s.get<std::string>()));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

/// Rejects values that no stage can run with.
inline void validate(const RunConfig& c) {
  if (c.precision_bits != 53 && c.precision_bits != 64) throw ConfigError("precision_bits must be 53 or 64");
  if (!(c.epsilon > 0) || !std::isfinite(c.epsilon)) throw ConfigError("epsilon must be positive");
  for (double m : c.params.m)
    if (!(m >= 0)) throw ConfigError("m values must be nonnegative");
  for (double l : c.params.l)
    if (!(l >= 0)) throw ConfigError("l values must be nonnegative");
  for (double q : c.params.q)
    if (!(q >= 0)) throw ConfigError("q values must be nonnegative");
  if (c.k_max_override && *c.k_max_override < 3) throw ConfigError("k_max must be at least 3");
  if (c.jobs < 0) throw ConfigError("jobs must be nonnegative");
  if (c.max_depth < 0 || c.max_depth > 40) throw ConfigError("max_depth must lie in [0, 40]");
}

// ---- certificate

struct StageVerdict {
  bool pass = false;
  std::string detail;

  friend bool operator==(const StageVerdict&, const StageVerdict&) = default;
};

struct ConstantsRecord {
  StageVerdict verdict;
  Interval r, s, delta, delta_over_pi;
  bool above_hexagonal = false;
  StageVerdict density_polynomial;

  friend bool operator==(const ConstantsRecord&, const ConstantsRecord&) = default;
};

struct NamedInterval {
  std::string name;
  Interval value;

  friend bool operator==(const NamedInterval&, const NamedInterval&) = default;
};

struct PotentialsRecord {
  StageVerdict verdict;
  std::vector<NamedInterval> v;          // "V1rs" style names, centre in the middle
  std::vector<NamedInterval> residuals;  // the 19 defining equations
  Interval zero_sum;
  std::optional<std::array<Interval, 3>> caps;

  friend bool operator==(const PotentialsRecord&, const PotentialsRecord&) = default;
};

struct MBoundRecord {
  CircleSize center = CircleSize::One;
  Interval bound;
  std::string argmax;
  long long coronas = 0;
  int precision_bits = 53;
  double m = 0;
  bool pass = false;

  friend bool operator==(const MBoundRecord&, const MBoundRecord&) = default;
};

struct FlatRecord {
  std::string corona;
  Interval numerator;
  std::string kind;  // "construction" or "equilateral" or "unexpected"

  friend bool operator==(const FlatRecord&, const FlatRecord&) = default;
};

struct CoronaRecord {
  StageVerdict verdict;
  int k_max_certified = 0;
  int k_max_used = 0;
  std::vector<MBoundRecord> bounds;
  std::vector<FlatRecord> flats;
  StageVerdict flat_verdict;

  friend bool operator==(const CoronaRecord&, const CoronaRecord&) = default;
};

struct MarginRecord {
  std::string cls;
  std::array<double, 3> margins{};

  friend bool operator==(const MarginRecord&, const MarginRecord&) = default;
};

struct TightRecord {
  StageVerdict verdict;
  double epsilon = 0;
  std::vector<MarginRecord> classes;
  std::optional<Interval> max_eps;

  friend bool operator==(const TightRecord&, const TightRecord&) = default;
};

struct BoxRecord {
  std::string cls;
  std::array<Interval, 3> lengths;
  int depth = 0;

  friend bool operator==(const BoxRecord&, const BoxRecord&) = default;
};

struct ProveRecord {
  StageVerdict verdict;
  std::array<ClassStats, 10> per_class{};
  ClassStats total;
  std::optional<BoxRecord> counterexample;
  std::optional<BoxRecord> undecided;

  friend bool operator==(const ProveRecord&, const ProveRecord&) = default;
};

enum class Overall { Pass, Fail, Incomplete };

inline const char* to_string(Overall o) {
  switch (o) {
    case Overall::Pass: return "PASS";
    case Overall::Fail: return "FAIL";
    case Overall::Incomplete: return "INCOMPLETE";
  }
  return "?";
}

struct Runtime {
  int jobs = 0;
  std::vector<std::pair<std::string, double>> seconds;

  friend bool operator==(const Runtime&, const Runtime&) = default;
};

struct VerificationReport {
  int schema = kSchemaVersion;
  std::string tool = kToolVersion;
  RunConfig config;
  std::optional<ConstantsRecord> constants;
  std::optional<PotentialsRecord> potentials;
  std::optional<CoronaRecord> corona;
  std::optional<TightRecord> tight;
  std::optional<ProveRecord> prove;
  Overall verdict = Overall::Incomplete;
  std::vector<std::string> reasons;
  Runtime runtime;  // excluded from reproducibility comparisons

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

// ---- record serialization

inline Json to_json(const StageVerdict& v) { return Json{{"verdict", v.pass ? "PASS" : "FAIL"}, {"detail", v.detail}}; }

inline StageVerdict stage_verdict_from_json(const Json& j) {
  return {j.at("verdict").get<std::string>() == "PASS", j.at("detail").get<std::string>()};
}

inline Json to_json(const ConstantsRecord& r) {
  Json j = to_json(r.verdict);
  j["r"] = interval_to_json(r.r);
  j["s"] = interval_to_json(r.s);
  j["delta"] = interval_to_json(r.delta);
  j["delta_over_pi"] = interval_to_json(r.delta_over_pi);
  j["above_hexagonal"] = r.above_hexagonal;
  j["density_polynomial"] = to_json(r.density_polynomial);
  return j;
}

inline ConstantsRecord constants_from_json(const Json& j) {
  ConstantsRecord r;
  r.verdict = stage_verdict_from_json(j);
  r.r = interval_from_json(j.at("r"));
  r.s = interval_from_json(j.at("s"));
  r.delta = interval_from_json(j.at("delta"));
  r.delta_over_pi = interval_from_json(j.at("delta_over_pi"));
  r.above_hexagonal = j.at("above_hexagonal").get<bool>();
  r.density_polynomial = stage_verdict_from_json(j.at("density_polynomial"));
  return r;
}

inline Json named_to_json(const std::vector<NamedInterval>& list) {
  Json j = Json::object();
  for (const auto& n : list) j[n.name] = interval_to_json(n.value);
  return j;
}

inline std::vector<NamedInterval> named_from_json(const Json& j) {
  std::vector<NamedInterval> out;
  for (const auto& [key, value] : j.items()) out.push_back({key, interval_from_json(value)});
  return out;
}

inline Json to_json(const PotentialsRecord& r) {
  Json j = to_json(r.verdict);
  j["V"] = named_to_json(r.v);
  j["residuals"] = named_to_json(r.residuals);
  j["zero_sum"] = interval_to_json(r.zero_sum);
  if (r.caps) {
    Json caps;
    for (auto s : kAllSizes) caps[size_key(s)] = interval_to_json((*r.caps)[index_of(s)]);
    j["caps"] = caps;
  } else {
    j["caps"] = nullptr;
  }
  return j;
}

inline PotentialsRecord potentials_from_json(const Json& j) {
  PotentialsRecord r;
  r.verdict = stage_verdict_from_json(j);
  r.v = named_from_json(j.at("V"));
  r.residuals = named_from_json(j.at("residuals"));
  r.zero_sum = interval_from_json(j.at("zero_sum"));
  if (!j.at("caps").is_null()) {
    std::array<Interval, 3> caps;
    for (auto s : kAllSizes) caps[index_of(s)] = interval_from_json(j.at("caps").at(size_key(s)));
    r.caps = caps;
  }
  return r;
}

inline Json to_json(const CoronaRecord& r) {
  Json j = to_json(r.verdict);
  j["k_max_certified"] = r.k_max_certified;
  j["k_max_used"] = r.k_max_used;
  Json bounds = Json::array();
  for (const auto& b : r.bounds) {
    bounds.push_back(Json{{"center", size_key(b.center)},
                          {"bound", interval_to_json(b.bound)},
                          {"argmax", b.argmax},
                          {"coronas", b.coronas},
                          {"precision_bits", b.precision_bits},
                          {"m", real_to_json(b.m)},
                          {"pass", b.pass}});
  }
  j["bounds"] = bounds;
  Json flats = Json::array();
  for (const auto& f : r.flats) {
    flats.push_back(Json{{"corona", f.corona}, {"numerator", interval_to_json(f.numerator)}, {"kind", f.kind}});
  }
  j["flats"] = flats;
  j["flat_coronas"] = to_json(r.flat_verdict);
  return j;
}

inline CoronaRecord corona_from_json(const Json& j) {
  CoronaRecord r;
  r.verdict = stage_verdict_from_json(j);
  r.k_max_certified = j.at("k_max_certified").get<int>();
  r.k_max_used = j.at("k_max_used").get<int>();
  for (const auto& b : j.at("bounds")) {
    MBoundRecord m;
    m.center = size_from_tag(b.at("center").get<std::string>().at(0));
    m.bound = interval_from_json(b.at("bound"));
    m.argmax = b.at("argmax").get<std::string>();
    m.coronas = b.at("coronas").get<long long>();
    m.precision_bits = b.at("precision_bits").get<int>();
    m.m = real_from_json(b.at("m"), "m");
    m.pass = b.at("pass").get<bool>();
    r.bounds.push_back(m);
  }
  for (const auto& f : j.at("flats")) {
    r.flats.push_back({f.at("corona").get<std::string>(), interval_from_json(f.at("numerator")),
                       f.at("kind").get<std::string>()});
  }
  r.flat_verdict = stage_verdict_from_json(j.at("flat_coronas"));
  return r;
}

inline Json to_json(const TightRecord& r) {
  Json j = to_json(r.verdict);
  j["epsilon"] = real_to_json(r.epsilon);
  Json classes = Json::array();
  for (const auto& c : r.classes) {
    Json margins = Json::array();
    for (double m : c.margins) margins.push_back(real_to_json(m));
    classes.push_back(Json{{"class", c.cls}, {"margins", margins}});
  }
  j["classes"] = classes;
  j["max_eps"] = r.max_eps ? interval_to_json(*r.max_eps) : Json(nullptr);
  return j;
}

inline TightRecord tight_from_json(const Json& j) {
  TightRecord r;
  r.verdict = stage_verdict_from_json(j);
  r.epsilon = real_from_json(j.at("epsilon"), "epsilon");
  for (const auto& c : j.at("classes")) {
    MarginRecord m;
    m.cls = c.at("class").get<std::string>();
    for (std::size_t i = 0; i < 3; ++i) m.margins[i] = real_from_json(c.at("margins").at(i), "margin");
    r.classes.push_back(m);
  }
  if (!j.at("max_eps").is_null()) r.max_eps = interval_from_json(j.at("max_eps"));
  return r;
}

inline Json to_json(const ClassStats& s) {
  return Json{{"boxes_examined", s.boxes_examined}, {"verified", s.verified},
              {"infeasible", s.infeasible},         {"tight_covered", s.tight_covered},
              {"split", s.split},                   {"counterexamples", s.counterexamples},
              {"undecided", s.undecided},           {"max_depth_seen", s.max_depth_seen}};
}

inline ClassStats class_stats_from_json(const Json& j) {
  ClassStats s;
  s.boxes_examined = j.at("boxes_examined").get<long long>();
  s.verified = j.at("verified").get<long long>();
  s.infeasible = j.at("infeasible").get<long long>();
  s.tight_covered = j.at("tight_covered").get<long long>();
  s.split = j.at("split").get<long long>();
  s.counterexamples = j.at("counterexamples").get<long long>();
  s.undecided = j.at("undecided").get<long long>();
  s.max_depth_seen = j.at("max_depth_seen").get<int>();
  return s;
}

inline BoxRecord to_record(const Box& b) {
  return {b.cls().name(), b.lengths, b.depth};
}

inline Json to_json(const BoxRecord& b) {
  Json lengths = Json::array();
  for (const auto& x : b.lengths) lengths.push_back(interval_to_json(x));
  return Json{{"class", b.cls}, {"lengths", lengths}, {"depth", b.depth}};
}

inline BoxRecord box_from_json(const Json& j) {
  BoxRecord b;
  b.cls = j.at("class").get<std::string>();
  for (std::size_t i = 0; i < 3; ++i) b.lengths[i] = interval_from_json(j.at("lengths").at(i));
  b.depth = j.at("depth").get<int>();
  return b;
}

inline Json to_json(const ProveRecord& r) {
  Json j = to_json(r.verdict);
  Json classes = Json::array();
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    Json entry{{"class", kAllClasses[c].name()}};
    entry.update(to_json(r.per_class[c]));
    classes.push_back(entry);
  }
  j["classes"] = classes;
  j["total"] = to_json(r.total);
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : Json(nullptr);
  j["undecided"] = r.undecided ? to_json(*r.undecided) : Json(nullptr);
  return j;
}

inline ProveRecord prove_from_json(const Json& j) {
  ProveRecord r;
  r.verdict = stage_verdict_from_json(j);
  const auto& classes = j.at("classes");
  if (classes.size() != r.per_class.size()) throw ConfigError("prove record must list ten classes");
  for (std::size_t c = 0; c < r.per_class.size(); ++c) r.per_class[c] = class_stats_from_json(classes.at(c));
  r.total = class_stats_from_json(j.at("total"));
  if (!j.at("counterexample").is_null()) r.counterexample = box_from_json(j.at("counterexample"));
  if (!j.at("undecided").is_null()) r.undecided = box_from_json(j.at("undecided"));
  return r;
}

/// The certificate without its runtime section.
inline Json reproducible_json(const VerificationReport& r) {
  Json j;
  j["schema"] = r.schema;
  j["tool"] = r.tool;
  j["config"] = config_to_json(r.config);
  Json stages = Json::object();
  if (r.constants) stages["constants"] = to_json(*r.constants);
  if (r.potentials) stages["potentials"] = to_json(*r.potentials);
  if (r.corona) stages["corona"] = to_json(*r.corona);
  if (r.tight) stages["tight"] = to_json(*r.tight);
  if (r.prove) stages["prove"] = to_json(*r.prove);
  j["stages"] = stages;
  j["verdict"] = to_string(r.verdict);
  j["reasons"] = r.reasons;
  return j;
}

inline Json to_json(const VerificationReport& r) {
  Json j = reproducible_json(r);
  Json seconds = Json::object();
  for (const auto& [stage, t] : r.runtime.seconds) seconds[stage] = t;
  j["runtime"] = Json{{"jobs", r.runtime.jobs}, {"seconds", seconds}};
  return j;
}

inline std::string serialize(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

inline VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  try {
    r.schema = j.at("schema").get<int>();
    if (r.schema != kSchemaVersion) throw ConfigError("unsupported certificate schema " + std::to_string(r.schema));
    r.tool = j.at("tool").get<std::string>();
    r.config = config_from_json(j.at("config"));
    const auto& stages = j.at("stages");
    if (stages.contains("constants")) r.constants = constants_from_json(stages.at("constants"));
    if (stages.contains("potentials")) r.potentials = potentials_from_json(stages.at("potentials"));
    if (stages.contains("corona")) r.corona = corona_from_json(stages.at("corona"));
    if (stages.contains("tight")) r.tight = tight_from_json(stages.at("tight"));
    if (stages.contains("prove")) r.prove = prove_from_json(stages.at("prove"));
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict == "PASS") {
      r.verdict = Overall::Pass;
    } else if (verdict == "FAIL") {
      r.verdict = Overall::Fail;
    } else if (verdict == "INCOMPLETE") {
      r.verdict = Overall::Incomplete;
    } else {
      throw ConfigError("unknown verdict '" + verdict + "'");
    }
    r.reasons = j.at("reasons").get<std::vector<std::string>>();
    const auto& runtime = j.at("runtime");
    r.runtime.jobs = runtime.at("jobs").get<int>();
    for (const auto& [stage, t] : runtime.at("seconds").items()) r.runtime.seconds.emplace_back(stage, t.get<double>());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed certificate: ") + e.what());
  }
  return r;
}

inline VerificationReport parse_report(const std::string& text) { return report_from_json(Json::parse(text)); }

}  // namespace packcert
