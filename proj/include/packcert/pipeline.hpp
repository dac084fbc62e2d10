#pragma once

// Stage orchestration: runs the requested stages in dependency order and
// assembles the certificate.

#include <chrono>
#include <set>
#include <sstream>

#include "packcert/corona.hpp"
#include "packcert/report.hpp"
#include "packcert/tightcheck.hpp"

namespace packcert {

/// Corona bounds wider than this are recomputed in long double.
inline constexpr double kCoronaWidthGoal = 1e-12;

/// Everything computed once and shared by the stages, at both precisions.
struct Workspace {
  Constants<double> narrow;
  Constants<long double> wide;
  std::optional<SolvedTable<double>> narrow_table;
  std::optional<SolvedTable<long double>> wide_table;
};

namespace detail {

template <std::floating_point F>
PotentialTable<F> finish_table(SolvedTable<F> solved, const Constants<F>& c, bool caps) {
  if (caps) solved.table.caps = compute_caps(solved.table, c);
  return solved.table;
}

inline std::string describe(const Box& b) {
  std::ostringstream os;
  os << b.cls().name() << " depth " << b.depth << " lengths";
  for (const auto& x : b.lengths) os << ' ' << x;
  return os.str();
}

}  // namespace detail

inline ConstantsRecord run_constants_stage(const RunConfig& config, Workspace& ws) {
  ws.narrow = compute_constants<double>();
  ws.wide = compute_constants<long double>();
  ConstantsRecord rec;
  auto fill = [&](const auto& c) {
    using F = std::remove_cvref_t<decltype(c.delta.lo())>;
    rec.r = to_record(c.radii.r);
    rec.s = to_record(c.radii.s);
    rec.delta = to_record(c.delta);
    rec.delta_over_pi = to_record(c.delta / pi<F>());
    rec.above_hexagonal = c.delta.lo() > (pi<F>() / sqrt(BasicInterval<F>(F(12)))).hi();
    const auto v = verify_density_polynomial(c.delta);
    rec.density_polynomial = {v.pass, v.detail};
  };
  if (config.precision_bits == 64) {
    fill(ws.wide);
  } else {
    fill(ws.narrow);
  }
  std::ostringstream why;
  if (!rec.above_hexagonal) why << "delta not certainly above pi/sqrt(12); ";
  if (!rec.density_polynomial.pass) why << "density polynomial: " << rec.density_polynomial.detail;
  rec.verdict = why.str().empty() ? StageVerdict{true, "r, s and delta certified"} : StageVerdict{false, why.str()};
  return rec;
}

inline PotentialsRecord run_potentials_stage(const RunConfig& config, Workspace& ws) {
  PotentialsRecord rec;
  try {
    ws.narrow_table = solve_v_table(ws.narrow, config.params);
    ws.wide_table = solve_v_table(ws.wide, config.params);
  } catch (const InconsistentSystem& e) {
    rec.verdict = {false, std::string("InconsistentSystem: ") + e.what()};
    ws.narrow_table.reset();
    ws.wide_table.reset();
    return rec;
  }
  auto fill = [&](const auto& solved, const auto& constants) {
    const auto& t = solved.table;
    for (auto q : kAllSizes) {
      for (auto p : kAllPairs) {
        rec.v.push_back({std::string("V") + tag(p.a) + tag(q) + tag(p.b), to_record(t.v(p.a, q, p.b))});
      }
    }
    for (const auto& e : solved.equations) rec.residuals.push_back({e.name, to_record(e.residual)});
    rec.zero_sum = to_record(solved.zero_sum);
    if (config.params.caps) {
      const auto caps = compute_caps(t, constants);
      rec.caps = std::array<Interval, 3>{to_record(caps[0]), to_record(caps[1]), to_record(caps[2])};
    }
  };
  if (config.precision_bits == 64) {
    fill(*ws.wide_table, ws.wide);
  } else {
    fill(*ws.narrow_table, ws.narrow);
  }
  std::ostringstream why;
  for (const auto& r : rec.residuals) {
    if (!r.value.contains_zero()) why << "residual of '" << r.name << "' excludes 0; ";
  }
  for (auto q : kAllSizes) {
    for (auto a : kAllSizes) {
      if (a == q) continue;
      const auto& v = ws.narrow_table->table.v(a, q, a);
      if (v.lo() != 0 || v.hi() != 0) why << "apex V" << tag(a) << tag(q) << tag(a) << " is not exactly 0; ";
    }
  }
  if (!rec.zero_sum.contains_zero()) why << "zero-sum identity excludes 0; ";
  rec.verdict = why.str().empty() ? StageVerdict{true, "19 equations hold"} : StageVerdict{false, why.str()};
  return rec;
}

inline CoronaRecord run_corona_stage(const RunConfig& config, const Workspace& ws) {
  CoronaRecord rec;
  const auto& table = ws.narrow_table->table;
  const auto& wide_table = ws.wide_table->table;
  try {
    rec.k_max_certified = k_max(ws.narrow.radii.s);
  } catch (const IndeterminateFloor&) {
    rec.k_max_certified = k_max(ws.wide.radii.s);
  }
  rec.k_max_used = config.k_max_override.value_or(rec.k_max_certified);

  std::ostringstream why;
  if (rec.k_max_used < rec.k_max_certified) {
    why << "k_max " << rec.k_max_used << " is below the certified " << rec.k_max_certified << " (non-proving run); ";
  }
  std::vector<FlatCorona<double>> all_flats;
  try {
    for (auto q : kAllSizes) {
      MBoundRecord b;
      b.center = q;
      b.m = config.params.m[index_of(q)];
      auto record = [&](const auto& search, int bits) {
        b.bound = to_record(search.bound);
        b.argmax = search.argmax ? search.argmax->name() : "";
        b.coronas = search.coronas;
        b.precision_bits = bits;
      };
      std::vector<FlatCorona<double>> flats;
      auto keep_flats = [&](const auto& search) {
        flats.clear();
        for (const auto& f : search.flats) flats.push_back({f.corona, to_record(f.numerator), f.whitelisted});
      };
      bool wide = config.precision_bits == 64;
      if (!wide) {
        const auto search = search_m(table, ws.narrow.radii, q, rec.k_max_used, &wide_table, &ws.wide.radii);
        record(search, 53);
        keep_flats(search);
        wide = search.bound.width() > kCoronaWidthGoal;
      }
      if (wide) {
        const auto search = search_m(wide_table, ws.wide.radii, q, rec.k_max_used, &wide_table, &ws.wide.radii);
        record(search, 64);
        keep_flats(search);
      }
      b.pass = b.bound.hi() <= b.m;
      if (!b.pass) {
        why << "m_" << tag(q) << " = " << b.m << " is below the required " << b.bound.hi() << " (corona " << b.argmax
            << "); ";
      }
      all_flats.insert(all_flats.end(), flats.begin(), flats.end());
      rec.bounds.push_back(b);
    }
  } catch (const FlatCoronaUnresolved& e) {
    why << "FlatCoronaUnresolved: " << e.what() << "; ";
  }
  for (const auto& f : all_flats) {
    const char* kind = f.whitelisted ? "construction" : equilateral_corona(f.corona) ? "equilateral" : "unexpected";
    rec.flats.push_back({f.corona.name(), f.numerator, kind});
  }
  const auto flat = verify_flat_coronas(all_flats);
  rec.flat_verdict = {flat.pass, flat.detail};
  if (!flat.pass) why << flat.detail;
  rec.verdict = why.str().empty() ? StageVerdict{true, "every m_q dominates its corona bound"}
                                  : StageVerdict{false, why.str()};
  return rec;
}

inline TightRecord run_tight_stage(const RunConfig& config, const Workspace& ws) {
  TightRecord rec;
  rec.epsilon = config.epsilon;
  auto body = [&](const auto& table, const auto& constants) {
    using F = std::remove_cvref_t<decltype(constants.delta.lo())>;
    const auto check = verify_eps(table, constants, F(config.epsilon));
    for (const auto& c : check.classes) {
      MarginRecord m;
      m.cls = c.cls.name();
      for (int i = 0; i < 3; ++i) m.margins[static_cast<std::size_t>(i)] = static_cast<double>(c.margin[i]);
      rec.classes.push_back(m);
    }
    rec.max_eps = to_record(max_eps(table, constants));
    rec.verdict = {check.verdict.pass, check.verdict.detail};
  };
  try {
    if (config.precision_bits == 64) {
      body(ws.wide_table->table, ws.wide);
    } else {
      body(ws.narrow_table->table, ws.narrow);
    }
  } catch (const ThresholdConflict& e) {
    rec.classes.clear();
    rec.max_eps.reset();
    rec.verdict = {false, std::string("ThresholdConflict: ") + e.what()};
  }
  return rec;
}

inline Models make_models(const RunConfig& config, const Workspace& ws) {
  Models models{{detail::finish_table(*ws.narrow_table, ws.narrow, config.params.caps), ws.narrow}, std::nullopt};
  models.wide = Model<long double>{detail::finish_table(*ws.wide_table, ws.wide, config.params.caps), ws.wide};
  return models;
}

inline ProveRecord run_prove_stage(const RunConfig& config, const Workspace& ws) {
  ProverConfig pc;
  pc.eps = config.epsilon;
  pc.max_depth = config.max_depth;
  pc.escalate_depth = std::min(pc.escalate_depth, config.max_depth);
  pc.jobs = config.jobs;
  const auto stats = prove_all(make_models(config, ws), pc);

  ProveRecord rec;
  rec.per_class = stats.per_class;
  rec.total = stats.total;
  if (stats.counterexample) rec.counterexample = to_record(*stats.counterexample);
  if (stats.undecided) rec.undecided = to_record(*stats.undecided);
  std::ostringstream why;
  if (stats.counterexample) why << "counterexample: " << detail::describe(*stats.counterexample) << "; ";
  if (stats.undecided) why << "undecided at max depth: " << detail::describe(*stats.undecided) << "; ";
  rec.verdict = stats.pass() ? StageVerdict{true, std::to_string(stats.total.boxes_examined) + " boxes examined"}
                             : StageVerdict{false, why.str()};
  return rec;
}

/// Overall verdict from the stage records present in the report.
inline void certify(VerificationReport& report) {
  report.reasons.clear();
  bool failed = false;
  auto check = [&](const auto& stage, Stage name) {
    if (stage && !stage->verdict.pass) {
      failed = true;
      report.reasons.push_back(std::string(to_string(name)) + ": " + stage->verdict.detail);
    }
  };
  check(report.constants, Stage::Constants);
  check(report.potentials, Stage::Potentials);
  check(report.corona, Stage::Corona);
  check(report.tight, Stage::Tight);
  check(report.prove, Stage::Prove);
  if (report.prove) {
    if (!report.corona) {
      failed = true;
      report.reasons.push_back("MissingPrerequisite: prove requires the corona stage");
    }
    if (!report.tight) {
      failed = true;
      report.reasons.push_back("MissingPrerequisite: prove requires the tight stage");
    }
  }
  const bool complete = report.constants && report.potentials && report.corona && report.tight && report.prove;
  if (failed) {
    report.verdict = Overall::Fail;
  } else if (complete) {
    report.verdict = Overall::Pass;
  } else {
    report.verdict = Overall::Incomplete;
    for (auto s : kAllStages) {
      const bool present = (s == Stage::Constants && report.constants) || (s == Stage::Potentials && report.potentials) ||
                           (s == Stage::Corona && report.corona) || (s == Stage::Tight && report.tight) ||
                           (s == Stage::Prove && report.prove);
      if (!present) report.reasons.push_back(std::string(to_string(s)) + ": not run");
    }
  }
}

/// Stages the requested ones depend on for data (constants and the table).
/// Corona and tight are not added for prove; certify flags their absence.
inline std::set<Stage> with_data_prerequisites(const std::vector<Stage>& requested) {
  std::set<Stage> out(requested.begin(), requested.end());
  for (auto s : requested) {
    if (s != Stage::Constants) out.insert(Stage::Constants);
    if (s == Stage::Corona || s == Stage::Tight || s == Stage::Prove) out.insert(Stage::Potentials);
  }
  return out;
}

/// The stage list behind each CLI subcommand.
inline std::vector<Stage> stages_for(std::string_view subcommand) {
  if (subcommand == "constants") return {Stage::Constants};
  if (subcommand == "potentials") return {Stage::Constants, Stage::Potentials};
  if (subcommand == "corona") return {Stage::Constants, Stage::Potentials, Stage::Corona};
  if (subcommand == "tight") return {Stage::Constants, Stage::Potentials, Stage::Tight};
  if (subcommand == "prove" || subcommand == "all") return {kAllStages.begin(), kAllStages.end()};
  throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");
}

inline VerificationReport run(const RunConfig& config) {
  validate(config);
  VerificationReport report;
  report.config = config;
  report.runtime.jobs = config.jobs;
  const auto stages = with_data_prerequisites(config.stages);

  Workspace ws;
  auto timed = [&](Stage s, auto&& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    report.runtime.seconds.emplace_back(
        to_string(s), std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };
  timed(Stage::Constants, [&] { report.constants = run_constants_stage(config, ws); });
  if (!stages.contains(Stage::Constants)) report.constants.reset();
  if (stages.contains(Stage::Potentials)) {
    timed(Stage::Potentials, [&] { report.potentials = run_potentials_stage(config, ws); });
  }
  const bool table_ok = ws.narrow_table.has_value();
  if (table_ok && stages.contains(Stage::Corona)) {
    timed(Stage::Corona, [&] { report.corona = run_corona_stage(config, ws); });
  }
  if (table_ok && stages.contains(Stage::Tight)) {
    timed(Stage::Tight, [&] { report.tight = run_tight_stage(config, ws); });
  }
  if (table_ok && stages.contains(Stage::Prove)) {
    timed(Stage::Prove, [&] { report.prove = run_prove_stage(config, ws); });
  }
  certify(report);
  return report;
}

}  // namespace packcert
