// packcert: runs verification stages and writes the proof certificate.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "packcert/pipeline.hpp"

namespace {

using namespace packcert;

struct Flags {
  std::string config_path;
  std::string report_path;
  std::optional<double> epsilon;
  std::optional<int> jobs;
  std::optional<int> max_depth;
  std::optional<int> k_max;
  std::optional<int> precision_bits;
  bool caps = false;
};

RunConfig load_config(const Flags& f, std::string_view subcommand) {
  RunConfig config;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot read " + f.config_path);
    try {
      config = config_from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
      throw ConfigError(f.config_path + ": " + e.what());
    }
  }
  config.stages = stages_for(subcommand);
  if (f.epsilon) config.epsilon = *f.epsilon;
  if (f.jobs) config.jobs = *f.jobs;
  if (f.max_depth) config.max_depth = *f.max_depth;
  if (f.k_max) config.k_max_override = *f.k_max;
  if (f.precision_bits) config.precision_bits = *f.precision_bits;
  if (f.caps) config.params.caps = true;
  return config;
}

void print_summary(const VerificationReport& r) {
  auto line = [](const char* stage, const auto& rec) {
    if (rec) std::cout << stage << ": " << (rec->verdict.pass ? "PASS" : "FAIL") << " (" << rec->verdict.detail << ")\n";
  };
  if (r.constants) {
    const auto& c = *r.constants;
    std::cout.precision(17);
    for (auto [name, x] : {std::pair{"r", c.r}, {"s", c.s}, {"delta", c.delta}, {"delta/pi", c.delta_over_pi}}) {
      std::cout << "  " << name << " = [" << to_hex(x.lo()) << ", " << to_hex(x.hi()) << "] ~ " << x.mid() << '\n';
    }
  }
  line("constants", r.constants);
  if (r.potentials && r.potentials->caps) {
    for (auto q : kAllSizes) std::cout << "  Z_" << tag(q) << " = " << (*r.potentials->caps)[index_of(q)] << '\n';
  }
  line("potentials", r.potentials);
  if (r.corona) {
    for (const auto& b : r.corona->bounds) {
      std::cout << "  m_" << tag(b.center) << " >= " << b.bound << " via " << b.argmax << '\n';
    }
  }
  line("corona", r.corona);
  if (r.tight && r.tight->max_eps) std::cout << "  max eps in " << *r.tight->max_eps << '\n';
  line("tight", r.tight);
  line("prove", r.prove);
  std::cout << "verdict: " << to_string(r.verdict) << '\n';
  for (const auto& reason : r.reasons) std::cout << "  " << reason << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified verification of the ternary circle packing density bound"};
  app.require_subcommand(1, 1);
  Flags flags;
  for (const char* name : {"constants", "potentials", "corona", "tight", "prove", "all"}) {
    const std::string what = name == std::string("all") ? "run every stage" : std::string("run the ") + name + " stage and its prerequisites";
    auto* sub = app.add_subcommand(name, what);
    sub->add_option("--config", flags.config_path, "JSON configuration file");
    sub->add_option("--report", flags.report_path, "write the certificate here");
    sub->add_option("--epsilon", flags.epsilon, "eps-tight threshold");
    sub->add_option("--jobs", flags.jobs, "worker threads, 0 for all");
    sub->add_option("--max-depth", flags.max_depth, "dichotomy depth guard");
    sub->add_option("--k-max", flags.k_max, "override the corona size bound");
    sub->add_option("--precision-bits", flags.precision_bits, "53 or 64");
    sub->add_flag("--caps", flags.caps, "cap vertex potentials at Z_q");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const auto subcommand = app.get_subcommands().front()->get_name();
    const auto report = run(load_config(flags, subcommand));
    print_summary(report);
    if (!flags.report_path.empty()) {
      std::ofstream out(flags.report_path);
      out << serialize(report);
      if (!out) throw ConfigError("cannot write " + flags.report_path);
    }
    return report.verdict == Overall::Pass ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
