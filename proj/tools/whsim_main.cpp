#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "whsim/config.hpp"
#include "whsim/errors.hpp"
#include "whsim/harness.hpp"

using namespace whsim;

namespace {

struct Common {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<int> days;
  std::string out;
  int parallel = 1;
  bool csv = false;
  bool json = false;
  bool log = false;
  std::vector<std::string> only;
};

void add_run_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed for every scenario");
  cmd->add_option("--replications", c.replications, "Replications per scenario")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--days", c.days, "Simulated days after warm-up")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "Directory for CSV/JSON artifacts");
  cmd->add_option("--parallel", c.parallel, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--csv", c.csv, "Write CSV (default: CSV and JSON)");
  cmd->add_flag("--json", c.json, "Write JSON (default: CSV and JSON)");
  cmd->add_flag("--log", c.log, "Also write the per-replication event log");
}

std::vector<Scenario> select(const Bundle& b, const std::vector<std::string>& only) {
  if (only.empty()) return b.scenarios;
  std::vector<Scenario> out;
  for (const auto& name : only) {
    auto it = std::find_if(b.scenarios.begin(), b.scenarios.end(),
                           [&](const Scenario& s) { return s.name == name; });
    if (it == b.scenarios.end()) {
      throw ConfigError(fmt::format("no scenario named '{}' in {}", name, b.name));
    }
    out.push_back(*it);
  }
  return out;
}

std::vector<Scenario> prepare(const Common& c) {
  auto scenarios = select(load_scenarios(c.path), c.only);
  Overrides ov{c.seed, c.replications, c.days};
  for (auto& s : scenarios) ov.apply(s);
  return scenarios;
}

CompareOptions options(const Common& c) {
  CompareOptions o;
  o.parallel = c.parallel;
  o.out_dir = c.out;
  o.csv = c.csv || !c.json;
  o.json = c.json || !c.csv;
  o.run.record_log = c.log;
  return o;
}

int simulate(const Common& c) {
  const auto scenarios = prepare(c);
  if (scenarios.size() != 1) {
    throw ConfigError(fmt::format(
        "{} holds {} scenarios; pick one with --scenario or use 'compare'", c.path,
        scenarios.size()));
  }
  const auto opt = options(c);
  const auto o = run_one(scenarios.front(), opt);
  const std::vector<KpiReport> reports{o.report};
  write_comparison(reports, opt);
  std::cout << comparison_table(reports);
  for (const auto& r : o.results) {
    for (const auto& d : r.diagnostics) std::cerr << "rep " << r.replication << ": " << d << "\n";
  }
  return 0;
}

int compare(const Common& c) {
  const auto scenarios = prepare(c);
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_compare(scenarios, options(c));
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << comparison_table(res.reports());
  std::cerr << fmt::format("{} scenarios in {:.1f} s\n", scenarios.size(), dt);
  return 0;
}

int render(const Common& c) {
  const auto scenarios = prepare(c);
  if (scenarios.size() == 1 && !c.out.empty() && c.out.ends_with(".svg")) {
    render_layout(scenarios.front(), c.out);
    std::cout << c.out << "\n";
    return 0;
  }
  const std::string dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  for (const auto& s : scenarios) {
    const auto path = (std::filesystem::path(dir) / (s.name + ".svg")).string();
    render_layout(s, path);
    std::cout << path << "\n";
  }
  return 0;
}

int validate(const Common& c) {
  const auto scenarios = prepare(c);
  for (const auto& s : scenarios) {
    const Layout L = build_layout(s.variant, s.layout);
    std::cout << fmt::format(
        "{}: ok  layout={} policy={} slots={} area={:.0f} m2 P/E/S={}/{}/{}\n", s.name,
        to_string(s.variant), to_string(s.policy), L.slots.size(), compute_area(L),
        L.zone_count(Zone::P), L.zone_count(Zone::E), L.zone_count(Zone::S));
  }
  return 0;
}

int exit_code(const std::string& category) {
  if (category == "config") return 2;
  if (category == "io") return 3;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warehouse layout simulator"};
  app.require_subcommand(1);
  Common c;

  auto* sim = app.add_subcommand("simulate", "Run every replication of one scenario");
  auto* cmp = app.add_subcommand("compare", "Run a bundle of scenarios under common random numbers");
  auto* ren = app.add_subcommand("render", "Write SVG floor plans");
  auto* val = app.add_subcommand("validate", "Parse and check a scenario or bundle");
  for (auto* cmd : {sim, cmp, ren, val}) {
    cmd->add_option("file", c.path, "Scenario or bundle file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--scenario", c.only, "Restrict to these scenario names");
  }
  for (auto* cmd : {sim, cmp}) add_run_flags(cmd, c);
  ren->add_option("--out", c.out, "Output .svg file, or a directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return simulate(c);
    if (*cmp) return compare(c);
    if (*ren) return render(c);
    if (*val) return validate(c);
  } catch (const Error& e) {
    std::cerr << "error [" << e.category() << "]: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [io]: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
