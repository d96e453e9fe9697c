#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "whsim/config.hpp"
#include "whsim/kpi.hpp"
#include "whsim/simulation.hpp"

namespace whsim {

// SVG of the floor plan: one rectangle per ground position coloured by
// zone, aisle graph as thin lines, staging points as triangles.
std::string render_svg(const Layout& layout);
void render_layout(const Scenario& scenario, const std::string& out_path);

// Command-line overrides applied on top of every scenario.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<int> n_days;
  void apply(Scenario& s) const;
};

struct CompareOptions {
  int parallel = 1;
  std::string out_dir;  // empty: nothing written
  bool csv = true;
  bool json = true;
  RunOptions run;
};

struct ScenarioOutcome {
  std::vector<ReplicationResult> results;
  KpiReport report;
};

struct CompareResult {
  std::vector<ScenarioOutcome> scenarios;
  std::vector<KpiReport> reports() const;
};

// Runs one scenario and writes its artifacts under out_dir/<name>/.
ScenarioOutcome run_one(const Scenario& scenario, const CompareOptions& options);

// Runs each scenario under the same seed and replication indices. Artifacts
// of finished scenarios stay on disk when a later one fails.
CompareResult run_compare(const std::vector<Scenario>& scenarios, const CompareOptions& options);

// Joint artifacts: comparison.csv, comparison.json, comparison.txt.
void write_comparison(const std::vector<KpiReport>& reports, const CompareOptions& options);

}  // namespace whsim
