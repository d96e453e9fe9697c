#include "whsim/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

namespace {

const char* zone_fill(Zone z) {
  switch (z) {
    case Zone::P: return "#2f6fdf";  // blue
    case Zone::E: return "#f08c2e";  // orange
    case Zone::S: return "#f2d43a";  // yellow
    case Zone::Unzoned: return "#9a9a9a";
  }
  return "#9a9a9a";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", dir, ec.message()));
}

}  // namespace

std::string render_svg(const Layout& L) {
  const Rect b = L.bounds();
  const double scale = 0.01;  // px per mm
  const double w = std::max<double>(1.0, b.width() * scale);
  const double h = std::max<double>(1.0, b.height() * scale);
  // SVG y grows downwards; the staging edge (y = 0) is drawn at the bottom.
  auto X = [&](std::int64_t x) { return (x - b.x0) * scale; };
  auto Y = [&](std::int64_t y) { return h - (y - b.y0) * scale; };

  std::string s;
  s += R"(<?xml version="1.0" encoding="UTF-8"?>)" "\n";
  s += fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.1f}" height="{:.1f}" viewBox="-10 -10 {:.1f} {:.1f}">)"
      "\n",
      w + 20, h + 20, w + 20, h + 20);
  s += fmt::format("<title>{}</title>\n", L.name);
  for (const auto& r : L.footprint) {
    s += fmt::format(
        R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="#f4f4f4" stroke="#444" stroke-width="0.5"/>)"
        "\n",
        X(r.x0), Y(r.y1), r.width() * scale, r.height() * scale);
  }

  // One rectangle per ground cell; the zone of its lowest slot wins.
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>, const Slot*> cells;
  for (const auto& sl : L.slots) {
    const auto key = std::tuple{sl.cell.x0, sl.cell.y0, sl.cell.x1, sl.cell.y1};
    auto [it, fresh] = cells.emplace(key, &sl);
    if (!fresh && sl.level < it->second->level) it->second = &sl;
  }
  s += R"(<g stroke="#333" stroke-width="0.2">)" "\n";
  for (const auto& [key, sl] : cells) {
    const auto& c = sl->cell;
    s += fmt::format(
        R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}"/>)" "\n",
        X(c.x0), Y(c.y1), c.width() * scale, c.height() * scale, zone_fill(sl->zone));
  }
  s += "</g>\n";

  s += R"(<g stroke="#777" stroke-width="0.3" fill="none">)" "\n";
  for (const auto& e : L.nav.edges()) {
    const auto& p = L.nav.node(e.a);
    const auto& q = L.nav.node(e.b);
    s += fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}"/>)" "\n", X(p.x),
                     Y(p.y), X(q.x), Y(q.y));
  }
  s += "</g>\n";

  auto triangle = [&](NodeId n, const char* fill, const char* label) {
    const auto& p = L.nav.node(n);
    const double x = X(p.x), y = Y(p.y);
    s += fmt::format(
        R"(<polygon class="staging" points="{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}" fill="{}"><title>{}</title></polygon>)"
        "\n",
        x, y - 6, x - 5, y + 4, x + 5, y + 4, fill, label);
  };
  triangle(L.inbound_staging, "#2a9d3a", "inbound staging");
  triangle(L.outbound_staging, "#c0392b", "outbound staging");
  s += "</svg>\n";
  return s;
}

void render_layout(const Scenario& scenario, const std::string& out_path) {
  scenario.validate();
  const Layout L = build_layout(scenario.variant, scenario.layout);
  write_text_file(out_path, render_svg(L));
}

void Overrides::apply(Scenario& s) const {
  if (seed) s.master_seed = *seed;
  if (replications) s.plan.replications = *replications;
  if (n_days) s.plan.n_days = *n_days;
  s.plan.validate();
}

std::vector<KpiReport> CompareResult::reports() const {
  std::vector<KpiReport> out;
  for (const auto& s : scenarios) out.push_back(s.report);
  return out;
}

ScenarioOutcome run_one(const Scenario& scenario, const CompareOptions& options) {
  const Model model(scenario);
  ScenarioOutcome o;
  o.results = run_scenario(model, options.parallel, options.run);
  o.report = make_report(model, o.results);
  if (!options.out_dir.empty()) {
    const auto dir = (std::filesystem::path(options.out_dir) / scenario.name).string();
    ensure_dir(dir);
    const std::vector<KpiReport> one{o.report};
    if (options.csv) {
      std::ostringstream os;
      write_csv(os, one);
      write_text_file(dir + "/kpi.csv", os.str());
    }
    if (options.json) write_text_file(dir + "/kpi.json", to_json(one));
    write_text_file(dir + "/scenario.yaml", dump_scenario(scenario));
    if (options.run.record_log) {
      for (const auto& r : o.results) {
        write_text_file(fmt::format("{}/log_rep{}.ndjson", dir, r.replication),
                        r.log.to_ndjson());
      }
    }
    std::string diag;
    for (const auto& r : o.results) {
      for (const auto& d : r.diagnostics) diag += fmt::format("rep {}: {}\n", r.replication, d);
    }
    if (!diag.empty()) write_text_file(dir + "/diagnostics.txt", diag);
  }
  return o;
}

void write_comparison(const std::vector<KpiReport>& reports, const CompareOptions& options) {
  if (options.out_dir.empty()) return;
  ensure_dir(options.out_dir);
  const auto dir = options.out_dir;
  if (options.csv) {
    std::ostringstream os;
    write_csv(os, reports);
    write_text_file(dir + "/comparison.csv", os.str());
  }
  if (options.json) write_text_file(dir + "/comparison.json", to_json(reports));
  write_text_file(dir + "/comparison.txt", comparison_table(reports));
}

CompareResult run_compare(const std::vector<Scenario>& scenarios, const CompareOptions& options) {
  if (scenarios.size() < 2) throw ConfigError("compare needs at least two scenarios");
  const auto seed = scenarios.front().master_seed;
  for (const auto& s : scenarios) {
    if (s.master_seed != seed) {
      throw ConfigError(fmt::format(
          "scenario '{}' has master_seed {} but '{}' has {}; common random numbers need one seed",
          s.name, s.master_seed, scenarios.front().name, seed));
    }
  }
  CompareResult out;
  for (const auto& s : scenarios) {
    try {
      out.scenarios.push_back(run_one(s, options));
    } catch (const Error& e) {
      write_comparison(out.reports(), options);
      throw RuntimeError(fmt::format("scenario '{}' failed: {}", s.name, e.what()));
    }
  }
  write_comparison(out.reports(), options);
  return out;
}

}  // namespace whsim
