#include "whsim/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "whsim/errors.hpp"

namespace whsim {

double throughput_time(const Order& order) {
  if (!order.completion_time) {
    throw DomainError(fmt::format("order {} is not complete", order.id));
  }
  return *order.completion_time - order.release_time;
}

int required_fte(double avg_busy_trucks) {
  if (!(avg_busy_trucks >= 0.0)) throw DomainError("average busy trucks must be >= 0");
  return static_cast<int>(std::ceil(2.0 * avg_busy_trucks - 1e-9));
}

double on_time_pct(std::span<const double> throughputs, double takt_s) {
  if (throughputs.empty()) throw EmptyWindow("on-time share over zero orders");
  std::size_t ok = 0;
  for (double t : throughputs) ok += t <= takt_s ? 1 : 0;
  return 100.0 * static_cast<double>(ok) / static_cast<double>(throughputs.size());
}

void UsageMeter::advance(double t) {
  const double a = std::max(last_t_, begin_);
  const double b = std::min(t, end_);
  if (b > a) area_ += value_ * (b - a);
  last_t_ = t;
}

void UsageMeter::set(double t, int value) {
  advance(t);
  value_ = value;
}

double UsageMeter::average() const {
  if (!(end_ > begin_)) throw EmptyWindow("usage window has zero length");
  double area = area_;
  const double a = std::max(last_t_, begin_);
  if (end_ > a) area += value_ * (end_ - a);
  return area / (end_ - begin_);
}

Summary summarize(std::span<const double> xs) {
  Summary s;
  if (xs.empty()) return s;
  double sum = 0.0;
  s.min = xs.front();
  s.max = xs.front();
  for (double x : xs) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

namespace {

template <class F>
Summary summarize_rows(const std::vector<ReplicationRow>& rows, F get) {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(get(r));
  return summarize(v);
}

}  // namespace

Summary KpiReport::throughput() const {
  return summarize_rows(rows, [](const ReplicationRow& r) { return r.throughput_s_mean; });
}
Summary KpiReport::fte() const {
  return summarize_rows(rows, [](const ReplicationRow& r) { return double(r.fte); });
}
Summary KpiReport::on_time() const {
  return summarize_rows(rows, [](const ReplicationRow& r) { return r.on_time_pct; });
}
Summary KpiReport::area() const {
  return summarize_rows(rows, [](const ReplicationRow& r) { return r.area_m2; });
}

void write_csv(std::ostream& os, std::span<const KpiReport> reports) {
  os << "scenario,layout,policy,replication,throughput_s_mean,fte,on_time_pct,area_m2,seed,"
        "avg_busy_trucks,completed,incomplete\n";
  for (const auto& rep : reports) {
    for (const auto& r : rep.rows) {
      os << fmt::format("{},{},{},{},{:.3f},{},{:.3f},{:.3f},{},{:.4f},{},{}\n", rep.scenario,
                        rep.layout, rep.policy, r.replication, r.throughput_s_mean, r.fte,
                        r.on_time_pct, r.area_m2, r.seed, r.avg_busy_trucks, r.completed,
                        r.incomplete);
    }
  }
  for (const auto& rep : reports) {
    std::vector<double> busy;
    double completed = 0, incomplete = 0;
    for (const auto& r : rep.rows) {
      busy.push_back(r.avg_busy_trucks);
      completed += static_cast<double>(r.completed);
      incomplete += static_cast<double>(r.incomplete);
    }
    const double n = std::max<double>(1.0, static_cast<double>(rep.rows.size()));
    os << fmt::format("{},{},{},mean,{:.3f},{:.3f},{:.3f},{:.3f},,{:.4f},{:.1f},{:.1f}\n",
                      rep.scenario, rep.layout, rep.policy, rep.throughput().mean,
                      rep.fte().mean, rep.on_time().mean, rep.area().mean,
                      summarize(busy).mean, completed / n, incomplete / n);
  }
}

std::string to_json(std::span<const KpiReport> reports) {
  using nlohmann::ordered_json;
  ordered_json root = ordered_json::array();
  auto summary = [](const Summary& s) {
    return ordered_json{{"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
  };
  for (const auto& rep : reports) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"replication", r.replication},
                      {"seed", r.seed},
                      {"throughput_s_mean", r.throughput_s_mean},
                      {"fte", r.fte},
                      {"on_time_pct", r.on_time_pct},
                      {"area_m2", r.area_m2},
                      {"avg_busy_trucks", r.avg_busy_trucks},
                      {"completed", r.completed},
                      {"incomplete", r.incomplete}});
    }
    root.push_back({{"scenario", rep.scenario},
                    {"layout", rep.layout},
                    {"policy", rep.policy},
                    {"replications", rows},
                    {"aggregate",
                     {{"throughput_s", summary(rep.throughput())},
                      {"fte", summary(rep.fte())},
                      {"on_time_pct", summary(rep.on_time())},
                      {"area_m2", summary(rep.area())}}}});
  }
  return root.dump(2) + "\n";
}

std::vector<KpiReport> reports_from_json(const std::string& text) {
  std::vector<KpiReport> out;
  try {
    const auto root = nlohmann::json::parse(text);
    for (const auto& j : root) {
      KpiReport rep;
      rep.scenario = j.at("scenario").get<std::string>();
      rep.layout = j.at("layout").get<std::string>();
      rep.policy = j.at("policy").get<std::string>();
      for (const auto& r : j.at("replications")) {
        ReplicationRow row;
        row.replication = r.at("replication").get<int>();
        row.seed = r.at("seed").get<std::uint64_t>();
        row.throughput_s_mean = r.at("throughput_s_mean").get<double>();
        row.fte = r.at("fte").get<int>();
        row.on_time_pct = r.at("on_time_pct").get<double>();
        row.area_m2 = r.at("area_m2").get<double>();
        row.avg_busy_trucks = r.at("avg_busy_trucks").get<double>();
        row.completed = r.at("completed").get<std::uint64_t>();
        row.incomplete = r.at("incomplete").get<std::uint64_t>();
        rep.rows.push_back(row);
      }
      out.push_back(std::move(rep));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("malformed KPI json: {}", e.what()));
  }
  return out;
}

std::string format_mmss(double seconds) {
  if (!std::isfinite(seconds)) return "-";
  const long total = std::lround(seconds);
  return fmt::format("{}:{:02d}", total / 60, static_cast<int>(total % 60));
}

std::string comparison_table(std::span<const KpiReport> reports) {
  std::string s = fmt::format("{:<22} {:>10} {:>5} {:>8} {:>9}\n", "layout", "throughput",
                              "FTE", "on-time", "area m2");
  for (const auto& rep : reports) {
    s += fmt::format("{:<22} {:>10} {:>5.0f} {:>8.1f} {:>9.0f}\n", rep.scenario,
                     format_mmss(rep.throughput().mean), rep.fte().max, rep.on_time().mean,
                     rep.area().mean);
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open '{}' for writing", path));
  f << text;
  if (!f) throw IoError(fmt::format("write to '{}' failed", path));
}

LogKpis reduce_log(const EventLog& log, double warm_up_end, double horizon, double takt_s) {
  LogKpis k;
  std::map<std::uint32_t, double> release;
  std::map<std::uint32_t, bool> done;
  double sum = 0.0;
  std::vector<double> tp;
  std::vector<std::pair<double, double>> trips;
  for (const auto& r : log.records()) {
    switch (r.kind) {
      case LogKind::Release:
        if (r.time >= warm_up_end && r.value > 0) {
          release[r.order] = r.time;
          done[r.order] = false;
        }
        break;
      case LogKind::Complete: {
        auto it = release.find(r.order);
        if (it == release.end()) break;
        const double t = r.time - it->second;
        sum += t;
        tp.push_back(t);
        done[r.order] = true;
        break;
      }
      case LogKind::Trip: trips.emplace_back(r.time, r.end); break;
      default: break;
    }
  }
  k.completed = tp.size();
  for (const auto& [id, d] : done) k.incomplete += d ? 0 : 1;
  if (!tp.empty()) {
    k.throughput_s_mean = sum / static_cast<double>(tp.size());
    k.on_time_pct = on_time_pct(tp, takt_s);
  }
  if (horizon > warm_up_end) {
    double area = 0.0;
    for (auto [a, b] : trips) {
      const double lo = std::max(a, warm_up_end);
      const double hi = std::min(b, horizon);
      if (hi > lo) area += hi - lo;
    }
    k.avg_busy_trucks = area / (horizon - warm_up_end);
    k.fte = required_fte(k.avg_busy_trucks);
  }
  return k;
}

}  // namespace whsim
