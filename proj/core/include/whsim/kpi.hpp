#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "whsim/model.hpp"
#include "whsim/sim_engine.hpp"

namespace whsim {

inline constexpr double kDefaultTaktS = 1500.0;

// completion - release. Throws DomainError for an open order.
double throughput_time(const Order& order);

// Twice the time-weighted mean of busy trucks, rounded up. Values within
// 1e-9 of an integer count as that integer.
int required_fte(double avg_busy_trucks);

// Share of throughput times at or below the takt, in percent. Throws
// EmptyWindow for no orders.
double on_time_pct(std::span<const double> throughputs, double takt_s = kDefaultTaktS);

// Time-weighted mean of a piecewise-constant count over [begin, end).
class UsageMeter {
 public:
  UsageMeter(double begin, double end) : begin_(begin), end_(end) {}
  // The count becomes `value` at time t (nondecreasing t).
  void set(double t, int value);
  // Mean over the window, with the current value held until `end`.
  double average() const;
  double window() const { return end_ - begin_; }

 private:
  void advance(double t);
  double begin_;
  double end_;
  double last_t_ = 0.0;
  int value_ = 0;
  double area_ = 0.0;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for one value
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Summary&) const = default;
};
Summary summarize(std::span<const double> xs);

struct ReplicationRow {
  int replication = 0;
  std::uint64_t seed = 0;
  double throughput_s_mean = 0.0;
  int fte = 0;
  double on_time_pct = 0.0;
  double area_m2 = 0.0;
  double avg_busy_trucks = 0.0;
  std::uint64_t completed = 0;
  std::uint64_t incomplete = 0;
  bool operator==(const ReplicationRow&) const = default;
};

struct KpiReport {
  std::string scenario;
  std::string layout;
  std::string policy;
  std::vector<ReplicationRow> rows;

  Summary throughput() const;
  Summary fte() const;
  Summary on_time() const;
  Summary area() const;
  bool operator==(const KpiReport&) const = default;
};

// One detail row per scenario x replication plus one aggregate row per
// scenario (replication column "mean").
void write_csv(std::ostream& os, std::span<const KpiReport> reports);
std::string to_json(std::span<const KpiReport> reports);
std::vector<KpiReport> reports_from_json(const std::string& text);
// Table with the Table-style columns: layout, throughput m:ss, FTE,
// on-time, area.
std::string comparison_table(std::span<const KpiReport> reports);
// Writes to a file; throws IoError naming the path.
void write_text_file(const std::string& path, const std::string& text);

std::string format_mmss(double seconds);

// KPIs recomputed from a run log alone.
struct LogKpis {
  std::uint64_t completed = 0;
  std::uint64_t incomplete = 0;
  double throughput_s_mean = 0.0;
  double on_time_pct = 0.0;
  double avg_busy_trucks = 0.0;
  int fte = 0;
};
LogKpis reduce_log(const EventLog& log, double warm_up_end, double horizon,
                   double takt_s = kDefaultTaktS);

}  // namespace whsim
