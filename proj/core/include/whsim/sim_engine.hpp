#pragma once

#include <cstdint>
#include <iosfwd>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "whsim/rng.hpp"

namespace whsim {

enum class EventKind : std::uint8_t {
  PalletArrival,
  WaveRelease,
  TruckFree,
  TaskComplete,
  EndOfDay,
  Sample,
};
const char* to_string(EventKind k);

struct Event {
  double time = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::Sample;
  std::uint32_t a = 0;  // payload, meaning depends on kind
};

// Min-heap on (time, sequence). The clock advances on pop.
class EventQueue {
 public:
  // Throws LogicError for a time before the clock.
  std::uint64_t schedule(double time, EventKind kind, std::uint32_t a = 0);
  Event pop();
  const Event& peek() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& l, const Event& r) const {
      if (l.time != r.time) return l.time > r.time;
      return l.sequence > r.sequence;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
};

// Independent generators per purpose so that every scenario compared under
// one (seed, replication) sees the same demand.
struct RngStreams {
  RngStreams(std::uint64_t master_seed, int replication);

  Rng arrivals;
  Rng classes;
  Rng collars;
  Rng formats;
  Rng order_sizes;
  Rng order_skus;
  Rng policy_ties;
  Rng catalog;
};

struct ReplicationPlan {
  int n_days = 80;
  int warm_up_days = 5;
  double day_length_s = 57600.0;
  int replications = 10;

  void validate() const;
  double warm_up_end() const { return warm_up_days * day_length_s; }
  double horizon() const { return (warm_up_days + n_days) * day_length_s; }
  bool operator==(const ReplicationPlan&) const = default;
};

enum class LogKind : std::uint8_t {
  Arrival,
  Release,
  Store,
  Pick,
  Relocate,
  Stage,
  Complete,
  Trip,
};
const char* to_string(LogKind k);

inline constexpr std::uint32_t kNone = 0xffffffffU;

// One line of the structured run log. Unused ids hold kNone.
struct LogRecord {
  double time = 0.0;
  LogKind kind = LogKind::Arrival;
  std::uint32_t pallet = kNone;
  std::uint32_t order = kNone;
  std::uint32_t slot = kNone;
  std::uint32_t truck = kNone;
  std::uint32_t sku = kNone;
  int value = 0;      // collars, pallets or slot depending on kind
  char cls = 0;       // 'A', 'B', 'C' for arrivals
  double end = 0.0;   // trip end for Trip records

  bool operator==(const LogRecord&) const = default;
};

class EventLog {
 public:
  void add(const LogRecord& r) { records_.push_back(r); }
  const std::vector<LogRecord>& records() const { return records_; }
  std::vector<LogRecord> channel(LogKind kind) const;
  // Newline-delimited JSON with fixed-precision times.
  void write_ndjson(std::ostream& os) const;
  std::string to_ndjson() const;

 private:
  std::vector<LogRecord> records_;
};

}  // namespace whsim
