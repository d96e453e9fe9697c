#include "whsim/sim_engine.hpp"

#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::PalletArrival: return "pallet_arrival";
    case EventKind::WaveRelease: return "wave_release";
    case EventKind::TruckFree: return "truck_free";
    case EventKind::TaskComplete: return "task_complete";
    case EventKind::EndOfDay: return "end_of_day";
    case EventKind::Sample: return "sample";
  }
  return "?";
}

std::uint64_t EventQueue::schedule(double time, EventKind kind, std::uint32_t a) {
  if (!(time >= now_)) {
    throw LogicError(fmt::format("event {} scheduled at {:.3f} before clock {:.3f}",
                                 to_string(kind), time, now_));
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push(Event{time, seq, kind, a});
  return seq;
}

Event EventQueue::pop() {
  if (heap_.empty()) throw LogicError("pop from an empty event queue");
  Event e = heap_.top();
  heap_.pop();
  now_ = e.time;
  return e;
}

RngStreams::RngStreams(std::uint64_t seed, int rep)
    : arrivals(derive_seed(seed, "arrivals", rep)),
      classes(derive_seed(seed, "classes", rep)),
      collars(derive_seed(seed, "collars", rep)),
      formats(derive_seed(seed, "formats", rep)),
      order_sizes(derive_seed(seed, "order_sizes", rep)),
      order_skus(derive_seed(seed, "order_skus", rep)),
      policy_ties(derive_seed(seed, "policy_ties", rep)),
      catalog(derive_seed(seed, "catalog", 0)) {}

void ReplicationPlan::validate() const {
  if (n_days < 0) throw ConfigError("plan.n_days must be >= 0");
  if (warm_up_days < 0) throw ConfigError("plan.warm_up_days must be >= 0");
  if (!(day_length_s > 0.0)) throw ConfigError("plan.day_length_s must be positive");
  if (replications < 1) throw ConfigError("plan.replications must be >= 1");
}

const char* to_string(LogKind k) {
  switch (k) {
    case LogKind::Arrival: return "arrival";
    case LogKind::Release: return "release";
    case LogKind::Store: return "store";
    case LogKind::Pick: return "pick";
    case LogKind::Relocate: return "relocate";
    case LogKind::Stage: return "stage";
    case LogKind::Complete: return "complete";
    case LogKind::Trip: return "trip";
  }
  return "?";
}

std::vector<LogRecord> EventLog::channel(LogKind kind) const {
  std::vector<LogRecord> out;
  for (const auto& r : records_) {
    if (r.kind == kind) out.push_back(r);
  }
  return out;
}

void EventLog::write_ndjson(std::ostream& os) const {
  std::string line;
  for (const auto& r : records_) {
    line = fmt::format(R"({{"t":{:.3f},"kind":"{}")", r.time, to_string(r.kind));
    auto field = [&](const char* name, std::uint32_t v) {
      if (v != kNone) line += fmt::format(R"(,"{}":{})", name, v);
    };
    field("pallet", r.pallet);
    field("order", r.order);
    field("slot", r.slot);
    field("truck", r.truck);
    field("sku", r.sku);
    if (r.cls != 0) line += fmt::format(R"(,"class":"{}")", r.cls);
    line += fmt::format(R"(,"value":{})", r.value);
    if (r.kind == LogKind::Trip) line += fmt::format(R"(,"end":{:.3f})", r.end);
    line += "}\n";
    os << line;
  }
}

std::string EventLog::to_ndjson() const {
  std::ostringstream os;
  write_ndjson(os);
  return os.str();
}

}  // namespace whsim
