#include "whsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "whsim/errors.hpp"

namespace whsim {

namespace {

std::string where(const std::string& origin, const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.line < 0) return origin;
  return fmt::format("{}:{}", origin, m.line + 1);
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else if constexpr (std::is_floating_point_v<T>) return "a number";
  else return "a string";
}

// One YAML mapping with the keys consumed so far; finish() rejects the rest.
class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string& origin)
      : node_(std::move(node)), path_(std::move(path)), origin_(origin) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(fmt::format("{}: '{}' must be a mapping", where(origin_, node_),
                                    path_.empty() ? "<root>" : path_));
    }
  }

  bool present() const { return node_ && node_.IsMap(); }

  YAML::Node raw(const char* key) {
    seen_.insert(key);
    if (!present()) return YAML::Node();
    return node_[key];
  }

  template <class T>
  void get(const char* key, T& out) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    out = convert<T>(n, key);
  }

  void get(const char* key, std::optional<double>& out) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    out = convert<double>(n, key);
  }

  void get(const char* key, std::vector<double>& out) {
    const YAML::Node n = raw(key);
    if (!n || n.IsNull()) return;
    if (!n.IsSequence()) {
      throw ConfigError(fmt::format("{}: {} must be a list of numbers", where(origin_, n),
                                    key_path(key)));
    }
    out.clear();
    for (const auto& x : n) out.push_back(convert<double>(x, key));
  }

  void get(const char* key, ClassSplit& out) {
    Section s = sub(key);
    s.get("a", out.a);
    s.get("b", out.b);
    s.get("c", out.c);
    s.finish();
  }

  void get(const char* key, ZoneFractions& out) {
    Section s = sub(key);
    s.get("p", out.p);
    s.get("e", out.e);
    s.get("s", out.s);
    s.finish();
  }

  Section sub(const char* key) { return Section(raw(key), key_path(key), origin_); }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!seen_.count(k)) {
        throw ConfigError(fmt::format("{}: unknown key '{}'", where(origin_, kv.first),
                                      key_path(k.c_str())));
      }
    }
  }

  std::string key_path(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

 private:
  template <class T>
  T convert(const YAML::Node& n, const char* key) const {
    if (!n.IsScalar()) {
      throw ConfigError(fmt::format("{}: {} must be {}", where(origin_, n), key_path(key),
                                    type_name<T>()));
    }
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("{}: {} must be {}, got '{}'", where(origin_, n),
                                    key_path(key), type_name<T>(), n.Scalar()));
    }
  }

  YAML::Node node_;
  std::string path_;
  const std::string& origin_;
  std::set<std::string> seen_;
};

Scenario scenario_from_node(const YAML::Node& root, const std::string& origin) {
  Scenario s;
  Section top(root, "", origin);
  top.get("name", s.name);
  top.get("master_seed", s.master_seed);

  {
    Section l = top.sub("layout");
    auto& L = s.layout;
    std::string variant = to_string(s.variant);
    l.get("variant", variant);
    try {
      s.variant = parse_layout_variant(variant);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: layout.variant: {}", origin, e.what()));
    }
    l.get("rows", L.rows);
    l.get("bays", L.bays);
    l.get("positions_per_bay", L.positions_per_bay);
    l.get("deep_positions", L.deep_positions);
    l.get("levels", L.levels);
    l.get("aisle_width_mm", L.aisle_width_mm);
    l.get("cross_aisle_width_mm", L.cross_aisle_width_mm);
    l.get("wide_aisle_width_mm", L.wide_aisle_width_mm);
    l.get("rack_depth_mm", L.rack_depth_mm);
    l.get("bay_width_mm", L.bay_width_mm);
    l.get("level_height_mm", L.level_height_mm);
    l.get("top_clearance_mm", L.top_clearance_mm);
    l.get("zone_fractions", L.zone_fractions);
    l.get("p_levels", L.p_levels);
    l.get("e_levels", L.e_levels);
    l.get("wide_aisles", L.wide_aisles);
    l.get("diagonal_angle_deg", L.diagonal_angle_deg);
    l.get("target_slot_count", L.target_slot_count);
    l.get("inbound_x_fraction", L.inbound_x_fraction);
    l.finish();
  }
  {
    Section p = top.sub("policy");
    std::string kind = to_string(s.policy);
    p.get("kind", kind);
    try {
      s.policy = parse_policy_kind(kind);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: policy.kind: {}", origin, e.what()));
    }
    p.get("p_zone_max_collars", s.policy_params.p_zone_max_collars);
    p.get("band_shares", s.policy_params.band_shares);
    p.finish();
  }
  {
    Section c = top.sub("catalog");
    c.get("n_skus", s.catalog.n_skus);
    c.get("sku_shares", s.catalog.sku_shares);
    c.get("volume_shares", s.catalog.volume_shares);
    c.finish();
  }
  {
    Section i = top.sub("inbound");
    auto& in = s.inbound;
    i.get("sigma", in.sigma);
    i.get("mu", in.mu);
    i.get("daily_volume_target", in.daily_volume_target);
    i.get("truck_count_in", in.truck_count_in);
    i.get("collar_weights", in.collar_weights);
    i.get("euro_full_share", in.euro_full_share);
    i.get("consolidation_scan", in.consolidation_scan);
    i.finish();
  }
  {
    Section o = top.sub("outbound");
    auto& out = s.outbound;
    o.get("takt_s", out.takt_s);
    o.get("skus_per_order_min", out.skus_per_order_min);
    o.get("skus_per_order_max", out.skus_per_order_max);
    o.get("line_mean", out.line_mean);
    o.get("line_sd", out.line_sd);
    o.get("truck_count_out", out.truck_count_out);
    o.get("stock_feedback", out.stock_feedback);
    o.get("feedback_min", out.feedback_min);
    o.get("feedback_max", out.feedback_max);
    o.get("spike_start_wave", out.spike_start_wave);
    o.get("spike_waves", out.spike_waves);
    o.get("spike_factor", out.spike_factor);
    o.finish();
  }
  {
    Section i = top.sub("inventory");
    i.get("target_a", s.inventory.target_a);
    i.get("target_b", s.inventory.target_b);
    i.get("target_c", s.inventory.target_c);
    i.finish();
  }
  {
    Section v = top.sub("vehicle");
    auto& vp = s.vehicle;
    v.get("travel_speed_mps", vp.travel_speed_mps);
    v.get("lift_speed_mps", vp.lift_speed_mps);
    v.get("turn_penalty_s", vp.turn_penalty_s);
    v.get("min_aisle_width_mm", vp.min_aisle_width_mm);
    v.get("capacity_collar_units", vp.capacity_collar_units);
    v.get("handling_s", vp.handling_s);
    v.get("floor_handling_s", vp.floor_handling_s);
    v.get("deep_reach_s", vp.deep_reach_s);
    v.finish();
  }
  {
    Section p = top.sub("plan");
    p.get("n_days", s.plan.n_days);
    p.get("warm_up_days", s.plan.warm_up_days);
    p.get("day_length_s", s.plan.day_length_s);
    p.get("replications", s.plan.replications);
    p.finish();
  }
  top.finish();

  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: scenario '{}': {}", origin, s.name, e.what()));
  }
  return s;
}

YAML::Node parse_yaml(const std::string& text, const std::string& origin) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: {}", origin, e.mark.line + 1, e.msg));
  }
}

YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!over || over.IsNull()) return YAML::Clone(base);
  if (!base || !base.IsMap() || !over.IsMap()) return YAML::Clone(over);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) {
    const auto key = kv.first.as<std::string>();
    out[key] = merge(base[key], kv.second);
  }
  return out;
}

// Shortest text that reads back as the same double.
std::string num(double v) { return fmt::format("{}", v); }

void split(YAML::Emitter& e, const char* key, const ClassSplit& c) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "a" << YAML::Value << num(c.a);
  e << YAML::Key << "b" << YAML::Value << num(c.b);
  e << YAML::Key << "c" << YAML::Value << num(c.c);
  e << YAML::EndMap;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  return scenario_from_node(parse_yaml(text, origin), origin);
}

Scenario load_scenario(const std::string& path) {
  const auto b = load_scenarios(path);
  if (b.scenarios.size() != 1) {
    throw ConfigError(fmt::format("{}: expected one scenario, found a bundle of {}", path,
                                  b.scenarios.size()));
  }
  return b.scenarios.front();
}

Bundle parse_bundle(const std::string& text, const std::string& origin) {
  const YAML::Node root = parse_yaml(text, origin);
  if (!root.IsMap()) throw ConfigError(fmt::format("{}: top level must be a mapping", origin));
  if (!root["scenarios"]) {
    Bundle b;
    b.scenarios.push_back(scenario_from_node(root, origin));
    b.name = b.scenarios.front().name;
    return b;
  }
  Bundle b;
  for (const auto& kv : root) {
    const auto k = kv.first.as<std::string>();
    if (k != "bundle" && k != "base" && k != "scenarios") {
      throw ConfigError(fmt::format("{}: unknown key '{}'", where(origin, kv.first), k));
    }
  }
  b.name = root["bundle"] ? root["bundle"].as<std::string>() : std::string("bundle");
  const YAML::Node base = root["base"];
  const YAML::Node list = root["scenarios"];
  if (!list.IsSequence() || list.size() == 0) {
    throw ConfigError(fmt::format("{}: 'scenarios' must be a non-empty list", origin));
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!list[i].IsMap() || !list[i]["name"]) {
      throw ConfigError(
          fmt::format("{}: scenarios[{}] must be a mapping with a name", where(origin, list[i]), i));
    }
    const auto merged = merge(base, list[i]);
    Scenario s = scenario_from_node(merged, fmt::format("{} scenarios[{}]", origin, i));
    if (!names.insert(s.name).second) {
      throw ConfigError(fmt::format("{}: duplicate scenario name '{}'", origin, s.name));
    }
    b.scenarios.push_back(std::move(s));
  }
  return b;
}

Bundle load_scenarios(const std::string& path) { return parse_bundle(read_text_file(path), path); }

std::string dump_scenario(const Scenario& s) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << s.name;
  e << YAML::Key << "master_seed" << YAML::Value << s.master_seed;

  const auto& L = s.layout;
  e << YAML::Key << "layout" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "variant" << YAML::Value << to_string(s.variant);
  e << YAML::Key << "rows" << YAML::Value << L.rows;
  e << YAML::Key << "bays" << YAML::Value << L.bays;
  e << YAML::Key << "positions_per_bay" << YAML::Value << L.positions_per_bay;
  e << YAML::Key << "deep_positions" << YAML::Value << L.deep_positions;
  e << YAML::Key << "levels" << YAML::Value << L.levels;
  e << YAML::Key << "aisle_width_mm" << YAML::Value << L.aisle_width_mm;
  e << YAML::Key << "cross_aisle_width_mm" << YAML::Value << L.cross_aisle_width_mm;
  e << YAML::Key << "wide_aisle_width_mm" << YAML::Value << L.wide_aisle_width_mm;
  e << YAML::Key << "rack_depth_mm" << YAML::Value << L.rack_depth_mm;
  e << YAML::Key << "bay_width_mm" << YAML::Value << L.bay_width_mm;
  e << YAML::Key << "level_height_mm" << YAML::Value << L.level_height_mm;
  e << YAML::Key << "top_clearance_mm" << YAML::Value << L.top_clearance_mm;
  e << YAML::Key << "zone_fractions" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "p" << YAML::Value << num(L.zone_fractions.p);
  e << YAML::Key << "e" << YAML::Value << num(L.zone_fractions.e);
  e << YAML::Key << "s" << YAML::Value << num(L.zone_fractions.s);
  e << YAML::EndMap;
  e << YAML::Key << "p_levels" << YAML::Value << L.p_levels;
  e << YAML::Key << "e_levels" << YAML::Value << L.e_levels;
  e << YAML::Key << "wide_aisles" << YAML::Value << L.wide_aisles;
  e << YAML::Key << "diagonal_angle_deg" << YAML::Value << num(L.diagonal_angle_deg);
  e << YAML::Key << "target_slot_count" << YAML::Value << L.target_slot_count;
  e << YAML::Key << "inbound_x_fraction" << YAML::Value << num(L.inbound_x_fraction);
  e << YAML::EndMap;

  e << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << to_string(s.policy);
  e << YAML::Key << "p_zone_max_collars" << YAML::Value << s.policy_params.p_zone_max_collars;
  split(e, "band_shares", s.policy_params.band_shares);
  e << YAML::EndMap;

  e << YAML::Key << "catalog" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_skus" << YAML::Value << s.catalog.n_skus;
  split(e, "sku_shares", s.catalog.sku_shares);
  split(e, "volume_shares", s.catalog.volume_shares);
  e << YAML::EndMap;

  const auto& in = s.inbound;
  e << YAML::Key << "inbound" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "sigma" << YAML::Value << num(in.sigma);
  if (in.mu) e << YAML::Key << "mu" << YAML::Value << num(*in.mu);
  e << YAML::Key << "daily_volume_target" << YAML::Value << num(in.daily_volume_target);
  e << YAML::Key << "truck_count_in" << YAML::Value << in.truck_count_in;
  e << YAML::Key << "collar_weights" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double w : in.collar_weights) e << num(w);
  e << YAML::EndSeq;
  e << YAML::Key << "euro_full_share" << YAML::Value << num(in.euro_full_share);
  e << YAML::Key << "consolidation_scan" << YAML::Value << in.consolidation_scan;
  e << YAML::EndMap;

  const auto& out = s.outbound;
  e << YAML::Key << "outbound" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "takt_s" << YAML::Value << num(out.takt_s);
  e << YAML::Key << "skus_per_order_min" << YAML::Value << out.skus_per_order_min;
  e << YAML::Key << "skus_per_order_max" << YAML::Value << out.skus_per_order_max;
  e << YAML::Key << "line_mean" << YAML::Value << num(out.line_mean);
  e << YAML::Key << "line_sd" << YAML::Value << num(out.line_sd);
  e << YAML::Key << "truck_count_out" << YAML::Value << out.truck_count_out;
  e << YAML::Key << "stock_feedback" << YAML::Value << out.stock_feedback;
  e << YAML::Key << "feedback_min" << YAML::Value << num(out.feedback_min);
  e << YAML::Key << "feedback_max" << YAML::Value << num(out.feedback_max);
  e << YAML::Key << "spike_start_wave" << YAML::Value << out.spike_start_wave;
  e << YAML::Key << "spike_waves" << YAML::Value << out.spike_waves;
  e << YAML::Key << "spike_factor" << YAML::Value << num(out.spike_factor);
  e << YAML::EndMap;

  e << YAML::Key << "inventory" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "target_a" << YAML::Value << s.inventory.target_a;
  e << YAML::Key << "target_b" << YAML::Value << s.inventory.target_b;
  e << YAML::Key << "target_c" << YAML::Value << s.inventory.target_c;
  e << YAML::EndMap;

  const auto& v = s.vehicle;
  e << YAML::Key << "vehicle" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "travel_speed_mps" << YAML::Value << num(v.travel_speed_mps);
  e << YAML::Key << "lift_speed_mps" << YAML::Value << num(v.lift_speed_mps);
  e << YAML::Key << "turn_penalty_s" << YAML::Value << num(v.turn_penalty_s);
  e << YAML::Key << "min_aisle_width_mm" << YAML::Value << v.min_aisle_width_mm;
  e << YAML::Key << "capacity_collar_units" << YAML::Value << v.capacity_collar_units;
  e << YAML::Key << "handling_s" << YAML::Value << num(v.handling_s);
  e << YAML::Key << "floor_handling_s" << YAML::Value << num(v.floor_handling_s);
  e << YAML::Key << "deep_reach_s" << YAML::Value << num(v.deep_reach_s);
  e << YAML::EndMap;

  e << YAML::Key << "plan" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_days" << YAML::Value << s.plan.n_days;
  e << YAML::Key << "warm_up_days" << YAML::Value << s.plan.warm_up_days;
  e << YAML::Key << "day_length_s" << YAML::Value << num(s.plan.day_length_s);
  e << YAML::Key << "replications" << YAML::Value << s.plan.replications;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace whsim
