#include "whsim/nav_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "whsim/errors.hpp"

namespace whsim {

std::int64_t euclid_mm(const Point& a, const Point& b) {
  const double dx = static_cast<double>(a.x - b.x);
  const double dy = static_cast<double>(a.y - b.y);
  return std::llround(std::sqrt(dx * dx + dy * dy));
}

NodeId NavGraph::add_node(Point p) {
  nodes_.push_back(p);
  adjacency_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

std::uint32_t NavGraph::add_edge(NodeId a, NodeId b, std::int32_t width_mm,
                                 EdgeKind kind) {
  if (a >= nodes_.size() || b >= nodes_.size()) {
    throw LogicError(fmt::format("edge {}-{} references a missing node", a, b));
  }
  if (a == b) throw LogicError(fmt::format("self loop at node {}", a));
  const std::int64_t len = euclid_mm(nodes_[a], nodes_[b]);
  if (len <= 0) {
    throw LogicError(fmt::format("zero-length edge {}-{}", a, b));
  }
  const auto e = static_cast<std::uint32_t>(edges_.size());
  edges_.push_back(NavEdge{a, b, len, width_mm, kind});

  auto insert_sorted = [](std::vector<Arc>& v, Arc arc) {
    auto it = std::lower_bound(v.begin(), v.end(), arc, [](const Arc& l, const Arc& r) {
      return l.to != r.to ? l.to < r.to : l.directed_edge < r.directed_edge;
    });
    v.insert(it, arc);
  };
  insert_sorted(adjacency_[a], Arc{b, 2 * e});
  insert_sorted(adjacency_[b], Arc{a, 2 * e + 1});
  return e;
}

NavGraph NavGraph::without(EdgeKind kind) const {
  NavGraph g;
  for (const auto& p : nodes_) g.add_node(p);
  for (const auto& e : edges_) {
    if (e.kind != kind) g.add_edge(e.a, e.b, e.width_mm, e.kind);
  }
  return g;
}

std::vector<bool> NavGraph::reachable_from(NodeId from,
                                           std::int32_t min_width_mm) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::deque<NodeId> q{from};
  seen.at(from) = true;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (const auto& arc : adjacency_[u]) {
      if (edges_[arc.directed_edge / 2].width_mm < min_width_mm) continue;
      if (!seen[arc.to]) {
        seen[arc.to] = true;
        q.push_back(arc.to);
      }
    }
  }
  return seen;
}

void NavGraph::translate(std::int64_t dx, std::int64_t dy) {
  for (auto& p : nodes_) {
    p.x += dx;
    p.y += dy;
  }
}

}  // namespace whsim
