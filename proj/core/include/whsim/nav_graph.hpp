#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "whsim/model.hpp"

namespace whsim {

struct Point {
  std::int64_t x = 0;  // mm
  std::int64_t y = 0;  // mm
  bool operator==(const Point&) const = default;
};

// Axis-aligned rectangle in mm, x0 <= x1 and y0 <= y1.
struct Rect {
  std::int64_t x0 = 0;
  std::int64_t y0 = 0;
  std::int64_t x1 = 0;
  std::int64_t y1 = 0;

  std::int64_t width() const { return x1 - x0; }
  std::int64_t height() const { return y1 - y0; }
  double area_m2() const {
    return static_cast<double>(width()) * static_cast<double>(height()) * 1e-6;
  }
  bool operator==(const Rect&) const = default;
};

enum class EdgeKind : std::uint8_t { Aisle, CrossAisle, Diagonal, Approach };

struct NavEdge {
  NodeId a = 0;
  NodeId b = 0;
  std::int64_t length_mm = 0;
  std::int32_t width_mm = 0;
  EdgeKind kind = EdgeKind::Aisle;
};

// Undirected travel graph over aisle centerlines. Edge lengths are the
// rounded Euclidean distances of their endpoints. Directed edge 2e runs a->b,
// 2e+1 runs b->a.
class NavGraph {
 public:
  struct Arc {
    NodeId to;
    std::uint32_t directed_edge;
  };

  NodeId add_node(Point p);
  // Returns the edge index. Self loops and zero-length edges are rejected.
  std::uint32_t add_edge(NodeId a, NodeId b, std::int32_t width_mm,
                         EdgeKind kind);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Point& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<NavEdge>& edges() const { return edges_; }
  const NavEdge& edge(std::uint32_t e) const { return edges_.at(e); }

  // Outgoing arcs of a node, ordered by neighbour id.
  const std::vector<Arc>& arcs(NodeId id) const { return adjacency_.at(id); }

  NodeId directed_from(std::uint32_t de) const {
    const auto& e = edges_[de / 2];
    return (de % 2 == 0) ? e.a : e.b;
  }
  NodeId directed_to(std::uint32_t de) const {
    const auto& e = edges_[de / 2];
    return (de % 2 == 0) ? e.b : e.a;
  }

  // Copy without edges of one kind (node ids are preserved).
  NavGraph without(EdgeKind kind) const;

  // Nodes reachable from `from` over edges at least `min_width_mm` wide.
  std::vector<bool> reachable_from(NodeId from, std::int32_t min_width_mm) const;

  // Moves every node by (dx, dy).
  void translate(std::int64_t dx, std::int64_t dy);

 private:
  std::vector<Point> nodes_;
  std::vector<NavEdge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
};

std::int64_t euclid_mm(const Point& a, const Point& b);

}  // namespace whsim
