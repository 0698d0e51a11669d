#include "tourcp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace tourcp {

namespace {

constexpr double kOrientationTolerance = 1e-9;

bool integral(double v) {
  return std::nearbyint(v) == v && std::abs(v) < 1e12;
}

}  // namespace

int orientation(const Point& p, const Point& q, const Point& r) {
  const double ax = q.x - p.x, ay = q.y - p.y;
  const double bx = r.x - p.x, by = r.y - p.y;
  if (integral(p.x) && integral(p.y) && integral(q.x) && integral(q.y) && integral(r.x) &&
      integral(r.y)) {
    // Whole coordinates: differences are exact and the cross product fits a
    // 128-bit integer, so the sign is exact.
    const auto cross = static_cast<__int128>(static_cast<std::int64_t>(ax)) *
                           static_cast<std::int64_t>(by) -
                       static_cast<__int128>(static_cast<std::int64_t>(ay)) *
                           static_cast<std::int64_t>(bx);
    if (cross > 0) return 1;
    if (cross < 0) return -1;
    return 0;
  }
  const double cross = ax * by - ay * bx;
  if (cross > kOrientationTolerance) return 1;
  if (cross < -kOrientationTolerance) return -1;
  return 0;
}

bool segments_cross(const Segment& s, const Segment& t) {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  // A proper crossing needs strictly opposite sides in both directions; any
  // zero orientation means touching or collinear overlap, which is allowed.
  return o1 * o2 < 0 && o3 * o4 < 0;
}

SegmentIndex::Box SegmentIndex::bounding_box(const Segment& s) {
  Box b;
  b.min_x = std::min(s.a.x, s.b.x);
  b.max_x = std::max(s.a.x, s.b.x);
  b.min_y = std::min(s.a.y, s.b.y);
  b.max_y = std::max(s.a.y, s.b.y);
  return b;
}

bool SegmentIndex::overlaps(const Box& a, const Box& b) {
  return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y && b.min_y <= a.max_y;
}

SegmentIndex SegmentIndex::build(std::vector<Segment> segments, int leaf_capacity) {
  SegmentIndex index;
  index.segments_ = std::move(segments);
  if (leaf_capacity < 1) leaf_capacity = 1;
  // Canonical starting order so the tree is independent of input order.
  std::sort(index.segments_.begin(), index.segments_.end(),
            [](const Segment& a, const Segment& b) { return a.id < b.id; });
  if (!index.segments_.empty())
    index.root_ = index.build_node(0, static_cast<int>(index.segments_.size()), 0, leaf_capacity);
  return index;
}

int SegmentIndex::build_node(int begin, int end, int depth, int leaf_capacity) {
  Node node;
  node.box = bounding_box(segments_[static_cast<std::size_t>(begin)]);
  for (int i = begin + 1; i < end; ++i) {
    const Box b = bounding_box(segments_[static_cast<std::size_t>(i)]);
    node.box.min_x = std::min(node.box.min_x, b.min_x);
    node.box.min_y = std::min(node.box.min_y, b.min_y);
    node.box.max_x = std::max(node.box.max_x, b.max_x);
    node.box.max_y = std::max(node.box.max_y, b.max_y);
  }

  if (end - begin <= leaf_capacity) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Large segments first, then position along the axis that alternates with
  // depth; ties fall back to the id so the order is total.
  const bool split_x = depth % 2 == 0;
  std::sort(segments_.begin() + begin, segments_.begin() + end,
            [split_x](const Segment& a, const Segment& b) {
              const Box ba = bounding_box(a), bb = bounding_box(b);
              const double ea = std::max(ba.max_x - ba.min_x, ba.max_y - ba.min_y);
              const double eb = std::max(bb.max_x - bb.min_x, bb.max_y - bb.min_y);
              if (ea != eb) return ea > eb;
              const double ca = split_x ? (ba.min_x + ba.max_x) : (ba.min_y + ba.max_y);
              const double cb = split_x ? (bb.min_x + bb.max_x) : (bb.min_y + bb.max_y);
              if (ca != cb) return ca < cb;
              return a.id < b.id;
            });

  const int mid = begin + (end - begin) / 2;
  const int left = build_node(begin, mid, depth + 1, leaf_capacity);
  const int right = build_node(mid, end, depth + 1, leaf_capacity);
  node.left = left;
  node.right = right;
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

std::vector<int> SegmentIndex::query_crossing(const Segment& e) const {
  std::vector<int> out;
  if (root_ < 0) return out;
  const Box query_box = bounding_box(e);
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (!overlaps(node.box, query_box)) continue;
    if (node.leaf()) {
      for (int i = node.begin; i < node.end; ++i) {
        const Segment& s = segments_[static_cast<std::size_t>(i)];
        if (segments_cross(e, s)) out.push_back(s.id);
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tourcp
