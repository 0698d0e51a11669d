#pragma once

#include <span>
#include <vector>

namespace tourcp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

struct Segment {
  Point a;
  Point b;
  int id = -1;  // caller-chosen identifier, reported by index queries
};

// Sign of the turn p -> q -> r: +1 counter-clockwise, -1 clockwise, 0
// collinear.  Computed in integer arithmetic when all coordinates are whole
// numbers (the common case for node coordinate files), otherwise in floating
// point with a small tolerance around zero.
int orientation(const Point& p, const Point& q, const Point& r);

// True when the two segments cross in their interiors.  Touching at an
// endpoint, sharing an endpoint, or overlapping collinearly does not count:
// consecutive tour edges share cities and must not be reported as crossing.
bool segments_cross(const Segment& s, const Segment& t);

// Spatial index over a fixed set of segments, used to find crossing edges
// without scanning all pairs.  Built by recursive binary subdivision; at
// every level the segments are ordered by decreasing bounding-box extent and
// then by position along the split axis, so the long edges that would cover
// most of the plane end up grouped together instead of widening every node.
class SegmentIndex {
public:
  static SegmentIndex build(std::vector<Segment> segments, int leaf_capacity = 8);

  // Ids of all indexed segments properly crossing e, sorted ascending.  The
  // result only depends on the segment set, not on the order they were given.
  std::vector<int> query_crossing(const Segment& e) const;

  std::size_t size() const { return segments_.size(); }

private:
  struct Box {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  };
  struct Node {
    Box box;
    int left = -1, right = -1;    // inner node: child indices
    int begin = 0, end = 0;       // leaf: segment range
    bool leaf() const { return left < 0; }
  };

  static Box bounding_box(const Segment& s);
  static bool overlaps(const Box& a, const Box& b);
  int build_node(int begin, int end, int depth, int leaf_capacity);

  std::vector<Segment> segments_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace tourcp
