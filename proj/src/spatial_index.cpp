#include "spcv/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spcv {

namespace {

constexpr int kLeafSize = 16;

// Candidate ordering: nearer wins, equal distance resolved to the lower id.
struct Candidate {
  double d2;
  int id;
  bool operator<(const Candidate& o) const {
    if (d2 != o.d2) return d2 < o.d2;
    return id < o.id;
  }
};

// Fixed-capacity max-heap of the k best candidates seen so far.
class KBest {
 public:
  explicit KBest(int k) : k_(k) { heap_.reserve(static_cast<std::size_t>(k)); }

  bool full() const { return static_cast<int>(heap_.size()) == k_; }
  const Candidate& worst() const { return heap_.front(); }

  void offer(const Candidate& c) {
    if (!full()) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end());
      return;
    }
    if (c < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  std::vector<Candidate> sorted() && {
    std::sort(heap_.begin(), heap_.end());
    return std::move(heap_);
  }

 private:
  int k_;
  std::vector<Candidate> heap_;
};

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& pc) : points_(pc.points) {
  if (pc.empty()) throw invalid_input_error("SpatialIndex: empty point cloud");
  if (!pc.all_finite()) throw invalid_input_error("SpatialIndex: non-finite coordinate");
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, static_cast<int>(points_.size()), 0);
}

int SpatialIndex::build(int begin, int end, int depth) {
  Node node;
  if (end - begin <= kLeafSize) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Split along the axis with the largest extent over this range.
  Vec3 lo = points_[static_cast<std::size_t>(order_[begin])];
  Vec3 hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    const Vec3& p = points_[static_cast<std::size_t>(order_[i])];
    lo = min_componentwise(lo, p);
    hi = max_componentwise(hi, p);
  }
  const Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y > extent[axis]) axis = 1;
  if (extent.z > extent[axis]) axis = 2;

  if (extent[axis] == 0.0) {
    // All points coincide; keep them in one leaf.
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double ca = points_[static_cast<std::size_t>(a)][axis];
                     const double cb = points_[static_cast<std::size_t>(b)][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });

  node.axis = axis;
  node.split = points_[static_cast<std::size_t>(order_[mid])][axis];
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[static_cast<std::size_t>(self)].left = left;
  nodes_[static_cast<std::size_t>(self)].right = right;
  return self;
}

std::vector<SpatialIndex::Hit> SpatialIndex::knn(const Vec3& q, int k) const {
  if (k < 1) throw invalid_input_error("knn: k must be >= 1");
  k = std::min(k, size());
  KBest best(k);

  // Iterative depth-first descent, nearer child first. A subtree is skipped
  // only when the splitting plane is strictly farther than the current worst
  // candidate, so equal-distance points are always examined.
  std::vector<int> stack;
  stack.reserve(64);
  stack.push_back(root_);
  while (!stack.empty()) {
    const int ni = stack.back();
    stack.pop_back();
    if (ni < 0) continue;
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int id = order_[static_cast<std::size_t>(i)];
        best.offer({squared_distance(q, points_[static_cast<std::size_t>(id)]), id});
      }
      continue;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (!best.full() || delta * delta <= best.worst().d2) stack.push_back(far);
    stack.push_back(near);
  }

  std::vector<Hit> hits;
  hits.reserve(static_cast<std::size_t>(k));
  for (const Candidate& c : std::move(best).sorted())
    hits.push_back({c.id, std::sqrt(c.d2)});
  return hits;
}

int SpatialIndex::nearest(const Vec3& q) const { return knn(q, 1).front().id; }

int SpatialIndex::radius_count(const Vec3& q, double radius) const {
  if (radius < 0.0) return 0;
  const double r2 = radius * radius;
  int count = 0;
  std::vector<int> stack;
  stack.reserve(64);
  stack.push_back(root_);
  while (!stack.empty()) {
    const int ni = stack.back();
    stack.pop_back();
    if (ni < 0) continue;
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int id = order_[static_cast<std::size_t>(i)];
        if (squared_distance(q, points_[static_cast<std::size_t>(id)]) <= r2) ++count;
      }
      continue;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (delta * delta <= r2) stack.push_back(far);
    stack.push_back(near);
  }
  return count;
}

std::vector<int> farthest_point_sample(const PointCloud& pc, int m, int seed_id) {
  const int n = pc.size();
  if (n == 0) throw invalid_input_error("farthest_point_sample: empty point cloud");
  if (m < 1 || m > n) throw invalid_input_error("farthest_point_sample: m out of range");
  if (seed_id < 0 || seed_id >= n) throw invalid_input_error("farthest_point_sample: bad seed id");

  std::vector<int> selected;
  selected.reserve(static_cast<std::size_t>(m));
  std::vector<double> min_d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<char> taken(static_cast<std::size_t>(n), 0);

  int current = seed_id;
  selected.push_back(current);
  taken[static_cast<std::size_t>(current)] = 1;
  for (int round = 1; round < m; ++round) {
    const Vec3& last = pc[current];
    int next = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      double& d2 = min_d2[static_cast<std::size_t>(i)];
      const double cand = squared_distance(pc[i], last);
      if (cand < d2) d2 = cand;
      // With coincident points every remaining candidate can sit at distance
      // 0; the taken flag keeps the output ids distinct.
      if (!taken[static_cast<std::size_t>(i)] && d2 > best) {
        best = d2;
        next = i;
      }
    }
    selected.push_back(next);
    taken[static_cast<std::size_t>(next)] = 1;
    current = next;
  }
  return selected;
}

}  // namespace spcv
