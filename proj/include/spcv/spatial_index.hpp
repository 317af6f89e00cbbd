#pragma once

#include <vector>

#include "spcv/point_cloud.hpp"

namespace spcv {

/// Immutable k-d tree over a point cloud snapshot. Queries are exact: they
/// return the same ids as a brute-force scan, with equal distances resolved in
/// favor of the lower point id. Safe for concurrent reads after construction.
class SpatialIndex {
 public:
  struct Hit {
    int id;
    double distance;
  };

  explicit SpatialIndex(const PointCloud& pc);

  int size() const { return static_cast<int>(points_.size()); }
  const Vec3& point(int id) const { return points_[static_cast<std::size_t>(id)]; }

  /// k nearest neighbors of q, sorted by nondecreasing distance, ties by lower
  /// id. Returns min(k, N) hits. A query coinciding with an indexed point
  /// reports that point at distance 0.
  std::vector<Hit> knn(const Vec3& q, int k) const;

  /// Index of the nearest point to q (ties by lower id).
  int nearest(const Vec3& q) const;

  /// Number of indexed points with distance(q, p) <= radius.
  int radius_count(const Vec3& q, double radius) const;

 private:
  struct Node {
    // Leaf when axis < 0: [begin, end) in order_. Otherwise a split plane.
    int axis = -1;
    double split = 0.0;
    int left = -1;
    int right = -1;
    int begin = 0;
    int end = 0;
  };

  int build(int begin, int end, int depth);

  std::vector<Vec3> points_;
  std::vector<int> order_;   // point ids, permuted during construction
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Greedy farthest point sampling: starts at seed_id, then repeatedly selects
/// the point maximizing the minimum distance to the already-selected set (ties
/// by lower id). Returns m distinct ids, deterministic for fixed inputs.
std::vector<int> farthest_point_sample(const PointCloud& pc, int m, int seed_id);

}  // namespace spcv
