#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "spcv/errors.hpp"
#include "spcv/vec3.hpp"

namespace spcv {

/// An ordered list of 3D positions. Point order is significant: point ids are
/// indices into this list and every operation preserves them.
struct PointCloud {
  std::vector<Vec3> points;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

  int size() const { return static_cast<int>(points.size()); }
  bool empty() const { return points.empty(); }
  const Vec3& operator[](int i) const { return points[static_cast<std::size_t>(i)]; }
  Vec3& operator[](int i) { return points[static_cast<std::size_t>(i)]; }

  bool all_finite() const {
    for (const Vec3& p : points)
      if (!p.finite()) return false;
    return true;
  }
};

/// Similarity transform mapping model coordinates into the unit box:
/// q = (p - center) / scale.
struct NormalizationTransform {
  Vec3 center{0.0, 0.0, 0.0};
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return (p - center) / scale; }
  Vec3 invert(const Vec3& q) const { return q * scale + center; }

  PointCloud apply(const PointCloud& pc) const {
    PointCloud out;
    out.points.reserve(pc.points.size());
    for (const Vec3& p : pc.points) out.points.push_back(apply(p));
    return out;
  }

  PointCloud invert(const PointCloud& pc) const {
    PointCloud out;
    out.points.reserve(pc.points.size());
    for (const Vec3& p : pc.points) out.points.push_back(invert(p));
    return out;
  }
};

/// Centers the cloud on its bounding-box center and scales the longest
/// bounding-box axis to length 1, so the result fits [-0.5, 0.5]^3. A cloud
/// with zero extent maps to the origin with scale 1.
std::pair<PointCloud, NormalizationTransform> normalize_unit_box(const PointCloud& pc);

/// Transform fitting the union bounding box of several clouds, so one
/// normalization can serve a whole sequence.
NormalizationTransform unit_box_transform(const std::vector<PointCloud>& clouds);

}  // namespace spcv
