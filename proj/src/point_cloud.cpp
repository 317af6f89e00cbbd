#include "spcv/point_cloud.hpp"

#include <limits>

namespace spcv {

namespace {

struct Bbox {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};

  void extend(const Vec3& p) {
    lo = min_componentwise(lo, p);
    hi = max_componentwise(hi, p);
  }

  NormalizationTransform to_transform() const {
    NormalizationTransform t;
    t.center = (lo + hi) * 0.5;
    const Vec3 extent = hi - lo;
    const double longest = std::max(extent.x, std::max(extent.y, extent.z));
    t.scale = longest > 0.0 ? longest : 1.0;
    return t;
  }
};

}  // namespace

std::pair<PointCloud, NormalizationTransform> normalize_unit_box(const PointCloud& pc) {
  if (pc.empty()) throw invalid_input_error("normalize_unit_box: empty point cloud");
  Bbox box;
  for (const Vec3& p : pc.points) {
    if (!p.finite()) throw invalid_input_error("normalize_unit_box: non-finite coordinate");
    box.extend(p);
  }
  const NormalizationTransform t = box.to_transform();
  return {t.apply(pc), t};
}

NormalizationTransform unit_box_transform(const std::vector<PointCloud>& clouds) {
  if (clouds.empty()) throw invalid_input_error("unit_box_transform: no clouds");
  Bbox box;
  bool any = false;
  for (const PointCloud& pc : clouds) {
    for (const Vec3& p : pc.points) {
      if (!p.finite()) throw invalid_input_error("unit_box_transform: non-finite coordinate");
      box.extend(p);
      any = true;
    }
  }
  if (!any) throw invalid_input_error("unit_box_transform: all clouds empty");
  return box.to_transform();
}

}  // namespace spcv
