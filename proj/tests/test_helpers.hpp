#pragma once

#include <algorithm>
#include <vector>

#include "spcv/point_cloud.hpp"
#include "spcv/rng.hpp"

namespace spcv::test {

inline PointCloud random_cloud(Rng& rng, int n, double lo = -0.5, double hi = 0.5) {
  PointCloud pc;
  pc.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pc.points.push_back(uniform_vec3(rng, lo, hi));
  return pc;
}

struct BruteHit {
  int id;
  double d2;
};

// Reference nearest-neighbor scan with the same tie rule as the index
// (distance, then lower id).
inline std::vector<BruteHit> brute_knn(const PointCloud& pc, const Vec3& q, int k) {
  std::vector<BruteHit> all;
  all.reserve(pc.points.size());
  for (int i = 0; i < pc.size(); ++i) all.push_back({i, squared_distance(q, pc[i])});
  std::sort(all.begin(), all.end(), [](const BruteHit& a, const BruteHit& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.id < b.id;
  });
  if (static_cast<int>(all.size()) > k) all.resize(static_cast<std::size_t>(k));
  return all;
}

inline double brute_chamfer(const PointCloud& a, const PointCloud& b) {
  double sum_ab = 0.0;
  for (const Vec3& p : a.points) {
    double best = squared_distance(p, b[0]);
    for (const Vec3& q : b.points) best = std::min(best, squared_distance(p, q));
    sum_ab += best;
  }
  double sum_ba = 0.0;
  for (const Vec3& q : b.points) {
    double best = squared_distance(q, a[0]);
    for (const Vec3& p : a.points) best = std::min(best, squared_distance(q, p));
    sum_ba += best;
  }
  return sum_ab / a.size() + sum_ba / b.size();
}

inline double brute_hausdorff(const PointCloud& a, const PointCloud& b) {
  double max_ab = 0.0;
  for (const Vec3& p : a.points) {
    double best = squared_distance(p, b[0]);
    for (const Vec3& q : b.points) best = std::min(best, squared_distance(p, q));
    max_ab = std::max(max_ab, best);
  }
  double max_ba = 0.0;
  for (const Vec3& q : b.points) {
    double best = squared_distance(q, a[0]);
    for (const Vec3& p : a.points) best = std::min(best, squared_distance(q, p));
    max_ba = std::max(max_ba, best);
  }
  return std::sqrt(std::max(max_ab, max_ba));
}

// Exhaustive optimal assignment cost (mean squared matched distance); only
// usable for tiny n.
inline double brute_emd(const PointCloud& a, const PointCloud& b) {
  const int n = a.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += squared_distance(a[i], b[perm[static_cast<std::size_t>(i)]]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / n;
}

}  // namespace spcv::test
