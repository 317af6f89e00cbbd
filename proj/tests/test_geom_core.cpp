#include <set>

#include "doctest.h"
#include "spcv/point_cloud.hpp"
#include "spcv/spatial_index.hpp"
#include "test_helpers.hpp"

using namespace spcv;

TEST_SUITE_BEGIN("geom_core");

TEST_CASE("normalize_unit_box maps a segment to the half-unit interval") {
  PointCloud pc({{0, 0, 0}, {2, 0, 0}});
  auto [out, t] = normalize_unit_box(pc);
  CHECK(out[0] == Vec3{-0.5, 0, 0});
  CHECK(out[1] == Vec3{0.5, 0, 0});
  CHECK(t.center == Vec3{1, 0, 0});
  CHECK(t.scale == doctest::Approx(2.0));
}

TEST_CASE("normalize_unit_box degenerate single point") {
  PointCloud pc({{5, 5, 5}});
  auto [out, t] = normalize_unit_box(pc);
  CHECK(out[0] == Vec3{0, 0, 0});
  CHECK(t.scale == 1.0);
}

TEST_CASE("normalize_unit_box random cloud: containment and inversion") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud pc = test::random_cloud(rng, 100, -3.0, 11.0);
    auto [out, t] = normalize_unit_box(pc);
    double span = 0.0;
    for (const Vec3& p : out.points) {
      CHECK(std::abs(p.x) <= 0.5 + 1e-12);
      CHECK(std::abs(p.y) <= 0.5 + 1e-12);
      CHECK(std::abs(p.z) <= 0.5 + 1e-12);
      span = std::max(span, std::abs(p.x));
    }
    const PointCloud back = t.invert(out);
    for (int i = 0; i < pc.size(); ++i) {
      const double err = (back[i] - pc[i]).norm();
      const double scale = std::max(1.0, pc[i].norm());
      CHECK(err / scale <= 1e-12);
    }
  }
}

TEST_CASE("normalize_unit_box rejects non-finite input") {
  PointCloud pc({{0, 0, 0}, {std::numeric_limits<double>::quiet_NaN(), 0, 0}});
  CHECK_THROWS_AS(normalize_unit_box(pc), invalid_input_error);
}

TEST_CASE("knn on a single point") {
  PointCloud pc({{1, 2, 3}});
  SpatialIndex index(pc);
  auto hits = index.knn(pc[0], 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].id == 0);
  CHECK(hits[0].distance == 0.0);
}

TEST_CASE("knn matches brute force on random clouds") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 20 + static_cast<int>(uniform_index(rng, 237));
    const PointCloud pc = test::random_cloud(rng, n);
    SpatialIndex index(pc);
    for (int q = 0; q < 20; ++q) {
      const Vec3 query = uniform_vec3(rng, -0.6, 0.6);
      const int k = 1 + static_cast<int>(uniform_index(rng, 16));
      const auto hits = index.knn(query, k);
      const auto ref = test::brute_knn(pc, query, k);
      REQUIRE(hits.size() == ref.size());
      for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].id == ref[i].id);
        CHECK(hits[i].distance == doctest::Approx(std::sqrt(ref[i].d2)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("knn duplicate points tie-break by lower id") {
  PointCloud pc({{1, 1, 1}, {1, 1, 1}, {2, 2, 2}});
  SpatialIndex index(pc);
  auto hits = index.knn({1, 1, 1}, 2);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].id == 0);
  CHECK(hits[1].id == 1);
}

TEST_CASE("knn clamps k to the cloud size") {
  PointCloud pc({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  SpatialIndex index(pc);
  CHECK(index.knn({0, 0, 0}, 10).size() == 3);
}

TEST_CASE("knn planar grid center finds axis neighbors") {
  PointCloud pc;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) pc.points.push_back({double(i), double(j), 0.0});
  SpatialIndex index(pc);
  const auto hits = index.knn({1, 1, 0}, 5);  // self + 4 axis-adjacent
  std::set<int> ids;
  for (std::size_t i = 1; i < hits.size(); ++i) ids.insert(hits[i].id);
  CHECK(ids == std::set<int>{1, 3, 5, 7});
}

TEST_CASE("radius_count matches a linear scan") {
  Rng rng(13);
  const PointCloud pc = test::random_cloud(rng, 300);
  SpatialIndex index(pc);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 q = uniform_vec3(rng, -0.5, 0.5);
    const double r = uniform(rng, 0.0, 0.6);
    int expected = 0;
    for (const Vec3& p : pc.points)
      if (squared_distance(p, q) <= r * r) ++expected;
    CHECK(index.radius_count(q, r) == expected);
  }
}

TEST_CASE("fps with m = N is a permutation") {
  Rng rng(17);
  const PointCloud pc = test::random_cloud(rng, 40);
  const auto ids = farthest_point_sample(pc, 40, 3);
  std::set<int> unique(ids.begin(), ids.end());
  CHECK(unique.size() == 40);
}

TEST_CASE("fps collinear points pick the far end first") {
  PointCloud pc({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {10, 0, 0}});
  const auto ids = farthest_point_sample(pc, 2, 0);
  CHECK(ids[0] == 0);
  CHECK(ids[1] == 3);
}

TEST_CASE("fps beats random subsets on min pairwise distance") {
  Rng rng(19);
  const PointCloud pc = test::random_cloud(rng, 200);
  const auto ids = farthest_point_sample(pc, 50, 0);

  auto min_pairwise = [&](const std::vector<int>& subset) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t j = i + 1; j < subset.size(); ++j)
        best = std::min(best, squared_distance(pc[subset[i]], pc[subset[j]]));
    return best;
  };

  const double fps_quality = min_pairwise(ids);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> subset;
    std::set<int> seen;
    while (subset.size() < 50) {
      const int id = static_cast<int>(uniform_index(rng, 200));
      if (seen.insert(id).second) subset.push_back(id);
    }
    CHECK(fps_quality >= min_pairwise(subset));
  }
}

TEST_CASE("fps is deterministic and validates inputs") {
  Rng rng(23);
  const PointCloud pc = test::random_cloud(rng, 64);
  CHECK(farthest_point_sample(pc, 16, 5) == farthest_point_sample(pc, 16, 5));
  CHECK_THROWS_AS(farthest_point_sample(pc, 65, 0), invalid_input_error);
  CHECK_THROWS_AS(farthest_point_sample(pc, 1, 64), invalid_input_error);
}

TEST_CASE("fps stays distinct with coincident points") {
  PointCloud pc({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  const auto ids = farthest_point_sample(pc, 3, 0);
  std::set<int> unique(ids.begin(), ids.end());
  CHECK(unique.size() == 3);
}

TEST_SUITE_END();
