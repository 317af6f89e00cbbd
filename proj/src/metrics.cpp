#include "spcv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spcv/errors.hpp"
#include "spcv/parallel.hpp"
#include "spcv/rng.hpp"
#include "spcv/spatial_index.hpp"

namespace spcv {

void MetricConfig::validate() const {
  if (epsilon <= 0.0) throw invalid_input_error("MetricConfig: epsilon must be > 0");
  if (iterations < 1) throw invalid_input_error("MetricConfig: iterations must be >= 1");
  if (train_eps_start <= 0.0 || train_eps_end <= 0.0)
    throw invalid_input_error("MetricConfig: training epsilons must be > 0");
  if (train_iterations < 1)
    throw invalid_input_error("MetricConfig: train_iterations must be >= 1");
}

MetricConfig::Kind metric_kind_from_string(const std::string& s) {
  if (s == "chamfer") return MetricConfig::Kind::chamfer;
  if (s == "emd-exact") return MetricConfig::Kind::emd_exact;
  if (s == "emd-sinkhorn") return MetricConfig::Kind::emd_sinkhorn;
  throw invalid_input_error("unknown metric kind: " + s);
}

std::string to_string(MetricConfig::Kind k) {
  switch (k) {
    case MetricConfig::Kind::chamfer: return "chamfer";
    case MetricConfig::Kind::emd_exact: return "emd-exact";
    case MetricConfig::Kind::emd_sinkhorn: return "emd-sinkhorn";
  }
  return "?";
}

namespace {

void require_nonempty(const PointCloud& a, const PointCloud& b, const char* who) {
  if (a.empty() || b.empty()) throw invalid_input_error(std::string(who) + ": empty input");
}

constexpr int kNnBlock = 256;

// Mean squared NN distance from each point of `from` into `index`.
double directed_mean_sq(const PointCloud& from, const SpatialIndex& index) {
  const int n = from.size();
  return parallel_sum_blocks(n, kNnBlock, [&](int begin, int end) {
    double s = 0.0;
    for (int i = begin; i < end; ++i) {
      const double d = index.knn(from[i], 1).front().distance;
      s += d * d;
    }
    return s;
  }) / static_cast<double>(n);
}

double directed_max(const PointCloud& from, const SpatialIndex& index) {
  const int n = from.size();
  const int blocks = (n + kNnBlock - 1) / kNnBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  parallel_blocks(n, kNnBlock, [&](int begin, int end) {
    double m = 0.0;
    for (int i = begin; i < end; ++i)
      m = std::max(m, index.knn(from[i], 1).front().distance);
    partial[static_cast<std::size_t>(begin / kNnBlock)] = m;
  });
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

}  // namespace

double chamfer(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, b, "chamfer");
  const SpatialIndex ia(a), ib(b);
  return directed_mean_sq(a, ib) + directed_mean_sq(b, ia);
}

double hausdorff(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, b, "hausdorff");
  const SpatialIndex ia(a), ib(b);
  return std::max(directed_max(a, ib), directed_max(b, ia));
}

MetricEval chamfer_with_grad(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, b, "chamfer_with_grad");
  const SpatialIndex ia(a), ib(b);
  const int n = a.size();
  const int m = b.size();

  MetricEval out;
  out.grad.assign(static_cast<std::size_t>(n), Vec3{});

  double cost_ab = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto hit = ib.knn(a[i], 1).front();
    cost_ab += hit.distance * hit.distance;
    out.grad[static_cast<std::size_t>(i)] += (a[i] - b[hit.id]) * (2.0 / n);
  }
  double cost_ba = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto hit = ia.knn(b[j], 1).front();
    cost_ba += hit.distance * hit.distance;
    out.grad[static_cast<std::size_t>(hit.id)] += (a[hit.id] - b[j]) * (2.0 / m);
  }
  out.cost = cost_ab / n + cost_ba / m;
  return out;
}

// ---------------------------------------------------------------------------
// Exact EMD: Hungarian algorithm with potentials (shortest augmenting paths).
// ---------------------------------------------------------------------------

namespace {

// cost is n x n row-major; fills row_to_col and returns the total cost.
double solve_assignment(const std::vector<double>& cost, int n, std::vector<int>& row_to_col) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);    // column -> assigned row
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = row[j - 1] - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  row_to_col.assign(static_cast<std::size_t>(n), -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i >= 1) {
      row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
      total += cost[static_cast<std::size_t>(i - 1) * n + (j - 1)];
    }
  }
  return total;
}

}  // namespace

double emd_exact(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, b, "emd_exact");
  const int n = a.size();
  if (n != b.size()) throw invalid_input_error("emd_exact: clouds must have equal size");
  if (n > 1024) throw invalid_input_error("emd_exact: size cap 1024 exceeded");

  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cost[static_cast<std::size_t>(i) * n + j] = squared_distance(a[i], b[j]);

  std::vector<int> unused;
  return solve_assignment(cost, n, unused) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Entropic OT, log domain, double precision (metric API path).
// ---------------------------------------------------------------------------

namespace {

// One dual update sweep: out_i = -eps * (LSE_j((in[j] - ||p_i - q_j||^2)/eps) - log_w)
// for every point p_i of `rows` against all q_j of `cols`.
void dual_sweep(const PointCloud& rows, const PointCloud& cols, const std::vector<double>& in,
                double eps, double log_w, std::vector<double>& out) {
  const int n = rows.size();
  const int m = cols.size();
  out.resize(static_cast<std::size_t>(n));
  parallel_blocks(n, 64, [&](int begin, int end) {
    std::vector<double> z(static_cast<std::size_t>(m));
    for (int i = begin; i < end; ++i) {
      const Vec3 p = rows[i];
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        const double val = (in[static_cast<std::size_t>(j)] - squared_distance(p, cols[j])) / eps;
        z[static_cast<std::size_t>(j)] = val;
        mx = std::max(mx, val);
      }
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += std::exp(z[static_cast<std::size_t>(j)] - mx);
      out[static_cast<std::size_t>(i)] = -eps * (mx + std::log(s) - log_w);
    }
  });
}

struct RowPassResult {
  double cost = 0.0;
  std::vector<Vec3> bary;
};

// Row-normalized plan: per row i, softmax over (g_j - C_ij)/eps gives the
// conditional transport weights; returns mean matched cost and barycenters.
RowPassResult row_softmax_pass(const PointCloud& a, const PointCloud& b,
                               const std::vector<double>& g, double eps) {
  const int n = a.size();
  const int m = b.size();
  RowPassResult r;
  r.bary.assign(static_cast<std::size_t>(n), Vec3{});
  std::vector<double> row_cost(static_cast<std::size_t>(n), 0.0);
  parallel_blocks(n, 64, [&](int begin, int end) {
    std::vector<double> z(static_cast<std::size_t>(m));
    for (int i = begin; i < end; ++i) {
      const Vec3 p = a[i];
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        const double val = (g[static_cast<std::size_t>(j)] - squared_distance(p, b[j])) / eps;
        z[static_cast<std::size_t>(j)] = val;
        mx = std::max(mx, val);
      }
      double sw = 0.0, sc = 0.0;
      Vec3 sb{};
      for (int j = 0; j < m; ++j) {
        const double w = std::exp(z[static_cast<std::size_t>(j)] - mx);
        sw += w;
        sc += w * squared_distance(p, b[j]);
        sb += b[j] * w;
      }
      row_cost[static_cast<std::size_t>(i)] = sc / sw;
      r.bary[static_cast<std::size_t>(i)] = sb / sw;
    }
  });
  double total = 0.0;
  for (double c : row_cost) total += c;
  r.cost = total / n;
  return r;
}

double ladder_eps(double eps_start, double eps_end, int it, int total) {
  if (eps_start <= 0.0 || total <= 1) return eps_end;
  const double t = static_cast<double>(it) / static_cast<double>(total - 1);
  return eps_start * std::pow(eps_end / eps_start, t);
}

}  // namespace

SinkhornResult emd_sinkhorn(const PointCloud& a, const PointCloud& b, const MetricConfig& cfg,
                            bool trace_costs) {
  require_nonempty(a, b, "emd_sinkhorn");
  cfg.validate();
  const int n = a.size();
  const int m = b.size();
  const double log_n = std::log(static_cast<double>(n));
  const double log_m = std::log(static_cast<double>(m));

  std::vector<double> f(static_cast<std::size_t>(n), 0.0);
  std::vector<double> g(static_cast<std::size_t>(m), 0.0);

  SinkhornResult result;
  for (int it = 0; it < cfg.iterations; ++it) {
    const double eps = ladder_eps(cfg.anneal_from, cfg.epsilon, it, cfg.iterations);
    dual_sweep(a, b, g, eps, log_m, f);
    dual_sweep(b, a, f, eps, log_n, g);
    if (trace_costs)
      result.cost_per_iteration.push_back(row_softmax_pass(a, b, g, eps).cost);
  }

  const RowPassResult pass = row_softmax_pass(a, b, g, cfg.epsilon);
  result.cost = pass.cost;
  result.grad_a.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    result.grad_a[static_cast<std::size_t>(i)] = (a[i] - pass.bary[static_cast<std::size_t>(i)]) * (2.0 / n);
  if (!std::isfinite(result.cost))
    throw numeric_error("emd_sinkhorn: non-finite cost");
  return result;
}

// ---------------------------------------------------------------------------
// mNUC
// ---------------------------------------------------------------------------

double nuc(const PointCloud& pc, double disk_fraction, int num_disks, std::uint64_t seed) {
  if (pc.empty()) throw invalid_input_error("nuc: empty point cloud");
  if (disk_fraction <= 0.0 || disk_fraction >= 1.0)
    throw invalid_input_error("nuc: disk_fraction must be in (0,1)");
  if (num_disks < 1) throw invalid_input_error("nuc: num_disks must be >= 1");

  const int n = pc.size();
  Rng rng(seed);
  const int seed_id = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
  const int disks = std::min(num_disks, n);
  const std::vector<int> centers = farthest_point_sample(pc, disks, seed_id);

  const SpatialIndex index(pc);
  const double radius = disk_fraction * std::sqrt(3.0);  // fraction of the unit-box diagonal

  std::vector<double> counts;
  counts.reserve(centers.size());
  for (int id : centers)
    counts.push_back(static_cast<double>(index.radius_count(pc[id], radius)));

  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(counts.size());
  if (mean == 0.0) return 0.0;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= static_cast<double>(counts.size());
  return std::sqrt(var) / mean;
}

double mnuc(const PointCloud& pc, const std::vector<double>& disk_fractions, int num_disks,
            std::uint64_t seed) {
  if (disk_fractions.empty()) throw invalid_input_error("mnuc: no disk fractions");
  double s = 0.0;
  for (double f : disk_fractions) s += nuc(pc, f, num_disks, seed);
  return s / static_cast<double>(disk_fractions.size());
}

const std::vector<double>& default_mnuc_fractions() {
  static const std::vector<double> fractions{0.004, 0.006, 0.008, 0.010, 0.012};
  return fractions;
}

// ---------------------------------------------------------------------------
// TrainingMetric
// ---------------------------------------------------------------------------

TrainingMetric::TrainingMetric(const MetricConfig& cfg, int total_steps)
    : cfg_(cfg), total_steps_(std::max(1, total_steps)) {
  cfg_.validate();
}

double TrainingMetric::epsilon_at(int step) const {
  return ladder_eps(cfg_.train_eps_start, cfg_.train_eps_end, step, total_steps_);
}

MetricEval TrainingMetric::evaluate(const PointCloud& a, const PointCloud& b, int step) {
  switch (cfg_.kind) {
    case MetricConfig::Kind::chamfer:
      return chamfer_with_grad(a, b);
    case MetricConfig::Kind::emd_exact: {
      const int n = a.size();
      if (n != b.size()) throw invalid_input_error("emd_exact training: size mismatch");
      std::vector<double> cost(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          cost[static_cast<std::size_t>(i) * n + j] = squared_distance(a[i], b[j]);
      std::vector<int> row_to_col;
      const double total = solve_assignment(cost, n, row_to_col);
      MetricEval eval;
      eval.cost = total / n;
      eval.grad.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        eval.grad[static_cast<std::size_t>(i)] =
            (a[i] - b[row_to_col[static_cast<std::size_t>(i)]]) * (2.0 / n);
      return eval;
    }
    case MetricConfig::Kind::emd_sinkhorn:
      return solver_.evaluate(a, b, epsilon_at(step), cfg_.train_iterations);
  }
  throw usage_error("TrainingMetric: unknown kind");
}

}  // namespace spcv
