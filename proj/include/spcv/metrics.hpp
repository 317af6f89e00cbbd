#pragma once

#include <cstdint>
#include <vector>

#include "spcv/point_cloud.hpp"

namespace spcv {

struct MetricConfig {
  enum class Kind { chamfer, emd_exact, emd_sinkhorn };

  Kind kind = Kind::emd_sinkhorn;

  // emd_sinkhorn evaluation parameters.
  double epsilon = 1e-3;
  int iterations = 100;
  // When > 0, epsilon follows a geometric ladder from anneal_from down to
  // epsilon across the configured iterations of a single call.
  double anneal_from = 0.0;

  // Per-step training schedule (consumed by TrainingMetric).
  double train_eps_start = 1e-1;
  double train_eps_end = 1e-3;
  int train_iterations = 1;

  void validate() const;
};

MetricConfig::Kind metric_kind_from_string(const std::string& s);
std::string to_string(MetricConfig::Kind k);

/// Sum of both directed mean squared nearest-neighbor distances.
double chamfer(const PointCloud& a, const PointCloud& b);

/// Max over both directions of the largest nearest-neighbor distance
/// (plain Euclidean, not squared).
double hausdorff(const PointCloud& a, const PointCloud& b);

/// Mean squared matched distance under the optimal bijection between two
/// equal-size clouds (Hungarian algorithm). Guarded to |A| = |B| <= 1024.
double emd_exact(const PointCloud& a, const PointCloud& b);

struct SinkhornResult {
  double cost = 0.0;
  std::vector<Vec3> grad_a;           // d cost / d a_i
  std::vector<double> cost_per_iteration;  // filled when trace requested
};

/// Entropic optimal transport with squared-Euclidean ground cost and uniform
/// weights, solved in the log domain. Reports the transport cost of the
/// row-normalized plan and its barycentric gradient with respect to A.
/// Annealing the epsilon ladder drives the cost to emd_exact for equal sizes.
SinkhornResult emd_sinkhorn(const PointCloud& a, const PointCloud& b, const MetricConfig& cfg,
                            bool trace_costs = false);

/// Uniformity statistic: FPS-seeded disks of radius disk_fraction times the
/// unit-box diagonal; NUC = stddev(counts) / mean(counts). Expects input
/// normalized to the unit box. Deterministic for a fixed seed.
double nuc(const PointCloud& pc, double disk_fraction, int num_disks, std::uint64_t seed);

/// Mean NUC over a set of disk fractions (the fidelity-report sweep).
double mnuc(const PointCloud& pc, const std::vector<double>& disk_fractions, int num_disks,
            std::uint64_t seed);

/// Disk fractions used by the fidelity report.
const std::vector<double>& default_mnuc_fractions();

struct MetricEval {
  double cost = 0.0;
  std::vector<Vec3> grad;  // d cost / d a_i
};

/// Chamfer value and gradient with respect to A (envelope gradient at the
/// current nearest-neighbor assignments).
MetricEval chamfer_with_grad(const PointCloud& a, const PointCloud& b);

/// Warm-started Sinkhorn state for iterative fitting: dual potentials persist
/// across evaluate() calls, so a small per-step iteration count tracks slowly
/// moving inputs. Internally single precision with double accumulators; fully
/// deterministic and independent of the worker-thread count.
class SinkhornSolver {
 public:
  MetricEval evaluate(const PointCloud& a, const PointCloud& b, double eps, int iterations);
  void reset();

 private:
  std::vector<double> f_, g_;
};

/// Per-step training loss dispatcher: applies the configured metric kind and
/// the geometric epsilon schedule over total_steps.
class TrainingMetric {
 public:
  TrainingMetric(const MetricConfig& cfg, int total_steps);

  MetricEval evaluate(const PointCloud& a, const PointCloud& b, int step);
  double epsilon_at(int step) const;

 private:
  MetricConfig cfg_;
  int total_steps_;
  SinkhornSolver solver_;
};

}  // namespace spcv
