#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "spcv/errors.hpp"
#include "spcv/metrics.hpp"
#include "spcv/parallel.hpp"

namespace spcv {

namespace {

// exp(x) for x <= 0, accurate to ~1e-7 relative: base-2 range reduction with a
// degree-6 polynomial on [-0.5, 0.5]. Branch-free so the surrounding loops
// vectorize.
inline float exp_neg(float x) {
  x = x < -87.0f ? -87.0f : x;
  const float t = x * 1.4426950408889634f;
  const float fi = std::floor(t + 0.5f);
  const float fr = t - fi;
  const float w = fr * 0.6931471805599453f;
  float p = 1.5403530393381609e-4f;
  p = p * w + 1.3333355814642844e-3f;
  p = p * w + 9.6181291076284772e-3f;
  p = p * w + 5.5504108664821580e-2f;
  p = p * w + 2.4022650695910072e-1f;
  p = p * w + 6.9314718055994531e-1f;
  p = p * w + 1.0f;
  // p approximates exp(w) = 2^fr; scale by 2^fi through the exponent bits.
  const std::int32_t e = static_cast<std::int32_t>(fi);
  const float scale = std::bit_cast<float>(static_cast<std::uint32_t>((e + 127) << 23));
  return p * scale;
}

struct Soa {
  std::vector<float> x, y, z;
  int n = 0;

  void load(const PointCloud& pc) {
    n = pc.size();
    x.resize(static_cast<std::size_t>(n));
    y.resize(static_cast<std::size_t>(n));
    z.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<float>(pc[i].x);
      y[static_cast<std::size_t>(i)] = static_cast<float>(pc[i].y);
      z[static_cast<std::size_t>(i)] = static_cast<float>(pc[i].z);
    }
  }
};

constexpr int kRowBlock = 32;

// out_i = -eps * (LSE_j((in[j] - ||p_i - q_j||^2)/eps) - log_w)
void dual_sweep_f32(const Soa& rows, const Soa& cols, const std::vector<float>& in, float eps,
                    float log_w, std::vector<float>& out) {
  const int n = rows.n;
  const int m = cols.n;
  out.resize(static_cast<std::size_t>(n));
  const float inv_eps = 1.0f / eps;
  parallel_blocks(n, kRowBlock, [&](int begin, int end) {
    std::vector<float> zb(static_cast<std::size_t>(m));
    float* z = zb.data();
    const float* qx = cols.x.data();
    const float* qy = cols.y.data();
    const float* qz = cols.z.data();
    const float* gv = in.data();
    for (int i = begin; i < end; ++i) {
      const float px = rows.x[static_cast<std::size_t>(i)];
      const float py = rows.y[static_cast<std::size_t>(i)];
      const float pz = rows.z[static_cast<std::size_t>(i)];
      float mx = -std::numeric_limits<float>::infinity();
      for (int j = 0; j < m; ++j) {
        const float dx = px - qx[j];
        const float dy = py - qy[j];
        const float dz = pz - qz[j];
        const float v = (gv[j] - (dx * dx + dy * dy + dz * dz)) * inv_eps;
        z[j] = v;
        mx = v > mx ? v : mx;
      }
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += exp_neg(z[j] - mx);
      out[static_cast<std::size_t>(i)] =
          -eps * (mx + static_cast<float>(std::log(s)) - log_w);
    }
  });
}

}  // namespace

void SinkhornSolver::reset() {
  f_.clear();
  g_.clear();
}

MetricEval SinkhornSolver::evaluate(const PointCloud& a, const PointCloud& b, double eps,
                                    int iterations) {
  if (a.empty() || b.empty()) throw invalid_input_error("SinkhornSolver: empty input");
  if (eps <= 0.0) throw invalid_input_error("SinkhornSolver: eps must be > 0");
  const int n = a.size();
  const int m = b.size();

  Soa sa, sb;
  sa.load(a);
  sb.load(b);

  if (static_cast<int>(f_.size()) != n || static_cast<int>(g_.size()) != m) {
    f_.assign(static_cast<std::size_t>(n), 0.0);
    g_.assign(static_cast<std::size_t>(m), 0.0);
  }

  std::vector<float> f32(f_.begin(), f_.end());
  std::vector<float> g32(g_.begin(), g_.end());
  const float feps = static_cast<float>(eps);
  const float log_n = std::log(static_cast<float>(n));
  const float log_m = std::log(static_cast<float>(m));

  for (int it = 0; it < iterations; ++it) {
    dual_sweep_f32(sa, sb, g32, feps, log_m, f32);
    dual_sweep_f32(sb, sa, f32, feps, log_n, g32);
  }
  f_.assign(f32.begin(), f32.end());
  g_.assign(g32.begin(), g32.end());

  // Gradient pass: row softmax over (g_j - C_ij)/eps.
  MetricEval eval;
  eval.grad.assign(static_cast<std::size_t>(n), Vec3{});
  std::vector<double> row_cost(static_cast<std::size_t>(n), 0.0);
  const float inv_eps = 1.0f / feps;
  parallel_blocks(n, kRowBlock, [&](int begin, int end) {
    std::vector<float> zb(static_cast<std::size_t>(m));
    float* z = zb.data();
    const float* qx = sb.x.data();
    const float* qy = sb.y.data();
    const float* qz = sb.z.data();
    const float* gv = g32.data();
    for (int i = begin; i < end; ++i) {
      const float px = sa.x[static_cast<std::size_t>(i)];
      const float py = sa.y[static_cast<std::size_t>(i)];
      const float pz = sa.z[static_cast<std::size_t>(i)];
      float mx = -std::numeric_limits<float>::infinity();
      for (int j = 0; j < m; ++j) {
        const float dx = px - qx[j];
        const float dy = py - qy[j];
        const float dz = pz - qz[j];
        const float v = (gv[j] - (dx * dx + dy * dy + dz * dz)) * inv_eps;
        z[j] = v;
        mx = v > mx ? v : mx;
      }
      double sw = 0.0, sc = 0.0, bx = 0.0, by = 0.0, bz = 0.0;
      for (int j = 0; j < m; ++j) {
        const float w = exp_neg(z[j] - mx);
        const float dx = px - qx[j];
        const float dy = py - qy[j];
        const float dz = pz - qz[j];
        sw += w;
        sc += static_cast<double>(w) * (dx * dx + dy * dy + dz * dz);
        bx += static_cast<double>(w) * qx[j];
        by += static_cast<double>(w) * qy[j];
        bz += static_cast<double>(w) * qz[j];
      }
      row_cost[static_cast<std::size_t>(i)] = sc / sw;
      const Vec3 bary{bx / sw, by / sw, bz / sw};
      eval.grad[static_cast<std::size_t>(i)] = (a[i] - bary) * (2.0 / n);
    }
  });

  double total = 0.0;
  for (double c : row_cost) total += c;
  eval.cost = total / n;
  if (!std::isfinite(eval.cost)) throw numeric_error("SinkhornSolver: non-finite cost");
  return eval;
}

}  // namespace spcv
