#include "spcv/parallel.hpp"

#include <atomic>

namespace spcv {

namespace {
int g_workers = []() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}();
}  // namespace

void set_worker_threads(int n) { g_workers = std::max(1, n); }

int worker_threads() { return g_workers; }

void parallel_blocks(int n, int block_size, const std::function<void(int, int)>& fn) {
  if (n <= 0) return;
  block_size = std::max(1, block_size);
  const int num_blocks = (n + block_size - 1) / block_size;
  const int threads = std::min(g_workers, num_blocks);

  if (threads <= 1) {
    for (int b = 0; b < num_blocks; ++b) {
      const int begin = b * block_size;
      fn(begin, std::min(n, begin + block_size));
    }
    return;
  }

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= num_blocks) return;
      const int begin = b * block_size;
      fn(begin, std::min(n, begin + block_size));
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double parallel_sum_blocks(int n, int block_size, const std::function<double(int, int)>& fn) {
  if (n <= 0) return 0.0;
  block_size = std::max(1, block_size);
  const int num_blocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(num_blocks, 0.0);
  parallel_blocks(n, block_size, [&](int begin, int end) {
    partial[begin / block_size] = fn(begin, end);
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace spcv
