#include "momentgap/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>
#include <utility>

namespace momentgap {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double phi = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

int thread_budget() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("MOMENTGAP_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<int>(std::min<long>(v, 256));
  }
  return std::max(1, n);
}

void for_each_chunk(std::int64_t n, int chunks, const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  chunks = static_cast<int>(std::min<std::int64_t>(chunks, n));
  int workers = std::min(thread_budget(), chunks);

  auto chunk_bounds = [&](int c) {
    std::int64_t b = n * c / chunks;
    std::int64_t e = n * (c + 1) / chunks;
    return std::pair<std::int64_t, std::int64_t>(b, e);
  };

  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) {
      auto [b, e] = chunk_bounds(c);
      fn(c, b, e);
    }
    return;
  }

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= chunks) return;
      auto [b, e] = chunk_bounds(c);
      fn(c, b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double parallel_sum(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  if (n <= 0) return 0.0;
  int chunks = static_cast<int>(std::min<std::int64_t>(kDefaultChunks, n));
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(n, chunks, [&](int c, std::int64_t b, std::int64_t e) {
    NeumaierSum s;
    for (std::int64_t i = b; i < e; ++i) s.add(term(i));
    partial[c] = s.value();
  });
  NeumaierSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

Extrapolated richardson_limit(const std::function<double(double)>& f, int k_lo, int k_hi) {
  const int n = k_hi - k_lo + 1;
  std::vector<std::vector<double>> t(n);
  for (int i = 0; i < n; ++i) {
    t[i].resize(i + 1);
    t[i][0] = f(std::ldexp(1.0, -(k_lo + i)));
    for (int j = 1; j <= i; ++j) {
      double w = std::ldexp(1.0, j) - 1.0;  // 2^j - 1
      t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / w;
    }
  }
  // The deepest tableau entries amplify evaluation noise; keep the entry
  // whose immediate parents agree best.
  double best = t[0][0];
  double best_err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j <= i; ++j) {
      double err = std::abs(t[i][j] - t[i][j - 1]) + std::abs(t[i][j] - t[i - 1][j - 1]);
      if (err < best_err) {
        best_err = err;
        best = t[i][j];
      }
    }
  }
  return {best, best_err};
}

}  // namespace momentgap
