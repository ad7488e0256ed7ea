#ifndef MOMENTGAP_COMMON_HPP
#define MOMENTGAP_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentgap {

// Error taxonomy. Everything user-facing derives from Error so the CLI can
// catch one type and map it to a nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument values (out-of-range p, invalid probabilities, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested outside a function's open domain (e.g. too close to
// the boundary of the unit square).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input for which the operation is undefined
// (all-zero random variable, constant cube function, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Input exceeds an exact-mode size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Violated normalization precondition (||X||_2 != 1 beyond tolerance).
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An optimizer failed to converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Deterministic random source. std::mt19937_64 has a fully specified
// algorithm; the double/int conversions below avoid std::*_distribution,
// whose output is implementation-defined, so identical seeds produce
// identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] (modulo bias is irrelevant here; the draw
  // only needs to be deterministic).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Standard normal via Box-Muller (again: deterministic everywhere).
  double normal();

  // Independent child generator; advances this stream by one draw.
  Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Number of worker threads to use: MOMENTGAP_THREADS if set (clamped to
// [1, 256]), otherwise the hardware concurrency.
int thread_budget();

// Splits [0, n) into a fixed number of chunks whose boundaries do not depend
// on the thread count, runs fn(chunk, begin, end) possibly in parallel.
// Callers combine per-chunk results in chunk order, which keeps floating
// point reductions bit-reproducible under any MOMENTGAP_THREADS.
void for_each_chunk(std::int64_t n, int chunks, const std::function<void(int, std::int64_t, std::int64_t)>& fn);

inline constexpr int kDefaultChunks = 256;

// Deterministic parallel sum of term(i) for i in [0, n): Neumaier-compensated
// within each fixed chunk, chunk sums combined in index order.
double parallel_sum(std::int64_t n, const std::function<double(std::int64_t)>& term);

// Compensated sequential accumulator.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// printf-style "%.17g" formatting; round-trips doubles and is stable across
// runs, which the verify report's byte-identical contract relies on.
std::string fmt_g17(double x);

// Shorter human-readable form used in tables.
std::string fmt_g9(double x);

// Richardson extrapolation of f(eps) as eps -> 0 over the nested margins
// eps_k = 2^-k, k in [k_lo, k_hi]. Builds a Neville tableau and returns the
// entry whose neighbors agree best, with that agreement as error estimate;
// robust when the smallest margins are contaminated by cancellation noise.
struct Extrapolated {
  double value;
  double err;
};
Extrapolated richardson_limit(const std::function<double(double)>& f, int k_lo = 10, int k_hi = 27);

}  // namespace momentgap

#endif  // MOMENTGAP_COMMON_HPP
