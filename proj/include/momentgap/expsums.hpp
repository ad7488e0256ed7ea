#ifndef MOMENTGAP_EXPSUMS_HPP
#define MOMENTGAP_EXPSUMS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "momentgap/common.hpp"

namespace momentgap::expsum {

// Finite set S of distinct integers defining the normalized exponential sum
//   X_S(theta) = |S|^{-1/2} sum_{j in S} e^{2 pi i j theta},  theta ~ U[0,1).
class ExpSumSet {
 public:
  explicit ExpSumSet(std::vector<std::int64_t> elements);

  // {1, 4, 9, ..., m^2}; 2 <= m <= 1000.
  static ExpSumSet squares(int m);

  const std::vector<std::int64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::int64_t span() const { return elements_.back() - elements_.front(); }

 private:
  std::vector<std::int64_t> elements_;
};

// ||X_S||_{2k}^{2k} as the exact rational tuples/scale, where tuples is the
// number of 2k-tuples (j_1..j_k, j'_1..j'_k) in S^{2k} with equal k-fold
// sums (the additive energy r_k) and scale = |S|^k.
struct ExactMoment {
  std::int64_t tuples;
  std::int64_t scale;
  double value() const { return static_cast<double>(tuples) / static_cast<double>(scale); }
};

// k in {1,2,3}. Counts by convolving the 0/1 indicator polynomial in exact
// 64-bit integer arithmetic and summing squared coefficients; throws
// CapacityError when k! |S|^{2k-1} could overflow or the span is too large.
ExactMoment exact_even_moment(const ExpSumSet& s, int k);

struct NormEstimate {
  double value;
  double est_error;
  std::int64_t grid;  // number of quadrature points used
};

// ||X_S||_p by the M-point uniform rule on [0,1) (the natural rule for a
// periodic integrand), M the smallest power of two >= 64 (span+1), doubled
// until successive norm values differ by less than tol. p >= 1, tol >= 1e-10.
NormEstimate quadrature_norm(const ExpSumSet& s, double p, double tol);

// Same grids evaluated for several exponents at once (one FFT per grid).
std::vector<NormEstimate> quadrature_norms(const ExpSumSet& s, std::span<const double> ps, double tol);

// 1 - C (||X_S||_p^p - 1)^theta / (||X_S||_q^q - 1)^{theta-1} with
// theta = (q-2)/(q-p); uses exact even moments when p or q is 4 or 6 and
// quadrature otherwise. Dominates ||X_S||_1 when C is admissible.
double theorem_upper_bound(const ExpSumSet& s, double p, double q, double c_const);

struct MomentTable {
  std::vector<std::int64_t> elements;
  std::map<int, ExactMoment> exact_even;          // k -> ||X||_{2k}^{2k}
  std::map<double, NormEstimate> quadrature;      // p -> ||X||_p
};

MomentTable build_moment_table(const ExpSumSet& s, std::span<const int> ks, std::span<const double> ps, double tol);

// Growth diagnostics over squares sets Q_m = {1,...,m^2}: the fourth moment
// against log m, the sixth moment against m, and the trend quantity
// (1 - ||X||_1) m / log^N m. No asymptotic constant is asserted; the table
// only exhibits the bounded bands.
struct DiagnosticsRow {
  int m;
  double l1;
  double l44;            // exact ||X||_4^4
  double l66;            // exact ||X||_6^6
  double bound;          // theorem_upper_bound with (4, 6, 1/3)
  double gap;            // bound - l1
  double l44_over_logm;
  double l66_over_m;
  double trend;          // (1 - l1) m / log^N m
};

std::vector<DiagnosticsRow> squares_diagnostics(const std::vector<int>& ms, double trend_exponent, double tol);

}  // namespace momentgap::expsum

#endif  // MOMENTGAP_EXPSUMS_HPP
