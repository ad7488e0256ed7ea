#ifndef MOMENTGAP_FINITE_RV_HPP
#define MOMENTGAP_FINITE_RV_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "momentgap/common.hpp"

namespace momentgap {

struct Atom {
  double value;
  double prob;
};

// Finite-support nonnegative random variable. Values are taken in absolute
// value on construction, sorted, and atoms whose values collide within
// relative tolerance 1e-12 are merged so downstream exact enumeration stays
// compact. Probabilities must lie in (0,1] and sum to 1 within 1e-12.
class FiniteRV {
 public:
  static constexpr double kMergeTol = 1e-12;
  static constexpr double kProbSumTol = 1e-12;

  explicit FiniteRV(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // E X^p for p > 0 (exact over the discrete measure, up to rounding).
  double moment(double p) const;

  std::string to_json() const;
  static FiniteRV from_json(const std::string& text);

 private:
  std::vector<Atom> atoms_;
};

// ||X||_p = (E X^p)^{1/p}; requires finite p > 0.
double lp_norm(const FiniteRV& rv, double p);

// Rescales so that ||X||_2 = 1. Throws DegenerateError for the a.s.-zero
// variable.
FiniteRV normalize_l2(const FiniteRV& rv);

// Two-valued variable X in {a, b} with P{X=a} = r = (b^2-1)/(b^2-a^2),
// the normalization that forces E X^2 = 1. Requires 0 < a < 1 < b.
struct TwoPointRV {
  double a;
  double b;
  double r;

  double mean() const { return (1.0 + a * b) / (a + b); }  // = E X
  FiniteRV to_rv() const;
};

TwoPointRV two_point(double a, double b);

// Outcome of evaluating the refined Cauchy-Schwarz inequality
//   ||X||_1 <= 1 - C (||X||_p^p - 1)^theta / (||X||_q^q - 1)^{theta-1},
// theta = (q-2)/(q-p), on a variable normalized to ||X||_2 = 1.
struct GapReport {
  double l1;         // ||X||_1
  double lp_p;       // E X^p
  double lq_q;       // E X^q
  double rhs;        // right-hand side above
  double gap;        // rhs - l1; the inequality holds iff gap >= 0
  bool degenerate;   // E X^q - 1 below 1e-14: constant-modulus X, rhs := 1
};

// Requires 2 < p < q < inf, C > 0, and ||X||_2 = 1 within 1e-10 (callers
// rescale with normalize_l2 first; violating this throws NormalizationError).
GapReport main_inequality_rhs(const FiniteRV& rv, double p, double q, double c_const);

}  // namespace momentgap

#endif  // MOMENTGAP_FINITE_RV_HPP
