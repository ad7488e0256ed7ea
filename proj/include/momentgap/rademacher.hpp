#ifndef MOMENTGAP_RADEMACHER_HPP
#define MOMENTGAP_RADEMACHER_HPP

#include <span>
#include <vector>

#include "momentgap/common.hpp"
#include "momentgap/finite_rv.hpp"

namespace momentgap::rademacher {

// Signed finite distribution: the working representation for exact
// convolutions of weighted sums before taking absolute values. Atoms stay
// sorted; values colliding within relative tolerance 1e-12 merge, which
// keeps memory linear in distinct sums when coefficients collide.
class SignedRV {
 public:
  static constexpr double kMergeTol = 1e-12;

  static SignedRV point(double v) { return SignedRV({{v, 1.0}}); }
  explicit SignedRV(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // Distribution of X + coeff * S for S distributed as `step`, X as *this,
  // independent.
  SignedRV add_scaled(const SignedRV& step, double coeff) const;

  // |X| as a FiniteRV.
  FiniteRV abs() const;

  double moment(int k) const;  // E X^k

 private:
  SignedRV() = default;
  std::vector<Atom> atoms_;
};

// The mean-zero unit-variance two-valued variable with bias p:
//   +sqrt((1-p)/p) with probability p,  -sqrt(p/(1-p)) with probability 1-p.
SignedRV biased_xi(double p);

// Bias p plus unit coefficient vector a_1..a_n (n <= 24 for exact mode).
struct SumSpec {
  static constexpr int kMaxExact = 24;
  static constexpr double kUnitTol = 1e-12;

  double bias;
  std::vector<double> coeffs;

  // With normalize=true the coefficients are rescaled to unit sum of
  // squares; otherwise sum a_j^2 = 1 is required within 1e-12.
  SumSpec(double bias, std::vector<double> coeffs, bool normalize = false);
};

// Exact distribution of |sum_j a_j xi_j| by iterated two-point convolution.
FiniteRV exact_sum_distribution(const SumSpec& spec);

// E|X|^4 = 3 + (E xi^4 - 3) sum a_j^4 with E xi^4 = 1/(p(1-p)) - 3.
double fourth_moment(const SumSpec& spec);

// 1 + min{2, (2p-1)^2 / (p(1-p))}; every fourth moment is at least this.
double fourth_moment_floor(double p);

// 15 / (p(1-p))^3; every sixth moment is at most this.
double sixth_moment_bound(double p);

// Exact average of |sum eps_i b_i|^6 over all sign vectors versus the
// sharp sixth-moment Khinchin bound 15 (sum b_i^2)^3. n <= 20.
struct Khinchin6 {
  double lhs;
  double rhs;
};
Khinchin6 khinchin6_check(std::span<const double> b);

// Upper bound on sup E|sum a_j xi_j| over unit coefficient vectors:
//   1 - min{4p^3(1-p)^3, (2p-1)^4 p(1-p)} / (45 - 3(p(1-p))^3),
// defined on all of [0,1] (equals 1 at p in {0, 1/2, 1}).
double biased_l1_bound(double p);

// The square-root-form bound on the same supremum,
//   sqrt(1 - min{4p^3(1-p)^3, (2p-1)^4 p(1-p)} / 480),
// kept for side-by-side comparison with biased_l1_bound.
double biased_l1_bound_sqrt(double p);

// E|sum_{j<=k} xi_j| / sqrt(k): the L1/L2 ratio of the k-fold indicator-
// coefficient sum, computed exactly from the binomial distribution.
double indicator_ratio(double p, int k);

// Closed form 2 sqrt(N(p*) p*) (1-p*)^{N(p*)-1} with
// N(p) = floor(1/(1-(1-p)^2)) and p* = min(p, 1-p), reproduced verbatim.
// Exceeds 1 near p = 1/2 even though it describes an L1/L2 ratio; callers
// should surface that anomaly rather than clip it. See indicator_sup for
// the variant that matches the exhaustively computed supremum.
double indicator_sup_formula(double p);

// 2 sqrt(N(p*) p*) (1-p*)^{N(p*)-1/2}: equals max_k indicator_ratio(p, k)
// whenever the maximizing k satisfies k*p <= 1, and never exceeds 1.
double indicator_sup(double p);

}  // namespace momentgap::rademacher

#endif  // MOMENTGAP_RADEMACHER_HPP
