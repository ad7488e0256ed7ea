#ifndef MOMENTGAP_HYPERCUBE_HPP
#define MOMENTGAP_HYPERCUBE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "momentgap/common.hpp"

namespace momentgap::cube {

// Real-valued function on {-1,1}^n stored as a table of 2^n values.
// Vertex x is encoded as a bitmask: coordinate j (1-based) is +1 when bit
// j-1 of the mask is set, -1 otherwise.
class CubeFunction {
 public:
  static constexpr int kMaxDim = 20;

  CubeFunction(int n, std::vector<double> values);

  static CubeFunction dictator(int n, int j);
  static CubeFunction majority3();

  int dim() const { return n_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::uint32_t mask) const { return values_[mask]; }

  double mean() const;

  std::string to_json() const;
  static CubeFunction from_json(const std::string& text);

 private:
  int n_;
  std::vector<double> values_;
};

// D_j f(x) = (f(x) - f(S_j x)) / 2 where S_j flips coordinate j (1-based).
// Idempotent: D_j(D_j f) = D_j f.
CubeFunction partial_difference(const CubeFunction& f, int j);

// |grad f|(x) = (sum_j |D_j f(x)|^2)^{1/2}, pointwise.
CubeFunction gradient_modulus(const CubeFunction& f);

// E|f - Ef| / E|grad f| under the uniform measure. Throws DegenerateError
// for constant f.
double poincare_ratio(const CubeFunction& f);

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  std::int64_t subdivisions = 0;
  std::vector<double> breakpoints;
};

// delta = int_{1/2}^{1} min{4p^3(1-p)^3, (2p-1)^4 p(1-p)} / (45 - 3(p(1-p))^3)
//         dp / sqrt(p(1-p))  ~ 1.3e-4.
// The substitution p = (1+cos u)/2 turns dp/sqrt(p(1-p)) into du exactly,
// removing the endpoint singularity; the only remaining breakpoint is the
// kink where the min switches branch. Requires tol >= 1e-12.
QuadratureResult delta_integral(double tol);

// L1 Poincare functional test: lhs = E|f - Ef|, rhs = (pi/2 - delta) E|grad f|.
struct ChainBound {
  double lhs;
  double rhs;
  bool holds;
};
ChainBound chain_bound(const CubeFunction& f);

// pi/2 minus the integral over p in (1/2, 1) of the sharp two-valued
// indicator supremum (see rademacher::indicator_sup) against dp/sqrt(p(1-p)):
// the best delta this coupling argument could ever produce, ~ 0.149.
// The integrand is piecewise smooth between the points where
// N(s) = floor(1/(s(2-s))), s = 1-p, jumps; each piece integrates in closed
// form and the infinite tail of pieces is Richardson-extrapolated.
// Requires tol >= 1e-10. Breakpoints are reported in the s = 1-p variable,
// largest first.
QuadratureResult best_delta_integral(double tol);

// pi/2 - sqrt(pi/2) ~ 0.31748, the conjectured optimal delta, reported
// alongside best_delta_integral for context.
double conjectured_delta();

}  // namespace momentgap::cube

#endif  // MOMENTGAP_HYPERCUBE_HPP
