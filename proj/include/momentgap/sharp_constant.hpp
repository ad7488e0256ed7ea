#ifndef MOMENTGAP_SHARP_CONSTANT_HPP
#define MOMENTGAP_SHARP_CONSTANT_HPP

#include <array>
#include <cstdint>
#include <string>

#include "momentgap/common.hpp"

namespace momentgap::sharp {

// Margin inside the open unit square below which direct evaluation of the
// ratio B(a,c,p) is refused; the removable 0/0 at a=1 and c=1 is handled by
// limit extrapolation in the optimizer instead.
inline constexpr double kEvalMargin = 1e-9;

// B(a,c,p) = (c^{p-2}(a^p-1) + c^p(a^2-a^p) + 1-a^2) / ((1-c)(1-a)(1-ac))
// for a,c in (0,1), p > 2. Sandwiched between min{1,p-2} and p^2.
double b_ratio(double a, double c, double p);

// B(a,c,q)^{theta-1} / B(a,c,p)^{theta}, theta = (q-2)/(q-p). The infimum of
// this over the open square is the sharp constant C(p,q). Evaluated in the
// log domain when the exponents are large (q close to p).
double objective(double a, double c, double p, double q);

// Same quantity written as a product of the two numerators (with exponents)
// times (1-c)(1-a)(1-ac); used as an algebraic cross-check of objective().
double objective_product_form(double a, double c, double p, double q);

// Closed-form positive lower bound
//   (min{1,q-2})^{(p-2)/(q-p)} / p^{2(q-2)/(q-p)},
// computed in the log domain so q -> p+ does not overflow.
double lower_bound(double p, double q);

// objective(a,c,4,6) - 1/3. Verifies on every call that the difference
// equals (c(2c-1)a^2 - (c+1)^2 a + 3c^2 - c + 2) / (3(1+c)(1+a)(1+ac))
// within relative 1e-10 and throws NumericalError otherwise.
double identity_residual_46(double a, double c);

struct SharpConstantResult {
  double p = 0.0;
  double q = 0.0;
  double c_value = 0.0;      // computed C(p,q)
  double a_star = 0.0;       // argmin; exactly 0 or 1 when on the boundary
  double c_star = 0.0;
  bool on_boundary = false;  // infimum attained only as a limit
  std::int64_t iterations = 0;  // objective evaluations spent
  double achieved_tol = 0.0;
  double lb = 0.0;           // lower_bound(p,q)

  std::string to_json() const;
};

// Computes C(p,q) within tol of the infimum over the closed square, where
// boundary values are one-sided limits. Strategy: 512x512 scouting grid on
// [1e-6, 1-1e-6]^2, Nelder-Mead polish of the interior candidate, and a
// separate 1-D search along each edge (and at each corner) where the
// objective is evaluated through Richardson extrapolation over the nested
// margins 2^-10 ... 2^-27. Interior and boundary candidates compete on equal
// terms. Requires 2 < p < q < inf and tol in [1e-10, 1e-3].
SharpConstantResult compute_c(double p, double q, double tol = 1e-7);

// Leading principal minors of the 4x4 matrix whose rows are the first four
// derivatives of the moment curve t -> (t^2, t^p, t^q, -t), together with
// their closed forms; all four are positive for t in (0,1), 2 < p < q, which
// is what licenses the reduction to two-valued extremizers.
struct TorsionReport {
  double t = 0.0;
  double p = 0.0;
  double q = 0.0;
  std::array<double, 4> minors{};        // direct determinants
  std::array<double, 4> closed_forms{};  // 2t, 2p(p-2)t^{p-1}, ...
  double max_rel_err = 0.0;
};

TorsionReport torsion_minors(double t, double p, double q);

}  // namespace momentgap::sharp

#endif  // MOMENTGAP_SHARP_CONSTANT_HPP
