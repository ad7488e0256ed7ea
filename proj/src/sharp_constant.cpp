#include "momentgap/sharp_constant.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <json.hpp>

namespace momentgap::sharp {

namespace {

void check_pq(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q) || !(p > 2.0) || !(q > p))
    throw ParameterError("sharp: need 2 < p < q < inf");
}

double numerator(double a, double c, double p) {
  double ap = std::pow(a, p);
  double cp2 = std::pow(c, p - 2.0);
  double cp = cp2 * c * c;
  return cp2 * (ap - 1.0) + cp * (a * a - ap) + (1.0 - a * a);
}

double denominator(double a, double c) { return (1.0 - c) * (1.0 - a) * (1.0 - a * c); }

// The quotient has a removable 0/0 only on the a = 1 and c = 1 sides; on
// the a = 0 and c = 0 sides it extends by plain continuity (c^{p-2} -> 0
// for p > 2), so the optimizer may evaluate it there directly. Callers keep
// a and c away from 1.
double objective_low_edge(double a, double c, double p, double q) {
  double theta = (q - 2.0) / (q - p);
  double bp = numerator(a, c, p) / denominator(a, c);
  double bq = numerator(a, c, q) / denominator(a, c);
  if (std::max(std::abs(theta), std::abs(theta - 1.0)) > 30.0)
    return std::exp((theta - 1.0) * std::log(bq) - theta * std::log(bp));
  return std::pow(bq, theta - 1.0) / std::pow(bp, theta);
}

}  // namespace

double b_ratio(double a, double c, double p) {
  if (!(p > 2.0) || !std::isfinite(p)) throw ParameterError("b_ratio: need p > 2");
  if (!(a >= kEvalMargin) || !(a <= 1.0 - kEvalMargin) || !(c >= kEvalMargin) || !(c <= 1.0 - kEvalMargin))
    throw DomainError("b_ratio: (a,c) within margin of the unit-square boundary");
  return numerator(a, c, p) / denominator(a, c);
}

double objective(double a, double c, double p, double q) {
  check_pq(p, q);
  double theta = (q - 2.0) / (q - p);
  double bp = b_ratio(a, c, p);
  double bq = b_ratio(a, c, q);
  if (std::max(std::abs(theta), std::abs(theta - 1.0)) > 30.0)
    return std::exp((theta - 1.0) * std::log(bq) - theta * std::log(bp));
  return std::pow(bq, theta - 1.0) / std::pow(bp, theta);
}

double objective_product_form(double a, double c, double p, double q) {
  check_pq(p, q);
  double e_num = (p - 2.0) / (q - p);
  double e_den = (q - 2.0) / (q - p);
  double nq = numerator(a, c, q);
  double np = numerator(a, c, p);
  if (std::max(e_num, e_den) > 30.0)
    return std::exp(e_num * std::log(nq) - e_den * std::log(np)) * denominator(a, c);
  return std::pow(nq, e_num) / std::pow(np, e_den) * denominator(a, c);
}

double lower_bound(double p, double q) {
  check_pq(p, q);
  double log_lb = (p - 2.0) / (q - p) * std::log(std::min(1.0, q - 2.0)) -
                  2.0 * (q - 2.0) / (q - p) * std::log(p);
  return std::exp(log_lb);
}

double identity_residual_46(double a, double c) {
  double residual = objective(a, c, 4.0, 6.0) - 1.0 / 3.0;
  double rational = (c * (2.0 * c - 1.0) * a * a - (c + 1.0) * (c + 1.0) * a + 3.0 * c * c - c + 2.0) /
                    (3.0 * (1.0 + c) * (1.0 + a) * (1.0 + a * c));
  if (std::abs(residual - rational) > 1e-10 * std::max(1.0, std::abs(rational)))
    throw NumericalError("identity_residual_46: algebraic forms disagree: " + fmt_g17(residual) +
                         " vs " + fmt_g17(rational));
  return residual;
}

namespace {

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  double a = 0.0;
  double c = 0.0;
  bool boundary = false;
  double err = 0.0;
};

constexpr double kGridMargin = 1e-6;
constexpr int kGridSide = 512;

// Golden-section minimization of a unimodal-near-optimum 1-D function.
struct Golden {
  double x;
  double f;
};

Golden golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol, int max_iter = 120) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? Golden{x1, f1} : Golden{x2, f2};
}

struct NelderMead {
  double a = 0.0;
  double c = 0.0;
  double f = 0.0;
  double spread = 0.0;
  int iter = 0;
};

NelderMead nelder_mead_2d(const std::function<double(double, double)>& fn, double a0, double c0, double step) {
  const double lo = kEvalMargin, hi = 1.0 - kEvalMargin;
  auto clamp = [&](double x) { return std::min(hi, std::max(lo, x)); };
  struct Pt {
    double x[2];
    double f;
  };
  std::array<Pt, 3> s;
  s[0] = {{clamp(a0), clamp(c0)}, 0.0};
  s[1] = {{clamp(a0 + step), clamp(c0)}, 0.0};
  s[2] = {{clamp(a0), clamp(c0 + step)}, 0.0};
  for (auto& pt : s) pt.f = fn(pt.x[0], pt.x[1]);

  int iter = 0;
  for (; iter < 600; ++iter) {
    std::sort(s.begin(), s.end(), [](const Pt& u, const Pt& v) { return u.f < v.f; });
    double spread = s[2].f - s[0].f;
    double diam = std::max(std::abs(s[2].x[0] - s[0].x[0]) + std::abs(s[2].x[1] - s[0].x[1]),
                           std::abs(s[1].x[0] - s[0].x[0]) + std::abs(s[1].x[1] - s[0].x[1]));
    if (spread < 1e-13 * std::max(1.0, std::abs(s[0].f)) && diam < 1e-10) break;

    double cx = (s[0].x[0] + s[1].x[0]) / 2.0, cc = (s[0].x[1] + s[1].x[1]) / 2.0;
    auto eval_at = [&](double t) {
      double xa = clamp(cx + t * (cx - s[2].x[0]));
      double xc = clamp(cc + t * (cc - s[2].x[1]));
      return Pt{{xa, xc}, fn(xa, xc)};
    };
    Pt refl = eval_at(1.0);
    if (refl.f < s[0].f) {
      Pt exp_pt = eval_at(2.0);
      s[2] = exp_pt.f < refl.f ? exp_pt : refl;
    } else if (refl.f < s[1].f) {
      s[2] = refl;
    } else {
      Pt con = eval_at(refl.f < s[2].f ? 0.5 : -0.5);
      if (con.f < std::min(refl.f, s[2].f)) {
        s[2] = con;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x[0] = clamp(s[0].x[0] + 0.5 * (s[i].x[0] - s[0].x[0]));
          s[i].x[1] = clamp(s[0].x[1] + 0.5 * (s[i].x[1] - s[0].x[1]));
          s[i].f = fn(s[i].x[0], s[i].x[1]);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const Pt& u, const Pt& v) { return u.f < v.f; });
  return {s[0].x[0], s[0].x[1], s[0].f, s[2].f - s[0].f, iter};
}

}  // namespace

SharpConstantResult compute_c(double p, double q, double tol) {
  check_pq(p, q);
  if (!(tol >= 1e-10) || !(tol <= 1e-3)) throw ParameterError("compute_c: tol must lie in [1e-10, 1e-3]");

  std::int64_t evals = 0;
  auto obj = [&](double a, double c) {
    ++evals;
    return objective(a, c, p, q);
  };

  // Stage 1: scouting grid. Chunk minima are merged in index order so the
  // result does not depend on the thread count.
  const std::int64_t npts = static_cast<std::int64_t>(kGridSide) * kGridSide;
  const double span = 1.0 - 2.0 * kGridMargin;
  auto grid_coord = [&](int idx) { return kGridMargin + span * idx / (kGridSide - 1); };

  int chunks = kDefaultChunks;
  std::vector<std::pair<double, std::int64_t>> chunk_min(chunks, {std::numeric_limits<double>::infinity(), -1});
  for_each_chunk(npts, chunks, [&](int ch, std::int64_t b, std::int64_t e) {
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_i = -1;
    for (std::int64_t i = b; i < e; ++i) {
      double v = objective(grid_coord(static_cast<int>(i % kGridSide)),
                           grid_coord(static_cast<int>(i / kGridSide)), p, q);
      if (v < best) {
        best = v;
        best_i = i;
      }
    }
    chunk_min[ch] = {best, best_i};
  });
  evals += npts;
  Candidate interior;
  for (const auto& [v, i] : chunk_min) {
    if (v < interior.value) {
      interior.value = v;
      interior.a = grid_coord(static_cast<int>(i % kGridSide));
      interior.c = grid_coord(static_cast<int>(i / kGridSide));
    }
  }

  // Stage 2: derivative-free polish of the interior candidate.
  NelderMead nm = nelder_mead_2d(obj, interior.a, interior.c, span / (kGridSide - 1));
  if (nm.f < interior.value) {
    interior.value = nm.f;
    interior.a = nm.a;
    interior.c = nm.c;
  }
  interior.err = std::max(nm.spread, 1e-13);

  // Stage 3: the four edges. On the a = 0 and c = 0 sides the quotient is
  // continuous and is evaluated exactly at the boundary; on the a = 1 and
  // c = 1 sides (the removable 0/0) edge values are one-sided limits,
  // extrapolated over the nested margins. Each edge is then minimized in
  // its remaining coordinate.
  auto edge_value = [&](int edge, double t) -> Extrapolated {
    switch (edge) {
      case 0: {
        ++evals;
        double v = objective_low_edge(0.0, t, p, q);  // a = 0
        return {v, 1e-13 * std::max(1.0, std::abs(v))};
      }
      case 1:
        return richardson_limit([&](double eps) { return obj(1.0 - eps, t); });  // a -> 1
      case 2: {
        ++evals;
        double v = objective_low_edge(t, 0.0, p, q);  // c = 0
        return {v, 1e-13 * std::max(1.0, std::abs(v))};
      }
      default:
        return richardson_limit([&](double eps) { return obj(t, 1.0 - eps); });  // c -> 1
    }
  };

  Candidate best_edge;
  for (int edge = 0; edge < 4; ++edge) {
    double scan_best = std::numeric_limits<double>::infinity();
    double scan_t = kGridMargin;
    const int scan_n = 512;
    for (int i = 0; i < scan_n; ++i) {
      double t = kGridMargin + span * i / (scan_n - 1);
      double v = edge_value(edge, t).value;
      if (v < scan_best) {
        scan_best = v;
        scan_t = t;
      }
    }
    double h = span / (scan_n - 1);
    Golden g = golden_min([&](double t) { return edge_value(edge, t).value; },
                          std::max(kGridMargin, scan_t - h), std::min(1.0 - kGridMargin, scan_t + h), 1e-9);
    double t_star = g.f < scan_best ? g.x : scan_t;
    Extrapolated ex = edge_value(edge, t_star);
    if (ex.value < best_edge.value) {
      best_edge.value = ex.value;
      best_edge.err = ex.err;
      best_edge.boundary = true;
      switch (edge) {
        case 0: best_edge.a = 0.0; best_edge.c = t_star; break;
        case 1: best_edge.a = 1.0; best_edge.c = t_star; break;
        case 2: best_edge.a = t_star; best_edge.c = 0.0; break;
        default: best_edge.a = t_star; best_edge.c = 1.0; break;
      }
    }
  }

  // Stage 4: the four corners. (0,0) is a plain evaluation; the corners
  // touching a = 1 or c = 1 are one-sided limits along the adjacent side.
  Candidate best_corner;
  for (int ca = 0; ca <= 1; ++ca) {
    for (int cc = 0; cc <= 1; ++cc) {
      Extrapolated ex;
      if (ca == 0 && cc == 0) {
        ++evals;
        double v = objective_low_edge(0.0, 0.0, p, q);
        ex = {v, 1e-13 * std::max(1.0, std::abs(v))};
      } else if (ca == 1 && cc == 0) {
        ex = richardson_limit([&](double eps) {
          ++evals;
          return objective_low_edge(1.0 - eps, 0.0, p, q);
        });
      } else if (ca == 0 && cc == 1) {
        ex = richardson_limit([&](double eps) {
          ++evals;
          return objective_low_edge(0.0, 1.0 - eps, p, q);
        });
      } else {
        ex = richardson_limit([&](double eps) { return obj(1.0 - eps, 1.0 - eps); });
      }
      if (ex.value < best_corner.value) {
        best_corner = {ex.value, static_cast<double>(ca), static_cast<double>(cc), true, ex.err};
      }
    }
  }

  Candidate win = interior;
  if (best_edge.value < win.value) win = best_edge;
  if (best_corner.value < win.value) win = best_corner;

  if (!(win.value > 0.0) || !std::isfinite(win.value) || win.err > tol)
    throw SolverError("compute_c(" + fmt_g17(p) + "," + fmt_g17(q) + "): candidate value " +
                      fmt_g17(win.value) + " with error estimate " + fmt_g17(win.err) +
                      " exceeds tol " + fmt_g17(tol));

  SharpConstantResult res;
  res.p = p;
  res.q = q;
  res.c_value = win.value;
  res.a_star = win.a;
  res.c_star = win.c;
  res.on_boundary = win.boundary;
  res.iterations = evals;
  res.achieved_tol = std::max(win.err, 1e-13);
  res.lb = lower_bound(p, q);
  return res;
}

std::string SharpConstantResult::to_json() const {
  nlohmann::json j{{"p", p},
                   {"q", q},
                   {"C", c_value},
                   {"a_star", a_star},
                   {"c_star", c_star},
                   {"lower_bound", lb},
                   {"tol", achieved_tol}};
  return j.dump();
}

namespace {

// k-th derivative of t^x at t: x(x-1)...(x-k+1) t^{x-k}.
double power_derivative(double x, int k, double t) {
  double coef = 1.0;
  for (int i = 0; i < k; ++i) coef *= x - i;
  return coef * std::pow(t, x - k);
}

double det_gauss(std::array<std::array<double, 4>, 4> m, int k) {
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < k; ++r) {
      double f = m[r][col] / m[col][col];
      for (int cc = col; cc < k; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  return det;
}

}  // namespace

TorsionReport torsion_minors(double t, double p, double q) {
  check_pq(p, q);
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("torsion_minors: t must lie in (0,1)");

  std::array<std::array<double, 4>, 4> m{};
  for (int k = 1; k <= 4; ++k) {
    m[k - 1][0] = power_derivative(2.0, k, t);
    m[k - 1][1] = power_derivative(p, k, t);
    m[k - 1][2] = power_derivative(q, k, t);
    m[k - 1][3] = k == 1 ? -1.0 : 0.0;
  }

  TorsionReport rep;
  rep.t = t;
  rep.p = p;
  rep.q = q;
  for (int k = 1; k <= 4; ++k) rep.minors[k - 1] = det_gauss(m, k);

  rep.closed_forms[0] = 2.0 * t;
  rep.closed_forms[1] = 2.0 * p * (p - 2.0) * std::pow(t, p - 1.0);
  rep.closed_forms[2] = 2.0 * p * q * (p - 2.0) * (q - 2.0) * (q - p) * std::pow(t, p + q - 4.0);
  rep.closed_forms[3] =
      2.0 * p * (p - 1.0) * (p - 2.0) * q * (q - 1.0) * (q - 2.0) * (q - p) * std::pow(t, p + q - 7.0);

  rep.max_rel_err = 0.0;
  for (int i = 0; i < 4; ++i)
    rep.max_rel_err =
        std::max(rep.max_rel_err, std::abs(rep.minors[i] - rep.closed_forms[i]) / std::abs(rep.closed_forms[i]));
  if (!(rep.max_rel_err <= 1e-8))
    throw NumericalError("torsion_minors: determinant/closed-form mismatch " + fmt_g17(rep.max_rel_err));
  return rep;
}

}  // namespace momentgap::sharp
