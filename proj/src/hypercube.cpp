#include "momentgap/hypercube.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>

#include <json.hpp>

namespace momentgap::cube {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

CubeFunction::CubeFunction(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (n < 1 || n > kMaxDim) throw ParameterError("CubeFunction: dimension must lie in [1,20]");
  if (values_.size() != (std::size_t{1} << n)) throw ParameterError("CubeFunction: table must have 2^n entries");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("CubeFunction: non-finite value");
}

CubeFunction CubeFunction::dictator(int n, int j) {
  if (j < 1 || j > n) throw ParameterError("dictator: coordinate out of range");
  std::vector<double> vals(std::size_t{1} << n);
  for (std::size_t x = 0; x < vals.size(); ++x) vals[x] = (x >> (j - 1)) & 1 ? 1.0 : -1.0;
  return CubeFunction(n, std::move(vals));
}

CubeFunction CubeFunction::majority3() {
  std::vector<double> vals(8);
  for (std::size_t x = 0; x < 8; ++x) {
    int ones = __builtin_popcount(static_cast<unsigned>(x));
    vals[x] = ones >= 2 ? 1.0 : -1.0;
  }
  return CubeFunction(3, std::move(vals));
}

double CubeFunction::mean() const {
  std::int64_t n = static_cast<std::int64_t>(values_.size());
  return parallel_sum(n, [&](std::int64_t i) { return values_[i]; }) / static_cast<double>(n);
}

CubeFunction partial_difference(const CubeFunction& f, int j) {
  if (j < 1 || j > f.dim()) throw ParameterError("partial_difference: coordinate out of range");
  const std::uint32_t bit = 1u << (j - 1);
  const auto& v = f.values();
  std::vector<double> out(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) out[x] = (v[x] - v[x ^ bit]) / 2.0;
  return CubeFunction(f.dim(), std::move(out));
}

CubeFunction gradient_modulus(const CubeFunction& f) {
  const auto& v = f.values();
  const int n = f.dim();
  std::vector<double> out(v.size());
  for_each_chunk(static_cast<std::int64_t>(v.size()), kDefaultChunks, [&](int, std::int64_t b, std::int64_t e) {
    for (std::int64_t xi = b; xi < e; ++xi) {
      std::size_t x = static_cast<std::size_t>(xi);
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        double d = (v[x] - v[x ^ (std::size_t{1} << j)]) / 2.0;
        s += d * d;
      }
      out[x] = std::sqrt(s);
    }
  });
  return CubeFunction(n, std::move(out));
}

double poincare_ratio(const CubeFunction& f) {
  const auto& v = f.values();
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  double m = f.mean();
  double num = parallel_sum(n, [&](std::int64_t i) { return std::abs(v[i] - m); }) / static_cast<double>(n);
  CubeFunction g = gradient_modulus(f);
  double den =
      parallel_sum(n, [&](std::int64_t i) { return g.values()[i]; }) / static_cast<double>(n);
  if (den <= 0.0) throw DegenerateError("poincare_ratio: constant function");
  return num / den;
}

namespace {

// min{4p^3(1-p)^3, (2p-1)^4 p(1-p)} / (45 - 3 (p(1-p))^3): the amount by
// which the biased-sum L1 bound improves on 1.
double l1_deficit(double p) {
  double pq = p * (1.0 - p);
  double d = 2.0 * p - 1.0;
  double num = std::min(4.0 * pq * pq * pq, d * d * d * d * pq);
  return num / (45.0 - 3.0 * pq * pq * pq);
}

// 16-point Gauss-Legendre rule on [-1,1].
constexpr std::array<double, 8> kGlNodes = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739, 0.61787624440264375,
    0.75540440835500303, 0.86563120238783174, 0.94457502307323258, 0.98940093499164993};
constexpr std::array<double, 8> kGlWeights = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
    0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

double gl16(const std::function<double(double)>& f, double a, double b) {
  const double c = (a + b) / 2.0, h = (b - a) / 2.0;
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += kGlWeights[i] * (f(c - h * kGlNodes[i]) + f(c + h * kGlNodes[i]));
  return s * h;
}

double composite_gl16(const std::function<double(double)>& f, double a, double b, int panels) {
  NeumaierSum s;
  for (int i = 0; i < panels; ++i)
    s.add(gl16(f, a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels));
  return s.value();
}

}  // namespace

QuadratureResult delta_integral(double tol) {
  if (!(tol >= 1e-12)) throw ParameterError("delta_integral: tol must be >= 1e-12");
  // p = (1+cos u)/2 maps u in [0, pi/2] onto p in [1/2, 1] with
  // dp/sqrt(p(1-p)) = du; the integrand in u is bounded and piecewise smooth
  // with a single kink where the min switches branch, at p = 1/2 + sqrt(3)/6.
  const double p_kink = 0.5 + std::sqrt(3.0) / 6.0;
  const double u_kink = std::acos(2.0 * p_kink - 1.0);
  auto integrand = [](double u) { return l1_deficit((1.0 + std::cos(u)) / 2.0); };

  QuadratureResult res;
  res.breakpoints = {p_kink};
  double prev = 0.0;
  for (int k = 0;; ++k) {
    int panels = 1 << k;
    double val = composite_gl16(integrand, 0.0, u_kink, panels) +
                 composite_gl16(integrand, u_kink, kPi / 2.0, panels);
    res.subdivisions = 2 * panels;
    if (k > 0) {
      res.est_error = std::abs(val - prev);
      if (res.est_error <= tol) {
        res.value = val;
        return res;
      }
    }
    if (k >= 16) throw NumericalError("delta_integral: no convergence at tol " + fmt_g17(tol));
    prev = val;
  }
}

ChainBound chain_bound(const CubeFunction& f) {
  static const double delta = delta_integral(1e-8).value;
  const auto& v = f.values();
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  double m = f.mean();
  double lhs = parallel_sum(n, [&](std::int64_t i) { return std::abs(v[i] - m); }) / static_cast<double>(n);
  CubeFunction g = gradient_modulus(f);
  double egrad =
      parallel_sum(n, [&](std::int64_t i) { return g.values()[i]; }) / static_cast<double>(n);
  double rhs = (kPi / 2.0 - delta) * egrad;
  return {lhs, rhs, lhs <= rhs + 1e-12};
}

namespace {

// Partial sums of the piecewise closed-form series for
//   int_0^{1/2} 2 sqrt(N(s)) (1-s)^{N(s)-1} ds,  N(s) = floor(1/(s(2-s))).
// On the piece where N = k the antiderivative is -(2/sqrt(k)) (1-s)^k, and
// the piece endpoints are s_k = 1 - sqrt(1-1/k), so the k-th term is
//   (2/sqrt(k)) [ (1-1/(k+1))^{k/2} - (1-1/k)^{k/2} ]
// (with the k=1 piece clipped at s = 1/2). Terms decay like k^{-3/2}; the
// tail is removed by extrapolating partial sums in powers of K^{-1/2}.
double series_term(std::int64_t k) {
  if (k == 1) return 2.0 * (std::sqrt(0.5) - 0.5);
  double kd = static_cast<double>(k);
  double upper = std::exp(kd / 2.0 * std::log1p(-1.0 / (kd + 1.0)));
  double lower = std::exp(kd / 2.0 * std::log1p(-1.0 / kd));
  return 2.0 / std::sqrt(kd) * (upper - lower);
}

// Solves for I in S(K_i) + c1 x_i + c2 x_i^3 + c3 x_i^5 = I, x_i = K_i^{-1/2}.
double tail_extrapolate(const std::vector<std::pair<double, double>>& sums) {
  const int n = static_cast<int>(sums.size());
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    double x = 1.0 / std::sqrt(sums[i].first);
    m[i][0] = 1.0;
    double xp = x;
    for (int j = 1; j < n; ++j) {
      m[i][j] = -xp;
      xp *= x * x;
    }
    m[i][n] = sums[i].second;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[piv], m[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      for (int cc = col; cc <= n; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  return m[0][n] / m[0][0];
}

}  // namespace

QuadratureResult best_delta_integral(double tol) {
  if (!(tol >= 1e-10)) throw ParameterError("best_delta_integral: tol must be >= 1e-10");

  QuadratureResult res;
  for (int k = 2; k <= 33; ++k) res.breakpoints.push_back(1.0 - std::sqrt(1.0 - 1.0 / k));

  std::int64_t cap = std::int64_t{1} << 20;
  for (;;) {
    NeumaierSum acc;
    std::vector<std::pair<double, double>> checkpoints;  // (K, S(K))
    std::int64_t next_cp = cap / 8;
    for (std::int64_t k = 1; k <= cap; ++k) {
      acc.add(series_term(k));
      if (k == next_cp) {
        checkpoints.emplace_back(static_cast<double>(k), acc.value());
        next_cp *= 2;
      }
    }
    double full = tail_extrapolate(checkpoints);
    std::vector<std::pair<double, double>> fewer(checkpoints.begin(), checkpoints.end() - 1);
    double reduced = tail_extrapolate(fewer);
    res.est_error = std::abs(full - reduced) + 1e-15;
    res.subdivisions = cap;
    if (res.est_error <= tol) {
      res.value = kPi / 2.0 - full;
      return res;
    }
    cap *= 4;
    if (cap > (std::int64_t{1} << 26))
      throw NumericalError("best_delta_integral: no convergence at tol " + fmt_g17(tol));
  }
}

double conjectured_delta() { return kPi / 2.0 - std::sqrt(kPi / 2.0); }

std::string CubeFunction::to_json() const {
  nlohmann::json j{{"n", n_}, {"values", values_}};
  return j.dump();
}

CubeFunction CubeFunction::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return CubeFunction(j.at("n").get<int>(), j.at("values").get<std::vector<double>>());
}

}  // namespace momentgap::cube
