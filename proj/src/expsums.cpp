#include "momentgap/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

namespace momentgap::expsum {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::int64_t kFirstGridCap = std::int64_t{1} << 24;  // largest initial grid
constexpr std::int64_t kGridCap = std::int64_t{1} << 25;       // largest grid after doubling
constexpr std::int64_t kMaxSpanExact = 4'000'000;

// In-place radix-2 FFT. Twiddles come from one polar() table indexed with a
// stride per level, so rounding does not accumulate across butterflies.
void fft_inplace(std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& tw) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t blk = 0; blk < n; blk += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> w = tw[j * stride];
        std::complex<double> u = a[blk + j];
        std::complex<double> v = a[blk + j + len / 2] * w;
        a[blk + j] = u + v;
        a[blk + j + len / 2] = u - v;
      }
    }
  }
}

std::int64_t next_pow2(std::int64_t x) {
  std::int64_t m = 1;
  while (m < x) m <<= 1;
  return m;
}

// mean_{i<M} |X_S(i/M)|^p for each exponent, from one length-M FFT of the
// shifted indicator vector (a global phase does not change |X|).
std::vector<double> grid_moments(const ExpSumSet& s, std::int64_t grid, std::span<const double> ps) {
  std::vector<std::complex<double>> a(static_cast<std::size_t>(grid), {0.0, 0.0});
  const std::int64_t base = s.elements().front();
  for (std::int64_t j : s.elements()) a[static_cast<std::size_t>(j - base)] = {1.0, 0.0};

  std::vector<std::complex<double>> tw(static_cast<std::size_t>(grid) / 2);
  for (std::size_t k = 0; k < tw.size(); ++k)
    tw[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid));
  fft_inplace(a, tw);
  tw.clear();
  tw.shrink_to_fit();

  const double inv_card = 1.0 / static_cast<double>(s.size());
  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) {
    double mean = parallel_sum(grid, [&](std::int64_t i) {
      const std::complex<double>& z = a[static_cast<std::size_t>(i)];
      double m2 = (z.real() * z.real() + z.imag() * z.imag()) * inv_card;
      if (p == 1.0) return std::sqrt(m2);
      if (p == 2.0) return m2;
      if (p == 4.0) return m2 * m2;
      if (p == 6.0) return m2 * m2 * m2;
      return std::pow(m2, p / 2.0);
    });
    out.push_back(mean / static_cast<double>(grid));
  }
  return out;
}

}  // namespace

ExpSumSet::ExpSumSet(std::vector<std::int64_t> elements) : elements_(std::move(elements)) {
  if (elements_.size() < 2) throw ParameterError("ExpSumSet: need at least two elements");
  std::sort(elements_.begin(), elements_.end());
  for (std::size_t i = 1; i < elements_.size(); ++i)
    if (elements_[i] == elements_[i - 1]) throw ParameterError("ExpSumSet: elements must be distinct");
}

ExpSumSet ExpSumSet::squares(int m) {
  if (m < 2 || m > 1000) throw ParameterError("ExpSumSet::squares: m must lie in [2,1000]");
  std::vector<std::int64_t> e;
  e.reserve(m);
  for (std::int64_t j = 1; j <= m; ++j) e.push_back(j * j);
  return ExpSumSet(std::move(e));
}

ExactMoment exact_even_moment(const ExpSumSet& s, int k) {
  if (k < 1 || k > 3) throw ParameterError("exact_even_moment: k must lie in {1,2,3}");
  const std::int64_t card = static_cast<std::int64_t>(s.size());

  double bound = 1.0;
  for (int i = 0; i < 2 * k - 1; ++i) bound *= static_cast<double>(card);
  for (int i = 2; i <= k; ++i) bound *= i;
  if (bound > 9.0e18) throw CapacityError("exact_even_moment: counts exceed 64-bit range; big integers required");

  std::int64_t scale = 1;
  for (int i = 0; i < k; ++i) scale *= card;
  if (k == 1) return {card, scale};  // only the diagonal pairs

  const std::int64_t span = s.span();
  if (span > kMaxSpanExact) throw CapacityError("exact_even_moment: span too large for dense convolution");
  const std::int64_t base = s.elements().front();

  // Coefficients of (sum_j z^{j-base})^k, exact in 64-bit integers.
  std::vector<std::int64_t> conv(static_cast<std::size_t>(k) * span + 1, 0);
  if (k == 2) {
    for (std::int64_t x : s.elements())
      for (std::int64_t y : s.elements()) ++conv[static_cast<std::size_t>(x + y - 2 * base)];
  } else {
    std::vector<std::int64_t> two(static_cast<std::size_t>(2) * span + 1, 0);
    for (std::int64_t x : s.elements())
      for (std::int64_t y : s.elements()) ++two[static_cast<std::size_t>(x + y - 2 * base)];
    for (std::size_t i = 0; i < two.size(); ++i) {
      if (two[i] == 0) continue;
      for (std::int64_t z : s.elements()) conv[i + static_cast<std::size_t>(z - base)] += two[i];
    }
  }

  std::int64_t tuples = 0;
  for (std::int64_t c : conv) tuples += c * c;
  return {tuples, scale};
}

std::vector<NormEstimate> quadrature_norms(const ExpSumSet& s, std::span<const double> ps, double tol) {
  if (!(tol >= 1e-10)) throw ParameterError("quadrature_norm: tol must be >= 1e-10");
  for (double p : ps)
    if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("quadrature_norm: p must be >= 1");

  std::int64_t grid = next_pow2(std::max<std::int64_t>(64 * (s.span() + 1), 128));
  if (grid > kFirstGridCap) throw CapacityError("quadrature_norm: span too large for the grid cap");

  auto norms_at = [&](std::int64_t g) {
    std::vector<double> mom = grid_moments(s, g, ps);
    for (std::size_t i = 0; i < mom.size(); ++i) mom[i] = std::pow(mom[i], 1.0 / ps[i]);
    return mom;
  };

  std::vector<double> coarse = norms_at(grid);
  for (;;) {
    std::int64_t fine_grid = 2 * grid;
    if (fine_grid > kGridCap)
      throw NumericalError("quadrature_norm: grid cap reached before tolerance " + fmt_g17(tol));
    std::vector<double> fine = norms_at(fine_grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) worst = std::max(worst, std::abs(fine[i] - coarse[i]));
    if (worst <= tol) {
      std::vector<NormEstimate> out;
      out.reserve(fine.size());
      for (std::size_t i = 0; i < fine.size(); ++i)
        out.push_back({fine[i], std::abs(fine[i] - coarse[i]), fine_grid});
      return out;
    }
    grid = fine_grid;
    coarse = std::move(fine);
  }
}

NormEstimate quadrature_norm(const ExpSumSet& s, double p, double tol) {
  return quadrature_norms(s, std::span<const double>(&p, 1), tol)[0];
}

double theorem_upper_bound(const ExpSumSet& s, double p, double q, double c_const) {
  if (!(p > 2.0) || !(q > p) || !std::isfinite(q)) throw ParameterError("theorem_upper_bound: need 2 < p < q");
  if (!(c_const > 0.0)) throw ParameterError("theorem_upper_bound: C must be positive");

  auto moment_pow = [&](double e) {
    if (e == 4.0) return exact_even_moment(s, 2).value();
    if (e == 6.0) return exact_even_moment(s, 3).value();
    NormEstimate n = quadrature_norm(s, e, 1e-10);
    return std::pow(n.value, e);
  };
  double mp = moment_pow(p);
  double mq = moment_pow(q);
  double den = mq - 1.0;
  if (den < 1e-14) return 1.0;  // constant modulus; impossible for |S| > 1
  double num = std::max(mp - 1.0, 0.0);
  if (num == 0.0) return 1.0;
  double theta = (q - 2.0) / (q - p);
  return 1.0 - c_const * std::exp(theta * std::log(num) - (theta - 1.0) * std::log(den));
}

MomentTable build_moment_table(const ExpSumSet& s, std::span<const int> ks, std::span<const double> ps, double tol) {
  MomentTable t;
  t.elements = s.elements();
  for (int k : ks) t.exact_even[k] = exact_even_moment(s, k);
  if (!ps.empty()) {
    std::vector<NormEstimate> est = quadrature_norms(s, ps, tol);
    for (std::size_t i = 0; i < ps.size(); ++i) t.quadrature[ps[i]] = est[i];
  }
  return t;
}

std::vector<DiagnosticsRow> squares_diagnostics(const std::vector<int>& ms, double trend_exponent, double tol) {
  std::vector<DiagnosticsRow> rows;
  rows.reserve(ms.size());
  for (int m : ms) {
    if (m < 2 || m > 500) throw ParameterError("squares_diagnostics: m must lie in [2,500]");
    ExpSumSet s = ExpSumSet::squares(m);
    DiagnosticsRow r;
    r.m = m;
    r.l44 = exact_even_moment(s, 2).value();
    r.l66 = exact_even_moment(s, 3).value();
    r.l1 = quadrature_norm(s, 1.0, tol).value;
    r.bound = theorem_upper_bound(s, 4.0, 6.0, 1.0 / 3.0);
    r.gap = r.bound - r.l1;
    double lm = std::log(static_cast<double>(m));
    r.l44_over_logm = r.l44 / lm;
    r.l66_over_m = r.l66 / static_cast<double>(m);
    r.trend = (1.0 - r.l1) * static_cast<double>(m) / std::pow(lm, trend_exponent);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace momentgap::expsum
