// Acceptance suite: end-to-end checks of the library's headline claims, one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "momentgap/common.hpp"
#include "momentgap/expsums.hpp"
#include "momentgap/finite_rv.hpp"
#include "momentgap/hypercube.hpp"
#include "momentgap/rademacher.hpp"
#include "momentgap/sharp_constant.hpp"
#include "momentgap/verify.hpp"

using namespace momentgap;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FiniteRV random_rv(Rng& rng) {
  int n = static_cast<int>(rng.uniform_int(2, 8));
  std::vector<Atom> atoms;
  double psum = 0.0;
  for (int i = 0; i < n; ++i) {
    atoms.push_back({rng.uniform(0.001, 10.0), rng.uniform(0.05, 1.0)});
    psum += atoms.back().prob;
  }
  for (Atom& a : atoms) a.prob /= psum;
  return FiniteRV(std::move(atoms));
}

Outcome criterion_sharp_constant_46() {
  auto t0 = std::chrono::steady_clock::now();
  sharp::SharpConstantResult r = sharp::compute_c(4.0, 6.0, 1e-7);
  double err = std::abs(r.c_value - 1.0 / 3.0);
  double secs = seconds_since(t0);
  bool pass = err <= 1e-6 && secs < 10.0;
  return {pass, "C(4,6) = " + fmt_g17(r.c_value) + ", |C - 1/3| = " + fmt_g9(err) + " (tol 1e-6), " +
                    fmt_g9(secs) + " s (budget 10 s)"};
}

Outcome criterion_lower_bound_grid() {
  auto t0 = std::chrono::steady_clock::now();
  const std::pair<double, double> grid[] = {
      {2.2, 3.2}, {2.5, 3.0}, {2.5, 5.0}, {2.5, 8.0}, {3.0, 4.0},  {3.0, 5.0}, {3.0, 7.0},
      {3.0, 12.0}, {4.0, 4.5}, {4.0, 6.0}, {4.0, 8.0}, {4.0, 12.0}, {5.0, 6.0}, {5.0, 9.0},
      {6.0, 7.0},  {6.0, 10.0}, {7.0, 9.0}, {8.0, 12.0}, {9.0, 10.0}, {10.0, 12.0}};
  double worst_margin = 1e300;
  for (auto [p, q] : grid) {
    sharp::SharpConstantResult r = sharp::compute_c(p, q, 1e-7);
    worst_margin = std::min(worst_margin, r.c_value - r.lb);
    if (r.c_value < r.lb - 1e-9)
      return {false, "C(" + fmt_g9(p) + "," + fmt_g9(q) + ") = " + fmt_g17(r.c_value) +
                         " fell below its lower bound " + fmt_g17(r.lb)};
  }
  double secs = seconds_since(t0);
  return {secs < 300.0, "20 (p,q) pairs, worst C - bound margin " + fmt_g9(worst_margin) + ", " + fmt_g9(secs) +
                            " s (budget 300 s)"};
}

Outcome criterion_lemma_sandwich() {
  std::int64_t violations = 0;
  for (double p : {2.1, 2.5, 3.0, 4.0, 7.3, 12.0}) {
    double lo = std::min(1.0, p - 2.0);
    double hi = p * p;
    for (int i = 0; i < 500; ++i) {
      for (int j = 0; j < 500; ++j) {
        double a = 1e-3 + (1.0 - 2e-3) * i / 499.0;
        double c = 1e-3 + (1.0 - 2e-3) * j / 499.0;
        double b = sharp::b_ratio(a, c, p);
        if (b < lo || b > hi) ++violations;
      }
    }
  }
  return {violations == 0,
          "min{1,p-2} <= B(a,c,p) <= p^2 on 6 x 500 x 500 grid points, " + std::to_string(violations) +
              " violations"};
}

Outcome criterion_inequality_sweep() {
  Rng rng(20240401);
  double worst = 1e300;
  for (int i = 0; i < 100000; ++i) {
    FiniteRV rv = normalize_l2(random_rv(rng));
    worst = std::min(worst, main_inequality_rhs(rv, 4.0, 6.0, 1.0 / 3.0).gap);
  }
  for (auto [p, q] : {std::pair{3.0, 5.0}, {5.0, 9.0}}) {
    double c = sharp::compute_c(p, q, 1e-7).c_value;
    for (int i = 0; i < 10000; ++i) {
      FiniteRV rv = normalize_l2(random_rv(rng));
      worst = std::min(worst, main_inequality_rhs(rv, p, q, c).gap);
    }
  }
  return {worst >= -1e-12, "10^5 sweeps at (4,6,1/3) plus 10^4 each at (3,5) and (5,9); min gap " + fmt_g9(worst) +
                               " (floor -1e-12)"};
}

Outcome criterion_sharpness() {
  double worst = 0.0;
  for (auto [p, q] : {std::pair{4.0, 6.0}, {3.0, 5.0}, {5.0, 9.0}}) {
    sharp::SharpConstantResult r = sharp::compute_c(p, q, 1e-7);
    auto gap_at = [&](double eps) {
      double a = r.a_star >= 1.0 ? 1.0 - eps : (r.a_star <= 0.0 ? eps : r.a_star);
      double c = r.c_star >= 1.0 ? 1.0 - eps : (r.c_star <= 0.0 ? eps : r.c_star);
      return main_inequality_rhs(two_point(a, 1.0 / c).to_rv(), p, q, r.c_value).gap;
    };
    double gap = r.on_boundary ? richardson_limit(gap_at, 8, 20).value : gap_at(0.0);
    worst = std::max(worst, std::abs(gap));
  }
  return {worst <= 1e-4, "two-point equality gap at the argmin, worst |gap| = " + fmt_g9(worst) + " (tol 1e-4)"};
}

Outcome criterion_delta() {
  auto t0 = std::chrono::steady_clock::now();
  cube::QuadratureResult d = cube::delta_integral(1e-8);
  cube::QuadratureResult half = cube::delta_integral(5e-9);
  double secs = seconds_since(t0);
  bool window = d.value >= 0.000125 && d.value <= 0.000135;
  bool stable = std::abs(d.value - half.value) <= 1e-9;
  return {window && stable && secs < 1.0,
          "delta = " + fmt_g17(d.value) + " in [1.25e-4, 1.35e-4], halving shift " +
              fmt_g9(std::abs(d.value - half.value)) + " (tol 1e-9), " + fmt_g9(secs) + " s (budget 1 s)"};
}

Outcome criterion_best_delta() {
  auto t0 = std::chrono::steady_clock::now();
  cube::QuadratureResult r = cube::best_delta_integral(1e-8);
  double secs = seconds_since(t0);
  bool window = r.value >= 0.145 && r.value <= 0.153;
  return {window && secs < 1.0, "best attainable delta = " + fmt_g17(r.value) + " in [0.145, 0.153], " +
                                    fmt_g9(secs) + " s (budget 1 s)"};
}

std::vector<rademacher::SumSpec> seeded_specs(int count) {
  Rng rng(777);
  std::vector<rademacher::SumSpec> specs;
  specs.reserve(count);
  for (int i = 0; i < count; ++i) {
    double p = rng.uniform(0.02, 0.98);
    int n = static_cast<int>(rng.uniform_int(1, 12));
    std::vector<double> a(n);
    for (double& x : a) x = rng.uniform(-1.0, 1.0);
    specs.emplace_back(p, std::move(a), true);
  }
  return specs;
}

Outcome criterion_rademacher_end_to_end() {
  double worst = 0.0;
  for (const rademacher::SumSpec& spec : seeded_specs(1000)) {
    double l1 = rademacher::exact_sum_distribution(spec).moment(1.0);
    worst = std::max(worst, l1 - rademacher::biased_l1_bound(spec.bias));
  }
  return {worst <= 1e-12, "10^3 exact convolutions vs the L1 bound, worst overshoot " + fmt_g9(worst) +
                              " (floor 1e-12)"};
}

Outcome criterion_moment_identities() {
  double worst_rel = 0.0;
  for (const rademacher::SumSpec& spec : seeded_specs(1000)) {
    double formula = rademacher::fourth_moment(spec);
    double exact = rademacher::exact_sum_distribution(spec).moment(4.0);
    worst_rel = std::max(worst_rel, std::abs(formula - exact) / std::max(1.0, std::abs(formula)));
  }
  if (worst_rel > 1e-10) return {false, "fourth-moment formula deviates by " + fmt_g9(worst_rel)};

  Rng rng(778);
  double worst_kh = 0.0;
  for (int i = 0; i < 1000; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 12));
    std::vector<double> b(n);
    for (double& x : b) x = rng.uniform(-2.0, 2.0);
    rademacher::Khinchin6 k = rademacher::khinchin6_check(b);
    worst_kh = std::max(worst_kh, k.lhs - k.rhs);
  }
  return {worst_kh <= 1e-9, "fourth-moment formula rel err " + fmt_g9(worst_rel) +
                                " (tol 1e-10); sixth-moment Khinchin worst excess " + fmt_g9(worst_kh)};
}

Outcome criterion_poincare() {
  const double bound = kPi / 2.0 - 0.00013;
  double worst = 0.0;
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<double> v(8);
    for (unsigned x = 0; x < 8; ++x) v[x] = (mask >> x) & 1 ? 1.0 : -1.0;
    cube::CubeFunction f(3, v);
    try {
      worst = std::max(worst, cube::poincare_ratio(f) - bound);
    } catch (const DegenerateError&) {
      if (!cube::chain_bound(f).holds) return {false, "constant Boolean function failed the chain bound"};
    }
  }
  Rng rng(779);
  for (int i = 0; i < 10000; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 10));
    std::vector<double> v(std::size_t{1} << n);
    int kind = static_cast<int>(rng.uniform_int(0, 9));
    if (kind < 5) {
      for (double& x : v) x = rng.normal();
    } else if (kind < 8) {
      for (double& x : v) x = rng.uniform() < 0.5 ? -1.0 : 1.0;
    } else {
      for (std::size_t spikes = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) / 4)); spikes > 0;
           --spikes)
        v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))] =
            (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 5.0);
    }
    bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    if (constant) continue;
    worst = std::max(worst, cube::poincare_ratio(cube::CubeFunction(n, std::move(v))) - bound);
  }
  return {worst <= 0.0, "256 Boolean n=3 functions plus 10^4 random tables, worst ratio excess over pi/2 - "
                        "0.00013: " +
                            fmt_g9(worst)};
}

std::int64_t brute_force_energy(const std::vector<std::int64_t>& s, int k) {
  std::int64_t lo = *std::min_element(s.begin(), s.end()) * k;
  std::int64_t hi = *std::max_element(s.begin(), s.end()) * k;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  std::vector<std::size_t> idx(k, 0);
  for (;;) {
    std::int64_t total = 0;
    for (int i = 0; i < k; ++i) total += s[idx[i]];
    ++counts[static_cast<std::size_t>(total - lo)];
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == s.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  std::int64_t r = 0;
  for (std::int64_t c : counts) r += c * c;
  return r;
}

Outcome criterion_expsums() {
  // every S with |S| <= 6 inside the window {0..8}, exhaustively
  std::vector<std::int64_t> window = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  for (unsigned mask = 1; mask < (1u << 9); ++mask) {
    int bits = __builtin_popcount(mask);
    if (bits < 2 || bits > 6) continue;
    std::vector<std::int64_t> e;
    for (int i = 0; i < 9; ++i)
      if (mask & (1u << i)) e.push_back(window[i]);
    expsum::ExpSumSet s(e);
    for (int k : {2, 3})
      if (expsum::exact_even_moment(s, k).tuples != brute_force_energy(e, k))
        return {false, "exact count mismatch on a window subset"};
  }
  Rng rng(780);
  for (int rep = 0; rep < 40; ++rep) {
    int size = static_cast<int>(rng.uniform_int(2, 6));
    std::vector<std::int64_t> e;
    while (static_cast<int>(e.size()) < size) {
      std::int64_t cand = rng.uniform_int(-40, 120);
      if (std::find(e.begin(), e.end(), cand) == e.end()) e.push_back(cand);
    }
    expsum::ExpSumSet s(e);
    for (int k : {2, 3})
      if (expsum::exact_even_moment(s, k).tuples != brute_force_energy(e, k))
        return {false, "exact count mismatch on a random set"};
  }

  // quadrature fourth moments against the exact counts
  double worst_q = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int size = static_cast<int>(rng.uniform_int(2, 16));
    std::vector<std::int64_t> e;
    while (static_cast<int>(e.size()) < size) {
      std::int64_t cand = rng.uniform_int(0, 250);
      if (std::find(e.begin(), e.end(), cand) == e.end()) e.push_back(cand);
    }
    expsum::ExpSumSet s(e);
    double q4 = expsum::quadrature_norm(s, 4.0, 1e-9).value;
    worst_q = std::max(worst_q, std::abs(std::pow(q4, 4.0) - expsum::exact_even_moment(s, 2).value()));
  }
  if (worst_q > 1e-8) return {false, "quadrature fourth moment off by " + fmt_g9(worst_q)};

  // the theorem bound dominates the L1 norm: squares m = 2..100 and 100 random sets
  double worst_gap = 1e300;
  for (int m = 2; m <= 100; ++m) {
    expsum::ExpSumSet q = expsum::ExpSumSet::squares(m);
    double gap = expsum::theorem_upper_bound(q, 4.0, 6.0, 1.0 / 3.0) -
                 expsum::quadrature_norm(q, 1.0, 1e-8).value;
    worst_gap = std::min(worst_gap, gap);
  }
  for (int rep = 0; rep < 100; ++rep) {
    int size = static_cast<int>(rng.uniform_int(2, 20));
    std::vector<std::int64_t> e;
    while (static_cast<int>(e.size()) < size) {
      std::int64_t cand = rng.uniform_int(-100, 300);
      if (std::find(e.begin(), e.end(), cand) == e.end()) e.push_back(cand);
    }
    expsum::ExpSumSet s(e);
    double gap = expsum::theorem_upper_bound(s, 4.0, 6.0, 1.0 / 3.0) -
                 expsum::quadrature_norm(s, 1.0, 1e-8).value;
    worst_gap = std::min(worst_gap, gap);
  }
  return {worst_gap >= -1e-8, "exhaustive counts OK; quad vs exact worst " + fmt_g9(worst_q) +
                                  " (tol 1e-8); theorem bound minus L1, min gap " + fmt_g9(worst_gap)};
}

Outcome criterion_torsion() {
  Rng rng(781);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double t = rng.uniform(0.05, 0.95);
    double p = rng.uniform(2.05, 11.0);
    double q = p + rng.uniform(0.1, 12.0 - p);
    sharp::TorsionReport rep = sharp::torsion_minors(t, p, q);
    for (double m : rep.minors)
      if (!(m > 0.0)) return {false, "nonpositive minor at t=" + fmt_g9(t)};
    worst = std::max(worst, rep.max_rel_err);
  }
  return {worst <= 1e-8, "100 seeded (t,p,q): all minors positive, worst closed-form rel err " + fmt_g9(worst) +
                             " (tol 1e-8)"};
}

Outcome criterion_determinism() {
  verify::VerifyConfig cfg;
  cfg.seed = 42;
  cfg.samples = 5000;
  verify::VerifyReport a = verify::run_verify(cfg);
  verify::VerifyReport b = verify::run_verify(cfg);
  bool same = a.text() == b.text() && a.json() == b.json();
  return {same && a.ok(), std::string("two runs byte-identical: ") + (same ? "yes" : "NO") +
                              ", violations: " + std::to_string(a.violations)};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "sharp constant C(4,6)", criterion_sharp_constant_46},
      {2, "lower bound on a (p,q) grid", criterion_lower_bound_grid},
      {3, "lemma sandwich for B(a,c,p)", criterion_lemma_sandwich},
      {4, "main inequality sweep", criterion_inequality_sweep},
      {5, "sharpness at the argmin", criterion_sharpness},
      {6, "delta quadrature", criterion_delta},
      {7, "best attainable delta", criterion_best_delta},
      {8, "biased-sum L1 bound end to end", criterion_rademacher_end_to_end},
      {9, "moment identities", criterion_moment_identities},
      {10, "hypercube ratio bound", criterion_poincare},
      {11, "exponential sums", criterion_expsums},
      {12, "torsion minors", criterion_torsion},
      {13, "verify determinism", criterion_determinism},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    double secs = seconds_since(t0);
    std::printf("[%s] criterion %2d: %s — %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", e.id, e.label,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("acceptance: all 13 criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
