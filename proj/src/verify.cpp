#include "momentgap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "momentgap/common.hpp"
#include "momentgap/expsums.hpp"
#include "momentgap/finite_rv.hpp"
#include "momentgap/hypercube.hpp"
#include "momentgap/rademacher.hpp"
#include "momentgap/sharp_constant.hpp"

namespace momentgap::verify {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Collects one suite's checks; a check fails when `excess` (how far the
// measured quantity lands beyond its allowed tolerance) is positive.
struct Suite {
  SuiteResult res;
  explicit Suite(std::string name) { res.name = std::move(name); }
  void check(double excess, const std::function<std::string()>& witness = {}) {
    ++res.checks;
    if (excess > 0.0) {
      ++res.violations;
      res.max_excess = std::max(res.max_excess, excess);
      if (res.witness.empty() && witness) res.witness = witness();
    }
  }
};

FiniteRV random_rv(Rng& rng) {
  int n = static_cast<int>(rng.uniform_int(2, 8));
  std::vector<Atom> atoms;
  atoms.reserve(n);
  double psum = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = rng.uniform(0.05, 1.0);
    atoms.push_back({rng.uniform(0.001, 10.0), w});
    psum += w;
  }
  for (Atom& a : atoms) a.prob /= psum;
  return FiniteRV(std::move(atoms));
}

rademacher::SumSpec random_spec(Rng& rng, double p_lo = 0.02, double p_hi = 0.98, int n_max = 12) {
  double p = rng.uniform(p_lo, p_hi);
  int n = static_cast<int>(rng.uniform_int(1, n_max));
  std::vector<double> a(n);
  for (double& x : a) x = rng.uniform(-1.0, 1.0);
  return rademacher::SumSpec(p, std::move(a), /*normalize=*/true);
}

cube::CubeFunction random_cube(Rng& rng, int n_max = 10) {
  int n = static_cast<int>(rng.uniform_int(1, n_max));
  std::size_t size = std::size_t{1} << n;
  std::vector<double> v(size, 0.0);
  int kind = static_cast<int>(rng.uniform_int(0, 9));
  if (kind < 5) {
    for (double& x : v) x = rng.normal();
  } else if (kind < 8) {
    for (double& x : v) x = rng.uniform() < 0.5 ? -1.0 : 1.0;
  } else {
    int spikes = static_cast<int>(rng.uniform_int(1, std::max<std::int64_t>(1, static_cast<std::int64_t>(size) / 4)));
    for (int i = 0; i < spikes; ++i)
      v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(size) - 1))] =
          (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 5.0);
  }
  bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
  if (constant) v[0] += 1.0;
  return cube::CubeFunction(n, std::move(v));
}

std::string spec_json(const rademacher::SumSpec& s) {
  nlohmann::json j{{"bias", s.bias}, {"coeffs", s.coeffs}};
  return j.dump();
}

void suite_rv_gap(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite s("rv_gap_46");
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    FiniteRV rv = normalize_l2(random_rv(rng));
    GapReport rep = main_inequality_rhs(rv, 4.0, 6.0, cfg.c46);
    s.check(-rep.gap - 1e-12, [&] { return rv.to_json(); });
  }
  // Two-point probes along the extremal direction a -> 1, b near 2: these
  // approach equality, so any inflated constant fails here first.
  for (int k = 6; k <= 13; ++k) {
    for (double c : {0.45, 0.5, 0.55}) {
      TwoPointRV tp = two_point(1.0 - std::ldexp(1.0, -k), 1.0 / c);
      GapReport rep = main_inequality_rhs(tp.to_rv(), 4.0, 6.0, cfg.c46);
      s.check(-rep.gap - 1e-12, [&] { return tp.to_rv().to_json(); });
    }
  }
  out.push_back(s.res);
}

void suite_rv_norms(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite cs("rv_cauchy_schwarz");
  Suite mono("rv_lp_monotone");
  Suite scale("rv_scale_invariance");
  const double ps[] = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
  std::int64_t n = std::min<std::int64_t>(cfg.samples, 20000);
  for (std::int64_t i = 0; i < n; ++i) {
    FiniteRV rv = random_rv(rng);
    cs.check(lp_norm(rv, 1.0) - lp_norm(rv, 2.0) - 1e-12, [&] { return rv.to_json(); });
    for (std::size_t j = 0; j + 1 < std::size(ps); ++j)
      mono.check(lp_norm(rv, ps[j]) - lp_norm(rv, ps[j + 1]) - 1e-12, [&] { return rv.to_json(); });

    double lambda = rng.uniform(0.1, 10.0);
    std::vector<Atom> scaled = rv.atoms();
    for (Atom& a : scaled) a.value *= lambda;
    FiniteRV n1 = normalize_l2(FiniteRV(scaled));
    FiniteRV n2 = normalize_l2(rv);
    double worst = std::max(std::abs(lp_norm(n1, 1.0) - lp_norm(n2, 1.0)),
                            std::abs(lp_norm(n1, 3.0) - lp_norm(n2, 3.0)));
    scale.check(worst - 1e-12, [&] { return rv.to_json(); });
  }
  out.push_back(cs.res);
  out.push_back(mono.res);
  out.push_back(scale.res);
}

void suite_two_point(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite s("two_point_identities");
  std::int64_t n = std::min<std::int64_t>(std::max<std::int64_t>(cfg.samples, 1), 10000);
  for (std::int64_t i = 0; i < n; ++i) {
    double a = rng.uniform(1e-6, 1.0 - 1e-6);
    double b = 1.0 / rng.uniform(1e-6, 1.0 - 1e-6);
    TwoPointRV tp = two_point(a, b);
    FiniteRV rv = tp.to_rv();
    double e1 = std::abs(rv.moment(1.0) - tp.mean());
    double e2 = std::abs(rv.moment(2.0) - 1.0);
    s.check(std::max(e1, e2) - 1e-12,
            [&] { return "{\"a\":" + fmt_g17(a) + ",\"b\":" + fmt_g17(b) + "}"; });
  }
  out.push_back(s.res);
}

void suite_sharp(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite sandwich("sharp_lemma_sandwich");
  for (double p : {2.5, 3.0, 4.0, 7.3, 12.0}) {
    double lo = std::min(1.0, p - 2.0);
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < 100; ++j) {
        double a = 1e-3 + (1.0 - 2e-3) * i / 99.0;
        double c = 1e-3 + (1.0 - 2e-3) * j / 99.0;
        double b = sharp::b_ratio(a, c, p);
        double excess = std::max(lo - b, b - p * p);
        sandwich.check(excess - 1e-12, [&] {
          return "{\"a\":" + fmt_g17(a) + ",\"c\":" + fmt_g17(c) + ",\"p\":" + fmt_g17(p) + "}";
        });
      }
    }
  }
  out.push_back(sandwich.res);

  Suite form("sharp_form_agreement");
  std::int64_t n = std::min<std::int64_t>(cfg.samples, 10000);
  for (std::int64_t i = 0; i < n; ++i) {
    double a = rng.uniform(1e-3, 1.0 - 1e-3);
    double c = rng.uniform(1e-3, 1.0 - 1e-3);
    double p = rng.uniform(2.05, 9.0);
    double q = p + rng.uniform(0.05, 3.0);
    double v1 = sharp::objective(a, c, p, q);
    double v2 = sharp::objective_product_form(a, c, p, q);
    form.check(std::abs(v1 - v2) / std::max(1.0, std::abs(v1)) - 1e-10, [&] {
      return "{\"a\":" + fmt_g17(a) + ",\"c\":" + fmt_g17(c) + ",\"p\":" + fmt_g17(p) + ",\"q\":" + fmt_g17(q) + "}";
    });
  }
  out.push_back(form.res);

  Suite torsion("torsion_positive");
  for (int i = 0; i < 100; ++i) {
    double t = rng.uniform(0.05, 0.95);
    double p = rng.uniform(2.05, 11.0);
    double q = p + rng.uniform(0.1, 12.0 - p);
    try {
      sharp::TorsionReport rep = sharp::torsion_minors(t, p, q);
      double min_minor = *std::min_element(rep.minors.begin(), rep.minors.end());
      torsion.check(min_minor > 0.0 ? rep.max_rel_err - 1e-8 : 1.0, [&] {
        return "{\"t\":" + fmt_g17(t) + ",\"p\":" + fmt_g17(p) + ",\"q\":" + fmt_g17(q) + "}";
      });
    } catch (const NumericalError&) {
      torsion.check(1.0, [&] {
        return "{\"t\":" + fmt_g17(t) + ",\"p\":" + fmt_g17(p) + ",\"q\":" + fmt_g17(q) + "}";
      });
    }
  }
  out.push_back(torsion.res);
}

void suite_rademacher(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite xi("rademacher_xi_moments");
  for (int i = 0; i < 1000; ++i) {
    double p = rng.uniform(0.01, 0.99);
    rademacher::SignedRV v = rademacher::biased_xi(p);
    double m4_expected = 1.0 / (p * (1.0 - p)) - 3.0;
    double worst = std::max({std::abs(v.moment(1)), std::abs(v.moment(2) - 1.0),
                             std::abs(v.moment(4) - m4_expected) / std::max(1.0, m4_expected)});
    xi.check(worst - 1e-12, [&] { return "{\"p\":" + fmt_g17(p) + "}"; });
  }
  out.push_back(xi.res);

  Suite l1("rademacher_l1_bound");
  Suite fourth("rademacher_fourth_moment");
  Suite sixth("rademacher_sixth_moment");
  std::int64_t n = std::min<std::int64_t>(cfg.samples, 1000);
  for (std::int64_t i = 0; i < n; ++i) {
    rademacher::SumSpec spec = random_spec(rng);
    FiniteRV dist = rademacher::exact_sum_distribution(spec);
    l1.check(dist.moment(1.0) - rademacher::biased_l1_bound(spec.bias) - 1e-12,
             [&] { return spec_json(spec); });
    double f_formula = rademacher::fourth_moment(spec);
    fourth.check(std::abs(dist.moment(4.0) - f_formula) / std::max(1.0, f_formula) - 1e-10,
                 [&] { return spec_json(spec); });
    double bound = rademacher::sixth_moment_bound(spec.bias);
    sixth.check(dist.moment(6.0) - bound * (1.0 + 1e-12), [&] { return spec_json(spec); });
  }
  out.push_back(l1.res);
  out.push_back(fourth.res);
  out.push_back(sixth.res);

  Suite kh("khinchin6");
  for (int i = 0; i < 1000; ++i) {
    int m = static_cast<int>(rng.uniform_int(1, 12));
    std::vector<double> b(m);
    for (double& x : b) x = rng.uniform(-2.0, 2.0);
    rademacher::Khinchin6 k6 = rademacher::khinchin6_check(b);
    kh.check(k6.lhs - k6.rhs - 1e-9 * std::max(1.0, k6.rhs), [&] {
      nlohmann::json j{{"b", b}};
      return j.dump();
    });
  }
  out.push_back(kh.res);
}

void suite_cube(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite ratio("poincare_ratio_bound");
  Suite dsum("partial_difference_mean_zero");
  const double bound = kPi / 2.0 - 0.00013;
  std::int64_t n = std::min<std::int64_t>(cfg.samples, 2000);
  for (std::int64_t i = 0; i < n; ++i) {
    cube::CubeFunction f = random_cube(rng);
    try {
      ratio.check(cube::poincare_ratio(f) - bound - 1e-12, [&] { return f.to_json(); });
    } catch (const DegenerateError&) {
      // constant draw: gradient vanishes, nothing to check
    }
    int j = static_cast<int>(rng.uniform_int(1, f.dim()));
    cube::CubeFunction d = cube::partial_difference(f, j);
    NeumaierSum s;
    for (double v : d.values()) s.add(v);
    dsum.check(std::abs(s.value()) - 1e-9, [&] { return f.to_json(); });
  }
  out.push_back(ratio.res);
  out.push_back(dsum.res);
}

void suite_expsum(const VerifyConfig& cfg, Rng rng, std::vector<SuiteResult>& out) {
  Suite inv("expsum_shift_reflect_invariance");
  Suite ord("expsum_norm_ordering");
  Suite dom("expsum_theorem_dominates_l1");
  std::int64_t n = std::min<std::int64_t>(std::max<std::int64_t>(cfg.samples / 200, 10), 50);
  for (std::int64_t i = 0; i < n; ++i) {
    int size = static_cast<int>(rng.uniform_int(2, 12));
    std::vector<std::int64_t> e;
    while (static_cast<int>(e.size()) < size) {
      std::int64_t cand = rng.uniform_int(-50, 200);
      if (std::find(e.begin(), e.end(), cand) == e.end()) e.push_back(cand);
    }
    expsum::ExpSumSet s(e);
    std::int64_t shift = rng.uniform_int(-1000, 1000);
    std::vector<std::int64_t> shifted, reflected;
    for (std::int64_t x : e) {
      shifted.push_back(x + shift);
      reflected.push_back(-x);
    }
    expsum::ExpSumSet s2{std::move(shifted)}, s3{std::move(reflected)};

    auto r2 = expsum::exact_even_moment(s, 2);
    bool exact_ok = r2.tuples == expsum::exact_even_moment(s2, 2).tuples &&
                    r2.tuples == expsum::exact_even_moment(s3, 2).tuples;
    double l1 = expsum::quadrature_norm(s, 1.0, 1e-8).value;
    double l1s = expsum::quadrature_norm(s2, 1.0, 1e-8).value;
    double l1r = expsum::quadrature_norm(s3, 1.0, 1e-8).value;
    inv.check(exact_ok ? std::max(std::abs(l1 - l1s), std::abs(l1 - l1r)) - 1e-7 : 1.0, [&] {
      nlohmann::json j{{"elements", e}};
      return j.dump();
    });

    double l2 = expsum::quadrature_norm(s, 2.0, 1e-8).value;
    double l4 = std::pow(r2.value(), 0.25);
    double l6 = std::pow(expsum::exact_even_moment(s, 3).value(), 1.0 / 6.0);
    double worst = std::max({l1 - l2 - 1e-7, std::abs(l2 - 1.0) - 1e-7, l2 - l4 - 1e-7, l4 - l6 - 1e-7});
    ord.check(worst, [&] {
      nlohmann::json j{{"elements", e}};
      return j.dump();
    });

    double bound = expsum::theorem_upper_bound(s, 4.0, 6.0, 1.0 / 3.0);
    dom.check(l1 - bound - 1e-7, [&] {
      nlohmann::json j{{"elements", e}};
      return j.dump();
    });
  }
  out.push_back(inv.res);
  out.push_back(ord.res);
  out.push_back(dom.res);
}

}  // namespace

VerifyReport run_verify(const VerifyConfig& cfg) {
  if (cfg.samples < 1) throw ParameterError("run_verify: samples must be >= 1");
  VerifyReport rep;
  rep.config = cfg;

  Rng root(cfg.seed);
  // One forked generator per suite so suite order and sample counts stay
  // independent of each other.
  suite_rv_gap(cfg, root.fork(), rep.suites);
  suite_rv_norms(cfg, root.fork(), rep.suites);
  suite_two_point(cfg, root.fork(), rep.suites);
  suite_sharp(cfg, root.fork(), rep.suites);
  suite_rademacher(cfg, root.fork(), rep.suites);
  suite_cube(cfg, root.fork(), rep.suites);
  suite_expsum(cfg, root.fork(), rep.suites);

  for (const SuiteResult& s : rep.suites) {
    rep.checks += s.checks;
    rep.violations += s.violations;
    rep.max_excess = std::max(rep.max_excess, s.max_excess);
  }
  return rep;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  os << "momentgap verify report\n";
  os << "seed=" << config.seed << " samples=" << config.samples << " c46=" << fmt_g17(config.c46) << "\n";
  for (const SuiteResult& s : suites) {
    os << "suite=" << s.name << " checks=" << s.checks << " violations=" << s.violations
       << " max_excess=" << fmt_g17(s.max_excess);
    if (!s.witness.empty()) os << " witness=" << s.witness;
    os << "\n";
  }
  os << "total checks=" << checks << " violations=" << violations << " max_excess=" << fmt_g17(max_excess)
     << "\n";
  os << "status=" << (ok() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string VerifyReport::json() const {
  nlohmann::json suites_j = nlohmann::json::array();
  for (const SuiteResult& s : suites) {
    nlohmann::json j{{"name", s.name},
                     {"checks", s.checks},
                     {"violations", s.violations},
                     {"max_excess", s.max_excess}};
    if (!s.witness.empty()) j["witness"] = nlohmann::json::parse(s.witness);
    suites_j.push_back(j);
  }
  nlohmann::json j{{"seed", config.seed},   {"samples", config.samples}, {"c46", config.c46},
                   {"suites", suites_j},    {"checks", checks},          {"violations", violations},
                   {"max_excess", max_excess}, {"status", ok() ? "PASS" : "FAIL"}};
  return j.dump(2);
}

}  // namespace momentgap::verify
