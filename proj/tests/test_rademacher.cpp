#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "momentgap/common.hpp"
#include "momentgap/rademacher.hpp"

using namespace momentgap;
using namespace momentgap::rademacher;

namespace {

SumSpec sample_spec(Rng& rng, int n_max = 12) {
  double p = rng.uniform(0.02, 0.98);
  int n = static_cast<int>(rng.uniform_int(1, n_max));
  std::vector<double> a(n);
  for (double& x : a) x = rng.uniform(-1.0, 1.0);
  return SumSpec(p, std::move(a), true);
}

}  // namespace

TEST_SUITE("rademacher") {

TEST_CASE("biased_xi atoms and moments") {
  SignedRV sym = biased_xi(0.5);
  REQUIRE(sym.size() == 2);
  CHECK(sym.atoms()[0].value == doctest::Approx(-1.0));
  CHECK(sym.atoms()[1].value == doctest::Approx(1.0));
  CHECK(sym.atoms()[0].prob == 0.5);
  CHECK(sym.moment(4) == doctest::Approx(1.0).epsilon(1e-15));

  SignedRV xi = biased_xi(0.75);
  CHECK(xi.atoms()[0].value == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
  CHECK(xi.atoms()[0].prob == doctest::Approx(0.25));
  CHECK(xi.atoms()[1].value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(xi.atoms()[1].prob == doctest::Approx(0.75));

  CHECK_THROWS_AS(biased_xi(0.0), ParameterError);
  CHECK_THROWS_AS(biased_xi(1.0), ParameterError);

  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    double p = rng.uniform(0.01, 0.99);
    SignedRV v = biased_xi(p);
    double m4 = 1.0 / (p * (1.0 - p)) - 3.0;
    CHECK(std::abs(v.moment(1)) <= 1e-12);
    CHECK(std::abs(v.moment(2) - 1.0) <= 1e-12);
    CHECK(std::abs(v.moment(4) - m4) <= 1e-12 * std::max(1.0, m4));
  }
}

TEST_CASE("exact_sum_distribution basics") {
  FiniteRV single = exact_sum_distribution(SumSpec(0.5, {1.0}));
  REQUIRE(single.size() == 1);
  CHECK(single.atoms()[0].value == doctest::Approx(1.0));
  CHECK(single.moment(1.0) == doctest::Approx(1.0));

  double inv_rt2 = 1.0 / std::sqrt(2.0);
  FiniteRV pair = exact_sum_distribution(SumSpec(0.5, {inv_rt2, inv_rt2}));
  REQUIRE(pair.size() == 2);
  CHECK(pair.atoms()[0].value == doctest::Approx(0.0));
  CHECK(pair.atoms()[0].prob == doctest::Approx(0.5));
  CHECK(pair.atoms()[1].value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(pair.moment(1.0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));

  std::vector<double> too_many(25, 0.2);
  CHECK_THROWS_AS(exact_sum_distribution(SumSpec(0.5, too_many, true)), CapacityError);
}

TEST_CASE("unit variance and permutation invariance of the exact distribution") {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    SumSpec spec = sample_spec(rng);
    FiniteRV dist = exact_sum_distribution(spec);
    CHECK(std::abs(dist.moment(2.0) - 1.0) <= 1e-12);

    std::vector<double> shuffled = spec.coeffs;
    for (std::size_t j = shuffled.size(); j > 1; --j)
      std::swap(shuffled[j - 1], shuffled[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(j) - 1))]);
    FiniteRV dist2 = exact_sum_distribution(SumSpec(spec.bias, shuffled));
    REQUIRE(dist2.size() == dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
      CHECK(dist2.atoms()[j].value == doctest::Approx(dist.atoms()[j].value).epsilon(1e-11));
      CHECK(dist2.atoms()[j].prob == doctest::Approx(dist.atoms()[j].prob).epsilon(1e-11));
    }
  }
}

TEST_CASE("fourth moment closed form against exact convolution") {
  CHECK(fourth_moment(SumSpec(0.5, {1.0})) == doctest::Approx(1.0).epsilon(1e-15));

  SumSpec s34(0.75, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  CHECK(fourth_moment(s34) ==
        doctest::Approx(exact_sum_distribution(s34).moment(4.0)).epsilon(1e-13));

  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    SumSpec spec = sample_spec(rng);
    double formula = fourth_moment(spec);
    double exact = exact_sum_distribution(spec).moment(4.0);
    REQUIRE(std::abs(formula - exact) <= 1e-10 * std::max(1.0, std::abs(formula)));
    REQUIRE(formula >= fourth_moment_floor(spec.bias) - 1e-12);
  }
}

TEST_CASE("sixth moment bound") {
  CHECK(sixth_moment_bound(0.5) == doctest::Approx(960.0).epsilon(1e-15));  // 15 * 64

  Rng rng(24);
  for (int i = 0; i < 300; ++i) {
    SumSpec spec = sample_spec(rng);
    double bound = sixth_moment_bound(spec.bias);
    REQUIRE(exact_sum_distribution(spec).moment(6.0) <= bound * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("khinchin sixth-moment inequality") {
  Khinchin6 one = khinchin6_check(std::vector<double>{1.0});
  CHECK(one.lhs == doctest::Approx(1.0));
  CHECK(one.rhs == doctest::Approx(15.0));

  Khinchin6 two = khinchin6_check(std::vector<double>{1.0, 1.0});
  CHECK(two.lhs == doctest::Approx(32.0));   // (0 + 2^6)/2
  CHECK(two.rhs == doctest::Approx(120.0));  // 15 * 8

  // equal weights approach the Gaussian value 15 from below;
  // E(sum eps_i)^6 = 15n^3 - 30n^2 + 16n gives an independent closed form
  double prev = 0.0;
  for (int n = 1; n <= 20; ++n) {
    std::vector<double> b(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Khinchin6 k = khinchin6_check(b);
    double nn = n;
    double closed = (15.0 * nn * nn * nn - 30.0 * nn * nn + 16.0 * nn) / (nn * nn * nn);
    REQUIRE(k.lhs == doctest::Approx(closed).epsilon(1e-12));
    REQUIRE(k.lhs <= k.rhs + 1e-12);
    REQUIRE(k.lhs >= prev);  // increasing toward 15
    prev = k.lhs;
  }

  Rng rng(25);
  for (int i = 0; i < 500; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 12));
    std::vector<double> b(n);
    for (double& x : b) x = rng.uniform(-2.0, 2.0);
    Khinchin6 k = khinchin6_check(b);
    REQUIRE(k.lhs <= k.rhs * (1.0 + 1e-12) + 1e-12);
  }

  CHECK_THROWS_AS(khinchin6_check(std::vector<double>(21, 0.1)), CapacityError);
}

TEST_CASE("l1 bounds: point values and comparison") {
  CHECK(biased_l1_bound(0.5) == 1.0);  // the min term vanishes at p = 1/2
  CHECK(biased_l1_bound(0.0) == 1.0);
  CHECK(biased_l1_bound(1.0) == 1.0);

  // independent arithmetic at p = 3/4: min = (1/2)^4 (3/16) = 3/256,
  // denominator 45 - 3 (3/16)^3 = 45 - 81/4096
  double expected = 1.0 - (3.0 / 256.0) / (45.0 - 81.0 / 4096.0);
  CHECK(biased_l1_bound(0.75) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(0.99974).epsilon(1e-4));

  double sqrt_form = std::sqrt(1.0 - (3.0 / 256.0) / 480.0);
  CHECK(biased_l1_bound_sqrt(0.75) == doctest::Approx(sqrt_form).epsilon(1e-15));
  CHECK(sqrt_form == doctest::Approx(0.9999878).epsilon(1e-6));

  CHECK(biased_l1_bound(0.75) < biased_l1_bound_sqrt(0.75));
  CHECK(biased_l1_bound_sqrt(0.5) == 1.0);

  CHECK_THROWS_AS(biased_l1_bound(-0.1), ParameterError);
  CHECK_THROWS_AS(biased_l1_bound(1.1), ParameterError);
}

TEST_CASE("l1 bound dominates exact sums end to end") {
  Rng rng(26);
  for (int i = 0; i < 300; ++i) {
    SumSpec spec = sample_spec(rng);
    double l1 = exact_sum_distribution(spec).moment(1.0);
    REQUIRE(l1 <= biased_l1_bound(spec.bias) + 1e-12);
    REQUIRE(l1 <= biased_l1_bound_sqrt(spec.bias) + 1e-12);
  }
}

TEST_CASE("indicator-coefficient supremum formulas") {
  // N(0.1) = floor(1/0.19) = 5
  CHECK(indicator_sup_formula(0.1) ==
        doctest::Approx(2.0 * std::sqrt(0.5) * std::pow(0.9, 4.0)).epsilon(1e-15));
  CHECK(indicator_sup_formula(0.1) == doctest::Approx(0.9279).epsilon(1e-4));

  // verbatim closed form exceeds 1 at p = 1/2 even though it describes an
  // L1/L2 ratio; the sharp variant equals 1 there
  CHECK(indicator_sup_formula(0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(indicator_sup_formula(0.5) > 1.0);
  CHECK(indicator_sup(0.5) == doctest::Approx(1.0).epsilon(1e-15));

  // exhaustive maximum over k <= 200 equal coefficients at p = 0.1
  double best = 0.0;
  for (int k = 1; k <= 200; ++k) best = std::max(best, indicator_ratio(0.1, k));
  CHECK(best == doctest::Approx(indicator_sup(0.1)).epsilon(1e-9));
  CHECK(best <= indicator_sup_formula(0.1));
  CHECK(indicator_ratio(0.1, 5) == doctest::Approx(indicator_sup(0.1)).epsilon(1e-12));

  // the sharp form never exceeds 1 and is the attained value
  Rng rng(27);
  for (int i = 0; i < 200; ++i) {
    double p = rng.uniform(0.02, 0.98);
    REQUIRE(indicator_sup(p) <= 1.0 + 1e-12);
    REQUIRE(indicator_sup(p) <= indicator_sup_formula(p) + 1e-12);
  }
}

}  // TEST_SUITE
