#include "momentgap/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momentgap::rademacher {

namespace {

bool values_close(double a, double b) {
  return std::abs(a - b) <= SignedRV::kMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

void merge_push(std::vector<Atom>& out, double v, double w) {
  if (!out.empty() && values_close(out.back().value, v)) {
    Atom& last = out.back();
    double sum = last.prob + w;
    last.value = (last.value * last.prob + v * w) / sum;
    last.prob = sum;
  } else {
    out.push_back({v, w});
  }
}

double pow_int(double v, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= v;
  return r;
}

void check_bias(double p) {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0)) throw ParameterError("bias p must lie in (0,1)");
}

}  // namespace

SignedRV::SignedRV(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ParameterError("SignedRV: no atoms");
  double psum = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.prob) || a.prob <= 0.0)
      throw ParameterError("SignedRV: invalid atom");
    psum += a.prob;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw ParameterError("SignedRV: probabilities sum to " + fmt_g17(psum));
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) merge_push(atoms_, a.value, a.prob);
}

SignedRV SignedRV::add_scaled(const SignedRV& step, double coeff) const {
  // Each step atom contributes a constant-shifted copy of *this; shifted
  // copies stay sorted, so the two-atom case is a linear-time merge.
  if (step.size() == 2) {
    const double s0 = coeff * step.atoms()[0].value, w0 = step.atoms()[0].prob;
    const double s1 = coeff * step.atoms()[1].value, w1 = step.atoms()[1].prob;
    std::vector<Atom> out;
    out.reserve(2 * atoms_.size());
    std::size_t i = 0, j = 0;
    const std::size_t n = atoms_.size();
    while (i < n || j < n) {
      double vi = i < n ? atoms_[i].value + s0 : std::numeric_limits<double>::infinity();
      double vj = j < n ? atoms_[j].value + s1 : std::numeric_limits<double>::infinity();
      if (vi <= vj) {
        merge_push(out, vi, atoms_[i].prob * w0);
        ++i;
      } else {
        merge_push(out, vj, atoms_[j].prob * w1);
        ++j;
      }
    }
    SignedRV res;
    res.atoms_ = std::move(out);
    return res;
  }
  std::vector<Atom> all;
  all.reserve(atoms_.size() * step.size());
  for (const Atom& s : step.atoms())
    for (const Atom& a : atoms_) all.push_back({a.value + coeff * s.value, a.prob * s.prob});
  return SignedRV(std::move(all));
}

FiniteRV SignedRV::abs() const { return FiniteRV(atoms_); }

double SignedRV::moment(int k) const {
  NeumaierSum s;
  for (const Atom& a : atoms_) s.add(a.prob * pow_int(a.value, k));
  return s.value();
}

SignedRV biased_xi(double p) {
  check_bias(p);
  double plus = std::sqrt((1.0 - p) / p);
  double minus = -std::sqrt(p / (1.0 - p));
  return SignedRV({{minus, 1.0 - p}, {plus, p}});
}

SumSpec::SumSpec(double bias_, std::vector<double> coeffs_, bool normalize) : bias(bias_), coeffs(std::move(coeffs_)) {
  check_bias(bias);
  if (coeffs.empty()) throw ParameterError("SumSpec: empty coefficient vector");
  double ss = 0.0;
  for (double a : coeffs) {
    if (!std::isfinite(a)) throw ParameterError("SumSpec: non-finite coefficient");
    ss += a * a;
  }
  if (normalize) {
    if (ss <= 0.0) throw ParameterError("SumSpec: cannot normalize zero coefficients");
    double s = std::sqrt(ss);
    for (double& a : coeffs) a /= s;
  } else if (std::abs(ss - 1.0) > kUnitTol) {
    throw ParameterError("SumSpec: sum of squared coefficients is " + fmt_g17(ss) + ", not 1");
  }
}

FiniteRV exact_sum_distribution(const SumSpec& spec) {
  if (static_cast<int>(spec.coeffs.size()) > SumSpec::kMaxExact)
    throw CapacityError("exact_sum_distribution: n > 24; use the moment formulas instead");
  SignedRV xi = biased_xi(spec.bias);
  SignedRV dist = SignedRV::point(0.0);
  for (double a : spec.coeffs) dist = dist.add_scaled(xi, a);
  return dist.abs();
}

double fourth_moment(const SumSpec& spec) {
  double p = spec.bias;
  double xi4 = 1.0 / (p * (1.0 - p)) - 3.0;
  NeumaierSum a4;
  for (double a : spec.coeffs) a4.add(a * a * a * a);
  return 3.0 + (xi4 - 3.0) * a4.value();
}

double fourth_moment_floor(double p) {
  check_bias(p);
  double t = (2.0 * p - 1.0) * (2.0 * p - 1.0) / (p * (1.0 - p));
  return 1.0 + std::min(2.0, t);
}

double sixth_moment_bound(double p) {
  check_bias(p);
  double pq = p * (1.0 - p);
  return 15.0 / (pq * pq * pq);
}

Khinchin6 khinchin6_check(std::span<const double> b) {
  if (b.empty()) throw ParameterError("khinchin6_check: empty vector");
  if (b.size() > 20) throw CapacityError("khinchin6_check: n > 20");
  SignedRV sign({{-1.0, 0.5}, {1.0, 0.5}});
  SignedRV dist = SignedRV::point(0.0);
  double ss = 0.0;
  for (double bi : b) {
    if (!std::isfinite(bi)) throw ParameterError("khinchin6_check: non-finite entry");
    dist = dist.add_scaled(sign, bi);
    ss += bi * bi;
  }
  return {dist.moment(6), 15.0 * ss * ss * ss};
}

namespace {

double min_term(double p) {
  double pq = p * (1.0 - p);
  double d = 2.0 * p - 1.0;
  return std::min(4.0 * pq * pq * pq, d * d * d * d * pq);
}

}  // namespace

double biased_l1_bound(double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw ParameterError("biased_l1_bound: p must lie in [0,1]");
  double pq = p * (1.0 - p);
  return 1.0 - min_term(p) / (45.0 - 3.0 * pq * pq * pq);
}

double biased_l1_bound_sqrt(double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw ParameterError("biased_l1_bound_sqrt: p must lie in [0,1]");
  return std::sqrt(1.0 - min_term(p) / 480.0);
}

double indicator_ratio(double p, int k) {
  check_bias(p);
  if (k < 1 || k > 1000000) throw ParameterError("indicator_ratio: k out of range");
  // X = sum_{j<=k} xi_j = (B - kp)/sqrt(p(1-p)) with B ~ Binomial(k, p).
  double lp = std::log(p), lq = std::log1p(-p);
  NeumaierSum e_abs;
  for (int i = 0; i <= k; ++i) {
    double lpmf = std::lgamma(k + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0) + i * lp + (k - i) * lq;
    e_abs.add(std::exp(lpmf) * std::abs(i - k * p));
  }
  return e_abs.value() / std::sqrt(p * (1.0 - p)) / std::sqrt(static_cast<double>(k));
}

namespace {

double indicator_n(double ps) { return std::floor(1.0 / (1.0 - (1.0 - ps) * (1.0 - ps))); }

}  // namespace

double indicator_sup_formula(double p) {
  check_bias(p);
  double ps = std::min(p, 1.0 - p);
  double n = indicator_n(ps);
  return 2.0 * std::sqrt(n * ps) * std::pow(1.0 - ps, n - 1.0);
}

double indicator_sup(double p) {
  check_bias(p);
  double ps = std::min(p, 1.0 - p);
  double n = indicator_n(ps);
  return 2.0 * std::sqrt(n * ps) * std::pow(1.0 - ps, n - 0.5);
}

}  // namespace momentgap::rademacher
