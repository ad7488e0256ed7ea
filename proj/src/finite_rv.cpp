#include "momentgap/finite_rv.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace momentgap {

namespace {

bool values_close(double a, double b) {
  return std::abs(a - b) <= FiniteRV::kMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

FiniteRV::FiniteRV(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ParameterError("FiniteRV: no atoms");
  double psum = 0.0;
  for (auto& a : atoms) {
    if (!std::isfinite(a.value)) throw ParameterError("FiniteRV: non-finite value");
    if (!std::isfinite(a.prob) || a.prob <= 0.0 || a.prob > 1.0 + kProbSumTol)
      throw ParameterError("FiniteRV: probability outside (0,1]");
    a.value = std::abs(a.value);
    psum += a.prob;
  }
  if (std::abs(psum - 1.0) > kProbSumTol)
    throw ParameterError("FiniteRV: probabilities sum to " + fmt_g17(psum) + ", not 1");

  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && values_close(atoms_.back().value, a.value)) {
      Atom& last = atoms_.back();
      double w = last.prob + a.prob;
      last.value = (last.value * last.prob + a.value * a.prob) / w;
      last.prob = w;
    } else {
      atoms_.push_back(a);
    }
  }
}

double FiniteRV::moment(double p) const {
  NeumaierSum s;
  for (const Atom& a : atoms_) s.add(a.prob * std::pow(a.value, p));
  return s.value();
}

double lp_norm(const FiniteRV& rv, double p) {
  if (!std::isfinite(p) || p <= 0.0) throw ParameterError("lp_norm: p must be finite and positive");
  return std::pow(rv.moment(p), 1.0 / p);
}

FiniteRV normalize_l2(const FiniteRV& rv) {
  double s = lp_norm(rv, 2.0);
  if (s <= 0.0) throw DegenerateError("normalize_l2: variable is almost surely zero");
  std::vector<Atom> scaled = rv.atoms();
  for (Atom& a : scaled) a.value /= s;
  return FiniteRV(std::move(scaled));
}

FiniteRV TwoPointRV::to_rv() const {
  // P{X=b} computed directly in factored form; deriving it as 1-r would
  // lose all precision once b is large.
  double s = ((1.0 - a) * (1.0 + a)) / ((b - a) * (b + a));
  return FiniteRV({{a, r}, {b, s}});
}

TwoPointRV two_point(double a, double b) {
  if (!std::isfinite(a) || !(a > 0.0) || !(a < 1.0))
    throw ParameterError("two_point: a must lie in (0,1)");
  if (!std::isfinite(b) || !(b > 1.0)) throw ParameterError("two_point: b must lie in (1,inf)");
  double r = ((b - 1.0) * (b + 1.0)) / ((b - a) * (b + a));
  return {a, b, r};
}

GapReport main_inequality_rhs(const FiniteRV& rv, double p, double q, double c_const) {
  if (!(p > 2.0) || !(q > p) || !std::isfinite(q))
    throw ParameterError("main_inequality_rhs: need 2 < p < q < inf");
  if (!(c_const > 0.0) || !std::isfinite(c_const))
    throw ParameterError("main_inequality_rhs: C must be positive");
  double l2 = lp_norm(rv, 2.0);
  if (std::abs(l2 - 1.0) > 1e-10)
    throw NormalizationError("main_inequality_rhs: ||X||_2 = " + fmt_g17(l2) + "; normalize first");

  GapReport rep;
  rep.l1 = rv.moment(1.0);
  rep.lp_p = rv.moment(p);
  rep.lq_q = rv.moment(q);
  rep.degenerate = false;

  double theta = (q - 2.0) / (q - p);
  double num = rep.lp_p - 1.0;
  double den = rep.lq_q - 1.0;
  if (den < 1e-14) {
    // Constant-in-modulus X: both moment gaps vanish and the inequality
    // holds with equality; pin rhs = 1 instead of evaluating 0/0.
    rep.degenerate = true;
    rep.rhs = 1.0;
  } else if (num <= 0.0) {
    rep.rhs = 1.0;
  } else {
    double ratio = std::exp(theta * std::log(num) - (theta - 1.0) * std::log(den));
    rep.rhs = 1.0 - c_const * ratio;
  }
  rep.gap = rep.rhs - rep.l1;
  return rep;
}

std::string FiniteRV::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Atom& a : atoms_) arr.push_back({{"value", a.value}, {"prob", a.prob}});
  return arr.dump();
}

FiniteRV FiniteRV::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array()) throw ParameterError("FiniteRV: JSON must be an array of {value, prob}");
  std::vector<Atom> atoms;
  for (const auto& e : j) atoms.push_back({e.at("value").get<double>(), e.at("prob").get<double>()});
  return FiniteRV(std::move(atoms));
}

}  // namespace momentgap
