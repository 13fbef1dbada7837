#include "kp/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kp/errors.hpp"

namespace kp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

// Bisection with Newton steps accepted only inside the current bracket.
double polish_in_bracket(const Polynomial& p, const Polynomial& dp, double lo, double hi) {
  double flo = p(lo);
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double fx = p(x);
    if (fx == 0.0) return x;
    if (sign_of(fx) == sign_of(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double width_floor = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi));
    if (hi - lo <= width_floor) break;

    const double d = dp(x);
    double next = 0.5 * (lo + hi);
    if (d != 0.0) {
      const double newton = x - fx / d;
      if (newton > lo && newton < hi) next = newton;
    }
    if (std::abs(next - x) <= 4.0 * kEps * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  return std::clamp(x, lo, hi);
}

bool near_zero(const Polynomial& p, double x) noexcept {
  return std::abs(p(x)) <= kRootTolerance * p.residual_scale(x);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> descending) : c_(std::move(descending)) {
  auto first = std::find_if(c_.begin(), c_.end(), [](double v) { return v != 0.0; });
  c_.erase(c_.begin(), first);
  if (c_.size() > 5) throw DomainError("polynomial degree above 4");
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (double c : c_) acc = acc * x + c;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<double> d;
  const int n = degree();
  for (int i = 0; i < n; ++i) d.push_back(c_[static_cast<std::size_t>(i)] * (n - i));
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::normalized() const {
  const double m = max_abs_coeff();
  if (m == 0.0) return *this;
  std::vector<double> c(c_);
  for (double& v : c) v /= m;
  return Polynomial(std::move(c));
}

double Polynomial::residual_scale(double x) const noexcept {
  return max_abs_coeff() * std::pow(std::max(1.0, std::abs(x)), std::max(degree(), 0));
}

QuarticPoly::QuarticPoly(const std::array<double, 5>& descending) : c_(descending) {
  for (double c : c_) {
    if (!std::isfinite(c)) throw DomainError("quartic coefficient is not finite");
  }
  if (c_[0] == 0.0) throw DomainError("quartic leading coefficient is zero");
}

double QuarticPoly::operator()(double x) const noexcept {
  double acc = 0.0;
  for (double c : c_) acc = acc * x + c;
  return acc;
}

double discriminant(const QuarticPoly& p) noexcept {
  const auto& [a, b, c, d, e] = p.coeffs();
  return 256 * a * a * a * e * e * e - 192 * a * a * b * d * e * e - 128 * a * a * c * c * e * e +
         144 * a * a * c * d * d * e - 27 * a * a * d * d * d * d + 144 * a * b * b * c * e * e -
         6 * a * b * b * d * d * e - 80 * a * b * c * c * d * e + 18 * a * b * c * d * d * d +
         16 * a * c * c * c * c * e - 4 * a * c * c * c * d * d - 27 * b * b * b * b * e * e +
         18 * b * b * b * c * d * e - 4 * b * b * b * d * d * d - 4 * b * b * c * c * c * e +
         b * b * c * c * d * d;
}

int descartes_positive(const QuarticPoly& p) noexcept {
  int changes = 0;
  int last = 0;
  for (double c : p.coeffs()) {
    const int s = sign_of(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<RealRoot> real_roots_in(const Polynomial& poly, double lo, double hi) {
  const Polynomial p = poly.normalized();
  std::vector<RealRoot> roots;
  if (p.degree() <= 0) return roots;
  if (p.degree() == 1) {
    const auto c = p.coeffs();
    const double x = -c[1] / c[0];
    if (x >= lo && x <= hi) roots.push_back({x, 1, x, x});
    return roots;
  }

  const Polynomial dp = p.derivative();
  const std::vector<RealRoot> critical = real_roots_in(dp, lo, hi);

  // A critical point where p vanishes is a root of multiplicity one higher than in p'.
  for (const RealRoot& c : critical) {
    if (near_zero(p, c.value)) roots.push_back({c.value, c.multiplicity + 1, c.value, c.value});
  }

  std::vector<double> knots{lo};
  for (const RealRoot& c : critical) {
    if (c.value > knots.back() && c.value < hi) knots.push_back(c.value);
  }
  knots.push_back(hi);

  auto already_recorded = [&](double x) {
    return std::any_of(roots.begin(), roots.end(), [x](const RealRoot& r) { return r.value == x; });
  };

  // p is monotone on each segment between consecutive knots.
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double x0 = knots[i];
    const double x1 = knots[i + 1];
    const bool z0 = near_zero(p, x0);
    const bool z1 = near_zero(p, x1);
    if (z0 || z1) {
      if (z0 && !already_recorded(x0)) roots.push_back({x0, 1, x0, x0});
      if (z1 && !already_recorded(x1)) roots.push_back({x1, 1, x1, x1});
      continue;
    }
    if (sign_of(p(x0)) != sign_of(p(x1))) {
      roots.push_back({polish_in_bracket(p, dp, x0, x1), 1, x0, x1});
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

RootReport isolate_real_roots(const QuarticPoly& p, double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("root isolation interval must satisfy lo < hi");
  }
  const Polynomial poly = p.as_polynomial().normalized();
  RootReport report;
  report.real_roots = real_roots_in(poly, lo, hi);
  for (const RealRoot& r : report.real_roots) {
    if (r.value > 0.0) report.positive_count += r.multiplicity;
  }
  report.discriminant = discriminant(p);
  const auto seq = sturm_sequence(poly);
  report.sturm_distinct = sturm_count(seq, lo, hi);
  return report;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq{p.normalized()};
  if (p.degree() <= 0) return seq;
  seq.push_back(p.derivative().normalized());
  while (seq.back().degree() > 0) {
    const Polynomial& num = seq[seq.size() - 2];
    const Polynomial& den = seq.back();
    std::vector<double> r(num.coeffs().begin(), num.coeffs().end());
    const auto d = den.coeffs();
    // Long division; r ends up holding the remainder in its tail.
    for (std::size_t i = 0; i + d.size() <= r.size(); ++i) {
      const double q = r[i] / d[0];
      for (std::size_t j = 0; j < d.size(); ++j) r[i + j] -= q * d[j];
      r[i] = 0.0;
    }
    const double floor = kRootTolerance * std::max(num.max_abs_coeff(), 1.0);
    for (double& v : r) {
      if (std::abs(v) <= floor) v = 0.0;
      v = -v;
    }
    Polynomial rem(std::move(r));
    if (rem.degree() < 0) break;
    seq.push_back(rem.normalized());
  }
  return seq;
}

int sturm_count(std::span<const Polynomial> sequence, double lo, double hi) noexcept {
  auto variations = [&](double x) {
    int count = 0;
    int last = 0;
    for (const Polynomial& q : sequence) {
      const int s = sign_of(q(x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  return variations(lo) - variations(hi);
}

}  // namespace kp
