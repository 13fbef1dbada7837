#include "kp/case_ellipse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kp {

QuarticPoly gamma_quartic(const Params& p) {
  validate(p);
  const double pi2 = kPi * kPi;
  return QuarticPoly({p.sigma * pi2 + p.beta * pi2 * p.radius,
                      -pi2 * p.sigma * p.radius,
                      0.0,
                      0.0,
                      -p.beta * p.area * p.area * p.radius});
}

double a_star(const Params& p) {
  validate(p);
  return 3.0 * p.sigma * p.radius / (4.0 * (p.beta * p.radius + p.sigma));
}

double ellipse_lambda(const Params& p, double a) noexcept {
  const double r = p.radius;
  return p.alpha / (r * r) - 2.0 * p.sigma * r + 2.0 * p.sigma * a - p.beta * a * a -
         p.beta * p.area * p.area / (kPi * kPi * a * a);
}

EllipseSolution solve_equilibrium(const Params& p) {
  const QuarticPoly gamma = gamma_quartic(p);

  // Gamma(0) < 0 and Gamma(hi) > 0 for hi >= max(R, 4 sqrt(area/pi)).
  const double circle = std::sqrt(p.area / kPi);
  const double hi = 2.0 * std::max(p.radius, 2.0 * circle);
  const RootReport report = isolate_real_roots(gamma, 0.0, hi);

  std::vector<double> positive;
  for (const RealRoot& r : report.real_roots) {
    if (r.value > 0.0) positive.push_back(r.value);
  }
  if (positive.size() != 1) {
    throw std::logic_error("Gamma must have exactly one positive root");
  }

  EllipseSolution s;
  s.a_bar = positive.front();
  s.b_bar = p.area / (kPi * s.a_bar);
  s.lambda_bar = ellipse_lambda(p, s.a_bar);
  s.a_star = a_star(p);
  const double margin = kAdmissibilityMargin * p.radius;
  s.boundary = std::abs(s.a_bar - p.radius) <= margin;
  s.admissible = s.a_bar < p.radius - margin;
  s.elongation_horizontal = s.admissible && s.a_bar > s.b_bar;
  return s;
}

}  // namespace kp
