#include "kp/case_dilation.hpp"

#include <algorithm>
#include <cmath>

#include "kp/errors.hpp"

namespace kp {

DilationSolution solve_dilation(const Params& p, double a0) {
  validate(p);
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw DomainError("a0 must be positive");
  const double r = p.radius;

  DilationSolution s;
  s.a0 = a0;
  s.b0 = p.area / (kPi * a0);
  // Written as 1 + excess so that sigma = 0 and a0 = R give exactly 1.
  s.theta_bar = 1.0 + p.sigma * (r - a0) / (a0 * (p.beta * r + p.sigma));
  s.dilated_axis = s.theta_bar * a0;
  const double shrink = s.theta_bar - 1.0;
  s.lambda_bar = p.alpha / (r * r) - 2.0 * r * p.sigma + 2.0 * a0 * p.sigma * s.theta_bar -
                 p.beta * a0 * a0 * shrink * shrink;
  s.is_dilatation = s.theta_bar > 1.0;
  return s;
}

double dilation_reduced_equation(const Params& p, double a0, double theta) noexcept {
  const double r = p.radius;
  return 2.0 * a0 * (a0 * theta * (p.beta * r + p.sigma) - r * (p.beta * a0 + p.sigma));
}

double dilation_reduced_scale(const Params& p, double a0, double theta) noexcept {
  const double r = p.radius;
  return 2.0 * a0 * std::max(std::abs(a0 * theta * (p.beta * r + p.sigma)),
                             std::abs(r * (p.beta * a0 + p.sigma)));
}

}  // namespace kp
