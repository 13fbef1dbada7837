#pragma once

#include "kp/params.hpp"
#include "kp/polyroots.hpp"

namespace kp {

/// Equilibrium of the fixed-area elliptical cross-section.
struct EllipseSolution {
  double a_bar = 0.0;       // horizontal semi-axis, in the midline plane
  double b_bar = 0.0;       // vertical semi-axis, area / (pi a_bar)
  double lambda_bar = 0.0;  // inextensibility multiplier
  double a_star = 0.0;      // Gamma is increasing for a > a_star
  bool admissible = false;  // a_bar < R (no interpenetration)
  bool boundary = false;    // a_bar == R within the admissibility margin
  bool elongation_horizontal = false;
};

/// Relative margin used for the strict test a_bar < R.
inline constexpr double kAdmissibilityMargin = 1e-9;

/// Gamma(a) = (sigma pi^2 + beta pi^2 R) a^4 - pi^2 sigma R a^3 - beta area^2 R.
QuarticPoly gamma_quartic(const Params& p);

double a_star(const Params& p);

/// Multiplier from the first reduced equilibrium equation at semi-axis a.
double ellipse_lambda(const Params& p, double a) noexcept;

/// Unique positive root of Gamma plus multiplier and admissibility flags.
/// Inadmissible roots are returned with admissible = false.
EllipseSolution solve_equilibrium(const Params& p);

}  // namespace kp
