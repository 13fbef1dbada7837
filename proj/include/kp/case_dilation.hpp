#pragma once

#include "kp/params.hpp"

namespace kp {

/// Equilibrium of the ellipse whose horizontal semi-axis is dilated by theta.
struct DilationSolution {
  double theta_bar = 1.0;
  double lambda_bar = 0.0;
  double a0 = 0.0;            // base horizontal semi-axis
  double b0 = 0.0;            // unchanged vertical semi-axis, area / (pi a0)
  double dilated_axis = 0.0;  // theta_bar * a0
  bool is_dilatation = false; // theta_bar > 1
};

/// theta_bar = R (beta a0 + sigma) / (a0 (beta R + sigma)). Throws DomainError when a0 <= 0.
DilationSolution solve_dilation(const Params& p, double a0);

/// 2 a0 (a0 theta (beta R + sigma) - R (beta a0 + sigma)).
double dilation_reduced_equation(const Params& p, double a0, double theta) noexcept;

/// Largest term magnitude of the reduced equation, for relative residuals.
double dilation_reduced_scale(const Params& p, double a0, double theta) noexcept;

}  // namespace kp
