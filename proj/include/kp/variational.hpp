#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "kp/params.hpp"

namespace kp {

struct EnergyBreakdown {
  double e_el = 0.0;  // integral of curvature^2 dl
  double e_f = 0.0;   // film energy, sigma times the shoelace integral
  double e_c = 0.0;   // lambda times the length excess
  double e_sh = 0.0;  // cross-section shape penalty
  double total = 0.0; // alpha e_el + e_f + e_c + beta e_sh

  /// Sum of the magnitudes of the weighted terms.
  double scale(double alpha, double beta) const noexcept;
};

/// Planar energy on the circular midline, sampled at n equispaced nodes and
/// integrated with the periodic trapezoid rule. The case state is a profile
/// over arc length: a(s) for ellipse and oval, theta(s) for dilation.
class DiscreteFunctional {
 public:
  /// n_nodes must be a power of two >= 64.
  DiscreteFunctional(CaseKind kind, Params params, std::size_t n_nodes = 2048);

  const CaseKind& kind() const noexcept { return kind_; }
  const Params& params() const noexcept { return params_; }
  std::size_t n_nodes() const noexcept { return n_; }
  double node_spacing() const noexcept { return params_.length() / static_cast<double>(n_); }
  double node(std::size_t k) const noexcept { return node_spacing() * static_cast<double>(k); }

  /// Distance from the midline to the film trace for a local state value.
  double film_offset(double state) const;
  /// Integrand of the shape penalty per unit length (before the beta weight).
  double shape_density(double state) const;

  std::vector<double> constant_profile(double value) const { return std::vector<double>(n_, value); }

  /// Throws DomainError on a wrong sample count or a state outside the case domain.
  EnergyBreakdown energy(std::span<const double> profile, double lambda) const;

 private:
  CaseKind kind_;
  Params params_;
  std::size_t n_;
};

struct StationarityReport {
  double max_normalized_derivative = 0.0;
  std::vector<double> directional;  // |dE/de| / energy scale per direction
  std::vector<double> curvature;    // second differences per direction (diagnostic)
  double energy_scale = 0.0;
};

/// Central-difference directional derivatives of the energy along periodic
/// perturbations of the shape profile (midline fixed). Directions are the
/// constant mode then cos/sin of modes 1..8; more than 17 adds seeded random
/// combinations of them.
StationarityReport stationarity_check(const DiscreteFunctional& df, std::span<const double> state,
                                      double lambda, int n_directions = 17);

/// Reduced Euler-Lagrange residuals at a constant state.
struct ElResidual {
  std::array<double, 3> raw{};         // eq1 / eq2 coefficients of cos t / sin t, eq3 value
  std::array<double, 3> normalized{};  // each divided by its largest term magnitude
  bool length_closed = false;          // eq4: L / (2 pi R) - 1 == 0

  double max_normalized() const noexcept;
};

/// `state` is a for ellipse/oval and theta for dilation (a0 from the case).
ElResidual el_residual(const CaseKind& kind, const Params& params, double state, double lambda);

}  // namespace kp
