#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kp/params.hpp"
#include "kp/polyroots.hpp"

namespace kp {

/// Limacon of Pascal r(theta) = a + b cos(theta). Horizontal semi-axes are
/// a + b (theta = 0, towards the film) and a - b; the vertical one is a.
struct LimaconShape {
  double a = 0.0;
  double b = 0.0;

  bool no_double_points() const noexcept { return a > b; }
  bool no_cusps() const noexcept { return a > 2.0 * b; }
  double area() const noexcept { return kPi * a * a + 0.5 * kPi * b * b; }
  Point2 outline(double theta) const noexcept;
};

/// b(a) from the fixed area. Throws DomainError when pi a^2 > area.
double oval_b_of_a(double area, double a);

/// qaa a^2 + qab a b + qbb b^2 + la a + lb b + c = 0 in the (a, b) plane.
struct Conic {
  double qaa = 0.0, qab = 0.0, qbb = 0.0, la = 0.0, lb = 0.0, c = 0.0;

  double operator()(double a, double b) const noexcept {
    return qaa * a * a + qab * a * b + qbb * b * b + la * a + lb * b + c;
  }
  /// |value| relative to the coefficient magnitudes at length scale `length`.
  double scaled_residual(double a, double b, double length) const noexcept;
};

struct ConicSystem {
  Conic hyperbola;  // 2a^2 - b^2 + (1 + 2 beta R / sigma) ab - 2Ra + Rb = 0
  Conic ellipse;    // 2a^2 + b^2 = 2 area / pi
};

/// Throws DegenerateConicError when sigma == 0.
ConicSystem conic_system(const Params& p);

/// Quartic in a obtained by eliminating b from the conic system.
QuarticPoly intersection_quartic(const Params& p);

struct ConicPoint {
  double a = 0.0;
  double b = 0.0;
  int multiplicity = 1;  // 2 at a tangency
};

/// All real intersections of the conic system, sorted by a.
std::vector<ConicPoint> intersect_conics(const Params& p);

/// Distinct intersection count: 2 or 4 generically, 3 at a tangency.
int intersection_count(const std::vector<ConicPoint>& points) noexcept;

/// Roots of the intersection-quartic discriminant seen as a function of the area.
struct XiRoots {
  double xi1 = 0.0;
  double xi2 = 0.0;              // numeric sign-change root (authoritative)
  double xi2_closed_form = 0.0;  // closed-form cross-check
  double xi34 = 0.0;             // double root
  bool closed_form_agrees = false;  // |numeric - closed| <= 1e-6 relative
};

XiRoots xi_roots(const Params& p);

/// Discriminant of the normalized intersection quartic at the given area.
double intersection_discriminant(const Params& p, double area);

/// tau = 2 / (2 + 8 beta R / (9 sigma))^2; accepts beta >= 0, sigma > 0.
double tau_limit(double beta, double sigma, double radius);
double tau_limit(const Params& p);

struct ConstraintFlags {
  bool well_defined = false;         // pi a^2 <= area
  bool no_cusp = false;              // a > 2b
  bool no_interpenetration = false;  // a + b < R
  bool positive = false;             // a > 0, b >= 0

  bool admissible() const noexcept {
    return positive && well_defined && no_cusp && no_interpenetration;
  }
};

/// Equality in the cusp and interpenetration constraints counts as a violation.
ConstraintFlags classify_region(const Params& p, double a, double b);

struct OvalSolution {
  LimaconShape point_a;
  double lambda_bar = 0.0;
  std::vector<ConicPoint> intersections;
  int n_intersections = 0;
  ConstraintFlags constraint_flags;
  double tau = 0.0;
  double xi2 = 0.0;
};

struct OvalCandidate {
  ConicPoint point;
  ConstraintFlags flags;
};

class OvalSolveError : public std::runtime_error {
 public:
  enum class Kind { NoSolution, Ambiguous };

  OvalSolveError(Kind kind, std::vector<OvalCandidate> candidates);

  Kind kind() const noexcept { return kind_; }
  const std::vector<OvalCandidate>& candidates() const noexcept { return candidates_; }

 private:
  Kind kind_;
  std::vector<OvalCandidate> candidates_;
};

/// Selects the unique admissible intersection A and its multiplier.
/// Throws OvalSolveError when no candidate or more than one is admissible.
OvalSolution solve_oval(const Params& p);

/// Multiplier from the first reduced equation at the constant semi-axis a.
double oval_lambda(const Params& p, double a);

/// Third reduced equation with the square root cleared:
/// sqrt2 sigma (pi a (2a - R) - area) + sqrt(area - pi a^2)(2 sqrt(pi) beta R a + sigma sqrt(pi)(a + R)).
double oval_third_equation(const Params& p, double a);
double oval_third_equation_scale(const Params& p, double a);

/// Film attached to the short semi-axis a - b instead: every first-quadrant
/// intersection of that variant's conic system with its constraint flags.
/// The returned list has no admissible entries for physical parameters.
std::vector<OvalCandidate> short_axis_candidates(const Params& p);

}  // namespace kp
