#pragma once

#include <array>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

namespace kp {

inline constexpr double kPi = std::numbers::pi;

/// Physical parameters of the planar rod + film system.
///
/// `area` is the cross-section area and `radius` the radius of the circular
/// critical midline; the midline length is always 2*pi*radius.
struct Params {
  double alpha = 1.0;   // bending stiffness weight [N m^2]
  double beta = 1.0;    // shape-penalty weight [N/m^2]
  double sigma = 0.0;   // surface tension
  double area = 1.0;    // cross-section area [m^2]
  double radius = 1.0;  // midline radius [m]

  double length() const noexcept { return 2.0 * kPi * radius; }

  /// Surface tension above 1 is accepted but outside the physical range.
  bool sigma_physical() const noexcept { return sigma >= 0.0 && sigma <= 1.0; }

  friend bool operator==(const Params&, const Params&) = default;
};

/// Throws DomainError unless alpha, beta, area, radius > 0 and sigma >= 0.
const Params& validate(const Params& p);

struct EllipseCase {};
struct DilationCase {
  double a0 = 0.0;  // base semi-axis from a prior ellipse solve
};
struct OvalCase {};

using CaseKind = std::variant<EllipseCase, DilationCase, OvalCase>;

std::string_view case_name(const CaseKind& c);

/// Parses "ellipse" | "dilation" | "oval". Dilation is returned with a0 = 0.
CaseKind parse_case(std::string_view name);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Circular midline and its director frame at arc length s (any real s).
/// d is the in-plane inward normal, z the vertical unit vector.
struct MidlineFrame {
  Point2 position;
  Point2 tangent;         // r'(s)
  Point2 second;          // r''(s)
  Point2 inward_normal;   // d(s)
};

MidlineFrame midline_frame(const Params& p, double s) noexcept;

/// (R cos(2 pi s / L), R sin(2 pi s / L)) for s in [0, L].
Point2 midline_point(const Params& p, double s);

/// Film trace on the rod: the midline offset inward by `thickness`.
Point2 scaled_curve_point(const Params& p, double s, double thickness);

/// p(s, zeta1, zeta2) = r(s) + zeta1 d(s) + zeta2 z.
Point3 tube_point(const Params& p, double s, double zeta1, double zeta2) noexcept;

}  // namespace kp
