#include "kp/params.hpp"

#include <cmath>

#include "kp/errors.hpp"

namespace kp {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

void require_arclength(const Params& p, double s) {
  if (!(s >= 0.0 && s <= p.length())) {
    throw DomainError("arc length outside [0, L]");
  }
}

}  // namespace

const Params& validate(const Params& p) {
  require_positive(p.alpha, "alpha");
  require_positive(p.beta, "beta");
  require_positive(p.area, "area");
  require_positive(p.radius, "radius");
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) {
    throw DomainError("sigma must be non-negative and finite");
  }
  return p;
}

std::string_view case_name(const CaseKind& c) {
  struct Visitor {
    std::string_view operator()(const EllipseCase&) const { return "ellipse"; }
    std::string_view operator()(const DilationCase&) const { return "dilation"; }
    std::string_view operator()(const OvalCase&) const { return "oval"; }
  };
  return std::visit(Visitor{}, c);
}

CaseKind parse_case(std::string_view name) {
  if (name == "ellipse") return EllipseCase{};
  if (name == "dilation") return DilationCase{};
  if (name == "oval") return OvalCase{};
  throw DomainError("unknown case '" + std::string(name) + "'");
}

MidlineFrame midline_frame(const Params& p, double s) noexcept {
  const double r = p.radius;
  const double t = 2.0 * kPi * s / p.length();
  const double c = std::cos(t);
  const double sn = std::sin(t);
  MidlineFrame f;
  f.position = {r * c, r * sn};
  f.tangent = {-sn, c};
  f.second = {-c / r, -sn / r};
  f.inward_normal = {-c, -sn};
  return f;
}

Point2 midline_point(const Params& p, double s) {
  require_arclength(p, s);
  return midline_frame(p, s).position;
}

Point2 scaled_curve_point(const Params& p, double s, double thickness) {
  require_arclength(p, s);
  if (!(thickness > 0.0)) throw DomainError("thickness must be positive");
  if (thickness >= p.radius) {
    throw InterpenetrationError("film offset reaches the midline centre (thickness >= R)");
  }
  const MidlineFrame f = midline_frame(p, s);
  const double speed = std::hypot(f.tangent.x, f.tangent.y);
  return {f.position.x - thickness * f.tangent.y / speed,
          f.position.y + thickness * f.tangent.x / speed};
}

Point3 tube_point(const Params& p, double s, double zeta1, double zeta2) noexcept {
  const MidlineFrame f = midline_frame(p, s);
  return {f.position.x + zeta1 * f.inward_normal.x,
          f.position.y + zeta1 * f.inward_normal.y,
          zeta2};
}

}  // namespace kp
