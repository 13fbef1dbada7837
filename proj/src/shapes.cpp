#include "kp/shapes.hpp"

#include <cmath>

#include "kp/errors.hpp"

namespace kp {

namespace {

template <typename F>
ShapeSample closed_curve(ShapeKind kind, int n, int dimension, F&& point_at) {
  ShapeSample s;
  s.kind = kind;
  s.dimension = dimension;
  s.closed = true;
  s.points.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) s.points.push_back(point_at(i));
  s.points.push_back(s.points.front());
  return s;
}

}  // namespace

bool CaseSolution::admissible() const noexcept {
  struct Visitor {
    bool operator()(const EllipseSolution& s) const { return s.admissible; }
    bool operator()(const DilationSolution& s) const { return s.is_dilatation; }
    bool operator()(const OvalSolution& s) const { return s.constraint_flags.admissible(); }
  };
  return std::visit(Visitor{}, solution);
}

double CaseSolution::film_offset() const noexcept {
  struct Visitor {
    double operator()(const EllipseSolution& s) const { return s.a_bar; }
    double operator()(const DilationSolution& s) const { return s.dilated_axis; }
    double operator()(const OvalSolution& s) const { return s.point_a.a + s.point_a.b; }
  };
  return std::visit(Visitor{}, solution);
}

Point2 CaseSolution::section_point(double theta) const noexcept {
  struct Visitor {
    double theta;
    Point2 operator()(const EllipseSolution& s) const {
      return {s.a_bar * std::cos(theta), s.b_bar * std::sin(theta)};
    }
    Point2 operator()(const DilationSolution& s) const {
      return {s.dilated_axis * std::cos(theta), s.b0 * std::sin(theta)};
    }
    Point2 operator()(const OvalSolution& s) const { return s.point_a.outline(theta); }
  };
  return std::visit(Visitor{theta}, solution);
}

std::string_view shape_kind_name(ShapeKind kind) noexcept {
  switch (kind) {
    case ShapeKind::Midline: return "midline";
    case ShapeKind::ScaledCurve: return "scaled_curve";
    case ShapeKind::CrossSection: return "cross_section";
    case ShapeKind::Tube: return "tube";
  }
  return "unknown";
}

std::vector<ShapeSample> emit_shape(const CaseSolution& sol, const SampleCounts& counts,
                                    std::span<const ShapeKind> kinds) {
  if (counts.section < 128 || counts.tube_ring < 128) {
    throw DomainError("cross-sections need at least 128 samples");
  }
  if (counts.midline < 3 || counts.tube_stations < 1) throw DomainError("too few samples");

  const Params& p = sol.params;
  const double length = p.length();
  std::vector<ShapeSample> out;
  for (ShapeKind kind : kinds) {
    switch (kind) {
      case ShapeKind::Midline:
        out.push_back(closed_curve(kind, counts.midline, 2, [&](int i) {
          const Point2 q = midline_frame(p, length * i / counts.midline).position;
          return Point3{q.x, q.y, 0.0};
        }));
        break;
      case ShapeKind::ScaledCurve: {
        const double offset = sol.film_offset();
        out.push_back(closed_curve(kind, counts.midline, 2, [&](int i) {
          const Point2 q = scaled_curve_point(p, length * i / counts.midline, offset);
          return Point3{q.x, q.y, 0.0};
        }));
        break;
      }
      case ShapeKind::CrossSection:
        out.push_back(closed_curve(kind, counts.section, 2, [&](int i) {
          const Point2 q = sol.section_point(2.0 * kPi * i / counts.section);
          return Point3{q.x, q.y, 0.0};
        }));
        break;
      case ShapeKind::Tube:
        for (int st = 0; st < counts.tube_stations; ++st) {
          const double s = length * st / counts.tube_stations;
          out.push_back(closed_curve(kind, counts.tube_ring, 3, [&](int i) {
            const Point2 z = sol.section_point(2.0 * kPi * i / counts.tube_ring);
            return tube_point(p, s, z.x, z.y);
          }));
        }
        break;
    }
  }
  return out;
}

}  // namespace kp
