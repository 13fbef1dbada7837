#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "kp/case_dilation.hpp"
#include "kp/case_ellipse.hpp"
#include "kp/case_oval.hpp"
#include "kp/params.hpp"

namespace kp {

using Solution = std::variant<EllipseSolution, DilationSolution, OvalSolution>;

/// A solved case together with the parameters it was solved for.
struct CaseSolution {
  Params params;
  Solution solution;

  bool admissible() const noexcept;
  /// Distance from the midline to the film trace.
  double film_offset() const noexcept;
  /// Cross-section outline in (zeta1, zeta2): zeta1 along the inward normal, zeta2 vertical.
  Point2 section_point(double theta) const noexcept;
};

enum class ShapeKind { Midline, ScaledCurve, CrossSection, Tube };

std::string_view shape_kind_name(ShapeKind kind) noexcept;

struct ShapeSample {
  ShapeKind kind = ShapeKind::Midline;
  std::vector<Point3> points;  // closed polylines repeat the first point last
  bool closed = true;
  int dimension = 2;           // 2 for planar shapes (z = 0), 3 for tube rings
};

struct SampleCounts {
  int section = 256;   // >= 128
  int midline = 512;
  int tube_stations = 48;
  int tube_ring = 128; // >= 128
};

/// One ShapeSample per requested kind; Tube yields one closed ring per station.
std::vector<ShapeSample> emit_shape(const CaseSolution& solution, const SampleCounts& counts,
                                    std::span<const ShapeKind> kinds);

}  // namespace kp
