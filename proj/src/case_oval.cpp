#include "kp/case_oval.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "kp/errors.hpp"

namespace kp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Relative margin for the strict cusp and interpenetration inequalities.
constexpr double kBoundaryMargin = 1e-9;

const Params& require_tension(const Params& p) {
  validate(p);
  if (p.sigma == 0.0) {
    throw DegenerateConicError("oval hyperbola is undefined for sigma = 0");
  }
  return p;
}

double max_conic_residual(const ConicSystem& sys, double a, double b) {
  return std::max(std::abs(sys.hyperbola(a, b)), std::abs(sys.ellipse(a, b)));
}

// Two Newton steps on both conics; kept only when the residual drops.
void polish_point(const ConicSystem& sys, double& a, double& b) {
  const Conic& h = sys.hyperbola;
  const Conic& e = sys.ellipse;
  for (int iter = 0; iter < 3; ++iter) {
    const double fh = h(a, b);
    const double fe = e(a, b);
    const double j11 = 2.0 * h.qaa * a + h.qab * b + h.la;
    const double j12 = h.qab * a + 2.0 * h.qbb * b + h.lb;
    const double j21 = 2.0 * e.qaa * a + e.qab * b + e.la;
    const double j22 = e.qab * a + 2.0 * e.qbb * b + e.lb;
    const double det = j11 * j22 - j12 * j21;
    const double jscale = std::max({std::abs(j11 * j22), std::abs(j12 * j21), 1e-300});
    if (std::abs(det) <= 1e-8 * jscale) return;
    const double na = a - (fh * j22 - fe * j12) / det;
    const double nb = b - (j11 * fe - j21 * fh) / det;
    if (max_conic_residual(sys, na, nb) >= max_conic_residual(sys, a, b)) return;
    a = na;
    b = nb;
  }
}

// Intersections of `sys` whose b follows from the hyperbola being linear in b
// once b^2 is eliminated: b (k a + R) = numerator(a).
template <typename Numerator>
std::vector<ConicPoint> intersections_from_quartic(const Params& p, const ConicSystem& sys,
                                                   double k, Numerator numerator) {
  const double e2 = 2.0 * p.area / kPi;
  const double a_max = std::sqrt(e2 / 2.0);
  const double pad = 1e-9 * std::max(a_max, p.radius);
  const RootReport report = isolate_real_roots(intersection_quartic(p), -a_max - pad, a_max + pad);

  std::vector<ConicPoint> points;
  for (const RealRoot& root : report.real_roots) {
    const double a = std::clamp(root.value, -a_max, a_max);
    const double denom = k * a + p.radius;
    std::vector<double> bs;
    if (std::abs(denom) > 1e-12 * (std::abs(k * a) + p.radius)) {
      bs.push_back(numerator(a) / denom);
    } else {
      const double r = std::sqrt(std::max(0.0, e2 - 2.0 * a * a));
      bs.push_back(r);
      if (r > 0.0) bs.push_back(-r);
    }
    for (double b : bs) {
      double pa = a;
      double pb = b;
      if (root.multiplicity == 1) polish_point(sys, pa, pb);
      points.push_back({pa, pb, root.multiplicity});
    }
  }
  std::sort(points.begin(), points.end(),
            [](const ConicPoint& x, const ConicPoint& y) { return x.a < y.a; });
  return points;
}

// Normalized intersection quartic at the area, evaluated at its critical point
// closest to x (x is updated). Zero exactly when the conics are tangent there.
double tangency_gap(const Params& p, double area, double& x) {
  Params q = p;
  q.area = area;
  const Polynomial poly = intersection_quartic(q).as_polynomial().normalized();
  const double reach = std::sqrt(area / kPi) + p.radius;
  const auto crit = real_roots_in(poly.derivative(), -reach, reach);
  if (crit.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto best = std::min_element(crit.begin(), crit.end(), [&](const RealRoot& u, const RealRoot& v) {
    return std::abs(u.value - x) < std::abs(v.value - x);
  });
  x = best->value;
  return poly(x);
}

// Secant refinement of the tangency area; returns `area` unchanged when it
// does not settle close by.
double refine_tangency(const Params& p, double area) {
  Params q = p;
  q.area = area;
  const Polynomial poly = intersection_quartic(q).as_polynomial().normalized();
  const double reach = std::sqrt(area / kPi) + p.radius;
  const auto crit = real_roots_in(poly.derivative(), -reach, reach);
  if (crit.empty()) return area;
  double x = std::min_element(crit.begin(), crit.end(), [&](const RealRoot& u, const RealRoot& v) {
               return std::abs(poly(u.value)) < std::abs(poly(v.value));
             })->value;

  double x0 = area * (1.0 - 1e-8);
  double x1 = area * (1.0 + 1e-8);
  double c = x;
  double g0 = tangency_gap(p, x0, c);
  c = x;
  double g1 = tangency_gap(p, x1, c);
  for (int iter = 0; iter < 30 && std::isfinite(g0) && std::isfinite(g1) && g1 != g0; ++iter) {
    const double next = x1 - g1 * (x1 - x0) / (g1 - g0);
    if (!(std::abs(next - area) <= 1e-6 * area)) return area;
    x0 = x1;
    g0 = g1;
    x1 = next;
    c = x;
    g1 = tangency_gap(p, x1, c);
    if (std::abs(x1 - x0) <= 4.0 * kEps * std::abs(x1) || g1 == 0.0) break;
  }
  if (!std::isfinite(x1) || std::abs(x1 - area) > 1e-6 * area) return area;
  return x1;
}

}  // namespace

Point2 LimaconShape::outline(double theta) const noexcept {
  const double r = a + b * std::cos(theta);
  return {r * std::cos(theta), r * std::sin(theta)};
}

double oval_b_of_a(double area, double a) {
  const double radicand = area - kPi * a * a;
  if (radicand < 0.0) throw DomainError("pi a^2 exceeds the cross-section area");
  return std::sqrt(2.0 / kPi * radicand);
}

double Conic::scaled_residual(double a, double b, double length) const noexcept {
  const double l = std::abs(length);
  const double scale = (std::abs(qaa) + std::abs(qab) + std::abs(qbb)) * l * l +
                       (std::abs(la) + std::abs(lb)) * l + std::abs(c);
  return std::abs((*this)(a, b)) / scale;
}

ConicSystem conic_system(const Params& p) {
  require_tension(p);
  const double r = p.radius;
  ConicSystem sys;
  sys.hyperbola = {2.0, 1.0 + 2.0 * p.beta * r / p.sigma, -1.0, -2.0 * r, r, 0.0};
  sys.ellipse = {2.0, 0.0, 1.0, 0.0, 0.0, -2.0 * p.area / kPi};
  return sys;
}

QuarticPoly intersection_quartic(const Params& p) {
  require_tension(p);
  const double r = p.radius;
  const double s = p.sigma;
  const double b = p.beta;
  const double area = p.area;
  const double pi2 = kPi * kPi;
  return QuarticPoly({(18 * s * s + 8 * b * b * r * r + 8 * b * r * s) * pi2,
                      -12 * pi2 * r * s * s + 8 * pi2 * b * r * r * s,
                      6 * pi2 * r * r * s * s - 8 * kPi * area * b * b * r * r -
                          18 * kPi * area * s * s - 8 * kPi * area * b * r * s,
                      (-8 * area * b * r * r * s + 4 * area * r * s * s) * kPi,
                      (4 * area * area - 2 * kPi * area * r * r) * s * s});
}

std::vector<ConicPoint> intersect_conics(const Params& p) {
  const ConicSystem sys = conic_system(p);
  const double k = sys.hyperbola.qab;
  const double e2 = 2.0 * p.area / kPi;
  const double r = p.radius;
  return intersections_from_quartic(p, sys, k,
                                    [=](double a) { return e2 + 2.0 * r * a - 4.0 * a * a; });
}

int intersection_count(const std::vector<ConicPoint>& points) noexcept {
  return static_cast<int>(points.size());
}

double intersection_discriminant(const Params& p, double area) {
  Params q = p;
  q.area = area;
  const QuarticPoly quartic = intersection_quartic(q);
  auto c = quartic.coeffs();
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  for (double& v : c) v /= m;
  return discriminant(QuarticPoly(c));
}

XiRoots xi_roots(const Params& p) {
  require_tension(p);
  const double r = p.radius;
  const double s = p.sigma;
  const double b = p.beta;

  XiRoots xi;
  xi.xi1 = 0.0;
  xi.xi34 = kPi * r * r * s * (2 * b * r + 3 * s) / ((2 * b * r + s) * (2 * b * r + s));

  // Numeric root: sign changes of the discriminant over a log grid of
  // area / (pi R^2), the largest one refined by bisection.
  const double unit = kPi * r * r;
  constexpr int kGrid = 4000;
  const double lo_ratio = 1e-14;
  const double hi_ratio = 2.0;
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = bracket_lo;
  double prev_x = lo_ratio;
  double prev_d = intersection_discriminant(p, lo_ratio * unit);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = lo_ratio * std::pow(hi_ratio / lo_ratio, static_cast<double>(i) / kGrid);
    const double d = intersection_discriminant(p, x * unit);
    if ((d > 0.0) != (prev_d > 0.0) && d != 0.0 && prev_d != 0.0) {
      bracket_lo = prev_x;
      bracket_hi = x;
    }
    prev_x = x;
    prev_d = d;
  }
  if (std::isnan(bracket_lo)) {
    xi.xi2 = std::numeric_limits<double>::quiet_NaN();
  } else {
    double lo = bracket_lo;
    double hi = bracket_hi;
    const bool lo_positive = intersection_discriminant(p, lo * unit) > 0.0;
    while (hi - lo > 2.0 * kEps * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double d = intersection_discriminant(p, mid * unit);
      if (d == 0.0) {
        lo = hi = mid;
        break;
      }
      ((d > 0.0) == lo_positive ? lo : hi) = mid;
    }
    // The discriminant loses digits to cancellation near its root; finish on
    // the tangency condition itself.
    xi.xi2 = refine_tangency(p, 0.5 * (lo + hi) * unit);
  }

  // Closed form via Cardano on the sextic factor.
  using cplx = std::complex<double>;
  const double pi3 = kPi * kPi * kPi;
  const double big_s = 4 * r * r * b * b + 4 * r * s * b + 9 * s * s;
  const double big_t = 4 * r * r * b * b - 4 * r * s * b - 9 * s * s;
  const double s3 = big_s * big_s * big_s;
  const double s4 = s3 * big_s;
  const double sig4 = std::pow(s, 4);
  const double delta =
      pi3 * (17915904.0 * std::pow(b, 12) * std::pow(s, 6) * std::pow(r, 18) +
             89579520.0 * std::pow(b, 11) * std::pow(s, 7) * std::pow(r, 17) +
             380712960.0 * std::pow(b, 10) * std::pow(s, 8) * std::pow(r, 16) +
             985374720.0 * std::pow(b, 9) * std::pow(s, 9) * std::pow(r, 15) +
             2205895680.0 * std::pow(b, 8) * std::pow(s, 10) * std::pow(r, 14) +
             3545109504.0 * std::pow(b, 7) * std::pow(s, 11) * std::pow(r, 13) +
             4963265280.0 * std::pow(b, 6) * std::pow(s, 12) * std::pow(r, 12) +
             4988459520.0 * std::pow(b, 5) * std::pow(s, 13) * std::pow(r, 11) +
             4336558560.0 * std::pow(b, 4) * std::pow(s, 14) * std::pow(r, 10) +
             2295825120.0 * std::pow(b, 3) * std::pow(s, 15) * std::pow(r, 9) +
             1033121304.0 * std::pow(b, 2) * std::pow(s, 16) * std::pow(r, 8));
  const double m = -81.0 * kPi * kPi * std::pow(r, 4) * s4 * sig4 -
                   81.0 * kPi * kPi * std::pow(r, 4) * s3 * big_t * sig4;
  const cplx root = std::sqrt(cplx(4.0 * m * m * m + delta * delta, 0.0));
  const cplx cube = std::pow(cplx(delta, 0.0) + root, 1.0 / 3.0);
  const double cbrt2 = std::cbrt(2.0);
  const cplx closed = cube / (3.0 * cbrt2 * s3) + 3.0 * kPi * r * r * s * s / big_s -
                      cbrt2 * m / (3.0 * s3 * cube);
  xi.xi2_closed_form = closed.real();
  const bool real_valued = std::abs(closed.imag()) <= 1e-9 * std::abs(closed.real());
  xi.closed_form_agrees = real_valued && std::isfinite(xi.xi2) &&
                          std::abs(xi.xi2_closed_form - xi.xi2) <= 1e-6 * std::abs(xi.xi2);
  return xi;
}

double tau_limit(double beta, double sigma, double radius) {
  if (!(sigma > 0.0)) throw DomainError("tau requires sigma > 0");
  if (!(beta >= 0.0) || !(radius > 0.0)) throw DomainError("tau requires beta >= 0, R > 0");
  const double d = 2.0 + 8.0 * beta * radius / (9.0 * sigma);
  return 2.0 / (d * d);
}

double tau_limit(const Params& p) {
  validate(p);
  return tau_limit(p.beta, p.sigma, p.radius);
}

ConstraintFlags classify_region(const Params& p, double a, double b) {
  const double margin = kBoundaryMargin * p.radius;
  ConstraintFlags f;
  f.positive = a > 0.0 && b >= 0.0;
  f.well_defined = kPi * a * a <= p.area * (1.0 + 1e-12);
  f.no_cusp = a > 2.0 * b + margin;
  f.no_interpenetration = a + b < p.radius - margin;
  return f;
}

OvalSolveError::OvalSolveError(Kind kind, std::vector<OvalCandidate> candidates)
    : std::runtime_error(kind == Kind::NoSolution ? "no admissible oval intersection"
                                                  : "more than one admissible oval intersection"),
      kind_(kind),
      candidates_(std::move(candidates)) {}

double oval_lambda(const Params& p, double a) {
  const double r = p.radius;
  const double q = std::max(0.0, p.area - kPi * a * a);
  const double rhs = -2.0 * r * r * (p.area * p.beta - std::sqrt(2.0 * kPi) * p.sigma * std::sqrt(q)) +
                     kPi * (p.alpha + 2.0 * r * r * a * (p.beta * a + p.sigma)) -
                     2.0 * kPi * r * r * r * p.sigma;
  return rhs / (kPi * r * r);
}

double oval_third_equation(const Params& p, double a) {
  const double q = p.area - kPi * a * a;
  if (q < 0.0) throw DomainError("pi a^2 exceeds the cross-section area");
  const double sp = std::sqrt(kPi);
  return std::sqrt(2.0) * p.sigma * (kPi * a * (2.0 * a - p.radius) - p.area) +
         std::sqrt(q) * (2.0 * sp * p.beta * p.radius * a + p.sigma * sp * (a + p.radius));
}

double oval_third_equation_scale(const Params& p, double a) {
  const double q = std::max(0.0, p.area - kPi * a * a);
  const double sp = std::sqrt(kPi);
  return std::max(std::abs(std::sqrt(2.0) * p.sigma * (kPi * a * (2.0 * a - p.radius) - p.area)),
                  std::abs(std::sqrt(q) * (2.0 * sp * p.beta * p.radius * a +
                                           p.sigma * sp * (a + p.radius))));
}

OvalSolution solve_oval(const Params& p) {
  OvalSolution sol;
  sol.intersections = intersect_conics(p);
  sol.n_intersections = intersection_count(sol.intersections);

  std::vector<OvalCandidate> candidates;
  std::vector<OvalCandidate> admissible;
  for (const ConicPoint& pt : sol.intersections) {
    const OvalCandidate c{pt, classify_region(p, pt.a, pt.b)};
    candidates.push_back(c);
    if (c.flags.admissible()) admissible.push_back(c);
  }
  if (admissible.empty()) {
    throw OvalSolveError(OvalSolveError::Kind::NoSolution, std::move(candidates));
  }
  if (admissible.size() > 1) {
    throw OvalSolveError(OvalSolveError::Kind::Ambiguous, std::move(candidates));
  }

  const OvalCandidate& a = admissible.front();
  sol.point_a = {a.point.a, a.point.b};
  sol.constraint_flags = a.flags;
  sol.lambda_bar = oval_lambda(p, a.point.a);
  sol.tau = tau_limit(p);
  sol.xi2 = xi_roots(p).xi2;
  return sol;
}

std::vector<OvalCandidate> short_axis_candidates(const Params& p) {
  const ConicSystem base = conic_system(p);
  // Film thickness a - b flips the sign of every odd-in-b hyperbola term.
  ConicSystem sys = base;
  sys.hyperbola = {-2.0, base.hyperbola.qab, 1.0, 2.0 * p.radius, p.radius, 0.0};
  const double k = sys.hyperbola.qab;
  const double e2 = 2.0 * p.area / kPi;
  const double r = p.radius;
  const auto points = intersections_from_quartic(
      p, sys, k, [=](double a) { return 4.0 * a * a - e2 - 2.0 * r * a; });

  std::vector<OvalCandidate> out;
  const double margin = kBoundaryMargin * p.radius;
  for (const ConicPoint& pt : points) {
    if (!(pt.a > 0.0 && pt.b > 0.0)) continue;
    ConstraintFlags f = classify_region(p, pt.a, pt.b);
    f.no_interpenetration = pt.a - pt.b < p.radius - margin;
    out.push_back({pt, f});
  }
  return out;
}

}  // namespace kp
