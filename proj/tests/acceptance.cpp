// Acceptance run: one line per criterion, nonzero exit on any hard failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "kp/case_dilation.hpp"
#include "kp/case_ellipse.hpp"
#include "kp/case_oval.hpp"
#include "kp/polyroots.hpp"
#include "kp/variational.hpp"
#include "oracles.hpp"

using namespace kp;
using Clock = std::chrono::steady_clock;

namespace {

// tolerances
constexpr double kCheckpointTol = 0.005;
constexpr double kSolveBudget = 1e-3;        // seconds per ellipse solve
constexpr double kCircleTol = 1e-12;
constexpr double kOracleTol = 1e-8;
constexpr double kUniquenessBudget = 5.0;    // seconds
constexpr double kThetaExact = 1e-14;
constexpr double kReducedTol = 1e-12;
constexpr double kTauRef = 0.224;
constexpr double kTauTol = 0.001;
constexpr double kXi2Ref = 1.3409;
constexpr double kXi2Tol = 0.005;
constexpr double kConicTol = 1e-10;
constexpr double kL2Tol = 1e-12;
constexpr double kStationaryTol = 1e-5;
constexpr double kContrast = 1e3;
constexpr double kVerifyBudget = 2.0;        // seconds per case
constexpr double kElTol = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kFilmTol = 1e-10;

int hard_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] AC%-2d %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  if (!pass) ++hard_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void ac1() {
  const double sigmas[] = {0.1, 1.0, 5.0};
  const double refs[] = {1.800, 1.958, 2.745};
  bool ok = true;
  std::string got;
  for (int i = 0; i < 3; ++i) {
    const double a = solve_equilibrium(Params{1.0, 1.0, sigmas[i], 10.0, 5.0}).a_bar;
    ok = ok && std::abs(a - refs[i]) <= kCheckpointTol;
    got += fmt(" %.4f", a);
  }
  const int reps = 3000;
  double sink = 0.0;
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) sink += solve_equilibrium(Params{1.0, 1.0, sigmas[i % 3], 10.0, 5.0}).a_bar;
  const double per = seconds_since(t0) / reps;
  ok = ok && per < kSolveBudget && sink > 0.0;
  report(1, ok, fmt("ellipse checkpoints a_bar =%s (want 1.800 1.958 2.745 +-%.3f), %.2e s/solve", got.c_str(),
                    kCheckpointTol, per));
}

void ac2() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Params p{1.0, u(rng), 0.0, u(rng), u(rng)};
    worst = std::max(worst, std::abs(solve_equilibrium(p).a_bar / std::sqrt(p.area / kPi) - 1.0));
  }
  report(2, worst <= kCircleTol, fmt("sigma = 0 gives the circle, worst relative error %.2e over 100 draws", worst));
}

void ac3() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  auto draw = [&] {
    double v = 0.0;
    while (v <= 0.0) v = u(rng);
    return v;
  };
  int bad_disc = 0, bad_descartes = 0, bad_count = 0;
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    const Params p{1.0, draw(), draw(), draw(), draw()};
    const auto g = gamma_quartic(p);
    bad_disc += discriminant(g) < 0.0 ? 0 : 1;
    bad_descartes += descartes_positive(g) == 1 ? 0 : 1;
    const double hi = 2.0 * std::max(p.radius, 2.0 * std::sqrt(p.area / kPi));
    const auto rep = isolate_real_roots(g, 0.0, hi);
    if (rep.positive_count != 1) {
      ++bad_count;
      continue;
    }
    const double ref = oracle::ellipse_root(p.beta, p.sigma, p.area, p.radius);
    worst = std::max(worst, std::abs(rep.real_roots.back().value - ref) / std::max(1.0, ref));
  }
  const double t = seconds_since(t0);
  report(3, bad_disc == 0 && bad_descartes == 0 && bad_count == 0 && worst <= kOracleTol && t < kUniquenessBudget,
         fmt("1000 draws: disc>=0 %d, descartes!=1 %d, root count!=1 %d, worst oracle gap %.2e, %.3f s", bad_disc,
             bad_descartes, bad_count, worst, t));
}

void ac4() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  std::uniform_real_distribution<double> frac(1e-3, 0.999);
  int not_dilating = 0;
  double worst_fixed = 0.0, worst_res = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Params p{1.0, u(rng), u(rng), u(rng), u(rng)};
    const double a0 = frac(rng) * p.radius;
    const auto s = solve_dilation(p, a0);
    not_dilating += s.theta_bar > 1.0 ? 0 : 1;
    worst_res = std::max(worst_res, std::abs(dilation_reduced_equation(p, a0, s.theta_bar)) /
                                        dilation_reduced_scale(p, a0, s.theta_bar));
    worst_fixed = std::max(worst_fixed, std::abs(solve_dilation(p, p.radius).theta_bar - 1.0));
    p.sigma = 0.0;
    worst_fixed = std::max(worst_fixed, std::abs(solve_dilation(p, a0).theta_bar - 1.0));
  }
  report(4, not_dilating == 0 && worst_fixed <= kThetaExact && worst_res < kReducedTol,
         fmt("theta<=1 below R: %d; |theta-1| at sigma=0 / a0=R: %.1e; reduced residual %.1e", not_dilating,
             worst_fixed, worst_res));
}

void ac5() {
  const double tau = tau_limit(Params{1.0, 1.0, 0.9, 1.0, 1.0});
  report(5, std::abs(tau - kTauRef) <= kTauTol, fmt("tau = %.5f (want %.3f +- %.3f)", tau, kTauRef, kTauTol));
}

void ac6() {
  Params p{1.0, 1.0, 0.9, 1.0, 1.0};
  const auto xi = xi_roots(p);
  const bool close = std::abs(xi.xi2 - kXi2Ref) <= kXi2Tol;
  if (!close) {
    std::printf("       discrepancy: numeric xi2 %.10f vs quoted %.4f (closed form %.10f)\n", xi.xi2, kXi2Ref,
                xi.xi2_closed_form);
  }
  p.area = xi.xi2;
  const auto at = intersect_conics(p);
  bool tangent = false;
  for (const auto& q : at) tangent = tangent || q.multiplicity == 2;
  p.area = xi.xi2 * (1.0 - 1e-4);
  const int below = intersection_count(intersect_conics(p));
  p.area = xi.xi2 * (1.0 + 1e-4);
  const int above = intersection_count(intersect_conics(p));
  const bool transition = std::abs(above - below) == 2;
  report(6, tangent && transition,
         fmt("xi2 = %.7f (quoted %.4f, %s), closed form %.7f; double root at xi2: %s; counts %d -> %d", xi.xi2,
             kXi2Ref, close ? "within 0.005" : "DISCREPANCY", xi.xi2_closed_form, tangent ? "yes" : "no", below,
             above));
}

void ac7() {
  const Params p{1.0, 1.0, 0.9, 2.0 * kPi / 5.0, 1.0};
  const auto sys = conic_system(p);
  int admissible = 0;
  double worst = 0.0;
  for (const auto& q : intersect_conics(p)) {
    worst = std::max({worst, sys.hyperbola.scaled_residual(q.a, q.b, p.radius),
                      sys.ellipse.scaled_residual(q.a, q.b, p.radius)});
    if (q.a > 0.0 && q.b >= 0.0 && classify_region(p, q.a, q.b).admissible()) ++admissible;
  }
  const Params full{1.0, 1.0, 0.9, kPi, 1.0};
  const auto l2 = conic_system(full);
  const double l2res = std::max(std::abs(l2.hyperbola(1.0, 0.0)), std::abs(l2.ellipse(1.0, 0.0)));
  report(7, admissible == 1 && worst < kConicTol && l2res <= kL2Tol,
         fmt("admissible intersections %d, worst conic residual %.1e, L2 residual %.1e", admissible, worst, l2res));
}

void ac8() {
  struct Row {
    const char* name;
    CaseKind kind;
    Params p;
    double state;
    double contrast_state;
    double lambda;
  };
  const Params ep{1.0, 1.0, 1.0, 10.0, 5.0};
  const auto e = solve_equilibrium(ep);
  const auto d = solve_dilation(ep, e.a_bar);
  const Params op{1.0, 1.0, 0.9, 2.0 * kPi / 5.0, 1.0};
  const auto o = solve_oval(op);
  // the oval cannot be pushed to 1.1 a: that leaves the fixed-area domain
  const Row rows[] = {{"ellipse", EllipseCase{}, ep, e.a_bar, 1.1 * e.a_bar, e.lambda_bar},
                      {"dilation", DilationCase{e.a_bar}, ep, d.theta_bar, 1.1 * d.theta_bar, d.lambda_bar},
                      {"oval", OvalCase{}, op, o.point_a.a, 0.9 * o.point_a.a, o.lambda_bar}};
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    const auto t0 = Clock::now();
    const DiscreteFunctional df(r.kind, r.p, 2048);
    const double at = stationarity_check(df, df.constant_profile(r.state), r.lambda, 17).max_normalized_derivative;
    const double off =
        stationarity_check(df, df.constant_profile(r.contrast_state), r.lambda, 17).max_normalized_derivative;
    const double t = seconds_since(t0);
    ok = ok && at < kStationaryTol && off >= kContrast * at && t < kVerifyBudget;
    detail += fmt(" %s %.1e/%.1e (%.2fs);", r.name, at, off, t);
  }
  report(8, ok, "stationarity at/off equilibrium:" + detail);
}

void ac9() {
  const Params ep{1.0, 1.0, 1.0, 10.0, 5.0};
  const auto e = solve_equilibrium(ep);
  const auto d = solve_dilation(ep, e.a_bar);
  const Params op{1.0, 1.0, 0.9, 2.0 * kPi / 5.0, 1.0};
  const auto o = solve_oval(op);
  const double r1 = el_residual(EllipseCase{}, ep, e.a_bar, e.lambda_bar).max_normalized();
  const double r2 = el_residual(DilationCase{e.a_bar}, ep, d.theta_bar, d.lambda_bar).max_normalized();
  const double r3 = el_residual(OvalCase{}, op, o.point_a.a, o.lambda_bar).max_normalized();

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Params p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double a = u(rng);
    const double eq3 = el_residual(EllipseCase{}, p, a, 0.0).raw[2];
    const double ref = 2.0 * gamma_quartic(p)(a) / (kPi * kPi * a * a * a);
    worst = std::max(worst, std::abs(eq3 - ref) / std::abs(ref));
  }
  report(9, r1 < kElTol && r2 < kElTol && r3 < kElTol && worst < kIdentityTol,
         fmt("EL residuals %.1e %.1e %.1e; eq3 identity worst %.1e over 100 points", r1, r2, r3, worst));
}

void ac10() {
  const Params p{1.0, 1.0, 0.7, 10.0, 5.0};
  const DiscreteFunctional df(EllipseCase{}, p, 2048);
  double worst = 0.0;
  for (double t : {0.5, 2.5, 4.5}) {
    const double ef = df.energy(df.constant_profile(t), 0.0).e_f;
    worst = std::max(worst, std::abs(ef / oracle::film_area_energy(p.sigma, p.radius - t) - 1.0));
  }
  report(10, worst < kFilmTol, fmt("film energy vs 2 sigma pi (R-t)^2, worst relative error %.1e", worst));
}

void ac11() {
  bool ok = true;
  std::string detail;
  double sum_prev = -1.0, diff_prev = 1e300;
  for (double sigma : {0.1, 1.0, 10.0}) {
    const auto s = solve_oval(Params{1.0, 1.0, sigma, kPi / 2.0, 1.0});
    const double sum = s.point_a.a + s.point_a.b;
    const double diff = s.point_a.a - s.point_a.b;
    ok = ok && sum > sum_prev && diff < diff_prev;
    sum_prev = sum;
    diff_prev = diff;
    detail += fmt(" a+b=%.4f a-b=%.4f;", sum, diff);
  }
  for (double sigma : {0.1, 1.0}) {
    const Params p{1.0, 1.0, sigma, 10.0, 5.0};
    const double a = solve_equilibrium(p).a_bar;
    const double dil = solve_dilation(p, a).dilated_axis;
    ok = ok && dil > a;
    detail += fmt(" dilated %.4f > %.4f;", dil, a);
  }
  report(11, ok, "shape trends:" + detail);
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  ac9();
  ac10();
  ac11();
  std::printf("%d hard failure(s)\n", hard_failures);
  return hard_failures == 0 ? 0 : 1;
}
