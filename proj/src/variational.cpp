#include "kp/variational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "kp/case_oval.hpp"
#include "kp/errors.hpp"

namespace kp {

namespace {

constexpr int kFourierModes = 8;

// Accumulates a sum and the magnitude of its largest term.
struct TermSum {
  double value = 0.0;
  double scale = 0.0;
  void add(double term) noexcept {
    value += term;
    scale = std::max(scale, std::abs(term));
  }
  double normalized() const noexcept { return scale > 0.0 ? std::abs(value) / scale : 0.0; }
};

// Sixth-order central difference on periodic samples.
std::vector<double> periodic_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  auto at = [&](std::size_t k, int off) {
    return f[(k + n + static_cast<std::size_t>(off + 3) - 3) % n];
  };
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = (-at(k, -3) + 9.0 * at(k, -2) - 45.0 * at(k, -1) + 45.0 * at(k, 1) - 9.0 * at(k, 2) +
            at(k, 3)) /
           (60.0 * h);
  }
  return d;
}

double rms(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// Unit-RMS perturbation shapes sampled at the functional's nodes.
std::vector<std::vector<double>> perturbation_directions(const DiscreteFunctional& df, int count) {
  const std::size_t n = df.n_nodes();
  const double length = df.params().length();
  std::vector<std::vector<double>> basis;
  basis.emplace_back(n, 1.0);
  for (int mode = 1; mode <= kFourierModes; ++mode) {
    std::vector<double> c(n);
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 2.0 * kPi * mode * df.node(k) / length;
      c[k] = std::sqrt(2.0) * std::cos(t);
      s[k] = std::sqrt(2.0) * std::sin(t);
    }
    basis.push_back(std::move(c));
    basis.push_back(std::move(s));
  }

  std::vector<std::vector<double>> dirs;
  const auto wanted = static_cast<std::size_t>(std::max(count, 0));
  for (std::size_t i = 0; i < std::min(wanted, basis.size()); ++i) dirs.push_back(basis[i]);

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  while (dirs.size() < wanted) {
    std::vector<double> mix(n, 0.0);
    for (const auto& b : basis) {
      const double w = normal(rng);
      for (std::size_t k = 0; k < n; ++k) mix[k] += w * b[k];
    }
    const double norm = rms(mix);
    for (double& v : mix) v /= norm;
    dirs.push_back(std::move(mix));
  }
  return dirs;
}

}  // namespace

double EnergyBreakdown::scale(double alpha, double beta) const noexcept {
  return std::abs(alpha * e_el) + std::abs(e_f) + std::abs(e_c) + std::abs(beta * e_sh);
}

DiscreteFunctional::DiscreteFunctional(CaseKind kind, Params params, std::size_t n_nodes)
    : kind_(kind), params_(params), n_(n_nodes) {
  validate(params_);
  if (n_ < 64 || !std::has_single_bit(n_)) {
    throw DomainError("n_nodes must be a power of two >= 64");
  }
  if (const auto* d = std::get_if<DilationCase>(&kind_); d && !(d->a0 > 0.0)) {
    throw DomainError("dilation case needs a0 > 0");
  }
}

double DiscreteFunctional::film_offset(double state) const {
  const Params& p = params_;
  if (std::holds_alternative<EllipseCase>(kind_)) {
    if (!(state > 0.0)) throw DomainError("semi-axis must be positive");
    return state;
  }
  if (const auto* d = std::get_if<DilationCase>(&kind_)) {
    if (!(state > 0.0)) throw DomainError("dilation coefficient must be positive");
    return state * d->a0;
  }
  if (!(state > 0.0)) throw DomainError("oval base radius must be positive");
  return state + oval_b_of_a(p.area, state);
}

double DiscreteFunctional::shape_density(double state) const {
  const Params& p = params_;
  if (std::holds_alternative<EllipseCase>(kind_)) {
    return state * state + p.area * p.area / (kPi * kPi * state * state);
  }
  if (const auto* d = std::get_if<DilationCase>(&kind_)) {
    const double e = state - 1.0;
    return e * e * d->a0 * d->a0;
  }
  return 2.0 / kPi * (p.area - kPi * state * state);
}

EnergyBreakdown DiscreteFunctional::energy(std::span<const double> profile, double lambda) const {
  if (profile.size() != n_) throw DomainError("profile must have one sample per node");
  const double h = node_spacing();

  std::vector<double> offset(n_);
  for (std::size_t k = 0; k < n_; ++k) offset[k] = film_offset(profile[k]);
  const std::vector<double> doffset = periodic_derivative(offset, h);

  EnergyBreakdown e;
  for (std::size_t k = 0; k < n_; ++k) {
    const MidlineFrame f = midline_frame(params_, node(k));
    const double xp = f.tangent.x;
    const double yp = f.tangent.y;
    const double xpp = f.second.x;
    const double ypp = f.second.y;
    const double speed = std::hypot(xp, yp);
    const double dot = xp * xpp + yp * ypp;
    const double cross = xp * ypp - xpp * yp;

    e.e_el += cross * cross / std::pow(speed, 6) * speed;

    const double a = offset[k];
    const double da = doffset[k];
    const double u = f.position.x - a * yp / speed;
    const double v = f.position.y + a * xp / speed;
    const double du = xp - da * yp / speed - a * ypp / speed + a * yp * dot / std::pow(speed, 3);
    const double dv = yp + da * xp / speed + a * xpp / speed - a * xp * dot / std::pow(speed, 3);
    e.e_f += u * dv - v * du;

    e.e_c += speed - 1.0;
    e.e_sh += shape_density(profile[k]) * speed;
  }
  e.e_el *= h;
  e.e_f *= params_.sigma * h;
  e.e_c *= lambda * h;
  e.e_sh *= h;
  e.total = params_.alpha * e.e_el + e.e_f + e.e_c + params_.beta * e.e_sh;
  return e;
}

StationarityReport stationarity_check(const DiscreteFunctional& df, std::span<const double> state,
                                      double lambda, int n_directions) {
  const Params& p = df.params();
  StationarityReport report;
  const EnergyBreakdown e0 = df.energy(state, lambda);
  report.energy_scale = e0.scale(p.alpha, p.beta);

  const double state_scale = rms(state);
  const double step = std::cbrt(std::numeric_limits<double>::epsilon());
  std::vector<double> plus(state.size());
  std::vector<double> minus(state.size());
  for (const auto& dir : perturbation_directions(df, n_directions)) {
    for (std::size_t k = 0; k < state.size(); ++k) {
      plus[k] = state[k] + step * state_scale * dir[k];
      minus[k] = state[k] - step * state_scale * dir[k];
    }
    const double ep = df.energy(plus, lambda).total;
    const double em = df.energy(minus, lambda).total;
    const double slope = (ep - em) / (2.0 * step);
    const double normalized = std::abs(slope) / report.energy_scale;
    report.directional.push_back(normalized);
    report.curvature.push_back((ep - 2.0 * e0.total + em) / (step * step));
    report.max_normalized_derivative = std::max(report.max_normalized_derivative, normalized);
  }
  return report;
}

double ElResidual::max_normalized() const noexcept {
  return *std::max_element(normalized.begin(), normalized.end());
}

namespace {

// Constant-state forms of the first two equations; t enters only through
// cos t (eq1) or sin t (eq2).
TermSum ellipse_eq12(const Params& p, double a, double lambda, double trig) {
  const double r = p.radius;
  TermSum s;
  s.add(2.0 * a * trig * (p.beta * a / 2.0));
  s.add(2.0 * a * trig * (-p.sigma));
  s.add(p.beta * p.area * p.area * trig / (kPi * kPi * a * a));
  s.add(trig * lambda);
  s.add(-trig * p.alpha / (r * r));
  s.add(trig * 2.0 * r * p.sigma);
  return s;
}

TermSum ellipse_eq3(const Params& p, double a) {
  const double r = p.radius;
  TermSum s;
  s.add(2.0 * a * p.sigma);
  s.add(-2.0 * r * p.sigma);
  s.add(-2.0 * p.beta * p.area * p.area * r / (kPi * kPi * a * a * a));
  s.add(2.0 * a * p.beta * r);
  return s;
}

TermSum dilation_eq12(const Params& p, double a0, double theta, double lambda, double trig) {
  const double r = p.radius;
  TermSum s;
  s.add(2.0 * a0 * trig * theta * p.beta * a0);
  s.add(2.0 * a0 * trig * theta * p.sigma);
  s.add(-2.0 * a0 * trig * theta * 0.5 * p.beta * a0 * theta);
  s.add(-trig * p.beta * a0 * a0);
  s.add(-trig * lambda);
  s.add(trig * p.alpha / (r * r));
  s.add(-trig * 2.0 * r * p.sigma);
  return s;
}

TermSum dilation_eq3(const Params& p, double a0, double theta) {
  const double r = p.radius;
  TermSum s;
  s.add(2.0 * a0 * a0 * theta * (p.beta * r + p.sigma));
  s.add(-2.0 * a0 * r * (a0 * p.beta + p.sigma));
  return s;
}

TermSum oval_eq12(const Params& p, double a, double lambda, double trig) {
  const double r = p.radius;
  const double area = p.area;
  const double q = area - kPi * a * a;
  const double sp = std::sqrt(kPi);
  const double r2 = r * r;
  const double r3 = r2 * r;
  TermSum s;
  const double w6 = sp * trig * q * kPi * a * a;
  s.add(w6 * (-2.0 * r2 * a * p.beta * a));
  s.add(w6 * (-2.0 * r2 * a * p.sigma));
  s.add(w6 * (-p.alpha));
  s.add(w6 * lambda * r2);
  s.add(w6 * 2.0 * p.sigma * r3);
  const double w7 = sp * trig * q;
  s.add(w7 * 2.0 * area * r2 * a * 2.0 * p.beta * a);
  s.add(w7 * 2.0 * area * r2 * a * p.sigma);
  s.add(w7 * area * p.alpha);
  s.add(-w7 * area * lambda * r2);
  s.add(-w7 * area * 2.0 * p.sigma * r3);
  s.add(2.0 * std::sqrt(2.0) * p.sigma * r2 * std::sqrt(q) * trig *
        (kPi * a * a * (kPi * a * a - 2.0 * area) + area * area));
  s.add(-2.0 * p.beta * area * area * r2 * q * trig / sp);
  return s;
}

TermSum oval_eq3(const Params& p, double a) {
  const double q = p.area - kPi * a * a;
  const double sp = std::sqrt(kPi);
  TermSum s;
  s.add(std::sqrt(2.0) * p.sigma * (kPi * a * (2.0 * a - p.radius) - p.area) / std::sqrt(q));
  s.add(2.0 * sp * p.beta * p.radius * a);
  s.add(p.sigma * sp * a);
  s.add(p.sigma * sp * p.radius);
  return s;
}

}  // namespace

ElResidual el_residual(const CaseKind& kind, const Params& params, double state, double lambda) {
  validate(params);
  auto eq12 = [&](double trig) {
    if (std::holds_alternative<EllipseCase>(kind)) return ellipse_eq12(params, state, lambda, trig);
    if (const auto* d = std::get_if<DilationCase>(&kind)) {
      return dilation_eq12(params, d->a0, state, lambda, trig);
    }
    return oval_eq12(params, state, lambda, trig);
  };

  // Project eq1 onto cos t and eq2 onto sin t over a few angles.
  constexpr int kAngles = 8;
  double c1 = 0.0, n1 = 0.0, c2 = 0.0, n2 = 0.0;
  for (int k = 0; k < kAngles; ++k) {
    const double t = 2.0 * kPi * k / kAngles + 0.3;
    const TermSum e1 = eq12(std::cos(t));
    const TermSum e2 = eq12(std::sin(t));
    c1 += e1.value * std::cos(t);
    n1 += std::cos(t) * std::cos(t);
    c2 += e2.value * std::sin(t);
    n2 += std::sin(t) * std::sin(t);
  }
  const double coefficient_scale = eq12(1.0).scale;

  TermSum e3;
  if (std::holds_alternative<EllipseCase>(kind)) {
    e3 = ellipse_eq3(params, state);
  } else if (const auto* d = std::get_if<DilationCase>(&kind)) {
    e3 = dilation_eq3(params, d->a0, state);
  } else {
    if (params.area - kPi * state * state <= 0.0) {
      throw DomainError("pi a^2 must stay below the cross-section area");
    }
    e3 = oval_eq3(params, state);
  }

  ElResidual r;
  r.raw = {c1 / n1, c2 / n2, e3.value};
  r.normalized = {std::abs(r.raw[0]) / coefficient_scale, std::abs(r.raw[1]) / coefficient_scale,
                  e3.normalized()};
  r.length_closed = params.length() / (2.0 * kPi * params.radius) - 1.0 == 0.0;
  return r;
}

}  // namespace kp
