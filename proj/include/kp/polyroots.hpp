#pragma once

#include <array>
#include <span>
#include <vector>

namespace kp {

/// Relative residual tolerance for polished roots: |p(x)| <= tol * max|c_i| * max(1,|x|)^deg.
inline constexpr double kRootTolerance = 1e-12;

/// Real polynomial of degree <= 4; coefficients in descending degree with
/// leading zeros trimmed. The zero polynomial has degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> descending);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return c_; }
  double operator()(double x) const noexcept;
  Polynomial derivative() const;
  double max_abs_coeff() const noexcept;
  /// Same roots, coefficients scaled so that max|c_i| = 1.
  Polynomial normalized() const;
  /// Scale used by the residual tolerance at x.
  double residual_scale(double x) const noexcept;

 private:
  std::vector<double> c_;
};

/// Degree-4 real polynomial c4 a^4 + c3 a^3 + c2 a^2 + c1 a + c0 with c4 != 0.
class QuarticPoly {
 public:
  /// Throws DomainError when c4 == 0 or a coefficient is not finite.
  explicit QuarticPoly(const std::array<double, 5>& descending);

  const std::array<double, 5>& coeffs() const noexcept { return c_; }
  double operator()(double x) const noexcept;
  Polynomial as_polynomial() const { return Polynomial({c_.begin(), c_.end()}); }

 private:
  std::array<double, 5> c_;
};

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
  double bracket_lo = 0.0;  // isolating interval the polished value stays in
  double bracket_hi = 0.0;
};

struct RootReport {
  std::vector<RealRoot> real_roots;  // sorted ascending
  int positive_count = 0;            // roots > 0 counted with multiplicity
  double discriminant = 0.0;
  int sturm_distinct = 0;            // Sturm count of distinct roots in (lo, hi]
};

/// Standard degree-4 discriminant. Negative means two real and two complex roots.
double discriminant(const QuarticPoly& p) noexcept;

/// Sign changes of the non-zero coefficient sequence (Descartes bound).
int descartes_positive(const QuarticPoly& p) noexcept;

/// Every real root in [lo, hi], bracketed and polished. Throws DomainError when lo >= hi.
RootReport isolate_real_roots(const QuarticPoly& p, double lo, double hi);

/// Same machinery for any degree <= 4 (used for critical points).
std::vector<RealRoot> real_roots_in(const Polynomial& p, double lo, double hi);

std::vector<Polynomial> sturm_sequence(const Polynomial& p);

/// Number of distinct real roots in (lo, hi].
int sturm_count(std::span<const Polynomial> sequence, double lo, double hi) noexcept;

}  // namespace kp
