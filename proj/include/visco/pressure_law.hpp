#pragma once

namespace visco {

/// P(tau) = a tau^gamma, validated on [rho_bar/4, 4 rho_bar].
class PressureLaw {
 public:
  PressureLaw() = default;
  PressureLaw(double a, double gamma, double rho_bar);

  double a() const { return a_; }
  double gamma() const { return gamma_; }
  double lower() const { return 0.25 * rho_bar_; }
  double upper() const { return 4.0 * rho_bar_; }

  /// Throws OutOfRange outside the operating interval.
  void check(double tau) const;

  double p(double tau) const;
  double dp(double tau) const;
  double d2p(double tau) const;

  /// int_lo^hi P(z)/z^2 dz in closed form.
  double potential(double lo, double hi) const;

  /// int_0^s (s - z) P''(rho_bar + z) dz = P(rho_bar + s) - P(rho_bar) - P'(rho_bar) s.
  double remainder(double s) const;
  /// The same integral by adaptive Simpson quadrature.
  double remainder_quadrature(double s, double tol = 1e-13) const;

 private:
  double a_ = 1.0;
  double gamma_ = 1.4;
  double rho_bar_ = 1.0;
};

/// Adaptive Simpson quadrature of f on [lo, hi].
template <class F>
double adaptive_simpson(F&& f, double lo, double hi, double tol, int depth = 40);

}  // namespace visco

#include <cmath>

namespace visco {

namespace detail {
template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double adaptive_simpson(F&& f, double lo, double hi, double tol, int depth) {
  if (lo == hi) return 0.0;
  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol, depth);
}

}  // namespace visco
