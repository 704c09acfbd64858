#include "visco/pressure_law.hpp"

#include <cmath>
#include <string>

#include "visco/errors.hpp"

namespace visco {

PressureLaw::PressureLaw(double a, double gamma, double rho_bar)
    : a_(a), gamma_(gamma), rho_bar_(rho_bar) {
  if (!(a > 0)) throw ConfigError("pressure coefficient a must be positive");
  if (!(gamma >= 1)) throw ConfigError("pressure exponent gamma must be >= 1");
  if (!(rho_bar > 0)) throw ConfigError("rho_bar must be positive");
  if (!(p(lower()) > 0 && dp(lower()) > 0)) {
    throw ConfigError("pressure law is not positive and increasing on its operating interval");
  }
}

void PressureLaw::check(double tau) const {
  if (!(tau >= lower() && tau <= upper())) {
    throw OutOfRange("density " + std::to_string(tau) + " left the pressure law interval [" +
                     std::to_string(lower()) + ", " + std::to_string(upper()) + "]");
  }
}

double PressureLaw::p(double tau) const { return a_ * std::pow(tau, gamma_); }

double PressureLaw::dp(double tau) const { return a_ * gamma_ * std::pow(tau, gamma_ - 1.0); }

double PressureLaw::d2p(double tau) const {
  if (gamma_ == 1.0) return 0.0;
  return a_ * gamma_ * (gamma_ - 1.0) * std::pow(tau, gamma_ - 2.0);
}

double PressureLaw::potential(double lo, double hi) const {
  if (gamma_ == 1.0) return a_ * std::log(hi / lo);
  return a_ * (std::pow(hi, gamma_ - 1.0) - std::pow(lo, gamma_ - 1.0)) / (gamma_ - 1.0);
}

double PressureLaw::remainder(double s) const {
  const double x = s / rho_bar_;
  const double scale = p(rho_bar_);
  if (std::abs(x) >= 0.1) return scale * (std::pow(1.0 + x, gamma_) - 1.0 - gamma_ * x);
  // Binomial series from the quadratic term on, free of cancellation.
  double term = gamma_ * (gamma_ - 1.0) / 2.0 * x * x;
  double sum = 0.0;
  for (int n = 2; n < 40 && term != 0.0; ++n) {
    sum += term;
    term *= (gamma_ - n) / (n + 1.0) * x;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return scale * sum;
}

double PressureLaw::remainder_quadrature(double s, double tol) const {
  return adaptive_simpson([&](double z) { return (s - z) * d2p(rho_bar_ + z); }, 0.0, s, tol);
}

}  // namespace visco
