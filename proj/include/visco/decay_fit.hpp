#pragma once

#include <vector>

namespace visco {

struct DecayFit {
  double t_a = 0.0;
  double t_b = 0.0;
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int samples = 0;
};

/// Least-squares line through (t, ln v) for t in [t_a, t_b]; rate = -slope.
/// Throws NonPositiveSamples or WindowTooSmall (fewer than 10 samples).
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v, double t_a,
                        double t_b);

/// Window covering the last half of the series.
DecayFit fit_decay_rate_tail(const std::vector<double>& t, const std::vector<double>& v);

struct ModalRates {
  double slow = 0.0;       // smallest decay rate of the two-term model
  double fast = 0.0;
  double frequency = 0.0;  // angular frequency when the roots are complex
};

/// Two-term linear prediction x_{n+2} = a x_{n+1} + b x_n fitted to a uniformly
/// sampled signal; the roots give the modal decay rates.
ModalRates modal_decay_rates(const std::vector<double>& x, double dt);

}  // namespace visco
