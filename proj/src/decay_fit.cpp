#include "visco/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "visco/errors.hpp"

namespace visco {

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v, double t_a,
                        double t_b) {
  if (t.size() != v.size()) throw Error("fit_decay_rate: size mismatch");
  if (!(t_a < t_b)) throw WindowTooSmall("fit window must satisfy t_a < t_b");
  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_a || t[i] > t_b) continue;
    if (!(v[i] > 0)) {
      throw NonPositiveSamples("nonpositive sample " + std::to_string(v[i]) + " at t = " +
                               std::to_string(t[i]));
    }
    const double y = std::log(v[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    syy += y * y;
    ++n;
  }
  if (n < 10) {
    throw WindowTooSmall("decay fit needs at least 10 samples, window has " + std::to_string(n));
  }
  const double tm = st / n, ym = sy / n;
  const double sxx = stt - n * tm * tm;
  const double sxy = sty - n * tm * ym;
  const double syy_c = syy - n * ym * ym;
  if (!(sxx > 0)) throw WindowTooSmall("decay fit window has no time spread");
  const double slope = sxy / sxx;
  DecayFit f;
  f.t_a = t_a;
  f.t_b = t_b;
  f.rate = -slope;
  f.intercept = ym - slope * tm;
  f.samples = n;
  f.r2 = syy_c > 0 ? std::clamp(sxy * sxy / (sxx * syy_c), 0.0, 1.0) : 1.0;
  return f;
}

DecayFit fit_decay_rate_tail(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.empty()) throw WindowTooSmall("empty series");
  const double tb = t.back();
  const double ta = t.front() + 0.5 * (tb - t.front());
  return fit_decay_rate(t, v, ta, tb);
}

ModalRates modal_decay_rates(const std::vector<double>& x, double dt) {
  if (x.size() < 10) throw WindowTooSmall("modal fit needs at least 10 samples");
  // Normal equations for [x_{n+1} x_n] [a b]^T = x_{n+2}.
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (std::size_t n = 0; n + 2 < x.size(); ++n) {
    const double p = x[n + 1], q = x[n], y = x[n + 2];
    s11 += p * p;
    s12 += p * q;
    s22 += q * q;
    r1 += p * y;
    r2 += q * y;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 0)) throw Error("modal fit is degenerate");
  const double a = (r1 * s22 - r2 * s12) / det;
  const double b = (s11 * r2 - s12 * r1) / det;
  // z^2 - a z - b = 0
  const std::complex<double> disc = std::sqrt(std::complex<double>(a * a + 4 * b, 0.0));
  const std::complex<double> z1 = 0.5 * (a + disc), z2 = 0.5 * (a - disc);
  const double k1 = -std::log(std::abs(z1)) / dt, k2 = -std::log(std::abs(z2)) / dt;
  ModalRates m;
  m.slow = std::min(k1, k2);
  m.fast = std::max(k1, k2);
  m.frequency = std::abs(std::arg(z1)) / dt;
  return m;
}

}  // namespace visco
