#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace sqpump {

struct IntegrationOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 0.0;  // 0 = automatic
  double h_min = 0.0;   // 0 = machine-limited
  std::size_t max_steps = 500'000'000;
};

namespace detail {

// Dormand-Prince 5(4) tableau
struct Dopri5 {
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                                   -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr double b4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

}  // namespace detail

/// Adaptive RK45 integration of d rho / dt = f(t, rho) from t0 to t1.
template <class Deriv>
inline void integrate_adaptive(Deriv&& f, Eigen::MatrixXcd& rho, double t0, double t1,
                               const IntegrationOptions& opts = {}) {
  using T = detail::Dopri5;
  if (t1 <= t0) return;
  double t = t0;
  double h = opts.h_init > 0 ? opts.h_init : (t1 - t0) * 1e-4;
  const double hmin = opts.h_min > 0 ? opts.h_min : 16.0 * std::numeric_limits<double>::epsilon() *
                                                        std::max(std::abs(t0), std::abs(t1));
  Eigen::MatrixXcd k[7], ynew, yerr, ytmp;
  std::size_t steps = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    k[0] = f(t, rho);
    for (int s = 1; s < 7; ++s) {
      ytmp = rho;
      for (int i = 0; i < s; ++i)
        if (T::a[s][i] != 0.0) ytmp += (h * T::a[s][i]) * k[i];
      k[s] = f(t + T::c[s] * h, ytmp);
    }
    ynew = rho;
    yerr.setZero(rho.rows(), rho.cols());
    for (int s = 0; s < 7; ++s) {
      if (T::b5[s] != 0.0) ynew += (h * T::b5[s]) * k[s];
      double d = T::b5[s] - T::b4[s];
      if (d != 0.0) yerr += (h * d) * k[s];
    }
    // scaled max-norm error estimate
    double err = 0.0;
    for (Eigen::Index c = 0; c < rho.cols(); ++c)
      for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        double sc = opts.atol + opts.rtol * std::max(std::abs(rho(r, c)), std::abs(ynew(r, c)));
        err = std::max(err, std::abs(yerr(r, c)) / sc);
      }
    if (err <= 1.0) {
      t += h;
      rho.swap(ynew);
    }
    double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < hmin) throw std::runtime_error("integrate_adaptive: step size underflow");
    if (++steps > opts.max_steps) throw std::runtime_error("integrate_adaptive: step budget exceeded");
  }
}

/// Integrate and invoke `record(t, rho)` at t0, every sample time, and t1.
template <class Deriv, class Recorder>
inline void time_evolve(Deriv&& f, Eigen::MatrixXcd& rho, double t0, double t1,
                        const std::vector<double>& samples, Recorder&& record,
                        const IntegrationOptions& opts = {}) {
  double t = t0;
  record(t, rho);
  for (double ts : samples) {
    if (ts <= t || ts > t1) continue;
    integrate_adaptive(f, rho, t, ts, opts);
    t = ts;
    record(t, rho);
  }
  if (t < t1) {
    integrate_adaptive(f, rho, t, t1, opts);
    record(t1, rho);
  }
}

}  // namespace sqpump
