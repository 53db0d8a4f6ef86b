#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace sqpump {

enum class SpectrumKind { square_emission, square_loss, lorentzian, flat };

/// Reservoir spectral function. Square kinds are the arctan closed form of
/// an indicator window convolved with a Lorentzian of width `edge_width`;
/// the lorentzian kind is a single pump-broadened emitter line.
struct SpectralFunction {
  SpectrumKind kind = SpectrumKind::flat;
  double omega_lo = 0.0;    // window edges; emission [w-, w+], loss [w+, wL]
  double omega_hi = 0.0;
  double edge_width = 1.0;  // Delta (square kinds) or Gamma_p (lorentzian)
  double peak_rate = 0.0;   // Gamma^0 at the window midpoint / line center
  double center = 0.0;      // lorentzian line center omega_at
  bool lamb_shift = true;

  static SpectralFunction square_emission(double w_lo, double w_hi, double delta, double rate) {
    return {SpectrumKind::square_emission, w_lo, w_hi, delta, rate, 0.0, true};
  }
  static SpectralFunction square_loss(double w_lo, double w_hi, double delta, double rate) {
    return {SpectrumKind::square_loss, w_lo, w_hi, delta, rate, 0.0, true};
  }
  static SpectralFunction lorentzian_line(double omega_at, double gamma_p, double rate) {
    return {SpectrumKind::lorentzian, 0.0, 0.0, gamma_p, rate, omega_at, true};
  }
  static SpectralFunction flat_spectrum(double rate) {
    return {SpectrumKind::flat, 0.0, 0.0, 1.0, rate, 0.0, false};
  }

  bool is_square() const {
    return kind == SpectrumKind::square_emission || kind == SpectrumKind::square_loss;
  }

  void validate() const {
    if (is_square() && !(omega_lo < omega_hi))
      throw std::invalid_argument("SpectralFunction: need omega_lo < omega_hi");
    if (edge_width <= 0.0) throw std::invalid_argument("SpectralFunction: need edge width > 0");
  }

  // un-normalized window integral: indicator convolved with the Lorentzian edge
  double window_integral(double w) const {
    double h = 0.5 * edge_width;
    return std::atan((omega_hi - w) / h) - std::atan((omega_lo - w) / h);
  }

  /// Normalized shape s(w), s(midpoint) = 1 for square kinds.
  double shape(double w) const {
    switch (kind) {
      case SpectrumKind::flat:
        return 1.0;
      case SpectrumKind::lorentzian: {
        double h = 0.5 * edge_width;
        double d = w - center;
        return h * h / (d * d + h * h);
      }
      default:
        return window_integral(w) / (2.0 * std::atan((omega_hi - omega_lo) / edge_width));
    }
  }

  /// S(w) = Gamma^0 * s(w)
  double value(double w) const { return peak_rate * shape(w); }

  /// Frequency-dependent Lamb shift delta_lamb(w); zero for flat, and for
  /// square kinds when the toggle is off.
  double lamb(double w) const {
    if (!lamb_shift || kind == SpectrumKind::flat) return 0.0;
    double h = 0.5 * edge_width;
    if (kind == SpectrumKind::lorentzian) {
      double d = w - center;
      return -0.5 * peak_rate * h * d / (d * d + h * h);
    }
    double num = std::log(((omega_hi - w) * (omega_hi - w) + h * h) /
                          ((omega_lo - w) * (omega_lo - w) + h * h));
    return 0.5 * peak_rate * num / (4.0 * std::atan((omega_hi - omega_lo) / edge_width));
  }

  /// Half-sided Fourier transform of the memory kernel,
  /// Gamma(w) = S(w)/2 - i * delta_lamb(w).
  std::complex<double> kernel_ft(double w) const {
    return {0.5 * value(w), -lamb(w)};
  }

  /// Causal memory kernel Gamma(tau), tau > 0. Square kinds only.
  std::complex<double> memory_kernel(double tau) const {
    if (!is_square()) throw std::invalid_argument("memory_kernel: square kinds only");
    if (tau <= 0.0) throw std::invalid_argument("memory_kernel: kernel is causal, need tau > 0");
    double width = omega_hi - omega_lo;
    double mid = 0.5 * (omega_hi + omega_lo);
    // (i G0 / 4 tau)(e^{(-i w_hi - D/2) tau} - e^{(-i w_lo - D/2) tau})
    //   = (G0/2) e^{-D tau/2} e^{-i mid tau} sin(width tau / 2) / tau
    double x = 0.5 * width * tau;
    double sinc = (std::abs(x) < 1e-6) ? 0.5 * width * (1.0 - x * x / 6.0) : std::sin(x) / tau;
    std::complex<double> phase = std::exp(std::complex<double>(-0.5 * edge_width * tau, -mid * tau));
    return 0.5 * peak_rate * phase * sinc / std::atan(width / edge_width);
  }
};

/// Average of a swept Lorentzian line over a uniformly visited center
/// interval [sweep_lo, sweep_hi]; equals the square spectrum up to the
/// overall rate normalization.
inline std::function<double(double)> time_averaged_spectrum(const SpectralFunction& line,
                                                            double sweep_lo, double sweep_hi) {
  if (line.kind != SpectrumKind::lorentzian)
    throw std::invalid_argument("time_averaged_spectrum: lorentzian kind required");
  if (!(sweep_lo < sweep_hi))
    throw std::invalid_argument("time_averaged_spectrum: invalid sweep interval");
  double h = 0.5 * line.edge_width;
  double rate = line.peak_rate;
  double width = sweep_hi - sweep_lo;
  return [=](double w) {
    // (G_at / W) * Int_{lo}^{hi} (Gp/2)^2 / ((w - x)^2 + (Gp/2)^2) dx
    return rate / width * h * (std::atan((sweep_hi - w) / h) - std::atan((sweep_lo - w) / h));
  };
}

}  // namespace sqpump
