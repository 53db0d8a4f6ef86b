#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sqpump/generator.hpp"
#include "sqpump/time_evolution.hpp"

namespace sqpump {

/// Single driven cavity coupled to a set of incoherently pumped two-level
/// emitters whose transition frequency can be swept in time.
struct EmitterConfig {
  int n_max = 3;
  int num_emitters = 1;
  double omega_cav = 0.0;
  double interaction = 0.0;  // photon-photon U
  double omega_at = 0.0;     // static line center
  double rabi = 0.0;         // Omega_R
  double gamma_pump = 0.0;   // Gamma_p
  double gamma_loss = 0.0;   // photon loss

  /// Lorentzian emission line of one pumped emitter: peak rate 4 Omega^2/Gamma_p,
  /// half width Gamma_p / 2.
  SpectralFunction emission_line() const {
    double rate = 4.0 * rabi * rabi / gamma_pump * num_emitters;
    return SpectralFunction::lorentzian_line(omega_at, gamma_pump, rate);
  }
};

struct MicroscopicModel {
  EmitterConfig cfg;
  Eigen::Index dim = 0;
  Eigen::MatrixXcd h_static;  // everything except omega_at * p_exc
  Eigen::MatrixXcd p_exc;     // sum_n sigma+_n sigma-_n
  Eigen::MatrixXcd a;
  std::vector<Eigen::MatrixXcd> sigma_plus;
  Eigen::MatrixXcd n_ph;

  /// d rho / dt at emitter frequency w_at.
  Eigen::MatrixXcd apply(double w_at, const Eigen::MatrixXcd& rho) const {
    const Complex im(0.0, 1.0);
    Eigen::MatrixXcd h = h_static + w_at * p_exc;
    Eigen::MatrixXcd out = -im * (h * rho - rho * h);
    Eigen::MatrixXcd t;
    if (cfg.gamma_loss != 0.0) {
      t.noalias() = a * rho;
      out.noalias() += cfg.gamma_loss * (t * a.adjoint());
      t.noalias() = a.adjoint() * a;
      out.noalias() -= 0.5 * cfg.gamma_loss * (t * rho + rho * t);
    }
    for (const auto& sp : sigma_plus) {
      t.noalias() = sp * rho;
      out.noalias() += cfg.gamma_pump * (t * sp.adjoint());
      t.noalias() = sp.adjoint() * sp;
      out.noalias() -= 0.5 * cfg.gamma_pump * (t * rho + rho * t);
    }
    return out;
  }

  /// Dense Lindblad superoperator at fixed emitter frequency.
  Eigen::MatrixXcd superoperator(double w_at) const {
    using detail::sandwich;
    const Complex im(0.0, 1.0);
    if (dim > 128) throw std::invalid_argument("superoperator: dimension budget (128) exceeded");
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd h = h_static + w_at * p_exc;
    Eigen::MatrixXcd S = -im * (sandwich(h, id) - sandwich(id, h));
    auto dissipator = [&](const Eigen::MatrixXcd& L, double rate) {
      Eigen::MatrixXcd n = L.adjoint() * L;
      S += rate * (sandwich(L, L.adjoint()) - 0.5 * (sandwich(n, id) + sandwich(id, n)));
    };
    if (cfg.gamma_loss != 0.0) dissipator(a, cfg.gamma_loss);
    for (const auto& sp : sigma_plus) dissipator(sp, cfg.gamma_pump);
    return S;
  }
};

namespace detail {

inline Eigen::MatrixXcd identity_c(Eigen::Index d) { return Eigen::MatrixXcd::Identity(d, d); }

}  // namespace detail

inline MicroscopicModel build_microscopic(const EmitterConfig& cfg) {
  if (cfg.n_max < 1 || cfg.num_emitters < 1)
    throw std::invalid_argument("build_microscopic: need n_max >= 1 and at least one emitter");
  const Eigen::Index dp = cfg.n_max + 1;
  const int M = cfg.num_emitters;
  const Eigen::Index ds = Eigen::Index(1) << M;

  MicroscopicModel m;
  m.cfg = cfg;
  m.dim = dp * ds;

  Eigen::MatrixXcd a_ph = Eigen::MatrixXcd::Zero(dp, dp);
  for (int n = 1; n <= cfg.n_max; ++n) a_ph(n - 1, n) = std::sqrt(double(n));
  Eigen::MatrixXcd n_op = (a_ph.adjoint() * a_ph).eval();

  m.a = detail::kron(a_ph, detail::identity_c(ds));
  m.n_ph = detail::kron(n_op, detail::identity_c(ds));

  Eigen::MatrixXcd sm = Eigen::MatrixXcd::Zero(2, 2);
  sm(0, 1) = 1.0;  // |g><e|
  m.sigma_plus.reserve(std::size_t(M));
  m.p_exc = Eigen::MatrixXcd::Zero(m.dim, m.dim);
  for (int k = 0; k < M; ++k) {
    Eigen::MatrixXcd op = detail::identity_c(dp);
    for (int j = 0; j < M; ++j)
      op = detail::kron(op, j == k ? Eigen::MatrixXcd(sm.adjoint()) : detail::identity_c(2));
    m.sigma_plus.push_back(op);
    m.p_exc += op * op.adjoint();
  }

  Eigen::MatrixXcd h_ph = Eigen::MatrixXcd::Zero(dp, dp);
  for (int n = 0; n <= cfg.n_max; ++n)
    h_ph(n, n) = cfg.omega_cav * n + 0.5 * cfg.interaction * n * (n - 1.0);
  m.h_static = detail::kron(h_ph, detail::identity_c(ds));
  for (const auto& sp : m.sigma_plus) {
    Eigen::MatrixXcd c = m.a.adjoint() * sp.adjoint();  // a^dag sigma^-
    m.h_static += cfg.rabi * (c + c.adjoint());
  }
  return m;
}

/// Triangular sweep of the emitter frequency between omega_lo and omega_hi
/// at constant speed, starting upward from omega_lo.
struct ModulationProfile {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  double speed = 0.0;  // |d omega / dt|

  double half_period() const { return (omega_hi - omega_lo) / speed; }

  double value(double t) const {
    double T = half_period();
    double u = std::fmod(t, 2.0 * T);
    if (u < 0.0) u += 2.0 * T;
    return u <= T ? omega_lo + speed * u : omega_hi - speed * (u - T);
  }
};

struct ModulationSample {
  double time = 0.0;
  double n_mean = 0.0;
  double n_var = 0.0;  // variance of the photon number
};

/// Integrate the modulated model and record photon statistics on a uniform
/// time grid (including both endpoints).
inline std::vector<ModulationSample> evolve_modulated(const MicroscopicModel& model,
                                                      const ModulationProfile& profile,
                                                      Eigen::MatrixXcd rho, double t_end,
                                                      int n_samples,
                                                      const IntegrationOptions& opts = {}) {
  if (n_samples < 2) throw std::invalid_argument("evolve_modulated: need at least two samples");
  std::vector<double> grid(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) grid[std::size_t(k)] = t_end * double(k) / (n_samples - 1);
  std::vector<ModulationSample> out;
  out.reserve(grid.size());
  auto deriv = [&](double t, const Eigen::MatrixXcd& r) { return model.apply(profile.value(t), r); };
  auto record = [&](double t, const Eigen::MatrixXcd& r) {
    double n1 = (model.n_ph * r).trace().real();
    double n2 = (model.n_ph * model.n_ph * r).trace().real();
    out.push_back({t, n1, std::max(0.0, n2 - n1 * n1)});
  };
  time_evolve(deriv, rho, 0.0, t_end, grid, record, opts);
  return out;
}

/// Static steady state of the joint cavity-emitter system (dense solve).
inline Eigen::MatrixXcd microscopic_steady_state(const MicroscopicModel& model, double w_at) {
  Eigen::Index d = model.dim;
  Eigen::MatrixXcd S = model.superoperator(w_at);
  for (Eigen::Index k = 0; k < d; ++k) S(0, k * (d + 1)) += 1.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d * d);
  b(0) = 1.0;
  Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(S).solve(b);
  Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace();
}

/// Reduced photon density matrix (trace over the emitters).
inline Eigen::MatrixXcd photon_reduced(const Eigen::MatrixXcd& rho, int n_max, int num_emitters) {
  const Eigen::Index dp = n_max + 1;
  const Eigen::Index ds = Eigen::Index(1) << num_emitters;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dp, dp);
  for (Eigen::Index n = 0; n < dp; ++n)
    for (Eigen::Index nn = 0; nn < dp; ++nn)
      for (Eigen::Index s = 0; s < ds; ++s) out(n, nn) += rho(n * ds + s, nn * ds + s);
  return out;
}

}  // namespace sqpump
