#pragma once

#include <algorithm>
#include <complex>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sqpump/hamiltonian.hpp"
#include "sqpump/spectra.hpp"

namespace sqpump {

using Complex = std::complex<double>;

struct DissipationParams {
  double gamma_loss = 0.0;                       // Markovian loss rate Gamma_l
  SpectralFunction emission;                     // Gamma_em^0 lives in emission.peak_rate
  std::optional<SpectralFunction> loss_spectrum; // frequency-dependent losses, optional
  std::vector<int> emitting_sites;               // empty means all sites
  double layout_rescale = 0.0;                   // 0 = automatic L/|layout|

  std::vector<int> layout(int sites) const {
    if (emitting_sites.empty()) {
      std::vector<int> all(sites);
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    for (int s : emitting_sites)
      if (s < 0 || s >= sites) throw std::out_of_range("emitting site index out of range");
    return emitting_sites;
  }
  double emission_rate(int sites) const {
    double r = layout_rescale;
    if (r == 0.0) r = emitting_sites.empty() ? 1.0 : double(sites) / double(emitting_sites.size());
    return emission.peak_rate * r;
  }
  /// Weak-dissipation condition of the Redfield derivation.
  bool weak_dissipation_ok(int sites) const {
    if (!emission.is_square()) return true;
    double fast = std::min(emission.edge_width, emission.omega_hi - emission.omega_lo);
    return gamma_loss < 0.1 * fast && emission_rate(sites) < 0.1 * fast;
  }
};

/// Bare and spectrum-modified lowering operators in the Hamiltonian
/// eigenbasis. Block N holds <f(N)| op |f'(N+1)>, shape d_N x d_{N+1}.
struct JumpOperatorSet {
  const EigenSystem* es = nullptr;
  std::vector<int> sites;                              // emitting layout
  double emission_rate = 0.0;                          // layout-rescaled Gamma_em^0
  double gamma_loss = 0.0;
  double loss_rate = 0.0;                              // Gamma_L^0, 0 when absent
  std::vector<std::vector<Eigen::MatrixXcd>> bare;     // [site 0..L-1][N] (real content)
  std::vector<std::vector<Eigen::MatrixXcd>> em_mod;   // [layout index][N]
  std::vector<std::vector<Eigen::MatrixXcd>> loss_mod; // [site][N], empty if no loss spectrum
  // Precomputed drift factors per sector:
  std::vector<Eigen::MatrixXcd> em_drift;   // sum_i a_i atilde_i^dag restricted to sector N
  std::vector<Eigen::MatrixXcd> loss_drift; // sum_i a_i^dag abar_i restricted to sector N
};

namespace detail {

/// Transform the sparse Fock-space annihilation blocks of one site into the
/// eigenbasis: A[N] = V_N^T a V_{N+1}.
inline std::vector<Eigen::MatrixXcd> eigenbasis_lowering(const EigenSystem& es, int site) {
  auto a = annihilation_operator(*es.basis, site);
  std::vector<Eigen::MatrixXcd> out(es.num_sectors() - 1);
  Eigen::MatrixXd tmp;
  for (int N = 0; N + 1 < es.num_sectors(); ++N) {
    const auto& blk = a[N].mat;  // a[N] maps sector N+1 -> N
    tmp.noalias() = es.vectors[N].transpose() * (blk * es.vectors[N + 1]);
    out[N] = tmp.cast<Complex>();
  }
  return out;
}

/// Dimensionless modification factor c(w) = s(w) - 2 i delta(w) / Gamma0,
/// so that atilde = c(omega_{f'f}) elementwise bare.
inline Complex mod_factor(const SpectralFunction& spec, double w, bool lamb_toggle) {
  double s = spec.shape(w);
  double d = lamb_toggle ? spec.lamb(w) : 0.0;
  return {s, spec.peak_rate != 0.0 ? -2.0 * d / spec.peak_rate : 0.0};
}

}  // namespace detail

inline JumpOperatorSet build_jump_operators(const EigenSystem& es, const DissipationParams& dp,
                                            bool lamb_toggle = true) {
  const int L = es.basis->sites();
  JumpOperatorSet js;
  js.es = &es;
  js.sites = dp.layout(L);
  js.emission_rate = dp.emission_rate(L);
  js.gamma_loss = dp.gamma_loss;
  js.loss_rate = dp.loss_spectrum ? dp.loss_spectrum->peak_rate : 0.0;

  js.bare.resize(L);
  for (int i = 0; i < L; ++i) js.bare[i] = detail::eigenbasis_lowering(es, i);

  const int nsec = es.num_sectors();
  auto modify = [&](const SpectralFunction& spec, const Eigen::MatrixXcd& A, int N) {
    Eigen::MatrixXcd M(A.rows(), A.cols());
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      double e_src = es.value(N + 1, c);
      for (Eigen::Index r = 0; r < A.rows(); ++r) {
        double w = e_src - es.value(N, r);  // omega_{f'f}
        M(r, c) = detail::mod_factor(spec, w, lamb_toggle) * A(r, c);
      }
    }
    return M;
  };

  js.em_mod.resize(js.sites.size());
  for (std::size_t k = 0; k < js.sites.size(); ++k) {
    js.em_mod[k].resize(nsec - 1);
    for (int N = 0; N + 1 < nsec; ++N)
      js.em_mod[k][N] = modify(dp.emission, js.bare[js.sites[k]][N], N);
  }
  if (dp.loss_spectrum) {
    js.loss_mod.resize(L);
    for (int i = 0; i < L; ++i) {
      js.loss_mod[i].resize(nsec - 1);
      for (int N = 0; N + 1 < nsec; ++N)
        js.loss_mod[i][N] = modify(*dp.loss_spectrum, js.bare[i][N], N);
    }
  }

  // drift factors
  js.em_drift.resize(nsec);
  for (int N = 0; N < nsec; ++N) {
    Eigen::Index d = es.values[N].size();
    js.em_drift[N].setZero(d, d);
    if (N + 1 < nsec)
      for (std::size_t k = 0; k < js.sites.size(); ++k)
        js.em_drift[N].noalias() += js.bare[js.sites[k]][N] * js.em_mod[k][N].adjoint();
  }
  if (dp.loss_spectrum) {
    js.loss_drift.resize(nsec);
    for (int N = 0; N < nsec; ++N) {
      Eigen::Index d = es.values[N].size();
      js.loss_drift[N].setZero(d, d);
      if (N >= 1)
        for (int i = 0; i < L; ++i)
          js.loss_drift[N].noalias() += js.bare[i][N - 1].adjoint() * js.loss_mod[i][N - 1];
    }
  }
  return js;
}

/// mu-independent transition weights M[N](f, f') = sum_i |<f|a_i|f'>|^2
/// for the configured layout and for all sites.
struct TransitionWeights {
  std::vector<Eigen::MatrixXd> all;     // per N: d_N x d_{N+1}
  std::vector<Eigen::MatrixXd> layout;  // empty when layout == all sites
  const Eigen::MatrixXd& up_weights(int N) const { return layout.empty() ? all[N] : layout[N]; }
};

inline TransitionWeights transition_weights(const EigenSystem& es, const std::vector<int>& layout_sites) {
  const int L = es.basis->sites();
  const int nsec = es.num_sectors();
  bool all_sites = int(layout_sites.size()) == L;
  TransitionWeights tw;
  tw.all.resize(nsec - 1);
  if (!all_sites) tw.layout.resize(nsec - 1);
  for (int N = 0; N + 1 < nsec; ++N) {
    tw.all[N].setZero(es.values[N].size(), es.values[N + 1].size());
    if (!all_sites) tw.layout[N].setZero(es.values[N].size(), es.values[N + 1].size());
  }
  Eigen::MatrixXd B;
  for (int i = 0; i < L; ++i) {
    auto a = annihilation_operator(*es.basis, i);
    bool in_layout = std::find(layout_sites.begin(), layout_sites.end(), i) != layout_sites.end();
    for (int N = 0; N + 1 < nsec; ++N) {
      B.noalias() = es.vectors[N].transpose() * (a[N].mat * es.vectors[N + 1]);
      tw.all[N].array() += B.array().square();
      if (!all_sites && in_layout) tw.layout[N].array() += B.array().square();
    }
  }
  return tw;
}

/// Golden-rule rates between eigenstates of adjacent sectors.
struct RateMatrix {
  const EigenSystem* es = nullptr;
  std::vector<Eigen::MatrixXd> up;    // per N: d_{N+1} x d_N, entry (f', f) = T_{f -> f'}
  std::vector<Eigen::MatrixXd> down;  // per N: d_N x d_{N+1}, entry (f, f') = T_{f' -> f}
  Eigen::VectorXd out_rate;           // total outgoing rate per global state
  std::vector<int> degenerate_sectors;  // sectors with eigenfrequency gaps < 1e-6 U

  std::size_t dim() const { return es->dim(); }
};

inline RateMatrix secular_rates(const TransitionWeights& tw, const EigenSystem& es,
                                const DissipationParams& dp) {
  const int nsec = es.num_sectors();
  RateMatrix rm;
  rm.es = &es;
  rm.up.resize(nsec - 1);
  rm.down.resize(nsec - 1);
  const double g_em = dp.emission_rate(es.basis->sites());
  const double g_l = dp.gamma_loss;
  for (int N = 0; N + 1 < nsec; ++N) {
    const Eigen::MatrixXd& w_up = tw.up_weights(N);
    const Eigen::MatrixXd& w_all = tw.all[N];
    Eigen::Index d = w_all.rows(), dp1 = w_all.cols();
    rm.up[N].resize(dp1, d);
    rm.down[N].resize(d, dp1);
    for (Eigen::Index c = 0; c < dp1; ++c) {
      double e_hi = es.value(N + 1, c);
      for (Eigen::Index r = 0; r < d; ++r) {
        double w = e_hi - es.value(N, r);
        rm.up[N](c, r) = g_em * dp.emission.shape(w) * w_up(r, c);
        double dn = g_l;
        if (dp.loss_spectrum) dn += dp.loss_spectrum->value(w);
        rm.down[N](r, c) = dn * w_all(r, c);
      }
    }
  }
  // total outgoing rate per state
  rm.out_rate.setZero(Eigen::Index(es.dim()));
  for (int N = 0; N + 1 < nsec; ++N) {
    Eigen::Index off_lo = Eigen::Index(es.basis->sector_offset(N));
    Eigen::Index off_hi = Eigen::Index(es.basis->sector_offset(N + 1));
    rm.out_rate.segment(off_lo, rm.up[N].cols()) += rm.up[N].colwise().sum().transpose();
    rm.out_rate.segment(off_hi, rm.down[N].cols()) += rm.down[N].colwise().sum().transpose();
  }
  // degeneracy scan (secularity caveat)
  double tol = 1e-6 * std::abs(es.params.interaction);
  for (int N = 0; N < nsec; ++N)
    for (Eigen::Index k = 1; k < es.values[N].size(); ++k)
      if (es.values[N](k) - es.values[N](k - 1) < tol) {
        rm.degenerate_sectors.push_back(N);
        break;
      }
  return rm;
}

inline RateMatrix secular_rates(const EigenSystem& es, const DissipationParams& dp) {
  auto tw = transition_weights(es, dp.layout(es.basis->sites()));
  return secular_rates(tw, es, dp);
}

/// Rates from an already-built jump operator set (uses |bare|^2 and the
/// emission spectrum shape; identical to the transition-weight route).
inline RateMatrix secular_rates(const JumpOperatorSet& js, const EigenSystem& es,
                                const DissipationParams& dp) {
  return secular_rates(es, dp);
}

}  // namespace sqpump
