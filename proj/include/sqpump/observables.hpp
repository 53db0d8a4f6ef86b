#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sqpump/generator.hpp"

namespace sqpump {

/// Mott-plateau effective temperature from the on-site number fluctuation,
/// k T = (U/2) / ln(2 / dn^2). Valid for 0 <= dn < sqrt(2).
inline double effective_temperature(double delta_n, double interaction) {
  if (delta_n < 0.0 || delta_n * delta_n >= 2.0)
    throw std::domain_error("effective_temperature: need 0 <= delta_n < sqrt(2)");
  if (delta_n == 0.0) return 0.0;
  return 0.5 * interaction / std::log(2.0 / (delta_n * delta_n));
}

/// Cached eigenbasis diagonals of the number-conserving observables, reused
/// across every chemical potential of a sweep column.
struct ObservableContext {
  Eigen::VectorXd nk0_diag;      // <f| n_{k=0} |f>
  Eigen::MatrixXd site_density;  // dim x L, <f| n_i |f>

  static ObservableContext build(const EigenSystem& es) {
    const FockBasis& basis = *es.basis;
    const int L = basis.sites();
    Eigen::Index dim = Eigen::Index(basis.size());
    ObservableContext ctx;
    ctx.nk0_diag.resize(dim);
    ctx.site_density.resize(dim, L);

    auto k0 = momentum_zero_operator(basis);
    Eigen::MatrixXd esq, w, ntab;
    for (int N = 0; N < basis.num_sectors(); ++N) {
      Eigen::Index d = es.values[N].size();
      if (d == 0) continue;
      Eigen::Index off = Eigen::Index(basis.sector_offset(N));
      const Eigen::MatrixXd& V = es.vectors[N];
      // <f|K|f> = sum_j V(j,f) (K V)(j,f)
      w.noalias() = k0[N].mat * V;
      ctx.nk0_diag.segment(off, d) = (V.array() * w.array()).colwise().sum().transpose();
      // diagonal Fock observables via the squared amplitudes
      esq = V.array().square().matrix();
      ntab.resize(d, L);
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto& s = basis.state(std::size_t(off + j));
        for (int i = 0; i < L; ++i) ntab(j, i) = double(s[std::size_t(i)]);
      }
      ctx.site_density.middleRows(off, d).noalias() = esq.transpose() * ntab;
    }
    return ctx;
  }
};

struct SteadyStateReport {
  double n_total = 0.0;    // <N>
  double n_ph = 0.0;       // <N> / L
  double x_bec = 0.0;      // <n_{k=0}> / <N>, NaN when <N> = 0
  double delta_n = 0.0;    // sqrt(<N^2> - <N>^2) / <N>, NaN when <N> = 0
  double entropy = 0.0;    // von Neumann
  double fidelity = 0.0;   // <GS| rho |GS>
  double pi0 = 0.0;        // largest eigenvalue of rho
  double overlap = 0.0;    // |<psi_+|GS>|^2
  double t_eff = 0.0;      // NaN outside the fluctuation domain
  bool x_bec_defined = true;
  bool psi_plus_degenerate = false;  // top two rho eigenvalues tie
};

namespace detail {

constexpr double kEntropyFloor = 1e-14;
constexpr double kDiagonalTol = 1e-13;

inline bool is_diagonal(const BlockDiagonal& rho) {
  for (const auto& b : rho.blocks) {
    double off = std::sqrt(std::max(0.0, b.squaredNorm() - b.diagonal().squaredNorm()));
    if (off > kDiagonalTol * std::max(1.0, b.norm())) return false;
  }
  return true;
}

}  // namespace detail

inline SteadyStateReport compute_report(const BlockDiagonal& rho, const EigenSystem& es,
                                        const GroundStateInfo& gs, const ObservableContext& ctx) {
  const FockBasis& basis = *es.basis;
  const int L = basis.sites();
  SteadyStateReport rep;

  Eigen::VectorXd p = rho.populations();
  const bool diag_only = detail::is_diagonal(rho);

  // moments of the total photon number (diagonal in the eigenbasis)
  double n1 = 0.0, n2 = 0.0;
  for (int N = 0; N < basis.num_sectors(); ++N) {
    Eigen::Index off = Eigen::Index(basis.sector_offset(N));
    double w = p.segment(off, Eigen::Index(basis.sector_size(N))).sum();
    n1 += w * N;
    n2 += w * double(N) * double(N);
  }
  rep.n_total = n1;
  rep.n_ph = n1 / L;

  // zero-momentum occupation
  double nk0 = 0.0;
  if (diag_only) {
    nk0 = ctx.nk0_diag.dot(p);
  } else {
    auto k0 = momentum_zero_operator(basis);
    Eigen::MatrixXcd fock;
    for (int N = 0; N < basis.num_sectors(); ++N) {
      Eigen::Index d = es.values[N].size();
      if (d == 0 || rho.blocks[N].norm() == 0.0) continue;
      const Eigen::MatrixXd& V = es.vectors[N];
      fock.noalias() = V * rho.blocks[N] * V.transpose();
      nk0 += (k0[N].mat.cast<Complex>().cwiseProduct(fock.transpose())).sum().real();
    }
  }

  rep.x_bec_defined = n1 > 1e-12;
  if (rep.x_bec_defined) {
    rep.x_bec = nk0 / n1;
    rep.delta_n = std::sqrt(std::max(0.0, n2 - n1 * n1)) / n1;
  } else {
    rep.x_bec = std::numeric_limits<double>::quiet_NaN();
    rep.delta_n = std::numeric_limits<double>::quiet_NaN();
  }

  // spectral quantities of rho
  rep.fidelity = rho.blocks[gs.sector].rows() > 0 ? rho.blocks[gs.sector](0, 0).real() : 0.0;
  double top1 = -1.0, top2 = -1.0;
  int top_sector = 0;
  Eigen::VectorXcd top_vec;
  rep.entropy = 0.0;
  for (int N = 0; N < basis.num_sectors(); ++N) {
    const auto& b = rho.blocks[N];
    if (b.rows() == 0) continue;
    Eigen::VectorXd ev;
    Eigen::MatrixXcd evec;
    if (diag_only) {
      ev = b.diagonal().real();
      // eigenvectors are the canonical basis; handled below via index
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(b);
      ev = solver.eigenvalues();
      evec = solver.eigenvectors();
    }
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      double lam = ev(k);
      if (lam > detail::kEntropyFloor) rep.entropy -= lam * std::log(lam);
      if (lam > top1) {
        top2 = top1;
        top1 = lam;
        top_sector = N;
        if (diag_only) {
          top_vec = Eigen::VectorXcd::Zero(ev.size());
          top_vec(k) = 1.0;
        } else {
          top_vec = evec.col(k);
        }
      } else if (lam > top2) {
        top2 = lam;
      }
    }
  }
  rep.pi0 = std::max(top1, 0.0);
  rep.psi_plus_degenerate = top2 >= 0.0 && top1 - top2 < 1e-10;
  rep.overlap = (top_sector == gs.sector && top_vec.size() > 0) ? std::norm(top_vec(0)) : 0.0;

  if (rep.delta_n >= 0.0 && rep.delta_n * rep.delta_n < 2.0)
    rep.t_eff = effective_temperature(rep.delta_n, es.params.interaction);
  else
    rep.t_eff = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

/// Per-site mean occupation.
inline Eigen::VectorXd density_profile(const BlockDiagonal& rho, const EigenSystem& es,
                                       const ObservableContext& ctx) {
  const FockBasis& basis = *es.basis;
  if (detail::is_diagonal(rho)) return ctx.site_density.transpose() * rho.populations();
  Eigen::VectorXd ni = Eigen::VectorXd::Zero(basis.sites());
  Eigen::MatrixXcd fock;
  for (int N = 0; N < basis.num_sectors(); ++N) {
    Eigen::Index d = es.values[N].size();
    if (d == 0 || rho.blocks[N].norm() == 0.0) continue;
    Eigen::Index off = Eigen::Index(basis.sector_offset(N));
    fock.noalias() = es.vectors[N] * rho.blocks[N] * es.vectors[N].transpose();
    Eigen::VectorXd pf = fock.diagonal().real();
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& s = basis.state(std::size_t(off + j));
      for (int i = 0; i < basis.sites(); ++i) ni(i) += pf(j) * s[std::size_t(i)];
    }
  }
  return ni;
}

/// Report of the pure grand-canonical ground state (equilibrium reference).
inline SteadyStateReport ground_state_report(const EigenSystem& es, const GroundStateInfo& gs,
                                             const ObservableContext& ctx) {
  const FockBasis& basis = *es.basis;
  const int L = basis.sites();
  SteadyStateReport rep;
  Eigen::Index off = Eigen::Index(basis.sector_offset(gs.sector));
  rep.n_total = gs.sector;
  rep.n_ph = double(gs.sector) / L;
  double nk0 = ctx.nk0_diag(off);  // GS is eigenvector 0 of its sector
  rep.delta_n = 0.0;               // eigenstate of the total photon number
  rep.x_bec_defined = gs.sector > 0;
  rep.x_bec = rep.x_bec_defined ? nk0 / gs.sector : std::numeric_limits<double>::quiet_NaN();
  rep.entropy = 0.0;
  rep.fidelity = 1.0;
  rep.pi0 = 1.0;
  rep.overlap = 1.0;
  rep.t_eff = 0.0;
  rep.psi_plus_degenerate = gs.degenerate;
  return rep;
}

}  // namespace sqpump
