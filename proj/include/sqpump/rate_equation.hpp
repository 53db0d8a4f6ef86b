#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sqpump/jump_operators.hpp"

namespace sqpump {

/// Stationary distribution of the secular rate equation, normalized to 1.
/// The chain couples only adjacent photon-number sectors, so the nullspace
/// is found by block elimination from the top sector down to the vacuum.
inline Eigen::VectorXd secular_steady_state(const RateMatrix& rm) {
  const EigenSystem& es = *rm.es;
  const FockBasis& basis = *es.basis;
  const int K = es.num_sectors() - 1;

  std::vector<Eigen::MatrixXd> F(K + 1);  // p_N = F[N] p_{N-1}
  Eigen::MatrixXd dtil;
  for (int N = K; N >= 1; --N) {
    Eigen::Index d = Eigen::Index(basis.sector_size(N));
    dtil = (-rm.out_rate.segment(Eigen::Index(basis.sector_offset(N)), d)).asDiagonal();
    if (N < K) dtil.noalias() += rm.down[N] * F[N + 1];
    // decoupled states (no outgoing and no incoming rate): keep invertible
    for (Eigen::Index f = 0; f < d; ++f)
      if (dtil(f, f) == 0.0) {
        if (rm.up[N - 1].row(f).cwiseAbs().sum() > 0.0 ||
            (N < K && rm.down[N].row(f).cwiseAbs().sum() > 0.0))
          throw std::runtime_error("secular_steady_state: absorbing state without outflow");
        dtil(f, f) = -1.0;
      }
    F[N] = Eigen::PartialPivLU<Eigen::MatrixXd>(dtil).solve(-rm.up[N - 1]);
    if (!F[N].allFinite())
      throw std::runtime_error("secular_steady_state: singular sector reduction at N = " +
                               std::to_string(N));
  }

  Eigen::VectorXd p(Eigen::Index(basis.size()));
  p(0) = 1.0;  // vacuum sector has size 1
  for (int N = 1; N <= K; ++N) {
    Eigen::Index d = Eigen::Index(basis.sector_size(N));
    p.segment(Eigen::Index(basis.sector_offset(N)), d).noalias() =
        F[N] * p.segment(Eigen::Index(basis.sector_offset(N - 1)),
                         Eigen::Index(basis.sector_size(N - 1)));
  }
  p = p.cwiseMax(0.0);  // clip elimination round-off
  double s = p.sum();
  if (!(s > 0.0) || !p.allFinite())
    throw std::runtime_error("secular_steady_state: normalization failed");
  return p / s;
}

/// Reference implementation: assemble the full rate matrix densely, replace
/// one balance equation by the normalization row and solve by LU.
inline Eigen::VectorXd secular_steady_state_dense(const RateMatrix& rm) {
  const EigenSystem& es = *rm.es;
  const FockBasis& basis = *es.basis;
  Eigen::Index dim = Eigen::Index(basis.size());
  if (dim > 4096) throw std::invalid_argument("secular_steady_state_dense: dimension too large");
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim, dim);
  R.diagonal() = -rm.out_rate;
  for (int N = 0; N + 1 < es.num_sectors(); ++N) {
    Eigen::Index lo = Eigen::Index(basis.sector_offset(N));
    Eigen::Index hi = Eigen::Index(basis.sector_offset(N + 1));
    R.block(hi, lo, rm.up[N].rows(), rm.up[N].cols()) += rm.up[N];
    R.block(lo, hi, rm.down[N].rows(), rm.down[N].cols()) += rm.down[N];
  }
  R.row(dim - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  b(dim - 1) = 1.0;
  Eigen::VectorXd p = Eigen::PartialPivLU<Eigen::MatrixXd>(R).solve(b);
  if (!p.allFinite()) throw std::runtime_error("secular_steady_state_dense: singular system");
  return p.cwiseMax(0.0) / p.cwiseMax(0.0).sum();
}

/// LU factorization of (R - shift) restricted to the sector-tridiagonal
/// structure; reused as the population part of the exact-solver
/// preconditioner.
class RateChainFactor {
 public:
  RateChainFactor(const RateMatrix& rm, double shift) : rm_(&rm) {
    const EigenSystem& es = *rm.es;
    const FockBasis& basis = *es.basis;
    const int K = es.num_sectors() - 1;
    lu_.reserve(K + 1);
    w_.resize(K + 1);
    Eigen::MatrixXd c;
    for (int N = 0; N <= K; ++N) {
      Eigen::Index d = Eigen::Index(basis.sector_size(N));
      c = (-rm.out_rate.segment(Eigen::Index(basis.sector_offset(N)), d).array() - shift)
              .matrix()
              .asDiagonal();
      if (N > 0) {
        // W_N = Up[N-1] C_{N-1}^{-1}
        w_[N].noalias() = rm.up[N - 1] * lu_[N - 1].inverse();
        c.noalias() -= w_[N] * rm.down[N - 1];
      }
      lu_.emplace_back(c);
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const EigenSystem& es = *rm_->es;
    const FockBasis& basis = *es.basis;
    const int K = es.num_sectors() - 1;
    Eigen::VectorXd y(b.size()), x(b.size());
    auto seg = [&](Eigen::VectorXd& v, int N) {
      return v.segment(Eigen::Index(basis.sector_offset(N)), Eigen::Index(basis.sector_size(N)));
    };
    auto cseg = [&](const Eigen::VectorXd& v, int N) {
      return v.segment(Eigen::Index(basis.sector_offset(N)), Eigen::Index(basis.sector_size(N)));
    };
    for (int N = 0; N <= K; ++N) {
      seg(y, N) = cseg(b, N);
      if (N > 0) seg(y, N).noalias() -= w_[N] * cseg(y, N - 1);
    }
    seg(x, K) = lu_[K].solve(cseg(y, K));
    for (int N = K - 1; N >= 0; --N)
      seg(x, N) = lu_[N].solve((cseg(y, N) - rm_->down[N] * cseg(x, N + 1)).eval());
    return x;
  }

 private:
  const RateMatrix* rm_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  std::vector<Eigen::MatrixXd> w_;
};

}  // namespace sqpump
