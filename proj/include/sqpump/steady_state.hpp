#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sqpump/generator.hpp"
#include "sqpump/rate_equation.hpp"

namespace sqpump {

namespace detail {

/// Restarted GMRES with right preconditioning. Returns iterations used;
/// `x` carries the initial guess in and the solution out.
template <class MatVec, class Precond>
inline int gmres(const MatVec& apply, const Precond& precond, const Eigen::VectorXcd& b,
                 Eigen::VectorXcd& x, int restart, int max_iter, double tol, double* final_res) {
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  const double target = tol * (bnorm > 0 ? bnorm : 1.0);
  int total = 0;
  Eigen::VectorXcd r = b - apply(x);
  double rnorm = r.norm();
  std::vector<Eigen::VectorXcd> v, z;
  Eigen::MatrixXcd h(restart + 1, restart);
  Eigen::VectorXcd cs(restart), sn(restart), g(restart + 1);
  while (rnorm > target && total < max_iter) {
    v.assign(1, r / rnorm);
    z.clear();
    h.setZero();
    g.setZero();
    g(0) = rnorm;
    int j = 0;
    for (; j < restart && total < max_iter; ++j, ++total) {
      z.push_back(precond(v[std::size_t(j)]));
      Eigen::VectorXcd w = apply(z.back());
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        h(i, j) = v[std::size_t(i)].dot(w);
        w -= h(i, j) * v[std::size_t(i)];
      }
      const double hnext = w.norm();
      for (int i = 0; i < j; ++i) {  // apply stored Givens rotations
        Complex t = std::conj(cs(i)) * h(i, j) + std::conj(sn(i)) * h(i + 1, j);
        h(i + 1, j) = -sn(i) * h(i, j) + cs(i) * h(i + 1, j);
        h(i, j) = t;
      }
      // new rotation eliminating the subdiagonal entry hnext
      double denom = std::sqrt(std::norm(h(j, j)) + hnext * hnext);
      if (denom == 0.0) {
        cs(j) = 1.0;
        sn(j) = 0.0;
      } else {
        cs(j) = h(j, j) / denom;
        sn(j) = hnext / denom;
      }
      h(j, j) = std::conj(cs(j)) * h(j, j) + std::conj(sn(j)) * hnext;
      g(j + 1) = -sn(j) * g(j);
      g(j) = std::conj(cs(j)) * g(j);
      rnorm = std::abs(g(j + 1));
      if (rnorm <= target || hnext == 0.0) {
        ++j;
        ++total;
        break;  // converged, or happy breakdown
      }
      v.push_back(w / hnext);
    }
    // back-substitute and update
    Eigen::VectorXcd y = h.topLeftCorner(j, j).template triangularView<Eigen::Upper>().solve(
        g.head(j));
    for (int i = 0; i < j; ++i) x += y(i) * z[std::size_t(i)];
    r = b - apply(x);
    rnorm = r.norm();
  }
  if (final_res) *final_res = rnorm;
  return total;
}

}  // namespace detail

struct ExactSolveOptions {
  double tol = 1e-8;            // residual target relative to Gamma_em^0
  int restart = 60;
  int max_iter = 6000;
  double precond_shift = 0.0;   // 0 = automatic (5% of the mean outgoing rate)
  std::size_t dense_threshold = 1500;  // direct LU below this block dimension
};

struct SteadyStateResult {
  BlockDiagonal rho;            // eigenbasis blocks, Hermitian, trace 1
  double residual = 0.0;        // ||L(rho)||_F
  int iterations = 0;
  bool converged = false;
  std::vector<int> degenerate_sectors;
};

namespace detail {

/// Offsets of the diagonal entries of each sector block inside the
/// flattened column-major vector.
inline std::vector<Eigen::Index> diagonal_offsets(const EigenSystem& es) {
  std::vector<Eigen::Index> idx;
  idx.reserve(es.dim());
  Eigen::Index off = 0;
  for (int N = 0; N < es.num_sectors(); ++N) {
    Eigen::Index d = es.values[N].size();
    for (Eigen::Index k = 0; k < d; ++k) idx.push_back(off + k * (d + 1));
    off += d * d;
  }
  return idx;
}

}  // namespace detail

/// Exact Redfield steady state on the number-conserving subspace. Singular
/// balance system is made invertible by bordering with the trace functional:
/// solving (L + t tr(.)) x = t with tr(t) = 1 yields L x = 0, tr x = 1.
inline SteadyStateResult exact_steady_state(const JumpOperatorSet& js, const DissipationParams& dp,
                                            const ExactSolveOptions& opts = {}) {
  const EigenSystem& es = *js.es;
  RateMatrix rm = secular_rates(es, dp);
  Eigen::VectorXd p0 = secular_steady_state(rm);

  SteadyStateResult res;
  res.degenerate_sectors = rm.degenerate_sectors;

  BlockDiagonal seed = BlockDiagonal::zero(es);
  {
    Eigen::Index g = 0;
    for (auto& b : seed.blocks)
      for (Eigen::Index k = 0; k < b.rows(); ++k) b(k, k) = p0(g++);
  }
  const auto diag_idx = detail::diagonal_offsets(es);
  const Eigen::Index nvec = Eigen::Index(seed.dim());
  Eigen::VectorXcd tvec = seed.flatten();  // border vector, trace 1

  BlockDiagonal work = BlockDiagonal::zero(es);
  auto apply = [&](const Eigen::VectorXcd& x) {
    work.unflatten(x);
    Eigen::VectorXcd y = apply_generator(js, work).flatten();
    Complex tr = 0.0;
    for (Eigen::Index i : diag_idx) tr += x(i);
    y += tr * tvec;
    return y;
  };

  const double scale = js.emission_rate > 0 ? js.emission_rate : 1.0;
  // round-off floor of the residual: coherence equations carry the bare
  // eigenfrequencies, so the residual of the double-precision solution
  // cannot drop below ~eps * |omega| * sqrt(dim)
  double omega_span = 0.0;
  for (int N = 0; N < es.num_sectors(); ++N)
    if (es.values[N].size() > 0)
      omega_span = std::max(omega_span, es.values[N].cwiseAbs().maxCoeff());
  const double resid_floor = std::numeric_limits<double>::epsilon() *
                             std::max(omega_span, 1.0) * std::sqrt(double(nvec));

  if (std::size_t(nvec) <= opts.dense_threshold) {
    // small systems: assemble the bordered operator densely
    Eigen::MatrixXcd M(nvec, nvec);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(nvec);
    for (Eigen::Index c = 0; c < nvec; ++c) {
      e(c) = 1.0;
      M.col(c) = apply(e);
      e(c) = 0.0;
    }
    Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(M).solve(tvec);
    res.rho.blocks = seed.blocks;
    res.rho.unflatten(x);
    res.iterations = 0;
  } else {
    // matrix-free GMRES, preconditioned by the secular chain on the
    // populations and by the local decay rate on the coherences
    double shift = opts.precond_shift;
    if (shift == 0.0) {
      double mean = rm.out_rate.size() ? rm.out_rate.mean() : 1.0;
      shift = 0.05 * (mean > 0 ? mean : scale);
    }
    RateChainFactor chain(rm, shift);

    // per-entry coherence damping: i(w_f - w_g) + (out_f + out_g)/2 + shift
    Eigen::VectorXcd cohfac(nvec);
    {
      Eigen::Index off = 0, g0 = 0;
      for (int N = 0; N < es.num_sectors(); ++N) {
        Eigen::Index d = es.values[N].size();
        for (Eigen::Index c = 0; c < d; ++c)
          for (Eigen::Index r = 0; r < d; ++r)
            cohfac(off + c * d + r) =
                1.0 / Complex(-0.5 * (rm.out_rate(g0 + r) + rm.out_rate(g0 + c)) - shift,
                              -(es.values[N](r) - es.values[N](c)));
        off += d * d;
        g0 += d;
      }
    }
    Eigen::VectorXd db(Eigen::Index(es.dim()));
    auto precond = [&](const Eigen::VectorXcd& v) {
      Eigen::VectorXcd y = cohfac.cwiseProduct(v);
      for (std::size_t k = 0; k < diag_idx.size(); ++k) db(Eigen::Index(k)) = v(diag_idx[k]).real();
      Eigen::VectorXd yr = chain.solve(db);
      for (std::size_t k = 0; k < diag_idx.size(); ++k) db(Eigen::Index(k)) = v(diag_idx[k]).imag();
      Eigen::VectorXd yi = chain.solve(db);
      for (std::size_t k = 0; k < diag_idx.size(); ++k)
        y(diag_idx[k]) = Complex(yr(Eigen::Index(k)), yi(Eigen::Index(k)));
      return y;
    };

    Eigen::VectorXcd x = tvec;  // secular start
    double final_res = 0.0;
    const double target = std::max(opts.tol * scale, resid_floor);
    res.iterations = detail::gmres(apply, precond, tvec, x, opts.restart, opts.max_iter,
                                   target / std::max(tvec.norm(), 1e-300), &final_res);
    res.rho.blocks = seed.blocks;
    res.rho.unflatten(x);
  }

  res.rho.hermitize();
  double tr = res.rho.trace().real();
  if (!(std::abs(tr) > 1e-12)) throw std::runtime_error("exact_steady_state: zero-trace solution");
  for (auto& b : res.rho.blocks) b /= tr;
  res.residual = apply_generator(js, res.rho).norm();
  res.converged = res.residual <= std::max(opts.tol * scale * 10.0, 10.0 * resid_floor);
  return res;
}

/// Secular-approximation steady state packaged in the same result type
/// (diagonal blocks only).
inline SteadyStateResult secular_steady_state_blocks(const EigenSystem& es,
                                                     const DissipationParams& dp) {
  RateMatrix rm = secular_rates(es, dp);
  Eigen::VectorXd p = secular_steady_state(rm);
  SteadyStateResult res;
  res.degenerate_sectors = rm.degenerate_sectors;
  res.rho = BlockDiagonal::zero(es);
  Eigen::Index g = 0;
  for (auto& b : res.rho.blocks)
    for (Eigen::Index k = 0; k < b.rows(); ++k) b(k, k) = p(g++);
  res.converged = true;
  res.residual = 0.0;
  return res;
}

/// Reference solver on the full Hilbert space: assemble the dense
/// superoperator, replace one row by the trace functional, solve by LU.
inline Eigen::MatrixXcd steady_state_full(const DenseGenerator& gen) {
  Eigen::Index d = gen.dim();
  Eigen::MatrixXcd S = gen.superoperator();
  for (Eigen::Index k = 0; k < d; ++k) S(0, k * (d + 1)) += 1.0;  // border with trace row
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d * d);
  b(0) = 1.0;
  // (L + e_0 tr(.)) x = e_0 implies L x = (1 - tr x) e_0; applying the
  // trace functional, which annihilates the range of L, gives tr x = 1
  // and hence L x = 0
  Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(S).solve(b);
  Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw std::runtime_error("steady_state_full: zero-trace solution");
  return rho / tr;
}

}  // namespace sqpump
