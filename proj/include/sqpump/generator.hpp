#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sqpump/jump_operators.hpp"

namespace sqpump {

/// Density matrix (or generator image) restricted to the number-conserving
/// subspace: one complex block per photon-number sector, expressed in the
/// Hamiltonian eigenbasis.
struct BlockDiagonal {
  std::vector<Eigen::MatrixXcd> blocks;

  static BlockDiagonal zero(const EigenSystem& es) {
    BlockDiagonal b;
    b.blocks.resize(es.num_sectors());
    for (int N = 0; N < es.num_sectors(); ++N) {
      Eigen::Index d = es.values[N].size();
      b.blocks[N].setZero(d, d);
    }
    return b;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (const auto& b : blocks) t += b.trace();
    return t;
  }

  void hermitize() {
    for (auto& b : blocks) b = 0.5 * (b + b.adjoint()).eval();
  }

  double norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
  }

  std::size_t dim() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += std::size_t(b.size());
    return n;
  }

  Eigen::VectorXcd flatten() const {
    Eigen::VectorXcd v{Eigen::Index(dim())};
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
      v.segment(off, b.size()) = Eigen::Map<const Eigen::VectorXcd>(b.data(), b.size());
      off += b.size();
    }
    return v;
  }

  void unflatten(const Eigen::VectorXcd& v) {
    Eigen::Index off = 0;
    for (auto& b : blocks) {
      Eigen::Map<Eigen::VectorXcd>(b.data(), b.size()) = v.segment(off, b.size());
      off += b.size();
    }
  }

  Eigen::VectorXd populations() const {
    Eigen::VectorXd p(Eigen::Index(0));
    std::size_t n = 0;
    for (const auto& b : blocks) n += std::size_t(b.rows());
    p.resize(Eigen::Index(n));
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
      p.segment(off, b.rows()) = b.diagonal().real();
      off += b.rows();
    }
    return p;
  }
};

/// Redfield generator restricted to the number-conserving subspace.
/// Exact on that subspace: it is invariant under the full generator, and
/// the unique steady state lies inside it.
inline BlockDiagonal apply_generator(const JumpOperatorSet& js, const BlockDiagonal& rho) {
  const EigenSystem& es = *js.es;
  const int nsec = es.num_sectors();
  const int L = es.basis->sites();
  const Complex im(0.0, 1.0);
  BlockDiagonal out = BlockDiagonal::zero(es);

  Eigen::MatrixXcd t1, t2;
  for (int N = 0; N < nsec; ++N) {
    const Eigen::MatrixXcd& r = rho.blocks[N];
    Eigen::MatrixXcd& o = out.blocks[N];
    Eigen::Index d = r.rows();
    if (d == 0) continue;

    // coherent part and Markovian-loss anticommutator (sum_i a_i^dag a_i = N)
    const Eigen::VectorXd& w = es.values[N];
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index rr = 0; rr < d; ++rr)
        o(rr, c) = (-im * (w(rr) - w(c)) - js.gamma_loss * double(N)) * r(rr, c);

    // emission drift: -(G/2)(P rho + rho P^H)
    if (js.emission_rate != 0.0 && N + 1 < nsec) {
      const Eigen::MatrixXcd& P = js.em_drift[N];
      o.noalias() -= 0.5 * js.emission_rate * (P * r);
      o.noalias() -= 0.5 * js.emission_rate * (r * P.adjoint());
    }
    // frequency-dependent-loss drift: -(GL/2)(R rho + rho R^H)
    if (js.loss_rate != 0.0 && N >= 1) {
      const Eigen::MatrixXcd& R = js.loss_drift[N];
      o.noalias() -= 0.5 * js.loss_rate * (R * r);
      o.noalias() -= 0.5 * js.loss_rate * (r * R.adjoint());
    }
    // emission gain from sector N-1
    if (js.emission_rate != 0.0 && N >= 1) {
      const Eigen::MatrixXcd& rl = rho.blocks[N - 1];
      for (std::size_t k = 0; k < js.sites.size(); ++k) {
        const Eigen::MatrixXcd& A = js.bare[js.sites[k]][N - 1];
        const Eigen::MatrixXcd& At = js.em_mod[k][N - 1];
        t1.noalias() = rl * A;
        o.noalias() += 0.5 * js.emission_rate * (At.adjoint() * t1);
        t2.noalias() = rl * At;
        o.noalias() += 0.5 * js.emission_rate * (A.adjoint() * t2);
      }
    }
    // loss gain from sector N+1
    if (N + 1 < nsec) {
      const Eigen::MatrixXcd& rh = rho.blocks[N + 1];
      for (int i = 0; i < L; ++i) {
        const Eigen::MatrixXcd& A = js.bare[i][N];
        if (js.gamma_loss != 0.0) {
          t1.noalias() = A * rh;
          o.noalias() += js.gamma_loss * (t1 * A.adjoint());
        }
        if (js.loss_rate != 0.0) {
          const Eigen::MatrixXcd& Ab = js.loss_mod[i][N];
          t1.noalias() = Ab * rh;
          o.noalias() += 0.5 * js.loss_rate * (t1 * A.adjoint());
          t2.noalias() = A * rh;
          o.noalias() += 0.5 * js.loss_rate * (t2 * Ab.adjoint());
        }
      }
    }
  }
  return out;
}

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    for (Eigen::Index r = 0; r < A.rows(); ++r)
      K.block(r * B.rows(), c * B.cols(), B.rows(), B.cols()) = A(r, c) * B;
  return K;
}

/// Superoperator of rho -> B rho C under column-major vec.
inline Eigen::MatrixXcd sandwich(const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& C) {
  return kron(C.transpose(), B);
}

}  // namespace detail

/// Full-Hilbert-space dense operators of the Redfield generator, in the
/// Hamiltonian eigenbasis. Intended for small systems (time evolution,
/// superoperator assembly, cross-checks).
struct DenseGenerator {
  Eigen::VectorXd omega;                       // eigenfrequencies, global order
  double gamma_loss = 0.0;
  double emission_rate = 0.0;
  double loss_rate = 0.0;
  std::vector<Eigen::MatrixXcd> a;             // per site
  std::vector<Eigen::MatrixXcd> atilde;        // per layout site
  std::vector<int> layout;
  std::vector<Eigen::MatrixXcd> abar;          // per site, empty without loss spectrum

  Eigen::Index dim() const { return omega.size(); }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
    const Complex im(0.0, 1.0);
    Eigen::Index d = dim();
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r) out(r, c) = -im * (omega(r) - omega(c)) * rho(r, c);
    Eigen::MatrixXcd t(d, d);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (gamma_loss != 0.0) {
        t.noalias() = a[i] * rho;
        out.noalias() += gamma_loss * (t * a[i].adjoint());
        t.noalias() = a[i].adjoint() * a[i];
        out.noalias() -= 0.5 * gamma_loss * (t * rho + rho * t);
      }
      if (loss_rate != 0.0) {
        t.noalias() = abar[i] * rho;
        out.noalias() += 0.5 * loss_rate * (t * a[i].adjoint());
        t.noalias() = a[i] * rho;
        out.noalias() += 0.5 * loss_rate * (t * abar[i].adjoint());
        t.noalias() = a[i].adjoint() * abar[i];
        out.noalias() -= 0.5 * loss_rate * (t * rho + rho * t.adjoint());
      }
    }
    if (emission_rate != 0.0)
      for (std::size_t k = 0; k < layout.size(); ++k) {
        const Eigen::MatrixXcd& A = a[std::size_t(layout[k])];
        const Eigen::MatrixXcd& At = atilde[k];
        t.noalias() = rho * A;
        out.noalias() += 0.5 * emission_rate * (At.adjoint() * t);
        t.noalias() = rho * At;
        out.noalias() += 0.5 * emission_rate * (A.adjoint() * t);
        t.noalias() = A * At.adjoint();
        out.noalias() -= 0.5 * emission_rate * (t * rho + rho * t.adjoint());
      }
    return out;
  }

  /// Dense superoperator matrix acting on vec(rho), column-major.
  Eigen::MatrixXcd superoperator() const {
    using detail::sandwich;
    const Complex im(0.0, 1.0);
    Eigen::Index d = dim();
    if (d > 128) throw std::invalid_argument("superoperator: dimension budget (128) exceeded");
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd H = omega.cast<Complex>().asDiagonal();
    Eigen::MatrixXcd S = -im * (sandwich(H, id) - sandwich(id, H));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (gamma_loss != 0.0) {
        Eigen::MatrixXcd n = a[i].adjoint() * a[i];
        S += gamma_loss * (sandwich(a[i], a[i].adjoint()) -
                           0.5 * (sandwich(n, id) + sandwich(id, n)));
      }
      if (loss_rate != 0.0) {
        Eigen::MatrixXcd n = a[i].adjoint() * abar[i];
        S += 0.5 * loss_rate *
             (sandwich(abar[i], a[i].adjoint()) + sandwich(a[i], abar[i].adjoint()) -
              sandwich(n, id) - sandwich(id, n.adjoint()));
      }
    }
    if (emission_rate != 0.0)
      for (std::size_t k = 0; k < layout.size(); ++k) {
        const Eigen::MatrixXcd& A = a[std::size_t(layout[k])];
        const Eigen::MatrixXcd& At = atilde[k];
        Eigen::MatrixXcd p = A * At.adjoint();
        S += 0.5 * emission_rate *
             (sandwich(At.adjoint(), A) + sandwich(A.adjoint(), At) - sandwich(p, id) -
              sandwich(id, p.adjoint()));
      }
    return S;
  }
};

/// Embed the sector blocks of a JumpOperatorSet into full-dimension dense
/// matrices at the global sector offsets.
inline DenseGenerator assemble_dense(const JumpOperatorSet& js) {
  const EigenSystem& es = *js.es;
  const FockBasis& basis = *es.basis;
  const int nsec = es.num_sectors();
  Eigen::Index dim = Eigen::Index(basis.size());

  DenseGenerator g;
  g.gamma_loss = js.gamma_loss;
  g.emission_rate = js.emission_rate;
  g.loss_rate = js.loss_rate;
  g.layout.assign(js.sites.begin(), js.sites.end());
  g.omega.resize(dim);
  for (int N = 0; N < nsec; ++N)
    g.omega.segment(Eigen::Index(basis.sector_offset(N)), es.values[N].size()) = es.values[N];

  auto embed = [&](const auto& blocks) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    for (int N = 0; N + 1 < nsec; ++N)
      M.block(Eigen::Index(basis.sector_offset(N)), Eigen::Index(basis.sector_offset(N + 1)),
              blocks[N].rows(), blocks[N].cols()) = blocks[N];
    return M;
  };
  // the layout maps atilde to its own site's full matrix
  for (int i = 0; i < basis.sites(); ++i) g.a.push_back(embed(js.bare[i]));
  for (std::size_t k = 0; k < js.sites.size(); ++k) g.atilde.push_back(embed(js.em_mod[k]));
  if (!js.loss_mod.empty())
    for (int i = 0; i < basis.sites(); ++i) g.abar.push_back(embed(js.loss_mod[i]));
  return g;
}

}  // namespace sqpump
