#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "sqpump/fock_basis.hpp"

namespace sqpump {

struct BoseHubbardParams {
  double omega_cav = 0.0;
  double interaction = 1.0;  // U
  double hopping = 0.0;      // J
  int sites = 1;
  Boundary boundary = Boundary::open;
};

/// One Hermitian (here real-symmetric) Hamiltonian block per photon-number
/// sector.
inline std::vector<Eigen::MatrixXd> assemble_hamiltonian(const BoseHubbardParams& params,
                                                         const FockBasis& basis) {
  if (params.sites != basis.sites() || params.boundary != basis.boundary())
    throw std::invalid_argument("assemble_hamiltonian: params do not match basis");
  const double U = params.interaction, J = params.hopping, wc = params.omega_cav;
  auto bonds = basis.bonds();
  std::vector<Eigen::MatrixXd> blocks(basis.num_sectors());
  std::vector<int> occ;
  for (int N = 0; N < basis.num_sectors(); ++N) {
    Eigen::Index d = Eigen::Index(basis.sector_size(N));
    Eigen::MatrixXd& H = blocks[N];
    H.setZero(d, d);
    std::size_t off = basis.sector_offset(N);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& s = basis.state(off + j);
      double diag = 0.0;
      for (int n : s) diag += wc * n + 0.5 * U * n * (n - 1.0);
      H(j, j) = diag;
      if (J == 0.0) continue;
      for (auto [a, b] : bonds) {
        // a_b^dag a_a : move one photon a -> b
        if (s[a] > 0 && s[b] < basis.n_max()) {
          occ = s;
          double amp = std::sqrt(double(occ[a])) * std::sqrt(double(occ[b] + 1));
          occ[a] -= 1;
          occ[b] += 1;
          Eigen::Index i = Eigen::Index(basis.local_index_of(occ));
          H(i, j) -= J * amp;
          H(j, i) -= J * amp;
        }
      }
    }
  }
  return blocks;
}

/// Per-sector eigenvalues (ascending) and orthonormal eigenvectors of the
/// Bose-Hubbard blocks.
struct EigenSystem {
  std::shared_ptr<const FockBasis> basis;
  BoseHubbardParams params;
  std::vector<Eigen::VectorXd> values;   // per sector, ascending
  std::vector<Eigen::MatrixXd> vectors;  // columns are eigenvectors in the Fock basis

  std::size_t dim() const { return basis->size(); }
  int num_sectors() const { return basis->num_sectors(); }
  double value(int sector, Eigen::Index k) const { return values[sector](k); }
};

inline EigenSystem diagonalize(std::vector<Eigen::MatrixXd> blocks,
                               std::shared_ptr<const FockBasis> basis,
                               const BoseHubbardParams& params) {
  EigenSystem es;
  es.basis = std::move(basis);
  es.params = params;
  es.values.resize(blocks.size());
  es.vectors.resize(blocks.size());
  for (std::size_t N = 0; N < blocks.size(); ++N) {
    lapack_int n = lapack_int(blocks[N].rows());
    es.values[N].resize(n);
    if (n == 0) continue;
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, blocks[N].data(), n,
                                     es.values[N].data());
    if (info != 0)
      throw std::runtime_error("diagonalize: dsyevd failed in sector " + std::to_string(N) +
                               " (info=" + std::to_string(info) + ")");
    es.vectors[N] = std::move(blocks[N]);
  }
  return es;
}

inline EigenSystem diagonalize(const BoseHubbardParams& params,
                               std::shared_ptr<const FockBasis> basis) {
  return diagonalize(assemble_hamiltonian(params, *basis), basis, params);
}

struct GroundStateInfo {
  double chemical_potential = 0.0;  // omega_plus - omega_cav
  int sector = 0;
  Eigen::Index level = 0;           // index within the sector (always 0)
  Eigen::VectorXd vector;           // in the Fock basis of its sector
  double grand_energy = 0.0;        // omega_GS - omega_plus * N_GS
  bool degenerate = false;          // two sectors tie within tolerance
};

/// Minimize omega_f - omega_plus * N over all sectors and levels.
/// Ties within 1e-10*U break toward the lowest sector and set the flag.
inline GroundStateInfo grand_canonical_ground_state(const EigenSystem& es, double omega_plus) {
  const double tol = 1e-10 * std::abs(es.params.interaction);
  GroundStateInfo gs;
  gs.chemical_potential = omega_plus - es.params.omega_cav;
  double best = std::numeric_limits<double>::infinity();
  for (int N = 0; N < es.num_sectors(); ++N) {
    if (es.values[N].size() == 0) continue;
    double e = es.values[N](0) - omega_plus * N;
    if (e < best - tol) {
      best = e;
      gs.sector = N;
      gs.degenerate = false;
    } else if (e <= best + tol) {
      gs.degenerate = true;
    }
  }
  gs.grand_energy = es.values[gs.sector](0) - omega_plus * gs.sector;
  gs.level = 0;
  gs.vector = es.vectors[gs.sector].col(0);
  return gs;
}

/// Zero-momentum occupation n_{k=0} = (1/L) sum_{i,j} a_i^dag a_j,
/// number-conserving, one block per sector.
inline std::vector<SectorOperator> momentum_zero_operator(const FockBasis& basis) {
  const int L = basis.sites();
  std::vector<SectorOperator> blocks(basis.num_sectors());
  std::vector<int> occ;
  for (int N = 0; N < basis.num_sectors(); ++N) {
    Eigen::Index d = Eigen::Index(basis.sector_size(N));
    SectorOperator& op = blocks[N];
    op.source = op.target = N;
    op.mat.resize(d, d);
    std::vector<Eigen::Triplet<double>> trips;
    std::size_t off = basis.sector_offset(N);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& s = basis.state(off + j);
      double diag = 0.0;
      for (int n : s) diag += n;  // i == j terms
      trips.emplace_back(j, j, diag / L);
      for (int from = 0; from < L; ++from) {
        if (s[from] == 0) continue;
        for (int to = 0; to < L; ++to) {
          if (to == from || s[to] >= basis.n_max()) continue;
          occ = s;
          double amp = std::sqrt(double(occ[from])) * std::sqrt(double(occ[to] + 1));
          occ[from] -= 1;
          occ[to] += 1;
          trips.emplace_back(Eigen::Index(basis.local_index_of(occ)), j, amp / L);
        }
      }
    }
    op.mat.setFromTriplets(trips.begin(), trips.end());
  }
  return blocks;
}

}  // namespace sqpump
