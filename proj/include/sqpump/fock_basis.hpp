#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sqpump {

enum class Boundary { open, periodic };

using SparseReal = Eigen::SparseMatrix<double>;

/// Truncated occupation-number basis of an L-site bosonic chain, stored
/// sector-by-sector in total photon number N. Global state order is
/// (N ascending, occupation vector lexicographic within the sector).
class FockBasis {
 public:
  FockBasis(int sites, int n_max, Boundary boundary)
      : sites_(sites), n_max_(n_max), boundary_(boundary) {
    if (sites < 1 || n_max < 1) throw std::invalid_argument("build_basis: need L >= 1 and n_max >= 1");
    if (boundary == Boundary::periodic && sites < 3)
      throw std::invalid_argument("build_basis: periodic boundary requires L >= 3");
    double log_dim = sites * std::log2(double(n_max + 1));
    if (log_dim > 24.0)
      throw std::invalid_argument("build_basis: Hilbert dimension exceeds the 2^24 budget");

    std::size_t dim = 1;
    for (int i = 0; i < sites; ++i) dim *= std::size_t(n_max + 1);

    int nsec = sites * n_max + 1;
    std::vector<std::vector<std::vector<int>>> by_sector(nsec);
    std::vector<int> occ(sites, 0);
    // mixed-radix enumeration is already lexicographic per sector
    for (std::size_t code = 0; code < dim; ++code) {
      std::size_t c = code;
      int total = 0;
      for (int i = sites - 1; i >= 0; --i) {
        occ[i] = int(c % (n_max + 1));
        c /= (n_max + 1);
        total += occ[i];
      }
      by_sector[total].push_back(occ);
    }

    sector_offset_.resize(nsec + 1, 0);
    states_.reserve(dim);
    code_to_index_.assign(dim, 0);
    for (int N = 0; N < nsec; ++N) {
      sector_offset_[N] = states_.size();
      auto& sec = by_sector[N];
      std::sort(sec.begin(), sec.end());
      for (auto& s : sec) {
        code_to_index_[encode(s)] = uint32_t(states_.size());
        states_.push_back(s);
      }
    }
    sector_offset_[nsec] = states_.size();
  }

  int sites() const { return sites_; }
  int n_max() const { return n_max_; }
  Boundary boundary() const { return boundary_; }
  std::size_t size() const { return states_.size(); }
  int num_sectors() const { return sites_ * n_max_ + 1; }

  const std::vector<int>& state(std::size_t idx) const { return states_[idx]; }
  std::size_t sector_offset(int N) const { return sector_offset_[N]; }
  std::size_t sector_size(int N) const { return sector_offset_[N + 1] - sector_offset_[N]; }

  std::size_t index_of(const std::vector<int>& occ) const { return code_to_index_[encode(occ)]; }
  /// index within the state's own sector
  std::size_t local_index_of(const std::vector<int>& occ) const {
    int N = 0;
    for (int n : occ) N += n;
    return index_of(occ) - sector_offset_[N];
  }

  std::vector<std::pair<int, int>> bonds() const {
    std::vector<std::pair<int, int>> b;
    for (int i = 0; i + 1 < sites_; ++i) b.emplace_back(i, i + 1);
    if (boundary_ == Boundary::periodic) b.emplace_back(sites_ - 1, 0);
    return b;
  }

 private:
  std::size_t encode(const std::vector<int>& occ) const {
    std::size_t code = 0;
    for (int i = 0; i < sites_; ++i) code = code * (n_max_ + 1) + occ[i];
    return code;
  }

  int sites_;
  int n_max_;
  Boundary boundary_;
  std::vector<std::vector<int>> states_;
  std::vector<std::size_t> sector_offset_;
  std::vector<uint32_t> code_to_index_;
};

/// One sparse block of an operator that maps sector `source` into `target`.
struct SectorOperator {
  int source = 0;
  int target = 0;
  SparseReal mat;  // (target-state, source-state)
};

inline FockBasis build_basis(int sites, int n_max, Boundary boundary) {
  return FockBasis(sites, n_max, boundary);
}

/// Site-local annihilation operator, one block per source sector N >= 1.
inline std::vector<SectorOperator> annihilation_operator(const FockBasis& basis, int site) {
  if (site < 0 || site >= basis.sites())
    throw std::out_of_range("annihilation_operator: site index out of range");
  std::vector<SectorOperator> blocks;
  blocks.reserve(basis.num_sectors() - 1);
  std::vector<int> occ;
  for (int N = 1; N < basis.num_sectors(); ++N) {
    SectorOperator op;
    op.source = N;
    op.target = N - 1;
    op.mat.resize(Eigen::Index(basis.sector_size(N - 1)), Eigen::Index(basis.sector_size(N)));
    std::vector<Eigen::Triplet<double>> trips;
    std::size_t off = basis.sector_offset(N);
    for (std::size_t j = 0; j < basis.sector_size(N); ++j) {
      occ = basis.state(off + j);
      int n = occ[site];
      if (n == 0) continue;
      occ[site] = n - 1;
      trips.emplace_back(Eigen::Index(basis.local_index_of(occ)), Eigen::Index(j), std::sqrt(double(n)));
    }
    op.mat.setFromTriplets(trips.begin(), trips.end());
    blocks.push_back(std::move(op));
  }
  return blocks;
}

constexpr int kTotalSite = -1;

/// Diagonal occupation operator for one site, or the total photon number
/// when `site == kTotalSite`.
inline std::vector<SectorOperator> number_operator(const FockBasis& basis, int site) {
  if (site != kTotalSite && (site < 0 || site >= basis.sites()))
    throw std::out_of_range("number_operator: site index out of range");
  std::vector<SectorOperator> blocks;
  blocks.reserve(basis.num_sectors());
  for (int N = 0; N < basis.num_sectors(); ++N) {
    SectorOperator op;
    op.source = N;
    op.target = N;
    Eigen::Index d = Eigen::Index(basis.sector_size(N));
    op.mat.resize(d, d);
    std::size_t off = basis.sector_offset(N);
    for (Eigen::Index j = 0; j < d; ++j) {
      double v = (site == kTotalSite) ? double(N) : double(basis.state(off + j)[site]);
      if (v != 0.0) op.mat.insert(j, j) = v;
    }
    op.mat.makeCompressed();
    blocks.push_back(std::move(op));
  }
  return blocks;
}

}  // namespace sqpump
