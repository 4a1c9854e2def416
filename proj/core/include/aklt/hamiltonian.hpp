#pragma once

#include "aklt/lattice.hpp"
#include "aklt/spin_algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace aklt {

/// Fixed total-Sz sector of num_sites spins. States are packed integers with
/// one field per site holding the level m + s in [0, 2s]; site 0 occupies the
/// most significant field, so ascending codes are lexicographic in the local
/// m-values.
class SectorBasis {
 public:
  SectorBasis(int num_sites, SpinValue s, int twice_total_sz);

  int num_sites() const noexcept { return num_sites_; }
  int twice_s() const noexcept { return twice_s_; }
  int twice_total_sz() const noexcept { return twice_total_sz_; }
  std::size_t size() const noexcept { return states_.size(); }
  int bits_per_site() const noexcept { return bits_; }

  std::uint64_t state(std::size_t i) const { return states_[i]; }
  const std::vector<std::uint64_t>& states() const noexcept { return states_; }

  int level(std::uint64_t code, int site) const noexcept {
    return static_cast<int>((code >> shift(site)) & mask_);
  }
  std::uint64_t with_level(std::uint64_t code, int site, int level) const noexcept {
    const int sh = shift(site);
    return (code & ~(mask_ << sh)) | (static_cast<std::uint64_t>(level) << sh);
  }
  int shift(int site) const noexcept { return bits_ * (num_sites_ - 1 - site); }

  /// Position of `code` via the two-table ranking; nullopt when the code is
  /// malformed or lies in another sector.
  std::optional<std::size_t> index_of(std::uint64_t code) const;
  /// Ranking without validation; `code` must belong to the sector.
  std::size_t rank(std::uint64_t code) const noexcept {
    return static_cast<std::size_t>(hi_offset_[code >> lo_bits_]) + lo_rank_[code & lo_mask_];
  }
  /// Reference lookup by binary search over the sorted state list.
  std::optional<std::size_t> search(std::uint64_t code) const;

  std::uint64_t encode(std::span<const int> levels) const;
  std::vector<int> levels(std::size_t i) const;

  /// Number of states in the sector, without enumerating it.
  static std::uint64_t dimension(int num_sites, SpinValue s, int twice_total_sz);
  /// Sectors 2Sz = -L*2s, -L*2s + 2, ..., L*2s.
  static std::vector<int> sector_labels(int num_sites, SpinValue s);
  /// 0 for integer total spin, 1 for half-integer.
  static int minimal_twice_sz(int num_sites, SpinValue s) {
    return (num_sites * s.twice_s()) % 2;
  }

 private:
  int num_sites_;
  int twice_s_;
  int twice_total_sz_;
  int level_sum_;
  int bits_;
  std::uint64_t mask_;
  int lo_sites_;
  int lo_bits_;
  std::uint64_t lo_mask_;
  std::vector<std::uint64_t> states_;
  std::vector<std::int64_t> hi_offset_;  // -1 marks an infeasible prefix
  std::vector<std::uint32_t> lo_rank_;
};

struct HamiltonianTerm {
  int site_i;
  int site_j;
  double weight;
};

struct AssembleOptions {
  /// Sectors below this dimension also store an explicit CSR matrix.
  std::size_t explicit_cutoff = 2'000'000;
  /// Worker threads for apply(); each owns a contiguous block of output rows.
  int threads = 1;
};

/// H = sum_e w_e P^(J)_e restricted to one Sz sector. Immutable after
/// assembly. Output row i of apply() is a fixed-order sum over the terms, so
/// results do not depend on the thread count.
class SectorHamiltonian {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

  SectorHamiltonian(const LatticeGraph& graph, SpinValue s, int J,
                    std::shared_ptr<const SectorBasis> basis, AssembleOptions opts = {});

  std::size_t dim() const noexcept { return basis_->size(); }
  const SectorBasis& basis() const noexcept { return *basis_; }
  const std::vector<HamiltonianTerm>& terms() const noexcept { return terms_; }
  const Eigen::MatrixXd& local_matrix() const noexcept { return local_; }
  int twice_s() const noexcept { return twice_s_; }
  int J() const noexcept { return J_; }
  bool is_explicit() const noexcept { return explicit_.has_value(); }
  int threads() const noexcept { return threads_; }

  /// y = H x using the stored matrix when present, else matrix-free.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  void apply_matrix_free(std::span<const double> x, std::span<double> y) const;
  /// Requires is_explicit().
  void apply_explicit(std::span<const double> x, std::span<double> y) const;

  /// Builds the sector matrix by scattering columns with binary-search lookup
  /// (independent of the ranking tables used by the matrix-free path).
  SparseMatrix build_sparse() const;
  Eigen::MatrixXd to_dense() const;

 private:
  struct Transition {
    std::int64_t delta;  // added to the state code
    double value;
  };
  // For term t and local row (la, lb), slot = t * d * d + la * d + lb:
  // diagonal element in diag_[slot], off-diagonal nonzeros in
  // off_[off_begin_[slot], off_begin_[slot + 1]).

  void check_length(std::size_t nx, std::size_t ny) const;
  SparseMatrix build_from_tables() const;
  void apply_rows(std::span<const double> x, std::span<double> y, std::size_t lo,
                  std::size_t hi) const;

  std::shared_ptr<const SectorBasis> basis_;
  int twice_s_;
  int J_;
  int threads_;
  Eigen::MatrixXd local_;
  std::vector<HamiltonianTerm> terms_;
  std::vector<double> diag_;
  std::vector<std::uint32_t> off_begin_;
  std::vector<Transition> off_;
  std::optional<SparseMatrix> explicit_;
};

/// Convenience: assemble on a freshly enumerated sector.
SectorHamiltonian assemble(const LatticeGraph& graph, SpinValue s, int J, int twice_total_sz,
                           AssembleOptions opts = {});

/// Matrix Market coordinate export (real symmetric, lower triangle).
void write_matrix_market(std::ostream& out, const SectorHamiltonian::SparseMatrix& m);

}  // namespace aklt
