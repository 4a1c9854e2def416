#include "aklt/hamiltonian.hpp"

#include "aklt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <thread>

namespace aklt {

namespace {

constexpr double kDropTol = 1e-13;

int bits_for(int d) {
  int b = 1;
  while ((1 << b) < d) ++b;
  return b;
}

// counts[n][t]: configurations of n sites with levels in [0, two_s] summing to t.
std::vector<std::vector<std::uint64_t>> level_sum_counts(int max_sites, int two_s) {
  std::vector<std::vector<std::uint64_t>> counts(max_sites + 1);
  counts[0] = {1};
  for (int n = 1; n <= max_sites; ++n) {
    counts[n].assign(n * two_s + 1, 0);
    for (int t = 0; t <= (n - 1) * two_s; ++t)
      for (int l = 0; l <= two_s; ++l) counts[n][t + l] += counts[n - 1][t];
  }
  return counts;
}

void validate_sector(int num_sites, SpinValue s, int twice_total_sz) {
  if (num_sites < 1) throw DomainError("sector: num_sites must be >= 1");
  const int span = num_sites * s.twice_s();
  if (std::abs(twice_total_sz) > span)
    throw DomainError("sector: |2Sz| = " + std::to_string(std::abs(twice_total_sz)) +
                      " exceeds " + std::to_string(span));
  if ((twice_total_sz + span) % 2 != 0)
    throw DomainError("sector: parity of 2Sz does not match num_sites * 2s");
  if (bits_for(s.local_dim()) * num_sites > 63)
    throw DomainError("sector: too many sites for 64-bit state codes");
}

// Digits of `code` (fields of `bits`) are all <= two_s, and return their sum.
std::optional<int> digit_sum(std::uint64_t code, int fields, int bits, int two_s) {
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  int sum = 0;
  for (int f = 0; f < fields; ++f) {
    const int d = static_cast<int>((code >> (f * bits)) & mask);
    if (d > two_s) return std::nullopt;
    sum += d;
  }
  return sum;
}

}  // namespace

std::uint64_t SectorBasis::dimension(int num_sites, SpinValue s, int twice_total_sz) {
  validate_sector(num_sites, s, twice_total_sz);
  const auto counts = level_sum_counts(num_sites, s.twice_s());
  return counts[num_sites][(twice_total_sz + num_sites * s.twice_s()) / 2];
}

std::vector<int> SectorBasis::sector_labels(int num_sites, SpinValue s) {
  std::vector<int> out;
  const int span = num_sites * s.twice_s();
  for (int m = -span; m <= span; m += 2) out.push_back(m);
  return out;
}

SectorBasis::SectorBasis(int num_sites, SpinValue s, int twice_total_sz)
    : num_sites_(num_sites), twice_s_(s.twice_s()), twice_total_sz_(twice_total_sz) {
  validate_sector(num_sites, s, twice_total_sz);
  level_sum_ = (twice_total_sz + num_sites * twice_s_) / 2;
  bits_ = bits_for(s.local_dim());
  mask_ = (std::uint64_t{1} << bits_) - 1;
  lo_sites_ = num_sites / 2;
  lo_bits_ = bits_ * lo_sites_;
  lo_mask_ = (std::uint64_t{1} << lo_bits_) - 1;
  const int hi_sites = num_sites - lo_sites_;
  const auto counts = level_sum_counts(num_sites, twice_s_);

  // Depth-first enumeration in ascending code order.
  states_.reserve(counts[num_sites][level_sum_]);
  std::vector<int> lv(num_sites, 0);
  auto recurse = [&](auto&& self, int site, int remaining, std::uint64_t code) -> void {
    if (site == num_sites) {
      states_.push_back(code);
      return;
    }
    const int rest = num_sites - site - 1;
    for (int l = 0; l <= twice_s_; ++l) {
      const int after = remaining - l;
      if (after < 0) break;
      if (after > rest * twice_s_) continue;
      self(self, site + 1, after, (code << bits_) | static_cast<std::uint64_t>(l));
    }
  };
  recurse(recurse, 0, level_sum_, 0);

  // Lower half: rank among codes with the same digit sum.
  lo_rank_.assign(std::size_t{1} << lo_bits_, 0);
  std::vector<std::uint32_t> seen(lo_sites_ * twice_s_ + 1, 0);
  for (std::uint64_t c = 0; c <= lo_mask_; ++c) {
    if (auto sum = digit_sum(c, lo_sites_, bits_, twice_s_)) lo_rank_[c] = seen[*sum]++;
  }
  // Upper half: number of sector states whose upper half precedes this one.
  hi_offset_.assign(std::size_t{1} << (bits_ * hi_sites), -1);
  std::int64_t acc = 0;
  for (std::uint64_t c = 0; c < hi_offset_.size(); ++c) {
    const auto sum = digit_sum(c, hi_sites, bits_, twice_s_);
    if (!sum) continue;
    const int rem = level_sum_ - *sum;
    if (rem < 0 || rem > lo_sites_ * twice_s_) continue;
    hi_offset_[c] = acc;
    acc += static_cast<std::int64_t>(counts[lo_sites_][rem]);
  }
}

std::optional<std::size_t> SectorBasis::index_of(std::uint64_t code) const {
  if (bits_ * num_sites_ < 64 && (code >> (bits_ * num_sites_)) != 0) return std::nullopt;
  const auto sum = digit_sum(code, num_sites_, bits_, twice_s_);
  if (!sum || *sum != level_sum_) return std::nullopt;
  return rank(code);
}

std::optional<std::size_t> SectorBasis::search(std::uint64_t code) const {
  const auto it = std::lower_bound(states_.begin(), states_.end(), code);
  if (it == states_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::uint64_t SectorBasis::encode(std::span<const int> levels) const {
  if (static_cast<int>(levels.size()) != num_sites_)
    throw StructuralError("encode: wrong number of site levels");
  std::uint64_t code = 0;
  for (int l : levels) {
    if (l < 0 || l > twice_s_) throw DomainError("encode: level out of range");
    code = (code << bits_) | static_cast<std::uint64_t>(l);
  }
  return code;
}

std::vector<int> SectorBasis::levels(std::size_t i) const {
  std::vector<int> out(num_sites_);
  for (int site = 0; site < num_sites_; ++site) out[site] = level(states_[i], site);
  return out;
}

SectorHamiltonian::SectorHamiltonian(const LatticeGraph& graph, SpinValue s, int J,
                                     std::shared_ptr<const SectorBasis> basis,
                                     AssembleOptions opts)
    : basis_(std::move(basis)), twice_s_(s.twice_s()), J_(J), threads_(std::max(1, opts.threads)) {
  if (!basis_) throw StructuralError("assemble: null sector basis");
  if (graph.num_sites() != basis_->num_sites())
    throw StructuralError("assemble: graph has " + std::to_string(graph.num_sites()) +
                          " sites but the sector has " + std::to_string(basis_->num_sites()));
  if (basis_->twice_s() != s.twice_s())
    throw StructuralError("assemble: sector spin differs from model spin");
  local_ = spin_projector(s, J).entries;

  const int d = s.local_dim();
  for (const auto& e : graph.edges()) {
    terms_.push_back({graph.site_index(e.a), graph.site_index(e.b), e.weight});
  }
  diag_.assign(terms_.size() * d * d, 0.0);
  off_begin_.reserve(terms_.size() * d * d + 1);
  for (const auto& t : terms_) {
    const int shi = basis_->shift(t.site_i), shj = basis_->shift(t.site_j);
    for (int la = 0; la < d; ++la)
      for (int lb = 0; lb < d; ++lb) {
        const std::size_t slot = off_begin_.size();
        off_begin_.push_back(static_cast<std::uint32_t>(off_.size()));
        const int row = (twice_s_ - la) * d + (twice_s_ - lb);
        for (int la2 = 0; la2 < d; ++la2)
          for (int lb2 = 0; lb2 < d; ++lb2) {
            const double v = t.weight * local_(row, (twice_s_ - la2) * d + (twice_s_ - lb2));
            if (std::abs(v) <= kDropTol) continue;
            if (la2 + lb2 != la + lb)
              throw StructuralError("assemble: local term does not conserve total Sz");
            if (la2 == la && lb2 == lb) {
              diag_[slot] = v;
              continue;
            }
            const std::int64_t delta = (static_cast<std::int64_t>(la2 - la) << shi) +
                                       (static_cast<std::int64_t>(lb2 - lb) << shj);
            off_.push_back({delta, v});
          }
      }
  }
  off_begin_.push_back(static_cast<std::uint32_t>(off_.size()));
  if (dim() < opts.explicit_cutoff) explicit_ = build_from_tables();
}

void SectorHamiltonian::check_length(std::size_t nx, std::size_t ny) const {
  if (nx != dim() || ny != dim())
    throw StructuralError("apply: vector length " + std::to_string(nx) + "/" +
                          std::to_string(ny) + " does not match sector dimension " +
                          std::to_string(dim()));
}

void SectorHamiltonian::apply_rows(std::span<const double> x, std::span<double> y,
                                   std::size_t lo, std::size_t hi) const {
  const SectorBasis& b = *basis_;
  const int d = twice_s_ + 1;
  const std::size_t dd = static_cast<std::size_t>(d) * d;
  for (std::size_t r = lo; r < hi; ++r) {
    const std::uint64_t code = b.state(r);
    double diag = 0.0, acc = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const std::size_t slot = t * dd + b.level(code, terms_[t].site_i) * d +
                               b.level(code, terms_[t].site_j);
      diag += diag_[slot];
      for (std::uint32_t k = off_begin_[slot]; k < off_begin_[slot + 1]; ++k) {
        const Transition& tr = off_[k];
        acc += tr.value * x[b.rank(code + static_cast<std::uint64_t>(tr.delta))];
      }
    }
    y[r] = diag * x[r] + acc;
  }
}

void SectorHamiltonian::apply_matrix_free(std::span<const double> x, std::span<double> y) const {
  check_length(x.size(), y.size());
  const std::size_t n = dim();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads_), std::max<std::size_t>(1, n / 4096));
  if (workers <= 1) {
    apply_rows(x, y, 0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back([=, this] { apply_rows(x, y, lo, hi); });
  }
}

void SectorHamiltonian::apply_explicit(std::span<const double> x, std::span<double> y) const {
  check_length(x.size(), y.size());
  if (!explicit_) throw StructuralError("apply_explicit: sector has no stored matrix");
  const auto& m = *explicit_;
  const auto* outer = m.outerIndexPtr();
  const auto* inner = m.innerIndexPtr();
  const auto* vals = m.valuePtr();
  const auto rows = static_cast<std::size_t>(m.rows());
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      double acc = 0.0;
      for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += vals[k] * x[inner[k]];
      y[r] = acc;
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads_),
                                                    std::max<std::size_t>(1, rows / 4096));
  if (workers <= 1) {
    run(0, rows);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (rows + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(rows, lo + chunk);
    if (lo < hi) pool.emplace_back([=, &run] { run(lo, hi); });
  }
}

void SectorHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  if (explicit_)
    apply_explicit(x, y);
  else
    apply_matrix_free(x, y);
}

std::vector<double> SectorHamiltonian::apply(std::span<const double> x) const {
  std::vector<double> y(x.size());
  apply(x, y);
  return y;
}

SectorHamiltonian::SparseMatrix SectorHamiltonian::build_sparse() const {
  const SectorBasis& b = *basis_;
  const int d = twice_s_ + 1;
  std::vector<Eigen::Triplet<double, std::int64_t>> trips;
  trips.reserve(dim() * terms_.size() * 2);
  for (std::size_t col = 0; col < dim(); ++col) {
    const std::uint64_t code = b.state(col);
    for (const auto& t : terms_) {
      const int la = b.level(code, t.site_i), lb = b.level(code, t.site_j);
      const int src = (twice_s_ - la) * d + (twice_s_ - lb);
      for (int la2 = 0; la2 < d; ++la2) {
        const int lb2 = la + lb - la2;
        if (lb2 < 0 || lb2 >= d) continue;
        const double v = t.weight * local_((twice_s_ - la2) * d + (twice_s_ - lb2), src);
        if (std::abs(v) <= kDropTol) continue;
        const auto row = b.search(b.with_level(b.with_level(code, t.site_i, la2), t.site_j, lb2));
        if (!row) throw StructuralError("build_sparse: transition left the sector");
        trips.emplace_back(static_cast<std::int64_t>(*row), static_cast<std::int64_t>(col), v);
      }
    }
  }
  SparseMatrix m(static_cast<std::int64_t>(dim()), static_cast<std::int64_t>(dim()));
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

SectorHamiltonian::SparseMatrix SectorHamiltonian::build_from_tables() const {
  const SectorBasis& b = *basis_;
  const int d = twice_s_ + 1;
  const std::size_t dd = static_cast<std::size_t>(d) * d;
  const std::size_t n = dim();
  auto slot_of = [&](std::uint64_t code, std::size_t t) {
    return t * dd + b.level(code, terms_[t].site_i) * d + b.level(code, terms_[t].site_j);
  };
  std::vector<std::int64_t> outer(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint64_t code = b.state(r);
    std::int64_t count = 1;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const std::size_t slot = slot_of(code, t);
      count += off_begin_[slot + 1] - off_begin_[slot];
    }
    outer[r + 1] = outer[r] + count;
  }
  SparseMatrix m(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n));
  m.resizeNonZeros(outer[n]);
  std::int64_t* inner = m.innerIndexPtr();
  double* values = m.valuePtr();
  std::vector<std::pair<std::int64_t, double>> row;
  std::int64_t pos = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint64_t code = b.state(r);
    row.clear();
    double diag = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const std::size_t slot = slot_of(code, t);
      diag += diag_[slot];
      for (std::uint32_t k = off_begin_[slot]; k < off_begin_[slot + 1]; ++k)
        row.emplace_back(static_cast<std::int64_t>(b.rank(code + static_cast<std::uint64_t>(off_[k].delta))),
                         off_[k].value);
    }
    row.emplace_back(static_cast<std::int64_t>(r), diag);
    std::sort(row.begin(), row.end());
    const std::int64_t start = pos;
    for (const auto& [col, v] : row) {
      if (pos > start && inner[pos - 1] == col) {
        values[pos - 1] += v;
      } else {
        inner[pos] = col;
        values[pos] = v;
        ++pos;
      }
    }
    outer[r + 1] = pos;
  }
  std::copy(outer.begin(), outer.end(), m.outerIndexPtr());
  m.resizeNonZeros(pos);
  return m;
}

Eigen::MatrixXd SectorHamiltonian::to_dense() const {
  if (explicit_) return Eigen::MatrixXd(*explicit_);
  return Eigen::MatrixXd(build_sparse());
}

SectorHamiltonian assemble(const LatticeGraph& graph, SpinValue s, int J, int twice_total_sz,
                           AssembleOptions opts) {
  auto basis = std::make_shared<const SectorBasis>(graph.num_sites(), s, twice_total_sz);
  return SectorHamiltonian(graph, s, J, std::move(basis), opts);
}

void write_matrix_market(std::ostream& out, const SectorHamiltonian::SparseMatrix& m) {
  std::size_t nnz = 0;
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (SectorHamiltonian::SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (it.col() <= it.row()) ++nnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n' << std::setprecision(17);
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (SectorHamiltonian::SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (it.col() <= it.row()) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace aklt
