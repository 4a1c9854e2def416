#include "aklt/eigensolve.hpp"

#include "aklt/errors.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace aklt {

namespace {

using Vec = std::vector<double>;
using Clock = std::chrono::steady_clock;

Eigen::Map<const Eigen::VectorXd> view(const Vec& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}
Eigen::Map<Eigen::VectorXd> view(Vec& v) { return {v.data(), static_cast<Eigen::Index>(v.size())}; }

double norm(const Vec& v) { return view(v).norm(); }

// Classical Gram-Schmidt, two passes. Coefficients are accumulated into
// `coef` (one per vector of `set`) when provided.
void orthogonalize(Vec& w, const std::vector<Vec>& set, std::vector<double>* coef = nullptr) {
  if (coef) coef->assign(set.size(), 0.0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double c = view(set[i]).dot(view(w));
      view(w) -= c * view(set[i]);
      if (coef) (*coef)[i] += c;
    }
  }
}

Vec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Vec v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

struct EngineResult {
  Vec x;
  double value = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool empty = false;  // no Ritz value above the floor in an invariant subspace
  int restarts = 0;
  Vec next;  // Ritz vector just above the converged one, when available
};

class Engine {
 public:
  Engine(const LinearOperator& op, const LanczosOptions& opts, std::uint64_t& matvecs)
      : op_(op), opts_(opts), matvecs_(matvecs), started_(Clock::now()) {}

  // Lowest Ritz pair above `floor` in the complement of `locked`, by thick
  // restarted Lanczos: each restart keeps the lowest Ritz vectors above the
  // floor together with the residual direction. With `filter` the start
  // vector is replaced by op(x) first.
  EngineResult run(const std::vector<Vec>& locked, Vec x, double floor, bool filter) {
    EngineResult best;
    const std::size_t n = op_.dim;
    const auto rows = static_cast<Eigen::Index>(n);
    const std::size_t free_dim = n - std::min(n, locked.size());
    const std::size_t per_vec = std::max<std::size_t>(1, n * sizeof(double));
    const std::size_t budget_vecs = opts_.memory_budget_bytes / per_vec;
    const std::size_t room = budget_vecs > locked.size() + 3 ? budget_vecs - locked.size() - 3 : 2;
    // The basis holds m + 1 columns and a restart needs up to m / 2 more.
    const int m = static_cast<int>(std::max<std::size_t>(
        1, std::min({static_cast<std::size_t>(opts_.max_basis), free_dim,
                     std::max<std::size_t>(2 * room / 3, 2)})));

    if (filter) {
      Vec hx(n);
      op_.apply(x, hx);
      ++matvecs_;
      x = std::move(hx);
    }
    if (!locked.empty()) orthogonalize(x, locked);
    if (norm(x) == 0.0) {
      best.empty = true;
      return best;
    }
    normalize(x);

    Eigen::MatrixXd basis(rows, m + 1);
    basis.col(0) = view(x);
    x = Vec();
    auto col_span = [&](int j) { return std::span<double>(basis.col(j).data(), n); };
    auto to_vec = [](const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); };
    auto orthogonalize_locked = [&](int j) {
      if (locked.empty()) return;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& l : locked) basis.col(j) -= view(l).dot(basis.col(j)) * view(l);
    };
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m + 1);
    int kept = 0;  // leading basis columns that are Ritz vectors from the last cycle
    for (int cycle = 0; cycle <= opts_.max_restarts; ++cycle) {
      best.restarts = cycle;
      double beta_last = 0.0;
      bool breakdown = false;
      int nb = kept;
      for (int j = kept; j < m; ++j) {
        op_.apply(col_span(j), col_span(j + 1));
        ++matvecs_;
        Eigen::VectorXd coef;
        if (j == kept) {
          coef = project_out(basis, j + 1, j + 1);
        } else {
          // Three-term recurrence, then one full reorthogonalization pass.
          const double alpha = basis.col(j).dot(basis.col(j + 1));
          const double beta_prev = beta_last;
          basis.col(j + 1) -= alpha * basis.col(j) + beta_prev * basis.col(j - 1);
          coef = project_out(basis, j + 1, j + 1, 1);
          coef(j) += alpha;
          coef(j - 1) += beta_prev;
        }
        for (int i = 0; i <= j; ++i) hess(i, j) = coef(i);
        for (int i = 0; i < j; ++i) hess(j, i) = coef(i);
        orthogonalize_locked(j + 1);
        const double beta = basis.col(j + 1).norm();
        nb = j + 1;
        const double scale = std::max(1.0, std::abs(hess(j, j)));
        if (beta <= 1e-12 * scale) {
          breakdown = true;
          beta_last = 0.0;
          break;
        }
        beta_last = beta;
        basis.col(j + 1) /= beta;  // the residual direction
        if ((j + 1 - kept) % 8 == 0 && j + 1 < m && converged_early(hess, nb, beta, floor)) break;
      }
      if (static_cast<std::size_t>(nb) >= free_dim) breakdown = true;

      Eigen::MatrixXd t = hess.topLeftCorner(nb, nb);
      t = 0.5 * (t + t.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
      const auto& theta = eig.eigenvalues();
      const auto& s = eig.eigenvectors();
      // Coupling of each Ritz vector to the residual direction.
      const Eigen::VectorXd coupling = s.row(nb - 1).transpose();
      int target = -1;
      for (int i = 0; i < nb; ++i)
        if (theta(i) > floor) {
          target = i;
          break;
        }
      if (target < 0) {
        if (breakdown) {
          best.empty = true;
          return best;
        }
        target = nb - 1;
      }
      auto ritz_vector = [&](int col) {
        Eigen::VectorXd v = basis.leftCols(nb) * s.col(col);
        v.normalize();
        return v;
      };
      const double estimate = beta_last * std::abs(coupling(target));
      report(cycle, theta(target), estimate);

      if (estimate < opts_.tol || breakdown) {
        const Eigen::VectorXd ritz = ritz_vector(target);
        Eigen::VectorXd hx(rows);
        op_.apply(std::span<const double>(ritz.data(), n), std::span<double>(hx.data(), n));
        ++matvecs_;
        const double rq = ritz.dot(hx);
        const double res = (hx - rq * ritz).norm();
        if (!best.converged && (best.x.empty() || res < best.residual)) {
          best.x = to_vec(ritz);
          best.value = rq;
          best.residual = res;
        }
        if (res < opts_.tol && rq > floor) {
          best.converged = true;
          if (target + 1 < nb) best.next = to_vec(ritz_vector(target + 1));
          return best;
        }
        if (breakdown) {
          // Invariant subspace reached without a verified pair: restart fresh
          // from the current Ritz vector.
          basis.col(0) = ritz;
          hess.setZero();
          kept = 0;
          continue;
        }
      } else if (best.x.empty() || estimate < best.residual) {
        best.x = to_vec(ritz_vector(target));
        best.value = theta(target);
        best.residual = estimate;
      }

      // Thick restart: keep the lowest Ritz vectors above the floor.
      const int max_keep = std::max(1, std::min(m / 2, nb - 1));
      kept = std::min(max_keep, nb - target);
      {
        const Eigen::MatrixXd block = basis.leftCols(nb) * s.middleCols(target, kept);
        basis.col(kept) = basis.col(nb);
        basis.leftCols(kept) = block;
      }
      Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (int q = 0; q < kept; ++q) {
        h2(q, q) = theta(target + q);
        h2(kept, q) = h2(q, kept) = beta_last * coupling(target + q);
      }
      hess = std::move(h2);
      // Re-orthonormalize the kept block against roundoff drift.
      for (int q = 0; q <= kept; ++q) {
        project_out(basis, q, q);
        orthogonalize_locked(q);
        basis.col(q).normalize();
      }
      maybe_checkpoint(basis.col(0), locked, theta(target));
    }
    return best;
  }

 private:
  // Cheap test on the projected matrix: has the wanted Ritz pair already
  // reached the tolerance?
  bool converged_early(const Eigen::MatrixXd& hess, int nb, double beta, double floor) const {
    Eigen::MatrixXd t = hess.topLeftCorner(nb, nb);
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    for (int i = 0; i < nb; ++i)
      if (eig.eigenvalues()(i) > floor)
        return beta * std::abs(eig.eigenvectors()(nb - 1, i)) < 0.1 * opts_.tol;
    return false;
  }

  static void normalize(Vec& v) {
    const double nv = norm(v);
    if (nv > 0.0) view(v) /= nv;
  }

  void report(int cycle, double ritz, double estimate) const {
    if (!opts_.progress) return;
    nlohmann::json rec{{"event", "lanczos_cycle"}, {"label", opts_.label},
                       {"cycle", cycle},          {"matvecs", matvecs_},
                       {"ritz", ritz},            {"residual_estimate", estimate}};
    *opts_.progress << rec.dump() << '\n' << std::flush;
  }

  // Classical Gram-Schmidt of column `j` against the first `k`
  // columns; returns the accumulated coefficients.
  static Eigen::VectorXd project_out(Eigen::MatrixXd& basis, int j, int k, int passes = 2) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(k);
    if (k == 0) return total;
    for (int pass = 0; pass < passes; ++pass) {
      const Eigen::VectorXd c = basis.leftCols(k).transpose() * basis.col(j);
      basis.col(j).noalias() -= basis.leftCols(k) * c;
      total += c;
    }
    return total;
  }

  void maybe_checkpoint(const Eigen::VectorXd& x, const std::vector<Vec>& locked, double ritz) {
    if (!opts_.checkpoint) return;
    const double elapsed = std::chrono::duration<double>(Clock::now() - started_).count();
    if (elapsed < opts_.checkpoint->wall_seconds) return;
    CheckpointHeader h = opts_.checkpoint->identity;
    h.dim = op_.dim;
    h.seed = opts_.seed;
    h.matvecs = matvecs_;
    h.ritz_value = ritz;
    std::vector<Vec> vecs{Vec(x.data(), x.data() + x.size())};
    vecs.insert(vecs.end(), locked.begin(), locked.end());
    write_checkpoint(opts_.checkpoint->path, h, vecs);
    throw CheckpointSaved("wall time exceeded; state saved to " +
                          opts_.checkpoint->path.string());
  }

  const LinearOperator& op_;
  const LanczosOptions& opts_;
  std::uint64_t& matvecs_;
  Clock::time_point started_;
};

// Restores a compatible checkpoint: returns the saved vectors or nothing.
std::vector<Vec> resume_vectors(const LanczosOptions& opts, std::size_t dim) {
  if (!opts.checkpoint) return {};
  auto c = read_checkpoint(opts.checkpoint->path);
  if (!c) return {};
  CheckpointHeader want = opts.checkpoint->identity;
  want.dim = dim;
  want.seed = opts.seed;
  if (!c->header.same_problem(want)) return {};
  return std::move(c->vectors);
}

void sort_pairs(LanczosResult& r) {
  std::vector<std::size_t> idx(r.values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return r.values[a] < r.values[b]; });
  LanczosResult out = r;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.values[i] = r.values[idx[i]];
    out.residuals[i] = r.residuals[idx[i]];
  }
  r = std::move(out);
}

std::uint64_t sector_seed(std::uint64_t seed, int twice_sz) {
  // splitmix64 step keeps per-sector streams distinct and reproducible.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(twice_sz + 1024);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

LinearOperator as_operator(const SectorHamiltonian& h) {
  return {h.dim(), [&h](std::span<const double> x, std::span<double> y) { h.apply(x, y); }};
}

std::vector<double> dense_spectrum(const SectorHamiltonian& h, std::size_t cutoff) {
  if (h.dim() > cutoff)
    throw DomainError("dense_spectrum: dimension " + std::to_string(h.dim()) +
                      " exceeds the dense cutoff " + std::to_string(cutoff) + "; use Lanczos");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.to_dense(), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

LanczosResult lanczos_lowest_until(const LinearOperator& op, int max_k, double stop_above,
                                   const LanczosOptions& opts) {
  if (max_k < 1) throw DomainError("lanczos_lowest: k must be >= 1");
  LanczosResult result;
  result.seed = opts.seed;
  std::mt19937_64 rng(opts.seed);
  std::vector<Vec> locked;
  Engine engine(op, opts, result.matvecs);
  const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_k), op.dim));
  Vec hint;
  for (int i = 0; i < k; ++i) {
    Vec start = random_vector(op.dim, rng);
    if (!hint.empty()) {
      // Mostly the next Ritz vector of the previous run, plus a random part
      // so that further copies of a degenerate eigenvalue stay reachable.
      view(start) *= 1e-2 / norm(start);
      view(start) += view(hint);
    }
    orthogonalize(start, locked);
    if (norm(start) < 1e-10) break;
    EngineResult r = engine.run(locked, std::move(start), -std::numeric_limits<double>::infinity(),
                                false);
    result.restarts += r.restarts;
    if (!r.converged) {
      result.values.push_back(r.value);
      result.residuals.push_back(r.residual);
      sort_pairs(result);
      throw LanczosFailure("lanczos_lowest: eigenvalue " + std::to_string(i) +
                               " did not converge (residual " + std::to_string(r.residual) + ")",
                           std::move(result));
    }
    result.values.push_back(r.value);
    result.residuals.push_back(r.residual);
    locked.push_back(std::move(r.x));
    hint = std::move(r.next);
    if (r.value > stop_above) break;
  }
  sort_pairs(result);
  return result;
}

LanczosResult lanczos_lowest(const LinearOperator& op, int k, const LanczosOptions& opts) {
  return lanczos_lowest_until(op, k, std::numeric_limits<double>::infinity(), opts);
}

std::optional<RangeEigenpair> lowest_above_kernel(const LinearOperator& op, double floor,
                                                  const LanczosOptions& opts) {
  RangeEigenpair out;
  Vec start;
  if (auto saved = resume_vectors(opts, op.dim); !saved.empty()) {
    start = std::move(saved.front());
  } else {
    std::mt19937_64 rng(opts.seed);
    start = random_vector(op.dim, rng);
  }
  Vec b(op.dim);
  op.apply(start, b);
  ++out.matvecs;
  const double nb = norm(b);
  if (nb <= 1e-14 * norm(start)) return std::nullopt;
  Engine engine(op, opts, out.matvecs);
  EngineResult r = engine.run({}, std::move(b), floor, true);
  out.restarts = r.restarts;
  if (r.empty) return std::nullopt;
  if (!r.converged) {
    LanczosResult best;
    best.values = {r.value};
    best.residuals = {r.residual};
    best.matvecs = out.matvecs;
    best.restarts = r.restarts;
    best.seed = opts.seed;
    throw LanczosFailure("lowest_above_kernel: no convergence (residual " +
                             std::to_string(r.residual) + ")",
                         std::move(best));
  }
  out.value = r.value;
  out.residual = r.residual;
  return out;
}

std::string_view to_string(GapStrategy s) {
  return s == GapStrategy::all_sectors ? "all_sectors" : "minimal_sz";
}

std::string_view to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::automatic: return "auto";
    case SolverChoice::lanczos: return "lanczos";
    case SolverChoice::dense: return "dense";
  }
  return "?";
}

SpectralResult spectral_gap(const LatticeGraph& graph, SpinValue s, int J, GapStrategy strategy,
                            const GapOptions& opts) {
  SpectralResult out;
  out.system = graph.name();
  out.num_sites = graph.num_sites();
  out.twice_s = s.twice_s();
  out.J = J;
  out.strategy = strategy;
  out.kernel_tol = opts.kernel_tol;
  out.tol = opts.lanczos.tol;
  out.seed = opts.lanczos.seed;

  const int L = graph.num_sites();
  const std::vector<int> labels = strategy == GapStrategy::minimal_sz
                                      ? std::vector<int>{SectorBasis::minimal_twice_sz(L, s)}
                                      : SectorBasis::sector_labels(L, s);
  for (const int label : labels) {
    const auto dim = SectorBasis::dimension(L, s, label);
    if (dim > opts.max_dim)
      throw BudgetRefusal(graph.name() + " sector 2Sz=" + std::to_string(label) + " has dimension " +
                              std::to_string(dim) + " above the budget " +
                              std::to_string(opts.max_dim),
                          dim, opts.max_dim);
    if (opts.solver == SolverChoice::dense && dim > opts.dense_cutoff)
      throw DomainError("dense solver refused: sector dimension " + std::to_string(dim) +
                        " exceeds cutoff " + std::to_string(opts.dense_cutoff));
    const bool dense = opts.solver == SolverChoice::dense ||
                       (opts.solver == SolverChoice::automatic && dim <= std::min(opts.auto_dense_max, opts.dense_cutoff));
    const auto t0 = Clock::now();
    auto basis = std::make_shared<const SectorBasis>(L, s, label);
    SectorHamiltonian h(graph, s, J, basis, opts.assemble);

    SectorResult sr;
    sr.twice_sz = label;
    sr.dim = dim;
    if (dense) {
      sr.method = "dense";
      Eigen::MatrixXd m = h.to_dense();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
      const auto& ev = eig.eigenvalues();
      auto residual = [&](Eigen::Index i) {
        return (m * eig.eigenvectors().col(i) - ev(i) * eig.eigenvectors().col(i)).norm();
      };
      sr.lowest = ev(0);
      sr.lowest_residual = residual(0);
      sr.kernel_dimension = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) <= opts.kernel_tol) {
          ++sr.kernel_dimension;
        } else {
          sr.gap = ev(i);
          sr.gap_residual = residual(i);
          break;
        }
      }
      sr.kernel_exact = true;
    } else {
      sr.method = "lanczos";
      const LinearOperator op = as_operator(h);
      LanczosOptions lo = opts.lanczos;
      lo.seed = sector_seed(opts.lanczos.seed, label);
      lo.label = graph.name() + ":2Sz=" + std::to_string(label);
      if (opts.checkpoint_prefix) {
        CheckpointSpec spec;
        spec.path = opts.checkpoint_prefix->string() + ".sz" + std::to_string(label) + ".ckpt";
        spec.wall_seconds = opts.checkpoint_wall_seconds;
        spec.identity.num_sites = L;
        spec.identity.twice_s = s.twice_s();
        spec.identity.twice_total_sz = label;
        lo.checkpoint = spec;
      }
      if (auto g = lowest_above_kernel(op, opts.kernel_tol, lo)) {
        sr.gap = g->value;
        sr.gap_residual = g->residual;
        sr.matvecs += g->matvecs;
        sr.restarts += g->restarts;
        if (lo.checkpoint) std::filesystem::remove(lo.checkpoint->path);
      }
      lo.checkpoint.reset();
      if (opts.ground_energy) {
        const auto low = lanczos_lowest(op, 1, lo);
        sr.lowest = low.values.front();
        sr.lowest_residual = low.residuals.front();
        sr.matvecs += low.matvecs;
        sr.restarts += low.restarts;
      }
      if (dim <= opts.kernel_probe_max_dim) {
        const auto probe = lanczos_lowest_until(op, opts.kernel_probe_max_k, opts.kernel_tol, lo);
        sr.matvecs += probe.matvecs;
        sr.kernel_dimension = static_cast<int>(std::count_if(
            probe.values.begin(), probe.values.end(), [&](double v) { return v <= opts.kernel_tol; }));
        if (!probe.values.empty() && probe.values.back() > opts.kernel_tol) {
          sr.kernel_exact = true;
          sr.probe_gap = probe.values.back();
        }
      }
    }
    sr.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (sr.gap && (!out.gap || *sr.gap < *out.gap)) {
      out.gap = sr.gap;
      out.gap_twice_sz = label;
    }
    if (sr.lowest && (!out.ground_energy || *sr.lowest < *out.ground_energy))
      out.ground_energy = sr.lowest;
    out.sectors.push_back(std::move(sr));
  }
  return out;
}

}  // namespace aklt
