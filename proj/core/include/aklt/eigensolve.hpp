#pragma once

#include "aklt/checkpoint.hpp"
#include "aklt/hamiltonian.hpp"
#include "aklt/lattice.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aklt {

/// Real symmetric operator given by its action.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
};

LinearOperator as_operator(const SectorHamiltonian& h);

struct CheckpointSpec {
  std::filesystem::path path;
  /// Save and stop once a restart cycle ends past this many seconds.
  double wall_seconds = std::numeric_limits<double>::infinity();
  /// Problem identity written into (and matched against) the file header.
  CheckpointHeader identity;
};

struct LanczosOptions {
  double tol = 1e-10;          // residual ||Hx - theta x|| for unit x
  int max_basis = 60;          // Krylov vectors per restart cycle
  int max_restarts = 500;
  std::uint64_t seed = 1;
  /// Upper bound on memory for Krylov + locked vectors; shrinks max_basis.
  std::size_t memory_budget_bytes = std::size_t{3} << 30;
  std::ostream* progress = nullptr;  // line-delimited JSON records
  std::string label;                 // tag for progress records
  std::optional<CheckpointSpec> checkpoint;
};

struct LanczosResult {
  std::vector<double> values;     // ascending
  std::vector<double> residuals;  // true residuals, one per value
  std::uint64_t matvecs = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
};

/// Non-convergence; carries the best estimates reached so far.
class LanczosFailure : public std::runtime_error {
 public:
  LanczosFailure(const std::string& what, LanczosResult best)
      : std::runtime_error(what), best(std::move(best)) {}
  LanczosResult best;
};

/// Raised after a checkpoint was written because the wall-time limit passed.
class CheckpointSaved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All eigenvalues, ascending. Throws DomainError above `cutoff`.
std::vector<double> dense_spectrum(const SectorHamiltonian& h, std::size_t cutoff = 4096);

/// The k lowest eigenvalues counted with multiplicity. Each eigenpair comes
/// from its own restarted Lanczos run (full reorthogonalization) started from
/// a random vector orthogonal to the pairs already locked, so degenerate
/// eigenvalues are resolved one copy at a time.
LanczosResult lanczos_lowest(const LinearOperator& op, int k, const LanczosOptions& opts);

/// Same as lanczos_lowest but stops early once a value above `stop_above`
/// has been locked. Used for kernel counting.
LanczosResult lanczos_lowest_until(const LinearOperator& op, int max_k, double stop_above,
                                   const LanczosOptions& opts);

/// Smallest eigenvalue above `floor` on the range of the operator. The
/// Krylov space is started from op(r) for random r and every restart is
/// re-filtered through the operator, so kernel directions stay out of the
/// basis. nullopt when op(r) vanishes (the operator is zero).
struct RangeEigenpair {
  double value = 0.0;
  double residual = 0.0;
  std::uint64_t matvecs = 0;
  int restarts = 0;
};
std::optional<RangeEigenpair> lowest_above_kernel(const LinearOperator& op, double floor,
                                                  const LanczosOptions& opts);

enum class GapStrategy { all_sectors, minimal_sz };
enum class SolverChoice { automatic, lanczos, dense };

std::string_view to_string(GapStrategy s);
std::string_view to_string(SolverChoice s);

struct GapOptions {
  double kernel_tol = 1e-8;
  std::size_t dense_cutoff = 4096;
  /// Largest sector the automatic choice sends to the dense solver.
  std::size_t auto_dense_max = 1024;
  SolverChoice solver = SolverChoice::automatic;
  LanczosOptions lanczos;
  AssembleOptions assemble;
  /// Refuse sectors above this dimension (BudgetRefusal).
  std::size_t max_dim = std::numeric_limits<std::size_t>::max();
  /// Also compute the lowest eigenvalue of Lanczos sectors.
  bool ground_energy = true;
  /// Lanczos sectors up to this dimension also get a kernel count from the
  /// adaptive schedule k = 4, 8, ..., 64.
  std::size_t kernel_probe_max_dim = 20'000;
  int kernel_probe_max_k = 64;
  /// Checkpoint file prefix; the sector label is appended.
  std::optional<std::filesystem::path> checkpoint_prefix;
  double checkpoint_wall_seconds = std::numeric_limits<double>::infinity();
};

struct SectorResult {
  int twice_sz = 0;
  std::size_t dim = 0;
  std::string method;  // "dense" or "lanczos"
  std::optional<double> lowest;
  double lowest_residual = 0.0;
  std::optional<double> gap;  // smallest eigenvalue above kernel_tol
  double gap_residual = 0.0;
  /// Eigenvalues below kernel_tol; -1 when not measured.
  int kernel_dimension = -1;
  /// false: kernel_dimension is only a lower bound (probe hit its k cap).
  bool kernel_exact = false;
  /// Gap seen by the adaptive-k probe, when it resolved one.
  std::optional<double> probe_gap;
  std::uint64_t matvecs = 0;
  int restarts = 0;
  double seconds = 0.0;
};

struct SpectralResult {
  std::string system;
  int num_sites = 0;
  int twice_s = 3;
  int J = 3;
  GapStrategy strategy = GapStrategy::minimal_sz;
  std::vector<SectorResult> sectors;
  double kernel_tol = 0.0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> gap;
  int gap_twice_sz = 0;
  std::optional<double> ground_energy;
};

SpectralResult spectral_gap(const LatticeGraph& graph, SpinValue s, int J, GapStrategy strategy,
                            const GapOptions& opts = {});

}  // namespace aklt
