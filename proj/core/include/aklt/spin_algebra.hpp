#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <utility>
#include <vector>

namespace aklt {

/// Spin quantum number stored as 2s, so spin-3/2 is SpinValue{3}.
class SpinValue {
 public:
  explicit SpinValue(int twice_s);

  int twice_s() const noexcept { return twice_s_; }
  int local_dim() const noexcept { return twice_s_ + 1; }
  double value() const noexcept { return 0.5 * twice_s_; }

  friend bool operator==(SpinValue, SpinValue) = default;

 private:
  int twice_s_;
};

/// Dense real symmetric operator acting on the tensor product of the sites
/// in `support`. Local basis index k on a site corresponds to m = s - k.
struct LocalOperator {
  Eigen::MatrixXd entries;
  std::vector<int> support;

  int dim() const noexcept { return static_cast<int>(entries.rows()); }
};

struct SpinMatrices {
  LocalOperator sz;
  Eigen::MatrixXd splus;
  Eigen::MatrixXd sminus;
};

SpinMatrices spin_matrices(SpinValue s);

/// S_i . S_j on the d^2-dimensional two-site space, support {0, 1}.
LocalOperator heisenberg_pair(SpinValue s);

/// (J, lambda_J) with lambda_J = (J(J+1) - 2s(s+1)) / 2, the eigenvalue of
/// S_i . S_j on the total-spin-J subspace, for J = 0..2s.
std::vector<std::pair<int, double>> casimir_eigenvalues(SpinValue s);

/// Projector onto total spin J of two spin-s sites, built by Lagrange
/// interpolation on S_i . S_j. Throws DomainError unless 0 <= J <= 2s.
LocalOperator spin_projector(SpinValue s, int J);

/// Max-abs entry of P*P - P.
double idempotency_defect(const Eigen::MatrixXd& p);

/// Writes the operator in Matrix Market coordinate format (real symmetric,
/// lower triangle, entries with |v| > drop_tol).
void write_matrix_market(std::ostream& out, const LocalOperator& op,
                         double drop_tol = 0.0);

}  // namespace aklt
