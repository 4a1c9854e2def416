#include "aklt/spin_algebra.hpp"

#include "aklt/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace aklt {

SpinValue::SpinValue(int twice_s) : twice_s_(twice_s) {
  if (twice_s < 1) {
    throw DomainError("SpinValue: 2s must be >= 1, got " + std::to_string(twice_s));
  }
}

SpinMatrices spin_matrices(SpinValue s) {
  const int d = s.local_dim();
  const double sv = s.value();
  SpinMatrices out;
  out.sz.entries = Eigen::MatrixXd::Zero(d, d);
  out.sz.support = {0};
  out.splus = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = sv - k;
    out.sz.entries(k, k) = m;
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
    if (k > 0) out.splus(k - 1, k) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  out.sminus = out.splus.transpose();
  return out;
}

LocalOperator heisenberg_pair(SpinValue s) {
  const auto sm = spin_matrices(s);
  const Eigen::MatrixXd& z = sm.sz.entries;
  Eigen::MatrixXd ss = Eigen::kroneckerProduct(z, z).eval();
  ss += 0.5 * (Eigen::kroneckerProduct(sm.splus, sm.sminus) +
               Eigen::kroneckerProduct(sm.sminus, sm.splus))
                  .eval();
  return {std::move(ss), {0, 1}};
}

std::vector<std::pair<int, double>> casimir_eigenvalues(SpinValue s) {
  const double sv = s.value();
  std::vector<std::pair<int, double>> out;
  for (int j = 0; j <= s.twice_s(); ++j) {
    out.emplace_back(j, 0.5 * (j * (j + 1.0) - 2.0 * sv * (sv + 1.0)));
  }
  return out;
}

LocalOperator spin_projector(SpinValue s, int J) {
  if (J < 0 || J > s.twice_s()) {
    throw DomainError("spin_projector: J=" + std::to_string(J) + " outside [0, " +
                      std::to_string(s.twice_s()) + "]");
  }
  const auto pair = heisenberg_pair(s);
  const auto lambdas = casimir_eigenvalues(s);
  const double lj = lambdas[J].second;
  const int dim = pair.dim();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& [jp, lp] : lambdas) {
    if (jp == J) continue;
    Eigen::MatrixXd factor = pair.entries;
    factor.diagonal().array() -= lp;
    p = (p * factor / (lj - lp)).eval();
  }
  // Products of commuting symmetric factors are symmetric up to rounding.
  p = 0.5 * (p + p.transpose()).eval();
  return {std::move(p), {0, 1}};
}

double idempotency_defect(const Eigen::MatrixXd& p) {
  return (p * p - p).cwiseAbs().maxCoeff();
}

void write_matrix_market(std::ostream& out, const LocalOperator& op, double drop_tol) {
  const auto& a = op.entries;
  std::size_t nnz = 0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = j; i < a.rows(); ++i)
      if (std::abs(a(i, j)) > drop_tol) ++nnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << "% support:";
  for (int site : op.support) out << ' ' << site;
  out << '\n' << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
  out << std::setprecision(17);
  for (int j = 0; j < a.cols(); ++j)
    for (int i = j; i < a.rows(); ++i)
      if (std::abs(a(i, j)) > drop_tol) out << i + 1 << ' ' << j + 1 << ' ' << a(i, j) << '\n';
}

}  // namespace aklt
