#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "curlstab/errors.hpp"

namespace curlstab {

inline constexpr double kDefaultSolveTolerance = 1e-10;

enum class RowKind { Curl, Divergence, TangentialTrace, NormalTrace };

/// Provenance of a contiguous block of constraint rows.
struct RowBlock {
  RowKind kind;
  int face = -1;
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

struct ConstraintSystem {
  Eigen::MatrixXd B;
  Eigen::VectorXd d;
  std::vector<RowBlock> blocks;

  void append(RowKind kind, int face, const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs) {
    const Eigen::Index m = B.rows();
    const Eigen::Index n = B.rows() == 0 ? rows.cols() : B.cols();
    Eigen::MatrixXd nb(m + rows.rows(), n);
    Eigen::VectorXd nd(m + rows.rows());
    if (m > 0) {
      nb.topRows(m) = B;
      nd.head(m) = d;
    }
    nb.bottomRows(rows.rows()) = rows;
    nd.tail(rows.rows()) = rhs;
    B = std::move(nb);
    d = std::move(nd);
    blocks.push_back({kind, face, m, rows.rows()});
  }
};

struct MinResult {
  Eigen::VectorXd x;
  double norm = 0.0;
  double residual = 0.0;
  int rank = 0;
  double consistency_gap = 0.0;
};

/// Minimum-norm solutions of B x = d for a fixed B; the factorization
/// (column-pivoted complete orthogonal decomposition) is reused across
/// right-hand sides.
class LeastNormSolver {
 public:
  LeastNormSolver(const Eigen::MatrixXd& B, double tol = kDefaultSolveTolerance) : B_(B), tol_(tol) {
    if (B.rows() > 0 && B.cols() > 0) {
      cod_.setThreshold(tol);
      cod_.compute(B);
      rank_ = static_cast<int>(cod_.rank());
      if (!B.allFinite()) throw NumericalBreakdown("least_norm_solve: non-finite constraint matrix");
    }
  }

  int rank() const { return rank_; }
  double tolerance() const { return tol_; }

  /// Throws Infeasible when d is farther than tol (1 + |d|) from range(B).
  MinResult solve(const Eigen::VectorXd& d) const {
    if (d.size() != B_.rows()) throw LengthMismatch("least_norm_solve: rhs length does not match rows");
    MinResult r;
    r.rank = rank_;
    if (B_.cols() == 0 || B_.rows() == 0) {
      r.x = Eigen::VectorXd::Zero(B_.cols());
      r.consistency_gap = d.norm();
    } else {
      r.x = cod_.solve(d);
      const Eigen::VectorXd qtd = cod_.householderQ().adjoint() * d;
      r.consistency_gap = qtd.tail(qtd.size() - rank_).norm();
    }
    if (!r.x.allFinite()) throw NumericalBreakdown("least_norm_solve: non-finite solution");
    r.norm = r.x.norm();
    r.residual = (B_ * r.x - d).norm();
    const double allowed = tol_ * (1.0 + d.norm());
    if (r.consistency_gap > allowed || r.residual > allowed)
      throw Infeasible("least_norm_solve: data outside the range of the constraints (gap " +
                       std::to_string(r.consistency_gap) + ", allowed " + std::to_string(allowed) + ")");
    return r;
  }

 private:
  Eigen::MatrixXd B_;
  double tol_;
  int rank_ = 0;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

inline MinResult least_norm_solve(const ConstraintSystem& sys, double tol = kDefaultSolveTolerance) {
  return LeastNormSolver(sys.B, tol).solve(sys.d);
}

/// Independent check of least_norm_solve for small systems: two-sided Jacobi
/// SVD, explicit orthonormal null-space basis, then projection of a particular
/// solution onto its orthogonal complement.
inline MinResult oracle_solve(const ConstraintSystem& sys, double tol = kDefaultSolveTolerance) {
  const Eigen::Index m = sys.B.rows(), n = sys.B.cols();
  if (n > 200) throw Error("oracle_solve: limited to n <= 200");
  MinResult r;
  if (m == 0 || n == 0) {
    r.x = Eigen::VectorXd::Zero(n);
    r.consistency_gap = sys.d.norm();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > tol * s[0]) ++rank;
    r.rank = static_cast<int>(rank);
    const Eigen::MatrixXd Ur = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd Vr = svd.matrixV().leftCols(rank);
    const Eigen::MatrixXd null_space = svd.matrixV().rightCols(n - rank);
    const Eigen::VectorXd coords = Ur.transpose() * sys.d;
    r.consistency_gap = (sys.d - Ur * coords).norm();
    const Eigen::VectorXd particular = Vr * s.head(rank).cwiseInverse().asDiagonal() * coords;
    r.x = particular - null_space * (null_space.transpose() * particular);
  }
  r.norm = r.x.norm();
  r.residual = (sys.B * r.x - sys.d).norm();
  const double allowed = tol * (1.0 + sys.d.norm());
  if (r.consistency_gap > allowed)
    throw Infeasible("oracle_solve: data outside the range of the constraints");
  return r;
}

}  // namespace curlstab
