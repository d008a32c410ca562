#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace curlstab {

/// Monomials xi^a eta^b zeta^c of total degree <= D, graded order.
class MonomialSet {
 public:
  explicit MonomialSet(int degree) : degree_(degree), stride_(degree + 1) {
    lookup_.assign(static_cast<std::size_t>(stride_ * stride_ * stride_), -1);
    for (int d = 0; d <= degree; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          lookup_[slot(a, b, c)] = static_cast<int>(exponents_.size());
          exponents_.push_back({a, b, c});
        }
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::array<int, 3>& exponent(int i) const { return exponents_[i]; }

  /// Index of a monomial, -1 when absent (negative or too high degree).
  int index(int a, int b, int c) const {
    if (a < 0 || b < 0 || c < 0 || a + b + c > degree_) return -1;
    return lookup_[slot(a, b, c)];
  }
  int index(const std::array<int, 3>& e) const { return index(e[0], e[1], e[2]); }

  /// Number of monomials of degree <= d.
  static int count(int d) { return d < 0 ? 0 : (d + 1) * (d + 2) * (d + 3) / 6; }

  /// Values at points: rows are points, columns monomials.
  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> evaluate(const Eigen::Matrix3Xd& xi) const {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = xi.cols();
    Matrix out(n, size());
    std::array<Matrix, 3> powers;
    for (int k = 0; k < 3; ++k) {
      powers[k].resize(n, degree_ + 1);
      powers[k].col(0).setOnes();
      for (int d = 1; d <= degree_; ++d)
        powers[k].col(d) = powers[k].col(d - 1).cwiseProduct(xi.row(k).transpose().template cast<Scalar>());
    }
    for (int i = 0; i < size(); ++i) {
      const auto& e = exponents_[i];
      out.col(i) = powers[0].col(e[0]).cwiseProduct(powers[1].col(e[1])).cwiseProduct(powers[2].col(e[2]));
    }
    return out;
  }

  /// Matrix D with (c * D) = coefficients of d/dxi_k of the polynomial with
  /// coefficient row c.
  Eigen::MatrixXd derivative(int k) const {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size(), size());
    for (int i = 0; i < size(); ++i) {
      auto e = exponents_[i];
      if (e[k] == 0) continue;
      const double factor = e[k];
      --e[k];
      D(i, index(e)) = factor;
    }
    return D;
  }

  /// Product of two polynomials; terms beyond degree() are dropped.
  Eigen::RowVectorXd multiply(const Eigen::RowVectorXd& f, const Eigen::RowVectorXd& g) const {
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(size());
    for (int i = 0; i < size(); ++i) {
      if (f[i] == 0.0) continue;
      for (int j = 0; j < size(); ++j) {
        if (g[j] == 0.0) continue;
        const auto& a = exponents_[i];
        const auto& b = exponents_[j];
        const int k = index(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
        if (k >= 0) out[k] += f[i] * g[j];
      }
    }
    return out;
  }

  /// Re-express coefficients over a larger set.
  Eigen::RowVectorXd embed(const Eigen::RowVectorXd& f, const MonomialSet& target) const {
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(target.size());
    for (int i = 0; i < size(); ++i) out[target.index(exponents_[i])] = f[i];
    return out;
  }

 private:
  std::size_t slot(int a, int b, int c) const {
    return static_cast<std::size_t>((a * stride_ + b) * stride_ + c);
  }

  int degree_;
  int stride_;
  std::vector<std::array<int, 3>> exponents_;
  std::vector<int> lookup_;
};

}  // namespace curlstab
