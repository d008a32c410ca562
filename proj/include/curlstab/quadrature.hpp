#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

#include "curlstab/errors.hpp"
#include "curlstab/geometry.hpp"

namespace curlstab {

/// Highest exactness degree the rule generators accept.
inline constexpr int kMaxQuadratureDegree = 60;

struct QuadratureRule {
  Eigen::MatrixXd barycentric;  // (simplex dim + 1) x n
  Eigen::Matrix3Xd points;      // physical points
  Eigen::VectorXd weights;      // include the domain measure
  int exactness_degree = 0;

  Eigen::Index size() const { return weights.size(); }
};

struct GaussRule1D {
  Eigen::VectorXd nodes;    // on [0, 1]
  Eigen::VectorXd weights;  // against (1 - u)^alpha on [0, 1]
};

/// Gauss-Jacobi rule with n nodes for the weight (1 - u)^alpha on [0, 1]
/// (Golub-Welsch on the Jacobi matrix of the (alpha, 0) family).
inline GaussRule1D gauss_jacobi(int n, int alpha) {
  const double a = alpha;
  const double b = 0.0;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    T(k, k) = (k == 0 && a + b == 0.0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + a + b;
      const double off =
          std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0)));
      T(k, k + 1) = off;
      T(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  // mu0 = int_{-1}^{1} (1 - t)^a dt = 2^{a+1} / (a + 1)
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  GaussRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double scale = std::pow(2.0, -a - 1.0);
  for (int k = 0; k < n; ++k) {
    const double v0 = eig.eigenvectors()(0, k);
    rule.nodes[k] = 0.5 * (1.0 + eig.eigenvalues()[k]);
    rule.weights[k] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

inline int points_for_exactness(int degree) { return degree / 2 + 1; }

inline void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw UnsupportedDegree("quadrature degree " + std::to_string(degree) + " not supported");
}

/// Gauss-Legendre rule on [0, 1], exact to `degree`.
inline GaussRule1D gauss_legendre(int degree) {
  check_degree(degree);
  return gauss_jacobi(points_for_exactness(degree), 0);
}

/// Conical-product (collapsed Gauss-Jacobi) rule on the tetrahedron K.
inline QuadratureRule tet_rule(int degree, const Tetrahedron& K) {
  check_degree(degree);
  const int n = points_for_exactness(degree);
  const GaussRule1D r3 = gauss_jacobi(n, 2);
  const GaussRule1D r2 = gauss_jacobi(n, 1);
  const GaussRule1D r1 = gauss_jacobi(n, 0);

  QuadratureRule rule;
  rule.exactness_degree = degree;
  const int npts = n * n * n;
  rule.barycentric.resize(4, npts);
  rule.points.resize(3, npts);
  rule.weights.resize(npts);
  // reference coordinates (s, t, u) on the unit simplex, collapsed along u then t
  int q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++q) {
        const double u = r3.nodes[i];
        const double t = r2.nodes[j] * (1.0 - u);
        const double s = r1.nodes[k] * (1.0 - r2.nodes[j]) * (1.0 - u);
        // reference weight: product rule sums to 1/6
        const double w = r3.weights[i] * r2.weights[j] * r1.weights[k];
        Eigen::Vector4d lambda(1.0 - s - t - u, s, t, u);
        rule.barycentric.col(q) = lambda;
        rule.points.col(q) = K.from_barycentric(lambda);
        rule.weights[q] = w * 6.0 * K.volume();
      }
  return rule;
}

/// Collapsed Gauss-Jacobi rule on face `face_index` of K, with surface measure.
inline QuadratureRule tri_rule(int degree, const Tetrahedron& K, int face_index) {
  check_degree(degree);
  const Face& F = K.face(face_index);
  const int n = points_for_exactness(degree);
  const GaussRule1D r2 = gauss_jacobi(n, 1);
  const GaussRule1D r1 = gauss_jacobi(n, 0);

  QuadratureRule rule;
  rule.exactness_degree = degree;
  const int npts = n * n;
  rule.barycentric.resize(3, npts);
  rule.points.resize(3, npts);
  rule.weights.resize(npts);
  int q = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k, ++q) {
      const double t = r2.nodes[j];
      const double s = r1.nodes[k] * (1.0 - t);
      const Eigen::Vector3d lambda(1.0 - s - t, s, t);
      rule.barycentric.col(q) = lambda;
      rule.points.col(q) = lambda[0] * K.vertex(F.vertices[0]) + lambda[1] * K.vertex(F.vertices[1]) +
                           lambda[2] * K.vertex(F.vertices[2]);
      rule.weights[q] = r2.weights[j] * r1.weights[k] * 2.0 * F.area;
    }
  return rule;
}

/// Gauss-Legendre rule on edge `edge_index` of K, with length measure.
inline QuadratureRule edge_rule(int degree, const Tetrahedron& K, int edge_index) {
  const GaussRule1D r = gauss_legendre(degree);
  const Edge& e = K.edge(edge_index);
  QuadratureRule rule;
  rule.exactness_degree = degree;
  const auto n = r.nodes.size();
  rule.barycentric.resize(2, n);
  rule.points.resize(3, n);
  rule.weights = r.weights * e.length;
  for (Eigen::Index q = 0; q < n; ++q) {
    const double s = r.nodes[q];
    rule.barycentric.col(q) = Eigen::Vector2d(1.0 - s, s);
    rule.points.col(q) = (1.0 - s) * K.vertex(e.vertices[0]) + s * K.vertex(e.vertices[1]);
  }
  return rule;
}

inline double integrate(std::span<const double> values, const QuadratureRule& rule) {
  if (static_cast<Eigen::Index>(values.size()) != rule.size())
    throw LengthMismatch("integrate: " + std::to_string(values.size()) + " values for " +
                         std::to_string(rule.size()) + " points");
  double sum = 0.0;
  for (Eigen::Index q = 0; q < rule.size(); ++q) sum += rule.weights[q] * values[q];
  return sum;
}

inline double integrate(const Eigen::VectorXd& values, const QuadratureRule& rule) {
  return integrate(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())), rule);
}

}  // namespace curlstab
