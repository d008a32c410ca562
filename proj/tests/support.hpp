#pragma once

#include <Eigen/Dense>

#include <functional>

#include "curlstab/curlstab.hpp"

namespace curlstab::testing {

inline Tetrahedron skewed() {
  return build_tetrahedron({Point(0.3, -0.2, 0.1), Point(2.0, 0.4, -0.3), Point(-0.5, 1.7, 0.2), Point(0.4, 0.6, 1.3)});
}

inline int face_with_normal(const Tetrahedron& K, const Point& n) {
  for (int f = 0; f < 4; ++f)
    if ((K.face(f).normal - n).norm() < 1e-12) return f;
  return -1;
}

using VectorField = std::function<Point(const Point&)>;

/// Samples of a vector field at the points of a rule, one column vector per component.
inline ComponentValues sample(const VectorField& f, const Eigen::Matrix3Xd& points) {
  ComponentValues out(3, Eigen::MatrixXd(points.cols(), 1));
  for (Eigen::Index q = 0; q < points.cols(); ++q) {
    const Point v = f(points.col(q));
    for (int c = 0; c < 3; ++c) out[c](q, 0) = v[c];
  }
  return out;
}

/// Five-point central difference; exact up to rounding for polynomials of degree <= 4.
inline Eigen::Matrix3d jacobian_fd(const VectorField& f, const Point& x, double h = 1e-2) {
  Eigen::Matrix3d J;
  for (int k = 0; k < 3; ++k) {
    const Point e = Point::Unit(k) * h;
    J.col(k) = (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h);
  }
  return J;
}

inline Point curl_of(const Eigen::Matrix3d& J) {
  return Point(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
}

/// Member `column` of a basis (or a coefficient combination) as a callable field.
inline VectorField field_of(const Element& element, std::shared_ptr<const PolySpaceBasis> basis,
                            const Eigen::VectorXd& coeffs) {
  return [&element, basis, coeffs](const Point& x) {
    const Eigen::MatrixXd v = evaluate(element, {basis, coeffs}, Eigen::Matrix3Xd(x));
    Point out = Point::Zero();
    for (Eigen::Index c = 0; c < v.rows(); ++c) out[c] = v(c, 0);
    return out;
  };
}

}  // namespace curlstab::testing
