#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "curlstab/errors.hpp"

namespace curlstab {

using Point = Eigen::Vector3d;

struct Face {
  std::array<int, 3> vertices;  // increasing order, opposite vertex == face index
  Point normal;                 // outward unit normal
  Point tangent1;               // normalized first edge
  Point tangent2;               // normal x tangent1
  double area = 0.0;
  Point centroid;
};

struct Edge {
  std::array<int, 2> vertices;  // i < j
  Point tangent;                // (v_j - v_i) / |v_j - v_i|
  double length = 0.0;
};

/// A non-degenerate tetrahedron with its derived geometric quantities.
/// Face i is the face opposite vertex i.
class Tetrahedron {
 public:
  Tetrahedron() = default;

  const std::array<Point, 4>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[i]; }
  const std::array<Face, 4>& faces() const { return faces_; }
  const Face& face(int i) const { return faces_[i]; }
  const std::array<Edge, 6>& edges() const { return edges_; }
  const Edge& edge(int i) const { return edges_[i]; }

  double volume() const { return volume_; }
  double signed_volume() const { return signed_volume_; }
  const Point& centroid() const { return centroid_; }
  double surface_area() const { return surface_area_; }
  /// Diameter.
  double h() const { return h_; }
  /// Insphere diameter.
  double rho() const { return rho_; }
  /// Shape-regularity parameter h / rho.
  double kappa() const { return h_ / rho_; }
  /// Length scale used in the H(curl) norm; fixed to the diameter.
  double ell() const { return h_; }

  /// Edge index shared by two distinct faces, or -1.
  int shared_edge(int f0, int f1) const {
    if (f0 == f1) return -1;
    // faces f0, f1 share the edge made of the two remaining vertices
    std::array<int, 2> e{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
      if (v != f0 && v != f1) e[k++] = v;
    for (int i = 0; i < 6; ++i)
      if (edges_[i].vertices == e) return i;
    return -1;
  }

  /// Barycentric coordinates to physical point.
  Point from_barycentric(const Eigen::Vector4d& lambda) const {
    Point x = Point::Zero();
    for (int i = 0; i < 4; ++i) x += lambda[i] * vertices_[i];
    return x;
  }

  friend Tetrahedron build_tetrahedron(const std::array<Point, 4>& vertices);

 private:
  std::array<Point, 4> vertices_;
  std::array<Face, 4> faces_;
  std::array<Edge, 6> edges_;
  double volume_ = 0.0;
  double signed_volume_ = 0.0;
  Point centroid_ = Point::Zero();
  double surface_area_ = 0.0;
  double h_ = 0.0;
  double rho_ = 0.0;
};

inline Tetrahedron build_tetrahedron(const std::array<Point, 4>& vertices) {
  Tetrahedron K;
  K.vertices_ = vertices;

  double h = 0.0;
  int e = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Point d = vertices[j] - vertices[i];
      h = std::max(h, d.norm());
      K.edges_[e].vertices = {i, j};
      K.edges_[e].length = d.norm();
      K.edges_[e].tangent = d.norm() > 0.0 ? Point(d / d.norm()) : Point::Zero();
      ++e;
    }

  Eigen::Matrix3d J;
  J << vertices[1] - vertices[0], vertices[2] - vertices[0], vertices[3] - vertices[0];
  const double signed_volume = J.determinant() / 6.0;
  if (!(h > 0.0) || std::abs(signed_volume) <= 1e-14 * h * h * h)
    throw DegenerateTetrahedron("tetrahedron has (near) zero volume");

  K.signed_volume_ = signed_volume;
  K.volume_ = std::abs(signed_volume);
  K.h_ = h;
  K.centroid_ = 0.25 * (vertices[0] + vertices[1] + vertices[2] + vertices[3]);

  double area_sum = 0.0;
  for (int f = 0; f < 4; ++f) {
    Face& face = K.faces_[f];
    int k = 0;
    for (int v = 0; v < 4; ++v)
      if (v != f) face.vertices[k++] = v;
    const Point& a = vertices[face.vertices[0]];
    const Point& b = vertices[face.vertices[1]];
    const Point& c = vertices[face.vertices[2]];
    Point n = (b - a).cross(c - a);
    face.area = 0.5 * n.norm();
    n.normalize();
    face.centroid = (a + b + c) / 3.0;
    if (n.dot(face.centroid - K.centroid_) < 0.0) n = -n;
    face.normal = n;
    face.tangent1 = (b - a).normalized();
    face.tangent2 = n.cross(face.tangent1);
    area_sum += face.area;
  }
  K.surface_area_ = area_sum;
  K.rho_ = 6.0 * K.volume_ / area_sum;
  return K;
}

/// The reference element with vertices (1,0,0), (0,1,0), (0,0,1), (0,0,0).
inline Tetrahedron reference_tetrahedron() {
  return build_tetrahedron({Point(1, 0, 0), Point(0, 1, 0), Point(0, 0, 1), Point(0, 0, 0)});
}

/// x -> J x + b.
struct AffineMap {
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Identity();
  Point offset = Point::Zero();
  double det = 1.0;
  Eigen::Matrix3d inverse_jacobian = Eigen::Matrix3d::Identity();

  Point operator()(const Point& x) const { return jacobian * x + offset; }
  Point inverse(const Point& y) const { return inverse_jacobian * (y - offset); }

  Eigen::Matrix3Xd apply(const Eigen::Matrix3Xd& x) const {
    return (jacobian * x).colwise() + offset;
  }
  Eigen::Matrix3Xd apply_inverse(const Eigen::Matrix3Xd& y) const {
    return inverse_jacobian * (y.colwise() - offset);
  }
};

/// Affine map sending source vertex i to target vertex permutation[i].
inline AffineMap affine_map_between(const Tetrahedron& source, const Tetrahedron& target,
                                    const std::array<int, 4>& permutation = {0, 1, 2, 3}) {
  std::array<int, 4> seen{};
  for (int i : permutation) {
    if (i < 0 || i > 3 || seen[i]++) throw Error("affine_map_between: not a permutation of 4");
  }
  Eigen::Matrix3d S, T;
  for (int k = 0; k < 3; ++k) {
    S.col(k) = source.vertex(k + 1) - source.vertex(0);
    T.col(k) = target.vertex(permutation[k + 1]) - target.vertex(permutation[0]);
  }
  AffineMap map;
  map.jacobian = T * S.inverse();
  map.offset = target.vertex(permutation[0]) - map.jacobian * source.vertex(0);
  map.det = map.jacobian.determinant();
  map.inverse_jacobian = map.jacobian.inverse();
  return map;
}

/// Image of a tetrahedron under an affine map (vertex order preserved).
inline Tetrahedron transform(const Tetrahedron& K, const AffineMap& map) {
  std::array<Point, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = map(K.vertex(i));
  return build_tetrahedron(v);
}

}  // namespace curlstab
