#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "curlstab/polyspace.hpp"

namespace curlstab {

/// A linear map between two orthonormal bases, target_dim x source_dim.
struct OperatorMatrix {
  SpaceTag source;
  SpaceTag target;
  Eigen::MatrixXd matrix;
};

namespace detail {

enum OperatorId : int {
  kCurl = 1,
  kDiv,
  kTangentialTrace,
  kNormalTrace,
  kSurfaceCurl,
  kGradient,
  kEmbedding,
};

inline int monomial_block(int poly_degree) { return MonomialSet::count(poly_degree); }

}  // namespace detail

/// Curl of vector rows (same monomial set), in physical coordinates.
/// Row operators work in extended precision; see project_rows.
inline MatrixXld curl_rows(const Element& element, int poly_degree, const MatrixXld& rows) {
  const MonomialSet mono(poly_degree);
  const int nm = mono.size();
  std::array<MatrixXld, 3> D;
  for (int k = 0; k < 3; ++k) D[k] = element.physical_derivative<long double>(mono, k);
  MatrixXld out(rows.rows(), 3 * nm);
  for (int c = 0; c < 3; ++c) {
    const int c1 = (c + 1) % 3;
    const int c2 = (c + 2) % 3;
    out.middleCols(c * nm, nm) = rows.middleCols(c2 * nm, nm) * D[c1] - rows.middleCols(c1 * nm, nm) * D[c2];
  }
  return out;
}

inline MatrixXld div_rows(const Element& element, int poly_degree, const MatrixXld& rows) {
  const MonomialSet mono(poly_degree);
  const int nm = mono.size();
  MatrixXld out = MatrixXld::Zero(rows.rows(), nm);
  for (int k = 0; k < 3; ++k) out += rows.middleCols(k * nm, nm) * element.physical_derivative<long double>(mono, k);
  return out;
}

inline MatrixXld gradient_rows(const Element& element, int poly_degree, const MatrixXld& rows) {
  const MonomialSet mono(poly_degree);
  const int nm = mono.size();
  MatrixXld out(rows.rows(), 3 * nm);
  for (int k = 0; k < 3; ++k) out.middleCols(k * nm, nm) = rows * element.physical_derivative<long double>(mono, k);
  return out;
}

/// Scalar rows of the component of vector rows along a fixed direction.
inline MatrixXld component_rows(int poly_degree, const MatrixXld& rows, const Point& direction) {
  const int nm = MonomialSet::count(poly_degree);
  return static_cast<long double>(direction[0]) * rows.middleCols(0, nm) +
         static_cast<long double>(direction[1]) * rows.middleCols(nm, nm) +
         static_cast<long double>(direction[2]) * rows.middleCols(2 * nm, nm);
}

/// curl : Nedelec(p) -> RaviartThomas(p).
inline OperatorMatrix curl_matrix(int p, const Element& element) {
  const SpaceTag src = SpaceTag::nedelec(p), dst = SpaceTag::raviart_thomas(p);
  auto m = element.matrix({detail::kCurl, p, -1, 0}, [&] {
    const auto ned = element.basis(src);
    return project_rows(element, *element.basis(dst), 3, ned->poly_degree,
                        curl_rows(element, ned->poly_degree, MatrixXld(ned->monomial_coeffs.cast<long double>())), 0,
                        Accumulation::Extended);
  });
  return {src, dst, *m};
}

/// div : RaviartThomas(p) -> ScalarP(p).
inline OperatorMatrix div_matrix(int p, const Element& element) {
  const SpaceTag src = SpaceTag::raviart_thomas(p), dst = SpaceTag::scalar(p);
  auto m = element.matrix({detail::kDiv, p, -1, 0}, [&] {
    const auto rt = element.basis(src);
    return project_rows(element, *element.basis(dst), 1, rt->poly_degree,
                        div_rows(element, rt->poly_degree, rt->monomial_coeffs.cast<long double>()), 2,
                        Accumulation::Extended);
  });
  return {src, dst, *m};
}

/// Tangential component on a face : Nedelec(p) -> FaceTrace(p, face).
inline OperatorMatrix tangential_trace_matrix(int p, const Element& element, int face) {
  const SpaceTag src = SpaceTag::nedelec(p), dst = SpaceTag::face_trace(p, face);
  auto m = element.matrix({detail::kTangentialTrace, p, face, 0}, [&] {
    const auto ned = element.basis(src);
    return project_rows(element, *element.basis(dst), 3, ned->poly_degree, ned->monomial_coeffs);
  });
  return {src, dst, *m};
}

/// Normal component v . n_F on a face : RaviartThomas(p) -> FaceScalarP(p, face).
inline OperatorMatrix normal_trace_matrix(int p, const Element& element, int face) {
  const SpaceTag src = SpaceTag::raviart_thomas(p), dst = SpaceTag::face_scalar(p, face);
  auto m = element.matrix({detail::kNormalTrace, p, face, 0}, [&] {
    const auto rt = element.basis(src);
    const MatrixXld normal =
        component_rows(rt->poly_degree, rt->monomial_coeffs.cast<long double>(), element.tet().face(face).normal);
    return project_rows(element, *element.basis(dst), 1, rt->poly_degree, normal, 2);
  });
  return {src, dst, *m};
}

/// Surface curl on a face : FaceTrace(p, face) -> FaceScalarP(p, face).
/// Uses in-plane derivatives of the tangential components in the face frame,
/// scurl w = d(w.t2)/ds1 - d(w.t1)/ds2 with t1 x t2 = n_F.
inline OperatorMatrix surface_curl_matrix(int p, const Element& element, int face) {
  const SpaceTag src = SpaceTag::face_trace(p, face), dst = SpaceTag::face_scalar(p, face);
  auto m = element.matrix({detail::kSurfaceCurl, p, face, 0}, [&] {
    const auto trace = element.basis(src);
    const Face& F = element.tet().face(face);
    const int deg = trace->poly_degree;
    const MonomialSet mono(deg);
    const MatrixXld coeffs = trace->monomial_coeffs.cast<long double>();
    const MatrixXld w1 = component_rows(deg, coeffs, F.tangent1);
    const MatrixXld w2 = component_rows(deg, coeffs, F.tangent2);
    MatrixXld scurl = MatrixXld::Zero(w1.rows(), mono.size());
    for (int k = 0; k < 3; ++k) {
      const MatrixXld Dk = element.physical_derivative<long double>(mono, k);
      scurl += static_cast<long double>(F.tangent1[k]) * (w2 * Dk) - static_cast<long double>(F.tangent2[k]) * (w1 * Dk);
    }
    return project_rows(element, *element.basis(dst), 1, deg, scurl, 2, Accumulation::Extended);
  });
  return {src, dst, *m};
}

/// grad : ScalarP(p + 1) -> Nedelec(p).
inline OperatorMatrix gradient_matrix(int p, const Element& element) {
  const SpaceTag src = SpaceTag::scalar(p + 1), dst = SpaceTag::nedelec(p);
  auto m = element.matrix({detail::kGradient, p, -1, 0}, [&] {
    const auto scalar = element.basis(src);
    return project_rows(element, *element.basis(dst), 3, scalar->poly_degree,
                        gradient_rows(element, scalar->poly_degree, scalar->monomial_coeffs.cast<long double>()), 0,
                        Accumulation::Extended);
  });
  return {src, dst, *m};
}

/// Inclusion of a space of degree `low` in the same kind of space of degree `high`.
inline OperatorMatrix embedding_matrix(SpaceTag low, int high, const Element& element) {
  SpaceTag target = low;
  target.p = high;
  auto m = element.matrix({detail::kEmbedding, low.p * 16 + high, low.face,
                           static_cast<int>(low.kind)},
                          [&] { return projection_matrix(element, *element.basis(target), *element.basis(low)); });
  return {low, target, *m};
}

/// Tangential trace data on a subset of faces, each in its FaceTrace(p, face) basis.
struct TraceData {
  int p = 0;
  std::vector<int> faces;
  std::vector<Eigen::VectorXd> values;  // aligned with faces

  double norm() const {
    double s = 0.0;
    for (const auto& v : values) s += v.squaredNorm();
    return std::sqrt(s);
  }
};

struct EdgeCompatReport {
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// L2(e) mismatch of w_F . tau_e between every pair of faces sharing an edge e.
inline EdgeCompatReport edge_compat_check(const TraceData& data, const Element& element) {
  EdgeCompatReport report;
  double scale = 1.0;
  for (const auto& v : data.values) scale = std::max(scale, v.norm());
  report.tolerance = 1e-9 * scale;
  const Tetrahedron& K = element.tet();
  for (std::size_t a = 0; a < data.faces.size(); ++a)
    for (std::size_t b = a + 1; b < data.faces.size(); ++b) {
      const int e = K.shared_edge(data.faces[a], data.faces[b]);
      if (e < 0) continue;
      const QuadratureRule rule = edge_rule(2 * data.p + 3, K, e);
      const Point& tau = K.edge(e).tangent;
      auto tangential = [&](std::size_t i) {
        const auto basis = element.basis(SpaceTag::face_trace(data.p, data.faces[i]));
        const ComponentValues vals = evaluate_basis(element, *basis, rule.points);
        return Eigen::VectorXd((tau[0] * vals[0] + tau[1] * vals[1] + tau[2] * vals[2]) * data.values[i]);
      };
      const Eigen::VectorXd diff = tangential(a) - tangential(b);
      const double r = std::sqrt(integrate(Eigen::VectorXd(diff.cwiseAbs2()), rule));
      report.max_residual = std::max(report.max_residual, r);
    }
  report.pass = report.max_residual <= report.tolerance;
  return report;
}

/// Traces of a Nedelec field on a set of faces.
inline TraceData trace_of(int p, const Element& element, const std::vector<int>& faces, const Eigen::VectorXd& field) {
  TraceData data;
  data.p = p;
  data.faces = faces;
  for (int f : faces) data.values.push_back(tangential_trace_matrix(p, element, f).matrix * field);
  return data;
}

}  // namespace curlstab
