#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <typeindex>
#include <vector>

#include "curlstab/errors.hpp"
#include "curlstab/geometry.hpp"
#include "curlstab/lazy_cache.hpp"
#include "curlstab/monomials.hpp"
#include "curlstab/quadrature.hpp"

namespace curlstab {

inline constexpr int kMaxDegree = 10;

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// Relative singular-value cutoff used to decide the rank of a generator set.
inline constexpr double kDefaultRankTolerance = 1e-10;

enum class SpaceKind { ScalarP, VectorP, Nedelec, RaviartThomas, FaceScalarP, FaceTrace };

struct SpaceTag {
  SpaceKind kind = SpaceKind::ScalarP;
  int p = 0;
  int face = -1;

  static SpaceTag scalar(int p) { return {SpaceKind::ScalarP, p, -1}; }
  static SpaceTag vector(int p) { return {SpaceKind::VectorP, p, -1}; }
  static SpaceTag nedelec(int p) { return {SpaceKind::Nedelec, p, -1}; }
  static SpaceTag raviart_thomas(int p) { return {SpaceKind::RaviartThomas, p, -1}; }
  static SpaceTag face_scalar(int p, int face) { return {SpaceKind::FaceScalarP, p, face}; }
  static SpaceTag face_trace(int p, int face) { return {SpaceKind::FaceTrace, p, face}; }

  bool on_face() const { return kind == SpaceKind::FaceScalarP || kind == SpaceKind::FaceTrace; }
  int components() const {
    return (kind == SpaceKind::ScalarP || kind == SpaceKind::FaceScalarP) ? 1 : 3;
  }
  /// Highest total degree of the member polynomials.
  int poly_degree() const {
    switch (kind) {
      case SpaceKind::Nedelec:
      case SpaceKind::RaviartThomas:
      case SpaceKind::FaceTrace:
        return p + 1;
      default:
        return p;
    }
  }

  std::string name() const {
    static const char* names[] = {"ScalarP", "VectorP", "Nedelec", "RaviartThomas", "FaceScalarP", "FaceTrace"};
    std::string s = std::string(names[static_cast<int>(kind)]) + "(" + std::to_string(p);
    if (on_face()) s += ", face " + std::to_string(face);
    return s + ")";
  }

  auto operator<=>(const SpaceTag&) const = default;
};

/// Closed-form dimension of each space.
inline int dimension(const SpaceTag& tag) {
  const int p = tag.p;
  switch (tag.kind) {
    case SpaceKind::ScalarP:
      return (p + 1) * (p + 2) * (p + 3) / 6;
    case SpaceKind::VectorP:
      return (p + 1) * (p + 2) * (p + 3) / 2;
    case SpaceKind::Nedelec:
      return (p + 1) * (p + 3) * (p + 4) / 2;
    case SpaceKind::RaviartThomas:
      return (p + 1) * (p + 2) * (p + 4) / 2;
    case SpaceKind::FaceScalarP:
      return (p + 1) * (p + 2) / 2;
    case SpaceKind::FaceTrace:
      return (p + 1) * (p + 3);
  }
  return 0;
}

/// Polynomial fields as rows of monomial coefficients, one block of
/// MonomialSet::count(poly_degree) columns per component.
struct GeneratorSet {
  int components = 1;
  int poly_degree = 0;
  Eigen::MatrixXd rows;

  Eigen::Index size() const { return rows.rows(); }
};

struct PolySpaceBasis {
  SpaceTag tag;
  int dim = 0;
  int components = 1;
  int poly_degree = 0;
  Eigen::MatrixXd generators;       // n_generators x (components * n_monomials)
  Eigen::MatrixXd coeffs;           // dim x n_generators
  Eigen::MatrixXd monomial_coeffs;  // dim x (components * n_monomials) == coeffs * generators
  Eigen::VectorXd singular_values;  // of the column-scaled weighted generator samples
  double orthonormality_error = 0.0;

  int monomial_count() const { return MonomialSet::count(poly_degree); }
};

/// Values of a row set of polynomial fields: one (points x rows) matrix per component.
using ComponentValues = std::vector<Eigen::MatrixXd>;

class Element;

ComponentValues evaluate_rows(const Element& element, int components, int poly_degree,
                              const Eigen::MatrixXd& rows, const Eigen::Matrix3Xd& points);

/// A tetrahedron together with cached quadrature rules and orthonormal bases.
/// Polynomials are written in the local coordinates (x - centroid) / h.
class Element {
 public:
  explicit Element(Tetrahedron K, double rank_tolerance = kDefaultRankTolerance)
      : tet_(std::move(K)), rank_tolerance_(rank_tolerance) {
    for (int j = 0; j < 3; ++j) frame_.col(j) = std::sqrt(2.0) * (tet_.vertex(j) - tet_.vertex(3));
    frame_inverse_ = frame_.inverse();
  }

  const Tetrahedron& tet() const { return tet_; }
  double rank_tolerance() const { return rank_tolerance_; }

  /// Local coordinates xi = A^{-1}(x - centroid), where A maps the centred
  /// reference tetrahedron scaled to unit diameter onto K.
  const Eigen::Matrix3d& local_frame() const { return frame_; }
  const Eigen::Matrix3d& local_frame_inverse() const { return frame_inverse_; }

  Eigen::Matrix3Xd to_local(const Eigen::Matrix3Xd& x) const {
    return frame_inverse_ * (x.colwise() - tet_.centroid());
  }

  /// Matrix D with c * D the local-monomial coefficients of d/dx_k.
  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> physical_derivative(const MonomialSet& mono, int k) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D =
        static_cast<Scalar>(frame_inverse_(0, k)) * mono.derivative(0).cast<Scalar>();
    D += static_cast<Scalar>(frame_inverse_(1, k)) * mono.derivative(1).cast<Scalar>();
    D += static_cast<Scalar>(frame_inverse_(2, k)) * mono.derivative(2).cast<Scalar>();
    return D;
  }

  const QuadratureRule& volume_rule(int degree) const {
    return *volume_rules_.get(degree, [&] { return std::make_shared<const QuadratureRule>(tet_rule(degree, tet_)); });
  }

  const QuadratureRule& face_rule(int degree, int face) const {
    return *face_rules_.get({degree, face}, [&] {
      return std::make_shared<const QuadratureRule>(tri_rule(degree, tet_, face));
    });
  }

  /// Rule on the domain of `tag` exact for products of two members.
  const QuadratureRule& rule_for(const SpaceTag& tag, int extra_degree = 0) const {
    const int degree = 2 * tag.poly_degree() + 1 + extra_degree;
    return tag.on_face() ? face_rule(degree, tag.face) : volume_rule(degree);
  }

  std::shared_ptr<const PolySpaceBasis> basis(const SpaceTag& tag) const;

  /// Generic memo table for derived matrices (operators, embeddings, ...).
  using MatrixKey = std::tuple<int, int, int, int>;
  std::shared_ptr<const Eigen::MatrixXd> matrix(const MatrixKey& key,
                                                const std::function<Eigen::MatrixXd()>& build) const {
    return matrices_.get(key, [&] { return std::make_shared<const Eigen::MatrixXd>(build()); });
  }

  /// Memo table for arbitrary immutable objects attached to this element.
  template <typename T>
  std::shared_ptr<const T> attached(const MatrixKey& key, const std::function<std::shared_ptr<const T>()>& build) const {
    auto holder = attachments_.get({std::type_index(typeid(T)), key}, [&] {
      return std::make_shared<const std::shared_ptr<const void>>(build());
    });
    return std::static_pointer_cast<const T>(*holder);
  }

 private:
  Tetrahedron tet_;
  double rank_tolerance_;
  Eigen::Matrix3d frame_;
  Eigen::Matrix3d frame_inverse_;
  LazyCache<int, QuadratureRule> volume_rules_;
  LazyCache<std::pair<int, int>, QuadratureRule> face_rules_;
  LazyCache<SpaceTag, PolySpaceBasis> bases_;
  LazyCache<MatrixKey, Eigen::MatrixXd> matrices_;
  LazyCache<std::pair<std::type_index, MatrixKey>, std::shared_ptr<const void>> attachments_;
};

inline ComponentValues evaluate_rows(const Element& element, int components, int poly_degree,
                                     const Eigen::MatrixXd& rows, const Eigen::Matrix3Xd& points) {
  const MonomialSet mono(poly_degree);
  const Eigen::MatrixXd table = mono.evaluate(element.to_local(points));
  const int nm = mono.size();
  ComponentValues values(static_cast<std::size_t>(components));
  for (int c = 0; c < components; ++c) values[c] = table * rows.middleCols(c * nm, nm).transpose();
  return values;
}

/// Removes the component along `normal` from vector values.
inline void project_tangential(ComponentValues& values, const Point& normal) {
  Eigen::MatrixXd normal_part = normal[0] * values[0] + normal[1] * values[1] + normal[2] * values[2];
  for (int c = 0; c < 3; ++c) values[c] -= normal[c] * normal_part;
}

/// Values of the members of a row set on the natural domain of `tag`
/// (tangential part on the face for FaceTrace).
inline ComponentValues evaluate_on_domain(const Element& element, const SpaceTag& tag, const Eigen::MatrixXd& rows,
                                          const Eigen::Matrix3Xd& points) {
  ComponentValues values = evaluate_rows(element, tag.components(), tag.poly_degree(), rows, points);
  if (tag.kind == SpaceKind::FaceTrace) project_tangential(values, element.tet().face(tag.face).normal);
  return values;
}

inline ComponentValues evaluate_basis(const Element& element, const PolySpaceBasis& basis,
                                      const Eigen::Matrix3Xd& points) {
  return evaluate_on_domain(element, basis.tag, basis.monomial_coeffs, points);
}

/// Stacks component values into one (components * points) x columns matrix
/// with rows scaled by sqrt(weight), so that X^T Y is the L2 inner product.
inline Eigen::MatrixXd weighted_stack(const ComponentValues& values, const Eigen::VectorXd& weights) {
  const Eigen::Index n = weights.size();
  const Eigen::VectorXd sw = weights.cwiseSqrt();
  Eigen::MatrixXd out(n * static_cast<Eigen::Index>(values.size()), values.front().cols());
  for (std::size_t c = 0; c < values.size(); ++c)
    out.middleRows(static_cast<Eigen::Index>(c) * n, n) = sw.asDiagonal() * values[c];
  return out;
}

/// Component block c of the result is sum_d M(c, d) * block d of `rows`.
inline Eigen::MatrixXd mix_components(const Eigen::MatrixXd& rows, const Eigen::Matrix3d& M, int block) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows.rows(), rows.cols());
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) out.middleCols(c * block, block) += M(c, d) * rows.middleCols(d * block, block);
  return out;
}

/// Spanning set for a space, written over monomials in local coordinates.
inline GeneratorSet monomial_generators(const SpaceTag& tag, const Element& element) {
  GeneratorSet gens;
  gens.components = tag.components();
  gens.poly_degree = tag.poly_degree();
  const int p = tag.p;
  const MonomialSet mono(gens.poly_degree);
  const int nm = mono.size();
  const int nc = gens.components;

  std::vector<Eigen::RowVectorXd> rows;
  auto unit_field = [&](int comp, int monomial, double value) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nc * nm);
    r[comp * nm + monomial] = value;
    return r;
  };
  auto coordinate_fields = [&] {
    for (int c = 0; c < nc; ++c)
      for (int i = 0; i < MonomialSet::count(p); ++i) rows.push_back(unit_field(c, i, 1.0));
  };

  switch (tag.kind) {
    case SpaceKind::ScalarP:
    case SpaceKind::VectorP:
      coordinate_fields();
      break;
    case SpaceKind::Nedelec:
      coordinate_fields();
      // xi x (m e_c) for homogeneous m of degree p
      for (int i = MonomialSet::count(p - 1); i < MonomialSet::count(p); ++i) {
        const auto e = mono.exponent(i);
        auto times = [&](int k) {
          auto f = e;
          ++f[k];
          return mono.index(f);
        };
        for (int c = 0; c < 3; ++c) {
          Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nc * nm);
          const int c1 = (c + 1) % 3;
          const int c2 = (c + 2) % 3;
          // (xi x e_c)_c1 = xi_c2, (xi x e_c)_c2 = -xi_c1
          r[c1 * nm + times(c2)] = 1.0;
          r[c2 * nm + times(c1)] = -1.0;
          rows.push_back(r);
        }
      }
      break;
    case SpaceKind::RaviartThomas:
      coordinate_fields();
      for (int i = MonomialSet::count(p - 1); i < MonomialSet::count(p); ++i) {
        const auto e = mono.exponent(i);
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nc * nm);
        for (int k = 0; k < 3; ++k) {
          auto f = e;
          ++f[k];
          r[k * nm + mono.index(f)] = 1.0;
        }
        rows.push_back(r);
      }
      break;
    case SpaceKind::FaceScalarP: {
      // s1^a s2^b with s_k = t_k . (x - x_F) / h written in local coordinates
      const Face& F = element.tet().face(tag.face);
      const double h = element.tet().h();
      const Point center = F.centroid - element.tet().centroid();
      std::array<Eigen::RowVectorXd, 2> s;
      for (int k = 0; k < 2; ++k) {
        const Point& t = k == 0 ? F.tangent1 : F.tangent2;
        const Point grad = element.local_frame().transpose() * t / h;
        s[k] = Eigen::RowVectorXd::Zero(nm);
        if (gens.poly_degree >= 1) {
          s[k][mono.index(1, 0, 0)] = grad[0];
          s[k][mono.index(0, 1, 0)] = grad[1];
          s[k][mono.index(0, 0, 1)] = grad[2];
        }
        s[k][0] = -t.dot(center) / h;
      }
      std::vector<Eigen::RowVectorXd> pow1(static_cast<std::size_t>(p + 1)), pow2(static_cast<std::size_t>(p + 1));
      pow1[0] = pow2[0] = unit_field(0, 0, 1.0);
      for (int d = 1; d <= p; ++d) {
        pow1[d] = mono.multiply(pow1[d - 1], s[0]);
        pow2[d] = mono.multiply(pow2[d - 1], s[1]);
      }
      for (int d = 0; d <= p; ++d)
        for (int a = d; a >= 0; --a) rows.push_back(mono.multiply(pow1[a], pow2[d - a]));
      break;
    }
    case SpaceKind::FaceTrace: {
      const auto ned = element.basis(SpaceTag::nedelec(p));
      gens.rows = ned->monomial_coeffs;
      return gens;
    }
  }
  gens.rows.resize(static_cast<Eigen::Index>(rows.size()), nc * nm);
  for (std::size_t i = 0; i < rows.size(); ++i) gens.rows.row(static_cast<Eigen::Index>(i)) = rows[i];
  // the fields above live in local coordinates; map them to physical
  // components covariantly (Nedelec) or contravariantly (Raviart-Thomas)
  if (tag.kind == SpaceKind::Nedelec) {
    gens.rows = mix_components(gens.rows, element.local_frame_inverse().transpose(), nm);
  } else if (tag.kind == SpaceKind::RaviartThomas) {
    gens.rows = mix_components(gens.rows, element.local_frame(), nm);
  }
  return gens;
}

struct OrthonormalizationResult {
  Eigen::MatrixXd coeffs;  // rank x n_columns
  Eigen::VectorXd singular_values;
  double orthonormality_error = 0.0;
};

/// Orthonormal combinations of the columns of a weighted sample matrix.
/// Rank is decided on singular values of the column-scaled matrix with the
/// relative cutoff `rank_tolerance`; a second Cholesky pass restores
/// orthonormality lost to conditioning.
inline OrthonormalizationResult orthonormalize_columns(const Eigen::MatrixXd& samples, double rank_tolerance,
                                                       bool scale_columns) {
  const Eigen::Index n = samples.cols();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  if (scale_columns) {
    const Eigen::VectorXd norms = samples.colwise().norm();
    const double largest = norms.maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) scale[j] = norms[j] > 1e-280 * largest ? 1.0 / norms[j] : 0.0;
  }
  const Eigen::MatrixXd scaled = samples * scale.asDiagonal();

  Eigen::MatrixXd square;
  if (scaled.rows() > 2 * n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
    square = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    square = scaled;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(square, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  const double cutoff = sigma.size() > 0 ? rank_tolerance * sigma[0] : 0.0;
  while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;

  Eigen::MatrixXd C = scale.asDiagonal() * svd.matrixV().leftCols(rank) *
                      sigma.head(rank).cwiseInverse().asDiagonal();
  // second pass
  const Eigen::MatrixXd B = samples * C;
  const Eigen::MatrixXd gram = B.transpose() * B;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw ConditioningFailure("orthonormalization: Gram matrix not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();

  const Eigen::MatrixXd B2 = samples * C;
  const double err = (B2.transpose() * B2 - Eigen::MatrixXd::Identity(rank, rank)).cwiseAbs().maxCoeff();
  OrthonormalizationResult out;
  out.coeffs = C.transpose();
  out.singular_values = sigma;
  out.orthonormality_error = rank > 0 ? err : 0.0;
  return out;
}

/// L2-orthonormal basis of the space `tag` on its domain.
inline PolySpaceBasis orthonormal_basis(const SpaceTag& tag, const Element& element) {
  if (tag.p < 0 || tag.p > kMaxDegree)
    throw UnsupportedDegree("polynomial degree " + std::to_string(tag.p) + " outside [0, " +
                            std::to_string(kMaxDegree) + "]");
  if (tag.on_face() && (tag.face < 0 || tag.face > 3)) throw Error("face index out of range");

  const GeneratorSet gens = monomial_generators(tag, element);
  const QuadratureRule& rule = element.rule_for(tag);
  const Eigen::MatrixXd samples =
      weighted_stack(evaluate_on_domain(element, tag, gens.rows, rule.points), rule.weights);

  // FaceTrace generators are already an orthonormal family in the volume;
  // rescaling their near-zero traces would promote rounding noise.
  const bool scale_columns = tag.kind != SpaceKind::FaceTrace;
  const OrthonormalizationResult on = orthonormalize_columns(samples, element.rank_tolerance(), scale_columns);
  if (on.orthonormality_error > 1e-8)
    throw ConditioningFailure(tag.name() + ": Gram deviates from identity by " +
                              std::to_string(on.orthonormality_error));

  PolySpaceBasis basis;
  basis.tag = tag;
  basis.dim = static_cast<int>(on.coeffs.rows());
  basis.components = gens.components;
  basis.poly_degree = gens.poly_degree;
  basis.generators = gens.rows;
  basis.coeffs = on.coeffs;
  basis.monomial_coeffs = on.coeffs * gens.rows;
  basis.singular_values = on.singular_values;
  basis.orthonormality_error = on.orthonormality_error;
  return basis;
}

inline std::shared_ptr<const PolySpaceBasis> Element::basis(const SpaceTag& tag) const {
  return bases_.get(tag, [&] { return std::make_shared<const PolySpaceBasis>(orthonormal_basis(tag, *this)); });
}

/// A field expanded in an orthonormal basis; its L2 norm is the coefficient norm.
struct FieldCoefficients {
  std::shared_ptr<const PolySpaceBasis> basis;
  Eigen::VectorXd coeffs;

  double norm() const { return coeffs.norm(); }
};

/// Pointwise values, components x points.
inline Eigen::MatrixXd evaluate(const Element& element, const FieldCoefficients& field,
                                const Eigen::Matrix3Xd& points) {
  const ComponentValues values = evaluate_basis(element, *field.basis, points);
  Eigen::MatrixXd out(values.size(), points.cols());
  for (std::size_t c = 0; c < values.size(); ++c) out.row(static_cast<Eigen::Index>(c)) = (values[c] * field.coeffs).transpose();
  return out;
}

/// Precision of the quadrature sums in project_rows. Extended is several
/// times slower and used for the differential operators, where it keeps
/// identities such as div(curl) = 0 an order of magnitude tighter.
enum class Accumulation { Standard, Extended };

/// L2 projection of fields given by monomial coefficient rows onto `target`.
/// Exact whenever rows and target members have degree <= the target's degree + extra_degree / 2.
/// Point values are always formed in extended precision: monomial coefficients of
/// high-degree orthonormal members cancel heavily, and operator identities
/// such as div(curl) = 0 survive only if that cancellation is resolved.
inline Eigen::MatrixXd project_rows(const Element& element, const PolySpaceBasis& target, int components,
                                    int poly_degree, const MatrixXld& rows, int extra_degree = 0,
                                    Accumulation accumulation = Accumulation::Standard) {
  const QuadratureRule& rule = element.rule_for(target.tag, extra_degree);
  const Eigen::Matrix3Xd xi = element.to_local(rule.points);
  const Eigen::Index n = rule.size();
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> sw = rule.weights.cast<long double>().cwiseSqrt();

  auto stack = [&](int degree, const MatrixXld& coeffs, int ncomp) {
    const MonomialSet mono(degree);
    const MatrixXld table = mono.evaluate<long double>(xi);
    const int nm = mono.size();
    std::vector<MatrixXld> values(static_cast<std::size_t>(ncomp));
    for (int c = 0; c < ncomp; ++c) values[c] = table * coeffs.middleCols(c * nm, nm).transpose();
    if (target.tag.kind == SpaceKind::FaceTrace) {
      const Point& normal = element.tet().face(target.tag.face).normal;
      const MatrixXld normal_part = static_cast<long double>(normal[0]) * values[0] +
                                    static_cast<long double>(normal[1]) * values[1] +
                                    static_cast<long double>(normal[2]) * values[2];
      for (int c = 0; c < 3; ++c) values[c] -= static_cast<long double>(normal[c]) * normal_part;
    }
    MatrixXld out(n * ncomp, coeffs.rows());
    for (int c = 0; c < ncomp; ++c) out.middleRows(c * n, n) = sw.asDiagonal() * values[c];
    return out;
  };
  const MatrixXld T = stack(target.poly_degree, target.monomial_coeffs.cast<long double>(), target.components);
  const MatrixXld Y = stack(poly_degree, rows, components);
  // Gram correction absorbs the residual non-orthonormality of the target basis.
  if (accumulation == Accumulation::Extended) {
    const MatrixXld gram = T.transpose() * T;
    const MatrixXld projected = gram.llt().solve(T.transpose() * Y);
    return projected.cast<double>();
  }
  const Eigen::MatrixXd Td = T.cast<double>();
  const Eigen::MatrixXd gram = Td.transpose() * Td;
  return gram.llt().solve(Td.transpose() * Y.cast<double>());
}

inline Eigen::MatrixXd project_rows(const Element& element, const PolySpaceBasis& target, int components,
                                    int poly_degree, const Eigen::MatrixXd& rows, int extra_degree = 0) {
  return project_rows(element, target, components, poly_degree, MatrixXld(rows.cast<long double>()), extra_degree);
}

/// L2 projection onto `target` of fields sampled at the points of `rule`
/// (one points x columns matrix per component).
inline Eigen::MatrixXd project_samples(const Element& element, const PolySpaceBasis& target,
                                       const ComponentValues& values, const QuadratureRule& rule) {
  const Eigen::MatrixXd T = weighted_stack(evaluate_basis(element, target, rule.points), rule.weights);
  const Eigen::MatrixXd gram = T.transpose() * T;
  return gram.llt().solve(T.transpose() * weighted_stack(values, rule.weights));
}

/// Matrix expressing the members of `source` in the basis `target` (L2 projection).
inline Eigen::MatrixXd projection_matrix(const Element& element, const PolySpaceBasis& target,
                                         const PolySpaceBasis& source) {
  const int extra = std::max(0, 2 * (source.poly_degree - target.poly_degree));
  return project_rows(element, target, source.components, source.poly_degree, source.monomial_coeffs, extra);
}

}  // namespace curlstab
