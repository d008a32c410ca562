#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "curlstab/calculus.hpp"
#include "curlstab/geometry.hpp"
#include "curlstab/lazy_cache.hpp"
#include "curlstab/polyspace.hpp"

namespace curlstab {

/// Covariant Piola mapping v -> J^T (v o T) for an affine T : K_hat -> K.
class PiolaContext {
 public:
  PiolaContext(std::shared_ptr<const Element> reference, std::shared_ptr<const Element> target, AffineMap map)
      : reference_(std::move(reference)), target_(std::move(target)), map_(map) {
    // F_hat = T^{-1}(F), matched through face centroids
    for (int f = 0; f < 4; ++f) {
      face_preimage_[f] = -1;
      const Point c = map_.inverse(target_->tet().face(f).centroid);
      for (int g = 0; g < 4; ++g)
        if ((reference_->tet().face(g).centroid - c).norm() <= 1e-10 * reference_->tet().h()) face_preimage_[f] = g;
    }
  }

  /// Context for T mapping `reference` onto `target` with vertex i -> permutation[i].
  static PiolaContext between(std::shared_ptr<const Element> reference, std::shared_ptr<const Element> target,
                              const std::array<int, 4>& permutation = {0, 1, 2, 3}) {
    AffineMap map = affine_map_between(reference->tet(), target->tet(), permutation);
    return PiolaContext(std::move(reference), std::move(target), map);
  }

  const Element& reference() const { return *reference_; }
  const Element& target() const { return *target_; }
  const AffineMap& map() const { return map_; }
  /// Face of the reference element mapped onto face f of the target, or -1.
  int face_preimage(int f) const { return face_preimage_[f]; }

  /// Nedelec(p) on K -> Nedelec(p) on K_hat, in the orthonormal bases.
  const Eigen::MatrixXd& pullback_matrix(int p) const {
    return *pullbacks_.get(p, [&] {
      const Element& ref = *reference_;
      const auto hat_basis = ref.basis(SpaceTag::nedelec(p));
      const auto basis = target_->basis(SpaceTag::nedelec(p));
      const QuadratureRule& rule = ref.rule_for(hat_basis->tag);
      ComponentValues values = evaluate_basis(*target_, *basis, map_.apply(rule.points));
      return std::make_shared<const Eigen::MatrixXd>(
          project_samples(ref, *hat_basis, apply_matrix(map_.jacobian.transpose(), values), rule));
    });
  }

  /// Inverse mapping v_hat -> J^{-T} (v_hat o T^{-1}).
  const Eigen::MatrixXd& pushforward_matrix(int p) const {
    return *pushforwards_.get(p, [&] {
      const Element& tgt = *target_;
      const auto hat_basis = reference_->basis(SpaceTag::nedelec(p));
      const auto basis = tgt.basis(SpaceTag::nedelec(p));
      const QuadratureRule& rule = tgt.rule_for(basis->tag);
      ComponentValues values = evaluate_basis(*reference_, *hat_basis, map_.apply_inverse(rule.points));
      return std::make_shared<const Eigen::MatrixXd>(
          project_samples(tgt, *basis, apply_matrix(map_.inverse_jacobian.transpose(), values), rule));
    });
  }

  /// values_c <- sum_k M(c, k) values_k
  static ComponentValues apply_matrix(const Eigen::Matrix3d& M, const ComponentValues& values) {
    ComponentValues out(3);
    for (int c = 0; c < 3; ++c) out[c] = M(c, 0) * values[0] + M(c, 1) * values[1] + M(c, 2) * values[2];
    return out;
  }

 private:
  std::shared_ptr<const Element> reference_;
  std::shared_ptr<const Element> target_;
  AffineMap map_;
  std::array<int, 4> face_preimage_{};
  LazyCache<int, Eigen::MatrixXd> pullbacks_;
  LazyCache<int, Eigen::MatrixXd> pushforwards_;
};

/// Pullback of a Nedelec(p) field on K to K_hat.
inline FieldCoefficients covariant_pullback(const FieldCoefficients& v, const PiolaContext& ctx) {
  const int p = v.basis->tag.p;
  if (v.basis->tag.kind != SpaceKind::Nedelec) throw Error("covariant_pullback: field must be Nedelec");
  return {ctx.reference().basis(SpaceTag::nedelec(p)), ctx.pullback_matrix(p) * v.coeffs};
}

inline FieldCoefficients covariant_pushforward(const FieldCoefficients& v_hat, const PiolaContext& ctx) {
  const int p = v_hat.basis->tag.p;
  return {ctx.target().basis(SpaceTag::nedelec(p)), ctx.pushforward_matrix(p) * v_hat.coeffs};
}

/// Random affine map with Jacobian condition number <= max_condition.
inline AffineMap random_affine_map(std::uint64_t seed, double max_condition, bool reverse_orientation) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto orthogonal = [&] {
    Eigen::Matrix3d A;
    for (int i = 0; i < 9; ++i) A(i / 3, i % 3) = normal(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(A);
    Eigen::Matrix3d Q = qr.householderQ();
    if (Q.determinant() < 0.0) Q.col(0) *= -1.0;
    return Q;
  };
  const Eigen::Matrix3d U = orthogonal(), V = orthogonal();
  Eigen::Vector3d s(1.0, std::pow(max_condition, uniform(rng)), std::pow(max_condition, uniform(rng)));
  s *= 0.5 + uniform(rng);  // overall size in [0.5, 1.5)
  Eigen::Matrix3d J = U * s.asDiagonal() * V.transpose();
  if (reverse_orientation) J.col(0) *= -1.0;
  AffineMap map;
  map.jacobian = J;
  map.offset = Point(normal(rng), normal(rng), normal(rng));
  map.det = J.determinant();
  map.inverse_jacobian = J.inverse();
  return map;
}

struct PiolaReport {
  int trials = 0;
  int curl_free_mismatches = 0;   // (a) curl-free status differs between v and v_hat
  bool curl_rank_equal = true;    // (a) rank of curl images equal
  double bound_violation = 0.0;   // (b) relative violation of the two-sided L2 bound
  double trace_violation = 0.0;   // (c) relative mismatch of mapped tangential traces
  double round_trip_error = 0.0;  // pushforward(pullback(v)) - v
  int mapped_rank = 0;            // rank of the pullback matrix
  bool pass = true;
  std::string failure;
};

/// Randomized check of the curl-free equivalence, the two-sided L2 bound and
/// preservation of tangential traces. Throws PropertyViolation on failure.
inline PiolaReport check_piola_properties(int p, const PiolaContext& ctx, int trials, std::uint64_t seed,
                                          double slack = 1e-9) {
  const Element& ref = ctx.reference();
  const Element& tgt = ctx.target();
  const Tetrahedron& K = tgt.tet();
  const Tetrahedron& K_hat = ref.tet();
  const Eigen::MatrixXd& P = ctx.pullback_matrix(p);
  const Eigen::MatrixXd& Q = ctx.pushforward_matrix(p);
  const Eigen::MatrixXd& curl = curl_matrix(p, tgt).matrix;
  const Eigen::MatrixXd& curl_hat = curl_matrix(p, ref).matrix;
  const Eigen::MatrixXd& grad = gradient_matrix(p, tgt).matrix;
  const double curl_scale = curl.norm() + 1.0;
  const double curl_hat_scale = curl_hat.norm() + 1.0;
  const double det_root = std::sqrt(std::abs(ctx.map().det));

  PiolaReport report;
  report.trials = trials;
  auto fail = [&](const std::string& what, int trial) {
    if (report.pass) report.failure = what + " (trial " + std::to_string(trial) + ")";
    report.pass = false;
  };

  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
    const auto& s = svd.singularValues();
    report.mapped_rank = static_cast<int>((s.array() > 1e-10 * s[0]).count());
    if (report.mapped_rank != P.cols()) fail("pullback is not bijective", -1);
    auto rank_of = [](const Eigen::MatrixXd& M) {
      Eigen::JacobiSVD<Eigen::MatrixXd> d(M);
      const auto& sv = d.singularValues();
      return static_cast<int>((sv.array() > 1e-9 * sv[0]).count());
    };
    report.curl_rank_equal = rank_of(curl) == rank_of(curl_hat * P);
    if (!report.curl_rank_equal) fail("(a) curl image ranks differ", -1);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    // alternate generic fields and gradients so both sides of (a) are exercised
    Eigen::VectorXd v(P.cols());
    if (t % 2 == 0) {
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    } else {
      Eigen::VectorXd q(grad.cols());
      for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = normal(rng);
      v = grad * q;
    }
    const Eigen::VectorXd v_hat = P * v;
    const double norm = v.norm();
    const double norm_hat = v_hat.norm();

    const bool free = (curl * v).norm() <= slack * curl_scale * norm;
    const bool free_hat = (curl_hat * v_hat).norm() <= slack * curl_hat_scale * norm_hat;
    if (free != free_hat) {
      ++report.curl_free_mismatches;
      fail("(a) curl-free status not preserved", t);
    }

    const double lower = K.rho() / K_hat.h() * norm;
    const double middle = det_root * norm_hat;
    const double upper = K.h() / K_hat.rho() * norm;
    const double violation = std::max({lower - middle, middle - upper, 0.0}) / std::max(middle, 1e-300);
    report.bound_violation = std::max(report.bound_violation, violation);
    if (violation > slack) fail("(b) L2 bound violated", t);

    report.round_trip_error = std::max(report.round_trip_error, (Q * v_hat - v).norm() / std::max(norm, 1e-300));

    for (int f = 0; f < 4; ++f) {
      const int f_hat = ctx.face_preimage(f);
      if (f_hat < 0) {
        fail("(c) face " + std::to_string(f) + " has no preimage", t);
        continue;
      }
      const Eigen::VectorXd r_F = tangential_trace_matrix(p, tgt, f).matrix * v;
      const Eigen::VectorXd r_hat = tangential_trace_matrix(p, ref, f_hat).matrix * v_hat;
      const QuadratureRule& rule = ref.face_rule(2 * p + 3, f_hat);
      // pull the trace datum of F back to F_hat and take its tangential part
      ComponentValues mapped = PiolaContext::apply_matrix(
          ctx.map().jacobian.transpose(),
          evaluate_basis(tgt, *tgt.basis(SpaceTag::face_trace(p, f)), ctx.map().apply(rule.points)));
      project_tangential(mapped, K_hat.face(f_hat).normal);
      const ComponentValues direct = evaluate_basis(ref, *ref.basis(SpaceTag::face_trace(p, f_hat)), rule.points);
      double diff2 = 0.0;
      double ref2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd a = mapped[c] * r_F;
        const Eigen::VectorXd b = direct[c] * r_hat;
        diff2 += rule.weights.dot((a - b).cwiseAbs2());
        ref2 += rule.weights.dot(b.cwiseAbs2());
      }
      const double rel = std::sqrt(diff2) / (std::sqrt(ref2) + norm_hat + 1e-300);
      report.trace_violation = std::max(report.trace_violation, rel);
      if (rel > slack) fail("(c) tangential trace not preserved on face " + std::to_string(f), t);
    }
  }
  if (!report.pass) throw PropertyViolation("check_piola_properties: " + report.failure);
  return report;
}

}  // namespace curlstab
