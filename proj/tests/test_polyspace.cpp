#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curlstab/calculus.hpp"
#include "curlstab/polyspace.hpp"

using namespace curlstab;

namespace {

const std::vector<SpaceKind> kVolumeKinds{SpaceKind::ScalarP, SpaceKind::VectorP, SpaceKind::Nedelec,
                                          SpaceKind::RaviartThomas};

std::vector<SpaceTag> tags_for(int p) {
  std::vector<SpaceTag> tags;
  for (SpaceKind k : kVolumeKinds) tags.push_back({k, p, -1});
  for (int f = 0; f < 4; ++f) {
    tags.push_back(SpaceTag::face_scalar(p, f));
    tags.push_back(SpaceTag::face_trace(p, f));
  }
  return tags;
}

// Rank of the sampled generators by full-pivoting QR (independent of the
// SVD used to build the bases).
int generator_rank(const Element& element, const SpaceTag& tag) {
  const GeneratorSet gens = monomial_generators(tag, element);
  const QuadratureRule& rule = element.rule_for(tag);
  const Eigen::MatrixXd samples = weighted_stack(
      evaluate_on_domain(element, tag, gens.rows, rule.points), rule.weights);
  Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(samples);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

// L2 distance of each member of `inner` from span(outer), by quadrature.
double span_residual(const Element& element, const SpaceTag& inner, const SpaceTag& outer) {
  const auto a = element.basis(inner);
  const auto b = element.basis(outer);
  const Eigen::MatrixXd P = projection_matrix(element, *b, *a);
  const QuadratureRule& rule = element.rule_for(outer, 2);
  const ComponentValues va = evaluate_basis(element, *a, rule.points);
  const ComponentValues vb = evaluate_basis(element, *b, rule.points);
  double worst = 0.0;
  for (int i = 0; i < a->dim; ++i) {
    double r2 = 0.0;
    for (std::size_t c = 0; c < va.size(); ++c)
      r2 += rule.weights.dot((va[c].col(i) - vb[c] * P.col(i)).cwiseAbs2());
    worst = std::max(worst, std::sqrt(r2));
  }
  return worst;
}

}  // namespace

TEST(Polyspace, DimensionClosedForms) {
  const int ned[] = {6, 20, 45, 84, 140, 216};
  const int rt[] = {4, 15, 36, 70, 120, 189};
  const int ft[] = {3, 8, 15, 24, 35, 48};
  for (int p = 0; p <= 5; ++p) {
    EXPECT_EQ(dimension(SpaceTag::nedelec(p)), ned[p]);
    EXPECT_EQ(dimension(SpaceTag::raviart_thomas(p)), rt[p]);
    EXPECT_EQ(dimension(SpaceTag::face_trace(p, 0)), ft[p]);
  }
}

TEST(Polyspace, DimensionMatchesRankOracle) {
  for (const Tetrahedron& K :
       {reference_tetrahedron(),
        build_tetrahedron({Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0), Point(1.0 / 3, 1.0 / 3, 0.1)})}) {
    const Element element(K);
    for (int p = 0; p <= 5; ++p)
      for (const SpaceTag& tag : tags_for(p)) {
        EXPECT_EQ(generator_rank(element, tag), dimension(tag)) << tag.name();
        EXPECT_EQ(element.basis(tag)->dim, dimension(tag)) << tag.name();
      }
  }
}

TEST(Polyspace, GeneratorCounts) {
  const Element element(reference_tetrahedron());
  EXPECT_EQ(monomial_generators(SpaceTag::nedelec(0), element).size(), 6);
  EXPECT_EQ(monomial_generators(SpaceTag::raviart_thomas(0), element).size(), 4);
  EXPECT_EQ(monomial_generators(SpaceTag::nedelec(1), element).size(), 21);
  EXPECT_EQ(element.basis(SpaceTag::nedelec(1))->dim, 20);
}

TEST(Polyspace, OrthonormalityAllKindsUpToNine) {
  const Element element(reference_tetrahedron());
  for (int p = 0; p <= 9; ++p)
    for (const SpaceTag& tag : tags_for(p)) {
      if (tag.kind == SpaceKind::VectorP && p > 6) continue;  // same monomials as ScalarP
      const auto basis = element.basis(tag);
      // independent Gram with a richer rule than the construction used
      const QuadratureRule& rule = element.rule_for(tag, 4);
      const Eigen::MatrixXd S = weighted_stack(evaluate_basis(element, *basis, rule.points), rule.weights);
      const Eigen::MatrixXd gram = S.transpose() * S;
      EXPECT_LE((gram - Eigen::MatrixXd::Identity(basis->dim, basis->dim)).cwiseAbs().maxCoeff(), 1e-10)
          << tag.name();
    }
}

TEST(Polyspace, DegreeTenWithinConditioningLimit) {
  const Element element(reference_tetrahedron());
  const auto ned = element.basis(SpaceTag::nedelec(10));
  EXPECT_EQ(ned->dim, 1001);
  EXPECT_LE(ned->orthonormality_error, 1e-8);
  EXPECT_THROW(element.basis(SpaceTag::nedelec(11)), UnsupportedDegree);
  EXPECT_THROW(element.basis(SpaceTag::scalar(-1)), UnsupportedDegree);
}

TEST(Polyspace, ScalarConstantOnReference) {
  const Element element(reference_tetrahedron());
  const auto b = element.basis(SpaceTag::scalar(0));
  Eigen::Matrix3Xd pts(3, 2);
  pts << 0.1, 0.3, 0.2, 0.1, 0.3, 0.05;
  const Eigen::MatrixXd v = evaluate(element, {b, Eigen::VectorXd::Ones(1)}, pts);
  EXPECT_NEAR(std::abs(v(0, 0)), std::sqrt(6.0), 1e-13);
  EXPECT_NEAR(v(0, 0), v(0, 1), 1e-13);
}

TEST(Polyspace, EvaluateAndReproject) {
  const Element element(build_tetrahedron({Point(0.1, 0, 0), Point(1.2, 0.1, 0), Point(0.2, 0.9, 0.1),
                                           Point(0.3, 0.2, 0.8)}));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const SpaceTag& tag : {SpaceTag::nedelec(3), SpaceTag::raviart_thomas(3), SpaceTag::face_trace(3, 2)}) {
    const auto basis = element.basis(tag);
    const QuadratureRule& rule = element.rule_for(tag);
    // zero coefficients give zero values
    EXPECT_EQ(evaluate(element, {basis, Eigen::VectorXd::Zero(basis->dim)}, rule.points).cwiseAbs().maxCoeff(), 0.0);
    // each basis member reprojects onto its unit vector
    const Eigen::MatrixXd P = project_samples(element, *basis, evaluate_basis(element, *basis, rule.points), rule);
    EXPECT_LE((P - Eigen::MatrixXd::Identity(basis->dim, basis->dim)).cwiseAbs().maxCoeff(), 1e-10) << tag.name();
    // L2 norm by quadrature equals the coefficient norm
    Eigen::VectorXd c(basis->dim);
    for (auto& x : c) x = n(rng);
    const Eigen::MatrixXd vals = evaluate(element, {basis, c}, rule.points);
    const double l2 = std::sqrt(rule.weights.dot(vals.colwise().squaredNorm().transpose()));
    EXPECT_NEAR(l2, c.norm(), 1e-10 * c.norm()) << tag.name();
  }
}

TEST(Polyspace, CrossProductField) {
  // x cross e3 = (y, -x, 0) lies in Nedelec(0); at (1,0,0) it is (0,-1,0)
  const Element element(reference_tetrahedron());
  const auto ned = element.basis(SpaceTag::nedelec(0));
  const QuadratureRule& rule = element.rule_for(ned->tag);
  ComponentValues field(3);
  field[0] = rule.points.row(1).transpose();
  field[1] = -rule.points.row(0).transpose();
  field[2] = Eigen::VectorXd::Zero(rule.size());
  const Eigen::VectorXd c = project_samples(element, *ned, field, rule).col(0);
  Eigen::Matrix3Xd x(3, 1);
  x << 1, 0, 0;
  EXPECT_NEAR((evaluate(element, {ned, c}, x).col(0) - Point(0, -1, 0)).norm(), 0.0, 1e-13);
}

TEST(Polyspace, Nestedness) {
  const Element element(build_tetrahedron({Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0), Point(1.0 / 3, 1.0 / 3, 0.5)}));
  for (int p = 0; p <= 5; ++p)
    for (const SpaceTag& tag : tags_for(p)) {
      SpaceTag next = tag;
      next.p = p + 1;
      EXPECT_LE(span_residual(element, tag, next), 1e-9) << tag.name();
    }
  // P_p^3 inside both N_p and RT_p, both inside P_{p+1}^3
  for (int p = 0; p <= 5; ++p) {
    EXPECT_LE(span_residual(element, SpaceTag::nedelec(p), SpaceTag::vector(p + 1)), 1e-9);
    EXPECT_LE(span_residual(element, SpaceTag::raviart_thomas(p), SpaceTag::vector(p + 1)), 1e-9);
    EXPECT_LE(span_residual(element, SpaceTag::vector(p), SpaceTag::nedelec(p)), 1e-9);
    EXPECT_LE(span_residual(element, SpaceTag::vector(p), SpaceTag::raviart_thomas(p)), 1e-9);
  }
  // RT_p and N_p differ for every p
  EXPECT_GT(span_residual(element, SpaceTag::raviart_thomas(1), SpaceTag::nedelec(1)), 0.1);
}

TEST(Polyspace, GradientsLieInNedelec) {
  const Element element(reference_tetrahedron());
  for (int p = 0; p <= 6; ++p) {
    const auto scalar = element.basis(SpaceTag::scalar(p + 1));
    const auto ned = element.basis(SpaceTag::nedelec(p));
    const MatrixXld grads = gradient_rows(element, p + 1, scalar->monomial_coeffs.cast<long double>());
    const Eigen::MatrixXd G = grads.cast<double>();
    const Eigen::MatrixXd P = project_rows(element, *ned, 3, p + 1, G);
    const QuadratureRule& rule = element.rule_for(ned->tag, 2);
    const ComponentValues direct = evaluate_rows(element, 3, p + 1, G, rule.points);
    const ComponentValues projected = evaluate_basis(element, *ned, rule.points);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < G.rows(); ++i) {
      double r2 = 0.0, n2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        r2 += rule.weights.dot((direct[c].col(i) - projected[c] * P.col(i)).cwiseAbs2());
        n2 += rule.weights.dot(direct[c].col(i).cwiseAbs2());
      }
      worst = std::max(worst, std::sqrt(r2));
      scale = std::max(scale, std::sqrt(n2));
    }
    EXPECT_LE(worst, 1e-9 * scale) << "p=" << p;
  }
}

TEST(Polyspace, RankStableAcrossTolerance) {
  for (double eps : {1e-12, 1e-10, 1e-8}) {
    const Element element(reference_tetrahedron(), eps);
    for (int p = 0; p <= 7; ++p)
      for (const SpaceTag& tag : tags_for(p)) {
        if (tag.on_face() && tag.face != 3) continue;
        EXPECT_EQ(element.basis(tag)->dim, dimension(tag)) << tag.name() << " eps " << eps;
      }
    EXPECT_EQ(element.basis(SpaceTag::raviart_thomas(10))->dim, dimension(SpaceTag::raviart_thomas(10)));
  }
}

TEST(Polyspace, ShapeIndependentConditioning) {
  // affine-local coordinates: a very anisotropic element builds as cleanly as the reference
  const Element element(build_tetrahedron({Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0), Point(1.0 / 3, 1.0 / 3, 0.01)}));
  for (int p = 0; p <= 6; ++p) {
    const auto ned = element.basis(SpaceTag::nedelec(p));
    EXPECT_EQ(ned->dim, dimension(ned->tag));
    EXPECT_LE(ned->orthonormality_error, 1e-10);
  }
}
