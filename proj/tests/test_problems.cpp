#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace curlstab;
using namespace curlstab::testing;

namespace {

const std::vector<std::vector<int>> kSubsets{{}, {0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}, {1, 3}, {2}};

Eigen::VectorXd project_vector(const Element& element, const SpaceTag& tag, const VectorField& f) {
  const auto basis = element.basis(tag);
  const QuadratureRule& rule = element.rule_for(tag, 2);
  ComponentValues values = sample(f, rule.points);
  values.resize(static_cast<std::size_t>(basis->components));
  return project_samples(element, *basis, values, rule).col(0);
}

// L2 norm of the reconstructed field, by quadrature
double field_norm(const Element& element, const SpaceTag& tag, const Eigen::VectorXd& c) {
  const QuadratureRule& rule = element.rule_for(tag, 2);
  const Eigen::MatrixXd v = evaluate(element, {element.basis(tag), c}, rule.points);
  return std::sqrt(rule.weights.dot(v.colwise().squaredNorm().transpose()));
}

}  // namespace

TEST(Problems, GeneratedHcurlDataValidate) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 4; ++p)
    for (const auto& F : kSubsets) {
      const HcurlProblem prob = generate_compatible_hcurl_data(K, p, F, 1000 + p);
      const HcurlValidation v = validate(prob);
      EXPECT_TRUE(v.pass) << v.message;
      EXPECT_LE(v.div_residual, 1e-9 * prob.r_K.norm() + 1e-15);
      ASSERT_TRUE(prob.generator.has_value());
    }
}

TEST(Problems, RotationExample) {
  const ElementPtr K = make_element(reference_tetrahedron());
  const int z0 = face_with_normal(K->tet(), Point(0, 0, -1));
  const Eigen::VectorXd w =
      project_vector(*K, SpaceTag::nedelec(0), [](const Point& x) { return Point(-x.y(), x.x(), 0.0); });
  const HcurlProblem prob = hcurl_problem_from_field(K, 0, {z0}, w);
  const QuadratureRule& r = K->volume_rule(2);
  const Eigen::MatrixXd rK = evaluate(*K, {K->basis(SpaceTag::raviart_thomas(0)), prob.r_K}, r.points);
  for (Eigen::Index i = 0; i < r.size(); ++i) EXPECT_NEAR((rK.col(i) - Point(0, 0, 2)).norm(), 0.0, 1e-12);
  const Eigen::VectorXd scurl = surface_curl_matrix(0, *K, z0).matrix * prob.r_F.values[0];
  const QuadratureRule& fr = K->face_rule(2, z0);
  const Eigen::MatrixXd s = evaluate(*K, {K->basis(SpaceTag::face_scalar(0, z0)), scurl}, fr.points);
  EXPECT_NEAR(s.maxCoeff(), -2.0, 1e-12);
  EXPECT_NEAR(s.minCoeff(), -2.0, 1e-12);
  EXPECT_TRUE(validate(prob).pass);
}

TEST(Problems, GradientGeneratorHasZeroCurlDatum) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 3; ++p) {
    const Eigen::VectorXd q = random_coefficients(dimension(SpaceTag::scalar(p + 1)), 60 + p);
    const HcurlProblem prob = hcurl_problem_from_field(K, p, {0, 2}, gradient_matrix(p, *K).matrix * q);
    EXPECT_LE(prob.r_K.norm(), 1e-10 * q.norm());
  }
}

TEST(Problems, ClosedFormCurlOnly) {
  const ElementPtr K = make_element(reference_tetrahedron());
  const Eigen::VectorXd r_K =
      project_vector(*K, SpaceTag::raviart_thomas(0), [](const Point&) { return Point(0, 0, 2); });
  const MinResult res = solve_min_curl_only(K, 0, r_K);
  EXPECT_NEAR(res.norm, 1.0 / std::sqrt(80.0), 1e-10);
  const Eigen::VectorXd expected =
      project_vector(*K, SpaceTag::nedelec(0), [](const Point& x) { return Point(0.25 - x.y(), x.x() - 0.25, 0.0); });
  EXPECT_LE((res.x - expected).norm(), 1e-9);
  EXPECT_NEAR(field_norm(*K, SpaceTag::nedelec(0), res.x), res.norm, 1e-10 * res.norm);
  // richer spaces cannot do worse
  EXPECT_LE(reference_min_norm(generate_compatible_hcurl_data(K, 0, {}, 1), 3).value,
            solve_min_hcurl(generate_compatible_hcurl_data(K, 0, {}, 1)).norm + 1e-10);
  HcurlProblem prob;
  prob.element = K;
  prob.p = 0;
  prob.r_K = r_K;
  EXPECT_LE(reference_min_norm(prob, 3).value, 1.0 / std::sqrt(80.0) + 1e-10);
  EXPECT_LE(solve_min_curl_only(K, 0, r_K, 1).norm, res.norm + 1e-10);
}

TEST(Problems, ClosedFormHdiv) {
  // div v = 3 in RT_0: v = x - centroid, ||v||^2 = 3/60 - |K||c|^2 = 3/160
  const ElementPtr K = make_element(reference_tetrahedron());
  HdivProblem prob;
  prob.element = K;
  prob.p = 0;
  prob.r_K = project_vector(*K, SpaceTag::scalar(0), [](const Point&) { return Point(3, 0, 0); });
  const MinResult res = solve_min_hdiv(prob);
  EXPECT_NEAR(res.norm, std::sqrt(3.0 / 160.0), 1e-12);
  const MinResult oracle = oracle_solve(constraint_system(prob));
  EXPECT_LE((res.x - oracle.x).norm(), 1e-10);
}

TEST(Problems, ZeroData) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 3; ++p) {
    const HcurlProblem h = hcurl_problem_from_field(K, p, {0, 1, 2, 3}, Eigen::VectorXd::Zero(dimension(SpaceTag::nedelec(p))));
    EXPECT_EQ(solve_min_hcurl(h).norm, 0.0);
    EXPECT_EQ(reference_min_norm(h, 2).value, 0.0);
    const Step3Report s = step3_decomposition(h);
    EXPECT_EQ(s.xi.norm(), 0.0);
    EXPECT_EQ(s.xi_tilde.norm(), 0.0);
    EXPECT_TRUE(s.pass);

    HdivProblem d;
    d.element = K;
    d.p = p;
    d.faces = {0, 1, 2, 3};
    d.r_K = Eigen::VectorXd::Zero(dimension(SpaceTag::scalar(p)));
    for (int f = 0; f < 4; ++f) d.r_F.push_back(Eigen::VectorXd::Zero(dimension(SpaceTag::face_scalar(p, f))));
    EXPECT_EQ(solve_min_hdiv(d).norm, 0.0);
  }
}

TEST(Problems, SolutionsAreFeasibleAndBoundedByGenerator) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 4; ++p)
    for (const auto& F : kSubsets) {
      const HcurlProblem h = generate_compatible_hcurl_data(K, p, F, 77 + p);
      const MinResult r = solve_min_hcurl(h);
      const double scale = h.scale();
      EXPECT_LE((curl_matrix(p, *K).matrix * r.x - h.r_K).norm(), 1e-9 * scale);
      for (std::size_t i = 0; i < F.size(); ++i)
        EXPECT_LE((tangential_trace_matrix(p, *K, F[i]).matrix * r.x - h.r_F.values[i]).norm(), 1e-9 * scale);
      EXPECT_LE(r.norm, h.generator->norm() + 1e-10 * scale);

      const HdivProblem d = generate_compatible_hdiv_data(K, p, F, 99 + p);
      const MinResult s = solve_min_hdiv(d);
      EXPECT_LE((div_matrix(p, *K).matrix * s.x - d.r_K).norm(), 1e-9 * d.scale());
      EXPECT_LE(s.norm, d.generator->norm() + 1e-10 * d.scale());
    }
}

TEST(Problems, TraceOnly) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 3; ++p)
    for (const auto& F : kSubsets) {
      if (F.empty()) continue;
      const HcurlProblem h = generate_curl_free_trace_data(K, p, F, 31 + p);
      const MinResult r = solve_min_trace_only(K, p, h.r_F);
      EXPECT_LE(r.norm, h.generator->norm() + 1e-10 * h.scale());
      EXPECT_LE((curl_matrix(p, *K).matrix * r.x).norm(), 1e-9 * h.scale());
    }
  // p = 1, one face, trace of grad(xy)
  const Eigen::VectorXd g =
      project_vector(*K, SpaceTag::nedelec(1), [](const Point& x) { return Point(x.y(), x.x(), 0.0); });
  const HcurlProblem h = hcurl_problem_from_field(K, 1, {2}, g);
  const MinResult r = solve_min_trace_only(K, 1, h.r_F);
  HcurlProblem as_problem = h;
  as_problem.r_K.setZero();
  const MinResult o = oracle_solve(constraint_system(as_problem));
  EXPECT_LE((r.x - o.x).norm(), 1e-10);
  EXPECT_LE(r.norm, g.norm() + 1e-10);
  // zero traces
  TraceData zero = h.r_F;
  zero.values[0].setZero();
  EXPECT_EQ(solve_min_trace_only(K, 1, zero).norm, 0.0);
}

TEST(Problems, SandwichAndMonotonicity) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 3; ++p)
    for (const auto& F : kSubsets) {
      const HcurlProblem h = generate_compatible_hcurl_data(K, p, F, 400 + p);
      const double scale = h.scale();
      double previous = solve_min_hcurl(h).norm;
      const double at_p = previous;
      for (int q = p + 1; q <= p + 3; ++q) {
        const double n = solve_min_hcurl(h, q).norm;
        EXPECT_LE(n, previous + 1e-10 * scale) << "p=" << p << " q=" << q;
        previous = n;
      }
      const ReferenceNorm ref = reference_min_norm(h, 3);
      EXPECT_NEAR(ref.value, previous, 1e-12 * scale);
      EXPECT_LE(ref.value, ref.previous + 1e-10 * scale);
      EXPECT_LE(ref.value, at_p + 1e-10 * scale);
      EXPECT_LE(at_p, h.generator->norm() + 1e-10 * scale);

      const HdivProblem d = generate_compatible_hdiv_data(K, p, F, 500 + p);
      const ReferenceNorm rd = reference_min_norm(d, 3);
      EXPECT_LE(rd.value, solve_min_hdiv(d).norm + 1e-10 * d.scale());
    }
}

TEST(Problems, RemovingFacesNeverIncreasesMinimum) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 3; ++p) {
    const Eigen::VectorXd w = random_coefficients(dimension(SpaceTag::nedelec(p)), 800 + p);
    const double full = solve_min_hcurl(hcurl_problem_from_field(K, p, {0, 1, 2, 3}, w)).norm;
    for (int mask = 0; mask < 16; ++mask) {
      const double sub = solve_min_hcurl(hcurl_problem_from_field(K, p, faces_of_mask(mask), w)).norm;
      EXPECT_LE(sub, full + 1e-10);
      for (int f = 0; f < 4; ++f)
        if (mask & (1 << f)) {
          const double smaller = solve_min_hcurl(hcurl_problem_from_field(K, p, faces_of_mask(mask & ~(1 << f)), w)).norm;
          EXPECT_LE(smaller, sub + 1e-10);
        }
    }
  }
}

TEST(Problems, OracleEquivalence) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 2; ++p)
    for (const auto& F : kSubsets) {
      const HcurlProblem h = generate_compatible_hcurl_data(K, p, F, 10 * p + 1);
      EXPECT_LE((solve_min_hcurl(h).x - oracle_solve(constraint_system(h)).x).lpNorm<Eigen::Infinity>(), 1e-10);
      const HdivProblem d = generate_compatible_hdiv_data(K, p, F, 10 * p + 2);
      EXPECT_LE((solve_min_hdiv(d).x - oracle_solve(constraint_system(d)).x).lpNorm<Eigen::Infinity>(), 1e-10);
    }
}

TEST(Problems, UniqueUnderRowPermutation) {
  const ElementPtr K = make_element(skewed());
  std::mt19937 rng(3);
  for (int p = 0; p <= 3; ++p) {
    const HcurlProblem h = generate_compatible_hcurl_data(K, p, {0, 1, 3}, 70 + p);
    const ConstraintSystem sys = constraint_system(h);
    std::vector<int> order(static_cast<std::size_t>(sys.B.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    ConstraintSystem permuted;
    permuted.B.resize(sys.B.rows(), sys.B.cols());
    permuted.d.resize(sys.d.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      permuted.B.row(static_cast<Eigen::Index>(i)) = sys.B.row(order[i]);
      permuted.d[static_cast<Eigen::Index>(i)] = sys.d[order[i]];
    }
    EXPECT_LE((least_norm_solve(permuted).x - solve_min_hcurl(h).x).norm(), 1e-10);
    // face order in the data does not matter either
    HcurlProblem reordered = h;
    std::reverse(reordered.faces.begin(), reordered.faces.end());
    std::reverse(reordered.r_F.faces.begin(), reordered.r_F.faces.end());
    std::reverse(reordered.r_F.values.begin(), reordered.r_F.values.end());
    EXPECT_LE((solve_min_hcurl(reordered).x - solve_min_hcurl(h).x).norm(), 1e-10);
  }
}

TEST(Problems, Step3Decomposition) {
  const ElementPtr K = make_element(skewed());
  for (int p = 0; p <= 3; ++p)
    for (const auto& F : kSubsets) {
      if (F.empty()) continue;
      const HcurlProblem h = generate_compatible_hcurl_data(K, p, F, 600 + p);
      const Step3Report s = step3_decomposition(h);
      EXPECT_TRUE(s.pass);
      EXPECT_LE(s.feasibility_residual, 1e-9 * s.scale);
      EXPECT_LE(s.corrected_scurl, 1e-9 * s.scale);
      EXPECT_GE(s.w_norm, s.min_norm - 1e-10 * s.scale);
    }
  // curl-free data: xi vanishes and w is the trace-only minimizer
  const HcurlProblem g = generate_curl_free_trace_data(K, 2, {1, 2}, 5);
  const Step3Report s = step3_decomposition(g);
  EXPECT_LE(s.xi.norm(), 1e-12);
  EXPECT_LE((s.w - s.xi_tilde).norm(), 1e-12);
}

TEST(Problems, IncompatibleDataRejected) {
  const ElementPtr K = make_element(skewed());
  HdivProblem d = generate_compatible_hdiv_data(K, 1, {0, 1, 2, 3}, 4);
  EXPECT_TRUE(validate(d).pass);
  // shift the mean of r_K, breaking (r_K, 1) = sum (r_F, 1)
  d.r_K += 0.1 * basis_means(*K, *K->basis(SpaceTag::scalar(1))).normalized();
  EXPECT_FALSE(validate(d).pass);
  EXPECT_THROW(solve_min_hdiv(d), IncompatibleData);

  HcurlProblem h = generate_compatible_hcurl_data(K, 1, {0, 1}, 4);
  h.r_F.values[0] += 1e-3 * random_coefficients(h.r_F.values[0].size(), 8).normalized() * h.r_F.values[0].norm();
  EXPECT_FALSE(validate(h).pass);
  EXPECT_THROW(solve_min_hcurl(h), IncompatibleData);
}

TEST(Problems, DegreeRange) {
  const ElementPtr K = make_element(reference_tetrahedron());
  EXPECT_THROW(generate_compatible_hcurl_data(K, 11, {}, 1), UnsupportedDegree);
  EXPECT_THROW(generate_compatible_hdiv_data(K, -1, {}, 1), UnsupportedDegree);
  EXPECT_THROW(reference_min_norm(generate_compatible_hcurl_data(K, 8, {}, 1), 3), UnsupportedDegree);
}

TEST(Problems, SerializationRoundTrip) {
  const ElementPtr K = make_element(skewed());
  const HcurlProblem h = generate_compatible_hcurl_data(K, 2, {3, 1}, 12);
  std::stringstream ss;
  write_problem(ss, h);
  const HcurlProblem back = read_hcurl_problem(ss);
  EXPECT_EQ(back.p, 2);
  EXPECT_EQ(back.faces, h.faces);
  EXPECT_EQ(back.r_K, h.r_K);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(back.element->tet().vertex(i), K->tet().vertex(i));
  EXPECT_EQ(back.r_F.values, h.r_F.values);
  EXPECT_NEAR(solve_min_hcurl(back).norm, solve_min_hcurl(h).norm, 1e-14);

  const HdivProblem d = generate_compatible_hdiv_data(K, 1, {0, 2}, 13);
  std::stringstream sd;
  write_problem(sd, d);
  const HdivProblem dback = read_hdiv_problem(sd);
  EXPECT_EQ(dback.r_F, d.r_F);
  EXPECT_EQ(dback.r_K, d.r_K);

  std::stringstream bad("hcurl\nvertex 0 0 0\n");
  EXPECT_THROW(read_hcurl_problem(bad), Error);
}
