#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "curlstab/piola.hpp"
#include "curlstab/problems.hpp"

namespace curlstab {

/// Outcome of one named property check.
struct CheckOutcome {
  std::string name;
  bool pass = true;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // limit it is compared against
  std::string detail;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline void log_outcome(std::ostream& log, const CheckOutcome& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e (limit %.1e)", c.value, c.threshold);
  log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << buf;
  if (!c.detail.empty()) log << " " << c.detail;
  log << '\n';
}

}  // namespace detail

/// Quadrature exactness on the reference tetrahedron for every monomial of
/// degree <= max_degree, against x^a y^b z^c -> a! b! c! / (a+b+c+3)!.
inline CheckOutcome check_quadrature_exactness(int max_degree) {
  CheckOutcome out{"quadrature exactness to degree " + std::to_string(max_degree), true, 0.0, 1e-13, ""};
  const Tetrahedron K = reference_tetrahedron();
  for (int d = 0; d <= max_degree; ++d) {
    const QuadratureRule rule = tet_rule(d, K);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const int c = d - a - b;
        Eigen::VectorXd f(rule.size());
        for (Eigen::Index q = 0; q < rule.size(); ++q)
          f[q] = std::pow(rule.points(0, q), a) * std::pow(rule.points(1, q), b) * std::pow(rule.points(2, q), c);
        const double exact = detail::factorial(a) * detail::factorial(b) * detail::factorial(c) /
                             detail::factorial(a + b + c + 3);
        out.value = std::max(out.value, std::abs(integrate(f, rule) - exact) / exact);
      }
  }
  out.pass = out.value <= out.threshold;
  return out;
}

/// Spectral norm of div o curl : Nedelec(p) -> ScalarP(p), maximized over p.
inline CheckOutcome check_div_curl(const Element& element, int p_max, double tol = 1e-11) {
  CheckOutcome out{"||div curl|| for p <= " + std::to_string(p_max), true, 0.0, tol, ""};
  for (int p = 0; p <= p_max; ++p) {
    const Eigen::MatrixXd DC = div_matrix(p, element).matrix * curl_matrix(p, element).matrix;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(DC);
    out.value = std::max(out.value, svd.singularValues()[0]);
  }
  out.pass = out.value <= tol;
  return out;
}

/// scurl_F(tangential trace of v) against (curl v) . n_F, relative, over
/// random v in Nedelec(p), all faces.
inline CheckOutcome check_surface_curl_identity(const Element& element, int p_max, int trials, std::uint64_t seed,
                                                double tol = 1e-9) {
  CheckOutcome out{"surface curl identity for p <= " + std::to_string(p_max), true, 0.0, tol, ""};
  for (int p = 0; p <= p_max; ++p) {
    const auto& C = curl_matrix(p, element).matrix;
    for (int t = 0; t < trials; ++t) {
      const Eigen::VectorXd v = random_coefficients(C.cols(), seed + 7919u * static_cast<std::uint64_t>(p) + t);
      const Eigen::VectorXd curl_v = C * v;
      for (int f = 0; f < 4; ++f) {
        const Eigen::VectorXd lhs =
            surface_curl_matrix(p, element, f).matrix * (tangential_trace_matrix(p, element, f).matrix * v);
        const Eigen::VectorXd rhs = normal_trace_matrix(p, element, f).matrix * curl_v;
        out.value = std::max(out.value, (lhs - rhs).norm() / std::max(rhs.norm(), v.norm()));
      }
    }
  }
  out.pass = out.value <= tol;
  return out;
}

/// Random affine maps for the Piola suite: `count` maps with condition
/// number <= max_condition, the last one orientation-reversing.
inline std::vector<AffineMap> piola_test_maps(int count, std::uint64_t seed, double max_condition = 100.0) {
  std::vector<AffineMap> maps;
  for (int i = 0; i < count; ++i)
    maps.push_back(random_affine_map(seed + static_cast<std::uint64_t>(i), max_condition, i == count - 1));
  return maps;
}

inline PiolaContext piola_context_for(const AffineMap& map, const ElementPtr& reference) {
  std::array<Point, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = map(reference->tet().vertex(i));
  return PiolaContext(reference, make_element(build_tetrahedron(v)), map);
}

/// check_piola_properties over several maps and degrees; reports the worst
/// bound and trace violations.
inline CheckOutcome check_piola_suite(int maps, int p_max, int trials, std::uint64_t seed, double slack = 1e-9) {
  CheckOutcome out{"piola properties (" + std::to_string(maps) + " maps, p <= " + std::to_string(p_max) + ", " +
                       std::to_string(trials) + " trials)",
                   true, 0.0, slack, ""};
  const ElementPtr reference = make_element(reference_tetrahedron());
  int m = 0;
  for (const AffineMap& map : piola_test_maps(maps, seed)) {
    const PiolaContext ctx = piola_context_for(map, reference);
    for (int p = 0; p <= p_max; ++p) {
      try {
        const PiolaReport r = check_piola_properties(p, ctx, trials, seed + 31u * static_cast<std::uint64_t>(p), slack);
        out.value = std::max({out.value, r.bound_violation, r.trace_violation});
      } catch (const PropertyViolation& e) {
        out.pass = false;
        out.detail = "map " + std::to_string(m) + ", p=" + std::to_string(p) + ": " + e.what();
        return out;
      }
    }
    ++m;
  }
  return out;
}

/// Least-norm solver against the SVD oracle on random compatible problems of
/// all four kinds (p <= p_max), coefficient difference in the max norm.
inline CheckOutcome check_solver_oracle(int problems, int p_max, std::uint64_t seed, double tol = 1e-10) {
  CheckOutcome out{"least-norm vs SVD oracle (" + std::to_string(problems) + " problems)", true, 0.0, tol, ""};
  const ElementPtr element = make_element(reference_tetrahedron());
  for (int i = 0; i < problems; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const int p = i % (p_max + 1);
    const int mask = static_cast<int>((s * 2654435761u) % 16);
    ConstraintSystem sys;
    switch (i % 4) {
      case 0: sys = constraint_system(generate_compatible_hcurl_data(element, p, faces_of_mask(mask), s)); break;
      case 1: sys = constraint_system(generate_compatible_hdiv_data(element, p, faces_of_mask(mask), s)); break;
      case 2: sys = constraint_system(generate_compatible_hcurl_data(element, p, {}, s)); break;
      default:
        sys = constraint_system(generate_curl_free_trace_data(element, p, faces_of_mask(mask == 0 ? 1 : mask), s));
        break;
    }
    const MinResult a = least_norm_solve(sys);
    const MinResult b = oracle_solve(sys);
    out.value = std::max(out.value, (a.x - b.x).lpNorm<Eigen::Infinity>());
  }
  out.pass = out.value <= tol;
  return out;
}

/// Curl-only problem on the reference tetrahedron, p = 0, r_K = (0,0,2):
/// norm 1/sqrt(80), minimizer (1/4 - y, x - 1/4, 0).
inline CheckOutcome check_closed_form_minimizer() {
  CheckOutcome out{"closed-form curl-only minimizer", true, 0.0, 1e-9, ""};
  const ElementPtr element = make_element(reference_tetrahedron());
  const auto rt = element->basis(SpaceTag::raviart_thomas(0));
  const QuadratureRule& rule = element->rule_for(rt->tag);
  ComponentValues target(3);
  target[0] = Eigen::MatrixXd::Zero(rule.size(), 1);
  target[1] = Eigen::MatrixXd::Zero(rule.size(), 1);
  target[2] = Eigen::MatrixXd::Constant(rule.size(), 1, 2.0);
  const Eigen::VectorXd r_K = project_samples(*element, *rt, target, rule).col(0);
  const MinResult res = solve_min_curl_only(element, 0, r_K);
  const double norm_error = std::abs(res.norm - 1.0 / std::sqrt(80.0));

  const auto ned = element->basis(SpaceTag::nedelec(0));
  const QuadratureRule& q = element->volume_rule(6);
  const Eigen::MatrixXd vals = evaluate(*element, {ned, res.x}, q.points);
  double err2 = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const Eigen::Vector3d exact(0.25 - q.points(1, i), q.points(0, i) - 0.25, 0.0);
    err2 += q.weights[i] * (vals.col(i) - exact).squaredNorm();
  }
  out.value = std::sqrt(err2);
  out.pass = norm_error <= 1e-10 && std::sqrt(err2) <= 1e-9;
  char buf[96];
  std::snprintf(buf, sizeof buf, "norm error %.2e, field L2 error %.2e", norm_error, std::sqrt(err2));
  out.detail = buf;
  return out;
}

/// Runs one of the named suites ("calculus", "piola", "solver", "all"),
/// logging one line per check. Returns true when everything passed.
inline bool run_check_suite(const std::string& suite, std::ostream& log, std::uint64_t seed = 2024) {
  if (suite != "calculus" && suite != "piola" && suite != "solver" && suite != "all")
    throw Error("unknown check suite '" + suite + "'");
  std::vector<CheckOutcome> outcomes;
  const bool all = suite == "all";
  if (all || suite == "calculus") {
    const Element reference(reference_tetrahedron());
    outcomes.push_back(check_quadrature_exactness(13));
    outcomes.push_back(check_div_curl(reference, 6));
    outcomes.push_back(check_surface_curl_identity(reference, 6, 50, seed));
  }
  if (all || suite == "piola") outcomes.push_back(check_piola_suite(5, 5, 50, seed));
  if (all || suite == "solver") {
    outcomes.push_back(check_solver_oracle(100, 2, seed));
    outcomes.push_back(check_closed_form_minimizer());
  }
  bool ok = true;
  for (const auto& c : outcomes) {
    detail::log_outcome(log, c);
    ok = ok && c.pass;
  }
  return ok;
}

}  // namespace curlstab
