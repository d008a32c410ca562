#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curlstab/calculus.hpp"
#include "curlstab/minsolve.hpp"
#include "curlstab/polyspace.hpp"

namespace curlstab {

using ElementPtr = std::shared_ptr<const Element>;

inline ElementPtr make_element(const Tetrahedron& K) { return std::make_shared<const Element>(K); }

/// Face subset as a bitmask over {0, 1, 2, 3}.
inline int face_mask(const std::vector<int>& faces) {
  int mask = 0;
  for (int f : faces) mask |= 1 << f;
  return mask;
}

inline std::vector<int> faces_of_mask(int mask) {
  std::vector<int> faces;
  for (int f = 0; f < 4; ++f)
    if (mask & (1 << f)) faces.push_back(f);
  return faces;
}

/// min ||v_p|| over Nedelec(p) with curl v_p = r_K and tangential traces r_F on `faces`.
struct HcurlProblem {
  ElementPtr element;
  int p = 0;
  std::vector<int> faces;
  Eigen::VectorXd r_K;  // RaviartThomas(p) coefficients
  TraceData r_F;        // FaceTrace(p, F) coefficients per face
  std::optional<Eigen::VectorXd> generator;  // known feasible Nedelec(p) field

  double scale() const { return 1.0 + std::sqrt(r_K.squaredNorm() + r_F.norm() * r_F.norm()); }
};

/// min ||v_p|| over RaviartThomas(p) with div v_p = r_K and normal traces r_F on `faces`.
struct HdivProblem {
  ElementPtr element;
  int p = 0;
  std::vector<int> faces;
  Eigen::VectorXd r_K;               // ScalarP(p) coefficients
  std::vector<Eigen::VectorXd> r_F;  // FaceScalarP(p, F) coefficients, aligned with faces
  std::optional<Eigen::VectorXd> generator;

  double scale() const {
    double s = r_K.squaredNorm();
    for (const auto& v : r_F) s += v.squaredNorm();
    return 1.0 + std::sqrt(s);
  }
};

struct HcurlValidation {
  double div_residual = 0.0;
  std::vector<double> surface_curl_residuals;  // aligned with faces
  EdgeCompatReport edges;
  bool pass = true;
  std::string message;
};

struct HdivValidation {
  double mean_residual = 0.0;
  bool pass = true;
  std::string message;
};

inline void check_degree_range(int p) {
  if (p < 0 || p > kMaxDegree)
    throw UnsupportedDegree("degree " + std::to_string(p) + " outside [0, " + std::to_string(kMaxDegree) + "]");
}

/// Data conditions: div r_K = 0, r_K . n_F = scurl_F(r_F), edge compatibility.
inline HcurlValidation validate(const HcurlProblem& problem) {
  const Element& element = *problem.element;
  HcurlValidation report;
  const double tol = 1e-9 * problem.scale();
  const int p = problem.p;
  report.div_residual = (div_matrix(p, element).matrix * problem.r_K).norm();
  if (report.div_residual > tol) {
    report.pass = false;
    report.message += "div r_K != 0; ";
  }
  for (std::size_t i = 0; i < problem.r_F.faces.size(); ++i) {
    const int f = problem.r_F.faces[i];
    const Eigen::VectorXd lhs = normal_trace_matrix(p, element, f).matrix * problem.r_K;
    const Eigen::VectorXd rhs = surface_curl_matrix(p, element, f).matrix * problem.r_F.values[i];
    const double r = (lhs - rhs).norm();
    report.surface_curl_residuals.push_back(r);
    if (r > tol) {
      report.pass = false;
      report.message += "r_K . n_F != scurl(r_F) on face " + std::to_string(f) + "; ";
    }
  }
  report.edges = edge_compat_check(problem.r_F, element);
  if (!report.edges.pass) {
    report.pass = false;
    report.message += "traces not tangentially continuous across shared edges; ";
  }
  return report;
}

/// Integrals (phi_i, 1) of the members of a basis over its domain.
inline Eigen::VectorXd basis_means(const Element& element, const PolySpaceBasis& basis) {
  const QuadratureRule& rule = element.rule_for(basis.tag);
  return evaluate_basis(element, basis, rule.points)[0].transpose() * rule.weights;
}

/// (r_K, 1)_K = sum_F (r_F, 1)_F whenever every face carries data.
inline HdivValidation validate(const HdivProblem& problem) {
  HdivValidation report;
  if (problem.faces.size() != 4) return report;
  const Element& element = *problem.element;
  double balance = basis_means(element, *element.basis(SpaceTag::scalar(problem.p))).dot(problem.r_K);
  for (std::size_t i = 0; i < problem.faces.size(); ++i)
    balance -= basis_means(element, *element.basis(SpaceTag::face_scalar(problem.p, problem.faces[i])))
                   .dot(problem.r_F[i]);
  report.mean_residual = std::abs(balance);
  if (report.mean_residual > 1e-9 * problem.scale()) {
    report.pass = false;
    report.message = "(r_K, 1)_K differs from the sum of (r_F, 1)_F";
  }
  return report;
}

/// Independent standard normal draws.
inline Eigen::VectorXd random_coefficients(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Problem whose data are the curl and traces of a random Nedelec(p) field.
inline HcurlProblem hcurl_problem_from_field(ElementPtr element, int p, std::vector<int> faces,
                                             const Eigen::VectorXd& field) {
  HcurlProblem problem;
  problem.element = std::move(element);
  problem.p = p;
  problem.faces = std::move(faces);
  problem.r_K = curl_matrix(p, *problem.element).matrix * field;
  problem.r_F = trace_of(p, *problem.element, problem.faces, field);
  problem.generator = field;
  return problem;
}

inline HcurlProblem generate_compatible_hcurl_data(ElementPtr element, int p, std::vector<int> faces,
                                                   std::uint64_t seed) {
  check_degree_range(p);
  const Eigen::VectorXd w = random_coefficients(element->basis(SpaceTag::nedelec(p))->dim, seed);
  return hcurl_problem_from_field(std::move(element), p, std::move(faces), w);
}

/// Curl-free data: traces of grad q for a random q in ScalarP(p + 1).
inline HcurlProblem generate_curl_free_trace_data(ElementPtr element, int p, std::vector<int> faces,
                                                  std::uint64_t seed) {
  check_degree_range(p);
  const OperatorMatrix grad = gradient_matrix(p, *element);
  const Eigen::VectorXd q = random_coefficients(grad.matrix.cols(), seed);
  HcurlProblem problem = hcurl_problem_from_field(std::move(element), p, std::move(faces), grad.matrix * q);
  problem.r_K.setZero();
  return problem;
}

inline HdivProblem generate_compatible_hdiv_data(ElementPtr element, int p, std::vector<int> faces,
                                                 std::uint64_t seed) {
  check_degree_range(p);
  const Element& e = *element;
  const Eigen::VectorXd w = random_coefficients(e.basis(SpaceTag::raviart_thomas(p))->dim, seed);
  HdivProblem problem;
  problem.p = p;
  problem.faces = std::move(faces);
  problem.r_K = div_matrix(p, e).matrix * w;
  for (int f : problem.faces) problem.r_F.push_back(normal_trace_matrix(p, e, f).matrix * w);
  problem.generator = w;
  problem.element = std::move(element);
  return problem;
}

namespace detail {

enum SolverId : int { kHcurlSolver = 1, kHdivSolver };

inline std::shared_ptr<const LeastNormSolver> hcurl_solver(const Element& element, int degree, int mask,
                                                            bool with_curl) {
  return element.attached<LeastNormSolver>({kHcurlSolver, degree, mask, with_curl ? 1 : 0}, [&] {
    ConstraintSystem sys;
    const int n = element.basis(SpaceTag::nedelec(degree))->dim;
    if (with_curl) {
      const auto& C = curl_matrix(degree, element).matrix;
      sys.append(RowKind::Curl, -1, C, Eigen::VectorXd::Zero(C.rows()));
    }
    for (int f : faces_of_mask(mask)) {
      const auto& T = tangential_trace_matrix(degree, element, f).matrix;
      sys.append(RowKind::TangentialTrace, f, T, Eigen::VectorXd::Zero(T.rows()));
    }
    if (sys.B.rows() == 0) sys.B.resize(0, n);
    return std::make_shared<const LeastNormSolver>(sys.B);
  });
}

inline std::shared_ptr<const LeastNormSolver> hdiv_solver(const Element& element, int degree, int mask) {
  return element.attached<LeastNormSolver>({kHdivSolver, degree, mask, 0}, [&] {
    ConstraintSystem sys;
    const auto& D = div_matrix(degree, element).matrix;
    sys.append(RowKind::Divergence, -1, D, Eigen::VectorXd::Zero(D.rows()));
    for (int f : faces_of_mask(mask)) {
      const auto& T = normal_trace_matrix(degree, element, f).matrix;
      sys.append(RowKind::NormalTrace, f, T, Eigen::VectorXd::Zero(T.rows()));
    }
    return std::make_shared<const LeastNormSolver>(sys.B);
  });
}

inline MinResult solve_or_incompatible(const LeastNormSolver& solver, const Eigen::VectorXd& rhs) {
  try {
    return solver.solve(rhs);
  } catch (const Infeasible& e) {
    throw IncompatibleData(e.what());
  }
}

/// Right-hand side of the H(curl) system in degree `degree` >= p.
inline Eigen::VectorXd hcurl_rhs(const Element& element, int p, int degree, const Eigen::VectorXd* r_K,
                                 const TraceData& r_F) {
  std::vector<Eigen::VectorXd> parts;
  if (r_K) parts.push_back(embedding_matrix(SpaceTag::raviart_thomas(p), degree, element).matrix * *r_K);
  // faces ordered increasingly, matching the assembled rows
  for (int f : faces_of_mask(face_mask(r_F.faces))) {
    const auto it = std::find(r_F.faces.begin(), r_F.faces.end(), f);
    const Eigen::VectorXd& v = r_F.values[static_cast<std::size_t>(it - r_F.faces.begin())];
    parts.push_back(embedding_matrix(SpaceTag::face_trace(p, f), degree, element).matrix * v);
  }
  Eigen::Index m = 0;
  for (const auto& v : parts) m += v.size();
  Eigen::VectorXd rhs(m);
  m = 0;
  for (const auto& v : parts) {
    rhs.segment(m, v.size()) = v;
    m += v.size();
  }
  return rhs;
}

inline int resolve_degree(int p, int degree) {
  const int q = degree < 0 ? p : degree;
  if (q < p) throw Error("solve degree below data degree");
  check_degree_range(q);
  return q;
}

}  // namespace detail

/// Minimizer over Nedelec(degree) (default: the data degree); x holds its
/// coefficients in the Nedelec(degree) basis, so norm is its L2 norm.
inline MinResult solve_min_hcurl(const HcurlProblem& problem, int degree = -1) {
  const int q = detail::resolve_degree(problem.p, degree);
  const HcurlValidation v = validate(problem);
  if (!v.pass) throw IncompatibleData("solve_min_hcurl: " + v.message);
  const Element& element = *problem.element;
  const auto solver = detail::hcurl_solver(element, q, face_mask(problem.r_F.faces), true);
  return detail::solve_or_incompatible(*solver, detail::hcurl_rhs(element, problem.p, q, &problem.r_K, problem.r_F));
}

/// Curl constraint only.
inline MinResult solve_min_curl_only(const ElementPtr& element, int p, const Eigen::VectorXd& r_K, int degree = -1) {
  HcurlProblem problem;
  problem.element = element;
  problem.p = p;
  problem.r_K = r_K;
  problem.r_F.p = p;
  return solve_min_hcurl(problem, degree);
}

/// curl v = 0 plus tangential traces; the data must have zero surface curl.
inline MinResult solve_min_trace_only(const ElementPtr& element, int p, const TraceData& r_F, int degree = -1) {
  if (r_F.faces.empty()) throw Error("solve_min_trace_only: face set must be nonempty");
  HcurlProblem problem;
  problem.element = element;
  problem.p = p;
  problem.faces = r_F.faces;
  problem.r_K = Eigen::VectorXd::Zero(element->basis(SpaceTag::raviart_thomas(p))->dim);
  problem.r_F = r_F;
  return solve_min_hcurl(problem, degree);
}

inline MinResult solve_min_hdiv(const HdivProblem& problem, int degree = -1) {
  const int q = detail::resolve_degree(problem.p, degree);
  const HdivValidation v = validate(problem);
  if (!v.pass) throw IncompatibleData("solve_min_hdiv: " + v.message);
  const Element& element = *problem.element;
  const int mask = face_mask(problem.faces);
  std::vector<Eigen::VectorXd> parts;
  parts.push_back(embedding_matrix(SpaceTag::scalar(problem.p), q, element).matrix * problem.r_K);
  for (int f : faces_of_mask(mask)) {
    const auto it = std::find(problem.faces.begin(), problem.faces.end(), f);
    parts.push_back(embedding_matrix(SpaceTag::face_scalar(problem.p, f), q, element).matrix *
                    problem.r_F[static_cast<std::size_t>(it - problem.faces.begin())]);
  }
  Eigen::Index m = 0;
  for (const auto& part : parts) m += part.size();
  Eigen::VectorXd rhs(m);
  m = 0;
  for (const auto& part : parts) {
    rhs.segment(m, part.size()) = part;
    m += part.size();
  }
  return detail::solve_or_incompatible(*detail::hdiv_solver(element, q, mask), rhs);
}

/// The constraint system of a problem in degree `degree`, assembled
/// explicitly (rows as in the cached solvers), e.g. for an independent solver.
inline ConstraintSystem constraint_system(const HcurlProblem& problem, int degree = -1) {
  const int q = detail::resolve_degree(problem.p, degree);
  const Element& element = *problem.element;
  const Eigen::VectorXd rhs = detail::hcurl_rhs(element, problem.p, q, &problem.r_K, problem.r_F);
  ConstraintSystem sys;
  const auto& C = curl_matrix(q, element).matrix;
  sys.append(RowKind::Curl, -1, C, rhs.head(C.rows()));
  Eigen::Index offset = C.rows();
  for (int f : faces_of_mask(face_mask(problem.r_F.faces))) {
    const auto& T = tangential_trace_matrix(q, element, f).matrix;
    sys.append(RowKind::TangentialTrace, f, T, rhs.segment(offset, T.rows()));
    offset += T.rows();
  }
  return sys;
}

inline ConstraintSystem constraint_system(const HdivProblem& problem, int degree = -1) {
  const int q = detail::resolve_degree(problem.p, degree);
  const Element& element = *problem.element;
  ConstraintSystem sys;
  sys.append(RowKind::Divergence, -1, div_matrix(q, element).matrix,
             embedding_matrix(SpaceTag::scalar(problem.p), q, element).matrix * problem.r_K);
  for (int f : faces_of_mask(face_mask(problem.faces))) {
    const auto it = std::find(problem.faces.begin(), problem.faces.end(), f);
    sys.append(RowKind::NormalTrace, f, normal_trace_matrix(q, element, f).matrix,
               embedding_matrix(SpaceTag::face_scalar(problem.p, f), q, element).matrix *
                   problem.r_F[static_cast<std::size_t>(it - problem.faces.begin())]);
  }
  return sys;
}

/// Continuous-minimum proxy: the same data solved in degree p + delta.
struct ReferenceNorm {
  double value = 0.0;     // degree p + delta
  double previous = 0.0;  // degree p + delta - 1 (== value when delta == 0)
  double relative_gap = 0.0;
  int degree = 0;
};

template <typename Solve>
ReferenceNorm reference_from(int p, int delta, Solve&& solve) {
  if (delta < 0) throw Error("reference_min_norm: delta must be >= 0");
  check_degree_range(p + delta);
  ReferenceNorm ref;
  ref.degree = p + delta;
  ref.value = solve(p + delta).norm;
  ref.previous = delta > 0 ? solve(p + delta - 1).norm : ref.value;
  ref.relative_gap = ref.previous > 0.0 ? (ref.previous - ref.value) / ref.previous : 0.0;
  return ref;
}

inline ReferenceNorm reference_min_norm(const HcurlProblem& problem, int delta = 3) {
  return reference_from(problem.p, delta, [&](int q) { return solve_min_hcurl(problem, q); });
}

inline ReferenceNorm reference_min_norm(const HdivProblem& problem, int delta = 3) {
  return reference_from(problem.p, delta, [&](int q) { return solve_min_hdiv(problem, q); });
}

/// Recombination of the curl-only and trace-only minimizers.
struct Step3Report {
  Eigen::VectorXd xi;        // curl-only minimizer
  Eigen::VectorXd xi_tilde;  // trace-only minimizer for the corrected traces
  Eigen::VectorXd w;         // xi + xi_tilde
  double corrected_scurl = 0.0;      // max_F ||scurl_F(r_F - trace_F(xi))||
  double feasibility_residual = 0.0; // ||B w - d||
  double w_norm = 0.0;
  double min_norm = 0.0;
  double scale = 1.0;
  bool pass = true;
};

inline Step3Report step3_decomposition(const HcurlProblem& problem) {
  const Element& element = *problem.element;
  const int p = problem.p;
  Step3Report report;
  report.scale = problem.scale();

  report.xi = solve_min_curl_only(problem.element, p, problem.r_K).x;

  TraceData corrected = problem.r_F;
  for (std::size_t i = 0; i < corrected.faces.size(); ++i) {
    const int f = corrected.faces[i];
    corrected.values[i] -= tangential_trace_matrix(p, element, f).matrix * report.xi;
    const double s = (surface_curl_matrix(p, element, f).matrix * corrected.values[i]).norm();
    report.corrected_scurl = std::max(report.corrected_scurl, s);
  }
  if (corrected.faces.empty()) {
    report.xi_tilde = Eigen::VectorXd::Zero(report.xi.size());
  } else {
    report.xi_tilde = solve_min_trace_only(problem.element, p, corrected).x;
  }
  report.w = report.xi + report.xi_tilde;
  report.w_norm = report.w.norm();

  double r2 = (curl_matrix(p, element).matrix * report.w - problem.r_K).squaredNorm();
  for (std::size_t i = 0; i < problem.r_F.faces.size(); ++i)
    r2 += (tangential_trace_matrix(p, element, problem.r_F.faces[i]).matrix * report.w - problem.r_F.values[i])
              .squaredNorm();
  report.feasibility_residual = std::sqrt(r2);
  report.min_norm = solve_min_hcurl(problem).norm;
  report.pass = report.corrected_scurl <= 1e-9 * report.scale &&
                report.feasibility_residual <= 1e-9 * report.scale &&
                report.w_norm >= report.min_norm - 1e-10 * report.scale;
  return report;
}

// Plain-text problem records.

namespace detail {

inline void write_vector(std::ostream& os, const char* label, const Eigen::VectorXd& v) {
  os << label << ' ' << v.size();
  char buf[40];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, " %.17g", v[i]);
    os << buf;
  }
  os << '\n';
}

inline void write_header(std::ostream& os, const char* kind, const Element& element, int p,
                         const std::vector<int>& faces) {
  os << kind << '\n';
  char buf[128];
  for (const Point& x : element.tet().vertices()) {
    std::snprintf(buf, sizeof buf, "vertex %.17g %.17g %.17g\n", x[0], x[1], x[2]);
    os << buf;
  }
  os << "p " << p << '\n' << "faces " << faces.size();
  for (int f : faces) os << ' ' << f;
  os << '\n';
}

inline std::string expect_token(std::istream& is, const std::string& expected) {
  std::string token;
  if (!(is >> token) || (!expected.empty() && token != expected))
    throw Error("problem record: expected '" + expected + "', got '" + token + "'");
  return token;
}

inline Eigen::VectorXd read_vector(std::istream& is, const std::string& label) {
  expect_token(is, label);
  Eigen::Index n = 0;
  if (!(is >> n) || n < 0) throw Error("problem record: bad vector length");
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(is >> v[i])) throw Error("problem record: truncated vector");
  return v;
}

struct RecordHeader {
  ElementPtr element;
  int p = 0;
  std::vector<int> faces;
};

inline RecordHeader read_header(std::istream& is) {
  RecordHeader h;
  std::array<Point, 4> v;
  for (auto& x : v) {
    expect_token(is, "vertex");
    if (!(is >> x[0] >> x[1] >> x[2])) throw Error("problem record: bad vertex");
  }
  h.element = make_element(build_tetrahedron(v));
  expect_token(is, "p");
  is >> h.p;
  expect_token(is, "faces");
  std::size_t n = 0;
  is >> n;
  h.faces.resize(n);
  for (auto& f : h.faces) is >> f;
  if (!is) throw Error("problem record: bad header");
  return h;
}

}  // namespace detail

inline void write_problem(std::ostream& os, const HcurlProblem& problem) {
  detail::write_header(os, "hcurl", *problem.element, problem.p, problem.faces);
  detail::write_vector(os, "r_K", problem.r_K);
  for (const auto& v : problem.r_F.values) detail::write_vector(os, "r_F", v);
}

inline void write_problem(std::ostream& os, const HdivProblem& problem) {
  detail::write_header(os, "hdiv", *problem.element, problem.p, problem.faces);
  detail::write_vector(os, "r_K", problem.r_K);
  for (const auto& v : problem.r_F) detail::write_vector(os, "r_F", v);
}

inline HcurlProblem read_hcurl_problem(std::istream& is) {
  detail::expect_token(is, "hcurl");
  auto h = detail::read_header(is);
  HcurlProblem problem;
  problem.element = h.element;
  problem.p = h.p;
  problem.faces = h.faces;
  problem.r_K = detail::read_vector(is, "r_K");
  problem.r_F.p = h.p;
  problem.r_F.faces = h.faces;
  for (std::size_t i = 0; i < h.faces.size(); ++i) problem.r_F.values.push_back(detail::read_vector(is, "r_F"));
  return problem;
}

inline HdivProblem read_hdiv_problem(std::istream& is) {
  detail::expect_token(is, "hdiv");
  auto h = detail::read_header(is);
  HdivProblem problem;
  problem.element = h.element;
  problem.p = h.p;
  problem.faces = h.faces;
  problem.r_K = detail::read_vector(is, "r_K");
  for (std::size_t i = 0; i < h.faces.size(); ++i) problem.r_F.push_back(detail::read_vector(is, "r_F"));
  return problem;
}

}  // namespace curlstab
