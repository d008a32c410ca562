// Smallest field in N_p(K) with a prescribed constant curl, at increasing p.
#include <cmath>
#include <cstdio>

#include "curlstab/curlstab.hpp"

int main() {
  using namespace curlstab;
  const ElementPtr K = make_element(reference_tetrahedron());
  for (int p = 0; p <= 4; ++p) {
    const auto rt = K->basis(SpaceTag::raviart_thomas(p));
    const QuadratureRule& rule = K->rule_for(rt->tag);
    ComponentValues curl(3, Eigen::MatrixXd::Zero(rule.size(), 1));
    curl[2].setConstant(2.0);
    const Eigen::VectorXd r_K = project_samples(*K, *rt, curl, rule).col(0);
    const MinResult m = solve_min_curl_only(K, p, r_K);
    std::printf("p=%d  |v_p| = %.15f  (1/sqrt(80) = %.15f)\n", p, m.norm, 1.0 / std::sqrt(80.0));
  }
}
