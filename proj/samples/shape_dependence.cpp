// Ratio of discrete to enriched minimum norm on flattening tetrahedra.
#include <cstdio>

#include "curlstab/curlstab.hpp"

int main() {
  using namespace curlstab;
  for (double a : {1.0, 0.3, 0.1, 0.03}) {
    const ElementPtr K = make_element(shape_family("flatten", a));
    double worst = 1.0;
    for (int p = 0; p <= 3; ++p)
      for (int trial = 0; trial < 5; ++trial) {
        const HcurlProblem problem = generate_compatible_hcurl_data(K, p, {0, 1}, 100 * p + trial);
        const double discrete = solve_min_hcurl(problem).norm;
        const double reference = reference_min_norm(problem, 3).value;
        worst = std::max(worst, discrete / reference);
      }
    std::printf("flatten(%.2f)  kappa %8.3f  max ratio %.4f\n", a, K->tet().kappa(), worst);
  }
}
