#include "bayesreg/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace bayesreg {

SimplexResult nelder_mead_box(const std::function<double(const Eigen::VectorXd&)>& objective,
                              const Eigen::VectorXd& start, const ParamSpace<double>& box,
                              const SimplexOptions& options) {
  const int n = static_cast<int>(start.size());
  const Eigen::VectorXd edges = box.edges();

  // Objective with NaN mapped to +inf so comparisons stay total.
  auto eval = [&](const Eigen::VectorXd& x) {
    const double v = objective(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Eigen::VectorXd> pts(n + 1, box.clamp(start));
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd p = pts[0];
    const double step = options.initial_step * edges(j);
    p(j) += (p(j) + step <= box.upper()(j)) ? step : -step;
    pts[j + 1] = box.clamp(p);
  }
  std::vector<double> vals(n + 1);
  for (int i = 0; i <= n; ++i) {
    vals[i] = eval(pts[i]);
  }

  std::vector<int> order(n + 1);
  SimplexResult result;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[n - 1];

    double diameter = 0.0;
    for (int i = 0; i <= n; ++i) {
      diameter = std::max(diameter, (pts[i] - pts[best]).lpNorm<Eigen::Infinity>());
    }
    result.iterations = iter;
    if (diameter <= options.tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) {
        centroid += pts[i];
      }
    }
    centroid /= n;

    const Eigen::VectorXd reflected = box.clamp(centroid + (centroid - pts[worst]));
    const double f_reflected = eval(reflected);
    if (f_reflected < vals[best]) {
      const Eigen::VectorXd expanded = box.clamp(centroid + 2.0 * (centroid - pts[worst]));
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < vals[worst];
    const Eigen::VectorXd contracted =
        outside ? box.clamp(centroid + 0.5 * (reflected - centroid))
                : box.clamp(centroid + 0.5 * (pts[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_contracted;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i != best) {
        pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
        vals[i] = eval(pts[i]);
      }
    }
  }

  const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  result.x = pts[best];
  result.value = vals[best];
  return result;
}

}  // namespace bayesreg
