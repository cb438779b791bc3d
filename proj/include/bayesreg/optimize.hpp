#ifndef BAYESREG_OPTIMIZE_HPP
#define BAYESREG_OPTIMIZE_HPP

#include "bayesreg/param_space.hpp"

#include <Eigen/Core>

#include <functional>

namespace bayesreg {

struct SimplexOptions {
  double tolerance = 1e-8;  // on the simplex diameter, parameter units
  int max_iterations = 10000;
  double initial_step = 0.05;  // fraction of each box edge
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimisation with every trial point clamped into the box.
SimplexResult nelder_mead_box(const std::function<double(const Eigen::VectorXd&)>& objective,
                              const Eigen::VectorXd& start, const ParamSpace<double>& box,
                              const SimplexOptions& options = {});

}  // namespace bayesreg

#endif  // BAYESREG_OPTIMIZE_HPP
