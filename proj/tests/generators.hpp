#ifndef BAYESREG_TESTS_GENERATORS_HPP
#define BAYESREG_TESTS_GENERATORS_HPP

// Hand-rolled random generators for property tests.

#include <Eigen/Core>

#include <cmath>
#include <random>

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int integer(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Symmetric positive-definite matrix with eigenvalues spread over a few
// decades, scaled by 10^scale_exp.
inline Eigen::MatrixXd spd(Rng& rng, int d, double scale_exp = 0.0) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
  Eigen::MatrixXd f = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
  return std::pow(10.0, scale_exp) * f;
}

}  // namespace gen

#endif  // BAYESREG_TESTS_GENERATORS_HPP
