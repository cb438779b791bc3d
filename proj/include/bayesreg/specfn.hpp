#ifndef BAYESREG_SPECFN_HPP
#define BAYESREG_SPECFN_HPP

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace bayesreg {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
///
/// The credibility of a Case-1 credible region in d dimensions is
/// 1 - Q(d/2, -log lambda); note Gamma(d/2) covers odd d as well, which is
/// what the "(d/2 - 1)!" normalisation means for half-integer arguments.
template <typename Scalar>
Scalar reg_upper_gamma(Scalar a, Scalar x) {
  if (!(a > Scalar(0))) {
    throw std::domain_error("reg_upper_gamma: order must be positive");
  }
  if (!(x >= Scalar(0))) {
    throw std::domain_error("reg_upper_gamma: argument must be nonnegative");
  }
  if (x == Scalar(0)) {
    return Scalar(1);
  }
  if (std::isinf(x)) {
    return Scalar(0);
  }
  return boost::math::gamma_q(a, x);
}

/// Inverse in x of Q(a, x) = y, for y in (0, 1]. Q^{-1}(a, 1) = 0.
template <typename Scalar>
Scalar inv_reg_upper_gamma(Scalar a, Scalar y) {
  if (!(a > Scalar(0))) {
    throw std::domain_error("inv_reg_upper_gamma: order must be positive");
  }
  if (!(y > Scalar(0)) || y > Scalar(1)) {
    throw std::domain_error("inv_reg_upper_gamma: level must lie in (0, 1]");
  }
  if (y == Scalar(1)) {
    return Scalar(0);
  }
  return boost::math::gamma_q_inv(a, y);
}

/// Volume of the unit ball in d dimensions, pi^{d/2} / Gamma(d/2 + 1).
template <typename Scalar = double>
Scalar unit_ball_volume(int d) {
  if (d < 1) {
    throw std::domain_error("unit_ball_volume: dimension must be >= 1");
  }
  using std::pow;
  const Scalar half_d = Scalar(d) / Scalar(2);
  return pow(boost::math::constants::pi<Scalar>(), half_d) /
         boost::math::tgamma(half_d + Scalar(1));
}

}  // namespace bayesreg

#endif  // BAYESREG_SPECFN_HPP
