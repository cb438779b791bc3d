#ifndef BAYESREG_REGION_HPP
#define BAYESREG_REGION_HPP

// Closed-form Case-1 region properties and region-accuracy formulas.
//
// Every function taking a Fisher matrix accepts any Eigen expression; the
// dimension d is the matrix order. Volumes are raw-coordinate V_{R0}; the
// normalised prior measure only enters through the size definition.

#include "bayesreg/param_space.hpp"
#include "bayesreg/specfn.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bayesreg {

/// Fisher information matrix. Symmetric, positive definite where the region
/// formulas need it; additive over independent batches.
using FisherMatrix = Eigen::MatrixXd;

class SingularFisherError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constraint that selects the reported credible region.
struct RegionSpec {
  enum class Kind { FixedSize, FixedCredibility, Plausible };

  Kind kind = Kind::Plausible;
  double value = 0.0;  // s0 or c0; unused for Plausible

  static RegionSpec fixed_size(double s0) {
    if (!(s0 > 0.0 && s0 <= 1.0)) {
      throw std::domain_error("RegionSpec: fixed size must lie in (0, 1]");
    }
    return {Kind::FixedSize, s0};
  }
  static RegionSpec fixed_credibility(double c0) {
    if (!(c0 > 0.0 && c0 < 1.0)) {
      throw std::domain_error("RegionSpec: fixed credibility must lie in (0, 1)");
    }
    return {Kind::FixedCredibility, c0};
  }
  static RegionSpec plausible() { return {Kind::Plausible, 0.0}; }

  std::string name() const {
    switch (kind) {
      case Kind::FixedSize: return "fixed-s";
      case Kind::FixedCredibility: return "fixed-c";
      case Kind::Plausible: return "plausible";
    }
    return "unknown";
  }
};

/// (lambda, size, credibility) of one credible region.
template <typename Scalar = double>
struct RegionProps {
  Scalar lambda{1};
  Scalar size{0};
  Scalar credibility{0};
  /// False when the asymptotic size leaves its regime (size > 1 or lambda > 1).
  bool case1_valid = true;
};

/// lambda_crit together with its degeneracy flag; no meaningful plausible
/// region exists when the value reaches 1.
template <typename Scalar = double>
struct CriticalLambda {
  Scalar value;
  bool degenerate() const { return value >= Scalar(1); }
};

namespace detail {

template <typename Derived>
auto checked_llt(const Eigen::MatrixBase<Derived>& fisher) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (fisher.rows() != fisher.cols() || fisher.rows() == 0) {
    throw std::invalid_argument("Fisher matrix must be square and nonempty");
  }
  Eigen::LLT<Matrix> llt(fisher.derived().eval());
  if (llt.info() != Eigen::Success) {
    throw SingularFisherError("Fisher matrix is not positive definite");
  }
  return llt;
}

template <typename Scalar>
void check_lambda(Scalar lambda) {
  if (!(lambda > Scalar(0) && lambda <= Scalar(1))) {
    throw std::domain_error("lambda must lie in (0, 1]");
  }
}

template <typename Scalar>
void check_credibility(Scalar c) {
  if (!(c >= Scalar(0) && c < Scalar(1))) {
    throw std::domain_error("credibility must lie in [0, 1)");
  }
}

}  // namespace detail

template <typename Derived>
typename Derived::Scalar log_det_fisher(const Eigen::MatrixBase<Derived>& fisher) {
  using Scalar = typename Derived::Scalar;
  const auto llt = detail::checked_llt(fisher);
  Scalar log_det(0);
  for (Eigen::Index j = 0; j < fisher.rows(); ++j) {
    log_det += Scalar(2) * std::log(llt.matrixL()(j, j));
  }
  return log_det;
}

/// Tr{F^{-1}}, the Cramer-Rao value for the squared error.
template <typename Derived>
typename Derived::Scalar trace_inverse(const Eigen::MatrixBase<Derived>& fisher) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto llt = detail::checked_llt(fisher);
  return llt.solve(Matrix::Identity(fisher.rows(), fisher.cols())).trace();
}

// ---------------------------------------------------------------------------
// Size, credibility and lambda.

template <typename Scalar>
Scalar credibility_of_lambda(int d, Scalar lambda) {
  detail::check_lambda(lambda);
  return Scalar(1) - reg_upper_gamma(Scalar(d) / Scalar(2), -std::log(lambda));
}

template <typename Scalar>
Scalar lambda_of_credibility(int d, Scalar c) {
  detail::check_credibility(c);
  return std::exp(-inv_reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(1) - c));
}

template <typename Derived>
RegionProps<typename Derived::Scalar> size_of_lambda(
    typename Derived::Scalar lambda, const Eigen::MatrixBase<Derived>& fisher,
    const ParamSpace<typename Derived::Scalar>& space) {
  using Scalar = typename Derived::Scalar;
  detail::check_lambda(lambda);
  const int d = static_cast<int>(fisher.rows());
  const Scalar log_det = log_det_fisher(fisher);
  RegionProps<Scalar> props;
  props.lambda = lambda;
  props.credibility = credibility_of_lambda(d, lambda);
  if (lambda == Scalar(1)) {
    props.size = Scalar(0);
  } else {
    const Scalar log_size = std::log(unit_ball_volume<Scalar>(d)) - std::log(space.volume()) +
                            Scalar(d) / Scalar(2) * std::log(Scalar(-2) * std::log(lambda)) -
                            log_det / Scalar(2);
    props.size = std::exp(log_size);
  }
  props.case1_valid = props.size <= Scalar(1) && props.lambda <= Scalar(1);
  return props;
}

/// The lambda whose Case-1 region has size s for this Fisher matrix.
template <typename Derived>
typename Derived::Scalar lambda_of_size(typename Derived::Scalar size,
                                        const Eigen::MatrixBase<Derived>& fisher,
                                        const ParamSpace<typename Derived::Scalar>& space) {
  using Scalar = typename Derived::Scalar;
  if (!(size >= Scalar(0))) {
    throw std::domain_error("lambda_of_size: size must be nonnegative");
  }
  const int d = static_cast<int>(fisher.rows());
  const Scalar log_det = log_det_fisher(fisher);
  if (size == Scalar(0)) {
    return Scalar(1);
  }
  // (s V sqrt(det F) / V_d)^{2/d} = -2 log(lambda)
  const Scalar log_ratio = std::log(size) + std::log(space.volume()) + log_det / Scalar(2) -
                           std::log(unit_ball_volume<Scalar>(d));
  return std::exp(-std::exp(Scalar(2) / Scalar(d) * log_ratio) / Scalar(2));
}

template <typename Derived>
CriticalLambda<typename Derived::Scalar> lambda_crit(
    const Eigen::MatrixBase<Derived>& fisher, const ParamSpace<typename Derived::Scalar>& space) {
  using Scalar = typename Derived::Scalar;
  const int d = static_cast<int>(fisher.rows());
  const Scalar two_pi = boost::math::constants::two_pi<Scalar>();
  const Scalar log_value =
      Scalar(d) / Scalar(2) * std::log(two_pi) - log_det_fisher(fisher) / Scalar(2) -
      std::log(space.volume());
  return {std::exp(log_value)};
}

/// Size of the region with credibility c, through the inverse incomplete gamma.
template <typename Derived>
typename Derived::Scalar size_from_credibility(typename Derived::Scalar c,
                                               const Eigen::MatrixBase<Derived>& fisher,
                                               const ParamSpace<typename Derived::Scalar>& space) {
  using Scalar = typename Derived::Scalar;
  if (!(c > Scalar(0) && c < Scalar(1))) {
    throw std::domain_error("size_from_credibility: credibility must lie in (0, 1)");
  }
  const int d = static_cast<int>(fisher.rows());
  const Scalar g = inv_reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(1) - c);
  if (g == Scalar(0)) {
    return Scalar(0);
  }
  const Scalar log_size = std::log(unit_ball_volume<Scalar>(d)) - std::log(space.volume()) +
                          Scalar(d) / Scalar(2) * std::log(Scalar(2) * g) -
                          log_det_fisher(fisher) / Scalar(2);
  return std::exp(log_size);
}

// ---------------------------------------------------------------------------
// Region squared error.

/// Asymptotic RSE of the lambda-region relative to a reference parameter.
template <typename DerivedA, typename DerivedB, typename DerivedF>
typename DerivedF::Scalar rse_asymptotic(typename DerivedF::Scalar lambda,
                                         const Eigen::MatrixBase<DerivedA>& ml_estimate,
                                         const Eigen::MatrixBase<DerivedB>& true_param,
                                         const Eigen::MatrixBase<DerivedF>& fisher_ml) {
  using Scalar = typename DerivedF::Scalar;
  detail::check_lambda(lambda);
  const int d = static_cast<int>(fisher_ml.rows());
  if (ml_estimate.size() != d || true_param.size() != d) {
    throw std::invalid_argument("rse_asymptotic: parameter length differs from Fisher order");
  }
  const Scalar squared_error = (ml_estimate - true_param).squaredNorm();
  return squared_error +
         Scalar(2) * trace_inverse(fisher_ml) * (-std::log(lambda)) / Scalar(d + 2);
}

/// Asymptotic MRSE at a fixed lambda; equals Tr{F^{-1}} at lambda = 1.
template <typename Derived>
typename Derived::Scalar mrse_asymptotic(typename Derived::Scalar lambda,
                                         const Eigen::MatrixBase<Derived>& fisher) {
  using Scalar = typename Derived::Scalar;
  detail::check_lambda(lambda);
  const int d = static_cast<int>(fisher.rows());
  return trace_inverse(fisher) * (Scalar(1) - Scalar(2) * std::log(lambda) / Scalar(d + 2));
}

/// MRSE of the credible region with size fixed at s0.
template <typename Derived>
typename Derived::Scalar mrse_credible_fixed_s(typename Derived::Scalar s0,
                                               const Eigen::MatrixBase<Derived>& fisher,
                                               const ParamSpace<typename Derived::Scalar>& space) {
  using Scalar = typename Derived::Scalar;
  if (!(s0 > Scalar(0) && s0 <= Scalar(1))) {
    throw std::domain_error("mrse_credible_fixed_s: s0 must lie in (0, 1]");
  }
  const int d = static_cast<int>(fisher.rows());
  const Scalar inv_d = Scalar(1) / Scalar(d);
  const Scalar scale = std::pow(s0 * space.volume() / unit_ball_volume<Scalar>(d), Scalar(2) * inv_d);
  const Scalar det_root = std::exp(log_det_fisher(fisher) * inv_d);
  return trace_inverse(fisher) * (Scalar(1) + scale * det_root / Scalar(d + 2));
}

/// MRSE of the credible region with credibility fixed at c0.
template <typename Derived>
typename Derived::Scalar mrse_credible_fixed_c(typename Derived::Scalar c0,
                                               const Eigen::MatrixBase<Derived>& fisher) {
  using Scalar = typename Derived::Scalar;
  detail::check_credibility(c0);
  const int d = static_cast<int>(fisher.rows());
  const Scalar g = inv_reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(1) - c0);
  return trace_inverse(fisher) * (Scalar(1) + Scalar(2) * g / Scalar(d + 2));
}

/// MRSE of the plausible region (lambda = lambda_crit). Only meaningful when
/// lambda_crit < 1; check lambda_crit(...).degenerate() for that.
template <typename Derived>
typename Derived::Scalar mrse_plausible(const Eigen::MatrixBase<Derived>& fisher,
                                        const ParamSpace<typename Derived::Scalar>& space) {
  using Scalar = typename Derived::Scalar;
  const int d = static_cast<int>(fisher.rows());
  const Scalar volume = space.volume();
  const Scalar log_prior = std::log(volume * volume) -
                           Scalar(d) * std::log(boost::math::constants::two_pi<Scalar>());
  return trace_inverse(fisher) *
         (Scalar(1) + log_prior / Scalar(d + 2) + log_det_fisher(fisher) / Scalar(d + 2));
}

// ---------------------------------------------------------------------------
// One-parameter (interval) forms.

/// Fisher information tying interval size and credibility in one dimension.
template <typename Scalar>
Scalar interval_fisher(Scalar size, Scalar c, Scalar volume) {
  const Scalar g = inv_reg_upper_gamma(Scalar(0.5), Scalar(1) - c);
  return Scalar(8) * g / (size * size * volume * volume);
}

/// Exact MRSE of a credible interval as a function of (size, credibility).
template <typename Scalar>
Scalar mrse_credible_interval(Scalar size, Scalar c, Scalar volume) {
  if (!(c > Scalar(0) && c < Scalar(1))) {
    throw std::domain_error("mrse_credible_interval: credibility must lie in (0, 1)");
  }
  const Scalar g = inv_reg_upper_gamma(Scalar(0.5), Scalar(1) - c);
  return size * size * volume * volume / Scalar(8) * (Scalar(1) / g + Scalar(2) / Scalar(3));
}

/// Size of the plausible interval for Fisher information F.
template <typename Scalar>
Scalar plausible_interval_size(Scalar fisher, Scalar volume) {
  const Scalar arg = std::log(volume * volume * fisher / boost::math::constants::two_pi<Scalar>());
  if (!(arg >= Scalar(0))) {
    throw std::domain_error("plausible_interval_size: lambda_crit >= 1, no plausible interval");
  }
  return Scalar(2) / (volume * std::sqrt(fisher)) * std::sqrt(arg);
}

/// MRSE of the plausible interval written through its size.
template <typename Scalar>
Scalar mrse_plausible_interval_parametric(Scalar fisher, Scalar size, Scalar volume) {
  return Scalar(1) / fisher + size * volume * size * volume / Scalar(12);
}

// ---------------------------------------------------------------------------
// Bounds for d >= 2 under Tr{F} <= B.

/// Tr{F^{-1}} <= d B^{d-1} / det F for every SPD F with Tr{F} <= B.
template <typename Scalar>
Scalar trace_inverse_bound(int d, Scalar det_fisher, Scalar trace_bound) {
  if (d < 1 || !(det_fisher > Scalar(0)) || !(trace_bound > Scalar(0))) {
    throw std::domain_error("trace_inverse_bound: needs d >= 1, det F > 0, B > 0");
  }
  return Scalar(d) * std::pow(trace_bound, Scalar(d - 1)) / det_fisher;
}

/// Upper bound on the fixed-size credible MRSE in terms of the credibility.
/// Exact (equal to mrse_credible_interval) at d = 1.
template <typename Scalar>
Scalar mrse_credible_fixed_s_bound(int d, Scalar s0, Scalar c, Scalar trace_bound, Scalar volume) {
  if (!(c > Scalar(0) && c < Scalar(1))) {
    throw std::domain_error("mrse_credible_fixed_s_bound: credibility must lie in (0, 1)");
  }
  const Scalar g = inv_reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(1) - c);
  const Scalar ratio = s0 * volume / unit_ball_volume<Scalar>(d);
  return ratio * ratio * Scalar(d) * std::pow(trace_bound, Scalar(d - 1)) /
         std::pow(Scalar(2) * g, Scalar(d)) * (Scalar(1) + Scalar(2) * g / Scalar(d + 2));
}

/// Plausible-region MRSE bound as a function of credibility. Exact at d = 1.
template <typename Scalar>
Scalar mrse_plausible_bound_c(int d, Scalar c, Scalar trace_bound, Scalar volume) {
  if (!(c > Scalar(0) && c < Scalar(1))) {
    throw std::domain_error("mrse_plausible_bound_c: credibility must lie in (0, 1)");
  }
  const Scalar g = inv_reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(1) - c);
  return Scalar(d) * std::pow(trace_bound, Scalar(d - 1)) * volume * volume /
         std::pow(boost::math::constants::two_pi<Scalar>(), Scalar(d)) *
         std::exp(Scalar(-2) * g) * (Scalar(1) + Scalar(2) * g / Scalar(d + 2));
}

/// Size of the plausible region as a function of det F (lambda = lambda_crit).
template <typename Scalar>
Scalar plausible_size_of_det(int d, Scalar det_fisher, Scalar volume) {
  const Scalar arg = std::log(volume * volume * det_fisher /
                              std::pow(boost::math::constants::two_pi<Scalar>(), Scalar(d)));
  if (!(arg >= Scalar(0))) {
    throw std::domain_error("plausible_size_of_det: lambda_crit >= 1, no plausible region");
  }
  return unit_ball_volume<Scalar>(d) / volume * std::pow(arg, Scalar(d) / Scalar(2)) /
         std::sqrt(det_fisher);
}

/// Plausible-region MRSE bound in the size-parametric form, as a function of det F.
/// Exact (1/F + (sV)^2/12) at d = 1.
template <typename Scalar>
Scalar mrse_plausible_bound_det(int d, Scalar det_fisher, Scalar trace_bound, Scalar volume) {
  const Scalar size = plausible_size_of_det(d, det_fisher, volume);
  const Scalar inv_d = Scalar(1) / Scalar(d);
  const Scalar shape = std::pow(size * volume / unit_ball_volume<Scalar>(d), Scalar(2) * inv_d) *
                       std::pow(det_fisher, inv_d);
  return trace_inverse_bound(d, det_fisher, trace_bound) * (Scalar(1) + shape / Scalar(d + 2));
}

// ---------------------------------------------------------------------------
// Plausible-region thresholds.

/// y1(c) = exp(-2 g) g with g = Q^{-1}(d/2, 1 - c); the c-dependence of the
/// plausible MRSE bound.
template <typename Scalar>
Scalar plausible_credibility_profile(int d, Scalar c) {
  const Scalar g = inv_reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(1) - c);
  return std::exp(Scalar(-2) * g) * g;
}

/// y2(x) = x^{-1/2} [log(V^2 x / (2 pi)^d)]^{d/2}; the plausible size up to a constant.
template <typename Scalar>
Scalar plausible_size_profile(int d, Scalar det_fisher, Scalar volume) {
  const Scalar arg = std::log(volume * volume * det_fisher /
                              std::pow(boost::math::constants::two_pi<Scalar>(), Scalar(d)));
  return std::pow(arg, Scalar(d) / Scalar(2)) / std::sqrt(det_fisher);
}

/// Credibility beyond which the plausible MRSE (bound) decreases monotonically.
template <typename Scalar = double>
Scalar threshold_c_max(int d) {
  return Scalar(1) - reg_upper_gamma(Scalar(d) / Scalar(2), Scalar(0.5));
}

/// det F beyond which the plausible size decreases monotonically, (2 pi e)^d / V^2.
template <typename Scalar>
Scalar threshold_det_max(int d, Scalar volume) {
  const Scalar two_pi_e =
      boost::math::constants::two_pi<Scalar>() * boost::math::constants::e<Scalar>();
  return std::pow(two_pi_e, Scalar(d)) / (volume * volume);
}

}  // namespace bayesreg

#endif  // BAYESREG_REGION_HPP
