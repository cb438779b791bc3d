#ifndef BAYESREG_PARAM_SPACE_HPP
#define BAYESREG_PARAM_SPACE_HPP

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace bayesreg {

/*
 * Axis-aligned box R0 carrying the uniform primitive prior. Also used for
 * measurement-setting spaces, where only the bounds matter.
 */
template <typename Scalar = double>
class ParamSpace {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ParamSpace() = default;

  ParamSpace(Vector lower, Vector upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() == 0 || lower_.size() != upper_.size()) {
      throw std::invalid_argument("ParamSpace: bounds must be nonempty and of equal length");
    }
    for (Eigen::Index j = 0; j < lower_.size(); ++j) {
      if (!(upper_(j) > lower_(j)) || !std::isfinite(double(lower_(j))) ||
          !std::isfinite(double(upper_(j)))) {
        throw std::invalid_argument("ParamSpace: each edge needs finite lower < upper");
      }
    }
  }

  static ParamSpace interval(Scalar lower, Scalar upper) {
    return ParamSpace(Vector::Constant(1, lower), Vector::Constant(1, upper));
  }

  static ParamSpace cube(int d, Scalar lower, Scalar upper) {
    return ParamSpace(Vector::Constant(d, lower), Vector::Constant(d, upper));
  }

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector edges() const { return upper_ - lower_; }
  Vector center() const { return (lower_ + upper_) / Scalar(2); }

  /// Raw volume V_{R0}, the product of edge lengths.
  Scalar volume() const { return edges().prod(); }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& r) const {
    return r.size() == lower_.size() && (r.array() >= lower_.array()).all() &&
           (r.array() <= upper_.array()).all();
  }

  template <typename Derived>
  Vector clamp(const Eigen::MatrixBase<Derived>& r) const {
    return r.cwiseMax(lower_).cwiseMin(upper_);
  }

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace bayesreg

#endif  // BAYESREG_PARAM_SPACE_HPP
