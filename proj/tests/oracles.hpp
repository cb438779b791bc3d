#ifndef BAYESREG_TESTS_ORACLES_HPP
#define BAYESREG_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests. None of these
// call into the library code they check.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int level) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (level <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, level - 1) +
               rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, level - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, depth);
}

// Regularised lower incomplete gamma P(a, x) by quadrature after t = u^2,
// which removes the t^{a-1} endpoint singularity for a >= 1/2.
inline double reg_lower_gamma(double a, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  const double lg = std::lgamma(a);
  auto f = [&](double u) {
    if (u == 0.0) {
      return a == 0.5 ? 2.0 * std::exp(-lg) : 0.0;
    }
    return std::exp(std::log(2.0) + (2.0 * a - 1.0) * std::log(u) - u * u - lg);
  };
  const double root = std::sqrt(x);
  // split at the integrand's bulk so Simpson sees smooth pieces
  const double cut = std::min(root, std::sqrt(std::max(a - 0.5, 0.0)) + 6.0);
  double total = simpson(f, 0.0, cut, 1e-15);
  if (root > cut) {
    total += simpson(f, cut, root, 1e-15);
  }
  return std::min(total, 1.0);
}

inline double reg_upper_gamma(double a, double x) { return 1.0 - reg_lower_gamma(a, x); }

// Q^{-1}(a, y) by bisection on P(a, x) = 1 - y.
inline double inv_reg_upper_gamma(double a, double y) {
  const double target = 1.0 - y;
  double lo = 0.0, hi = 1.0;
  while (reg_lower_gamma(a, hi) < target) {
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (reg_lower_gamma(a, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// V_d by the two-step recursion V_d = 2 pi V_{d-2} / d.
inline double unit_ball_volume(int d) {
  if (d == 0) return 1.0;
  if (d == 1) return 2.0;
  return 2.0 * kPi / d * unit_ball_volume(d - 2);
}

// ---------------------------------------------------------------------------
// Three photons in three modes, by expanding creation operators.

using Occupation = std::array<int, 3>;

inline std::vector<Occupation> three_photon_basis() {
  std::vector<Occupation> basis;
  for (int n1 = 3; n1 >= 0; --n1) {
    for (int n2 = 3 - n1; n2 >= 0; --n2) {
      basis.push_back({n1, n2, 3 - n1 - n2});
    }
  }
  return basis;
}

using Mode3 = Eigen::Matrix<std::complex<double>, 3, 3>;
using Rep10 = Eigen::Matrix<std::complex<double>, 10, 10>;

// Representation of a single-photon mode transformation a_i^dag -> sum_j U_ji a_j^dag
// on the 10-dimensional three-photon space.
inline Rep10 three_photon_rep(const Mode3& u) {
  const auto basis = three_photon_basis();
  std::map<Occupation, int> index;
  for (int i = 0; i < 10; ++i) index[basis[i]] = i;
  auto fact = [](int n) { return n == 3 ? 6.0 : (n == 2 ? 2.0 : 1.0); };
  Rep10 rep = Rep10::Zero();
  for (int col = 0; col < 10; ++col) {
    const Occupation& n = basis[col];
    std::vector<int> modes;
    for (int m = 0; m < 3; ++m) {
      for (int c = 0; c < n[m]; ++c) modes.push_back(m);
    }
    const double in_norm = std::sqrt(fact(n[0]) * fact(n[1]) * fact(n[2]));
    // 27 ordered choices of output modes
    for (int j0 = 0; j0 < 3; ++j0) {
      for (int j1 = 0; j1 < 3; ++j1) {
        for (int j2 = 0; j2 < 3; ++j2) {
          Occupation out{0, 0, 0};
          ++out[j0];
          ++out[j1];
          ++out[j2];
          const std::complex<double> coeff = u(j0, modes[0]) * u(j1, modes[1]) * u(j2, modes[2]);
          const double out_norm = std::sqrt(fact(out[0]) * fact(out[1]) * fact(out[2]));
          rep(index[out], col) += coeff * out_norm / in_norm;
        }
      }
    }
  }
  return rep;
}

inline Mode3 tritter() {
  const std::complex<double> w = std::polar(1.0, 2.0 * kPi / 3.0);
  Mode3 u;
  u << 1.0, w, w, w, 1.0, w, w, w, 1.0;
  return u / std::sqrt(3.0);
}

// Born probabilities in three_photon_basis() order.
inline std::array<double, 10> three_path_probs(double psi1, double psi2, double phi1, double phi2) {
  Mode3 phase = Mode3::Zero();
  phase(0, 0) = std::polar(1.0, psi1 - phi1);
  phase(1, 1) = std::polar(1.0, psi2 - phi2);
  phase(2, 2) = 1.0;
  const Rep10 t = three_photon_rep(tritter());
  const Rep10 whole = t * three_photon_rep(phase) * t;
  const auto basis = three_photon_basis();
  int input = 0;
  for (int i = 0; i < 10; ++i) {
    if (basis[i] == Occupation{1, 1, 1}) input = i;
  }
  std::array<double, 10> p{};
  for (int i = 0; i < 10; ++i) p[i] = std::norm(whole(i, input));
  return p;
}

// ---------------------------------------------------------------------------
// Zero-mean Gaussian Fisher information through complex-step derivatives of
// the variance: F_ij = d_i s2 d_j s2 / (2 s2^2).

template <typename Variance>
Eigen::MatrixXd gaussian_variance_fisher(Variance variance, const Eigen::VectorXd& params) {
  const int d = static_cast<int>(params.size());
  const double h = 1e-30;
  Eigen::VectorXd grad(d);
  for (int i = 0; i < d; ++i) {
    std::vector<std::complex<double>> z(params.data(), params.data() + d);
    z[i] += std::complex<double>(0.0, h);
    grad(i) = variance(z).imag() / h;
  }
  std::vector<std::complex<double>> z(params.data(), params.data() + d);
  const double s2 = variance(z).real();
  return grad * grad.transpose() / (2.0 * s2 * s2);
}

// Squeezed-state quadrature variance written from the model description.
inline std::complex<double> squeezed_variance(const std::vector<std::complex<double>>& p,
                                              double theta) {
  const auto& nu = p[0];
  const auto& alpha = p[1];
  return (nu * nu + 1.0 + (nu * nu - 1.0) * std::cos(2.0 * alpha + 2.0 * theta)) / (4.0 * nu);
}

inline std::complex<double> homodyne_variance(const std::vector<std::complex<double>>& p,
                                              double zeta, double theta) {
  return (std::cosh(2.0 * zeta) + std::cos(2.0 * theta - 2.0 * p[0]) * std::sinh(2.0 * zeta)) / 2.0;
}

// ---------------------------------------------------------------------------
// Ball of radius R with the cap {x_d > R - h} removed, by rejection sampling.

struct CapMC {
  double rse = 0.0;
  double se = 0.0;
};

inline CapMC cap_rse_mc(int d, double radius, double height, int samples, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  double sum = 0.0, sum2 = 0.0;
  int kept = 0;
  while (kept < samples) {
    double r2 = 0.0, last = 0.0;
    for (int i = 0; i < d; ++i) {
      last = u(rng);
      r2 += last * last;
    }
    if (r2 > radius * radius || last > radius - height) continue;
    sum += r2;
    sum2 += r2 * r2;
    ++kept;
  }
  const double mean = sum / kept;
  return {mean, std::sqrt((sum2 / kept - mean * mean) / kept)};
}

}  // namespace oracle

#endif  // BAYESREG_TESTS_ORACLES_HPP
