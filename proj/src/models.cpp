#include "bayesreg/models.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bayesreg {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kTwoPi = boost::math::constants::two_pi<double>();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gaussian_batch_log_likelihood(double variance, std::int64_t copies, double sum_squares) {
  const double n = static_cast<double>(copies);
  return -0.5 * n * std::log(kTwoPi * variance) - sum_squares / (2.0 * variance);
}

double gaussian_logpdf(double x, double variance) {
  return -0.5 * std::log(kTwoPi * variance) - x * x / (2.0 * variance);
}

void require_length(const VectorXd& v, int n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + " has the wrong length");
  }
}

}  // namespace

double periodic_distance(double a, double b, double period) {
  double diff = std::fmod(std::abs(a - b), period);
  return std::min(diff, period - diff);
}

// ---------------------------------------------------------------------------
// Homodyne phase model.

double homodyne_phase_variance(double phi, double zeta, double theta) {
  return 0.5 * (std::cosh(2.0 * zeta) + std::cos(2.0 * theta - 2.0 * phi) * std::sinh(2.0 * zeta));
}

double homodyne_phase_logpdf(double x, double phi, double zeta, double theta) {
  return gaussian_logpdf(x, homodyne_phase_variance(phi, zeta, theta));
}

double homodyne_phase_fisher(double phi, double zeta, double theta, double copies) {
  const double variance = homodyne_phase_variance(phi, zeta, theta);
  const double slope = std::sin(2.0 * theta - 2.0 * phi) * std::sinh(2.0 * zeta);
  return copies * slope * slope / (2.0 * variance * variance);
}

double homodyne_phase_fisher_printed(double phi, double zeta, double theta, double copies) {
  const double variance = homodyne_phase_variance(phi, zeta, theta);
  const double s = std::sinh(2.0 * zeta);
  const double gap = std::cosh(2.0 * zeta) - 2.0 * variance;
  return copies * (s * s - gap * gap) / (2.0 * variance);
}

HomodyneOptimum homodyne_phase_opt_setting(double phi, double zeta, FisherConvention convention) {
  auto fisher = [&](double theta) {
    return convention == FisherConvention::Gaussian
               ? homodyne_phase_fisher(phi, zeta, theta)
               : homodyne_phase_fisher_printed(phi, zeta, theta);
  };

  HomodyneOptimum opt;
  constexpr int kGrid = 1001;
  const double spacing = kPi / kGrid;
  int best = 0;
  double best_value = fisher(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double value = fisher(i * spacing);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  if (zeta == 0.0) {
    opt.degenerate = true;
    opt.theta = 0.0;
    opt.fisher = fisher(0.0);
    return opt;
  }

  const double centre = best * spacing;
  auto [arg, neg_value] = boost::math::tools::brent_find_minima(
      [&](double theta) { return -fisher(theta); }, centre - spacing, centre + spacing,
      std::numeric_limits<double>::digits / 2 + 4);
  opt.theta = std::fmod(std::fmod(arg, kPi) + kPi, kPi);
  opt.fisher = -neg_value;

  auto nearest = [&](double cos_value) {
    const double half = std::acos(cos_value) / 2.0;
    double best_theta = phi + half;
    double best_gap = std::numeric_limits<double>::infinity();
    for (double candidate : {phi + half, phi - half}) {
      const double gap = periodic_distance(candidate, opt.theta, kPi);
      if (gap < best_gap) {
        best_gap = gap;
        best_theta = std::fmod(std::fmod(candidate, kPi) + kPi, kPi);
      }
    }
    return std::pair{best_theta, best_gap};
  };

  const double t = std::tanh(zeta);
  auto plus = nearest(t);
  auto minus = nearest(-t);
  const auto& printed = plus.second <= minus.second ? plus : minus;
  opt.closed_form_theta = printed.first;
  opt.closed_form_gap = printed.second;

  auto gaussian = nearest(-std::tanh(2.0 * zeta));
  opt.gaussian_branch_theta = gaussian.first;
  opt.gaussian_branch_gap = gaussian.second;
  return opt;
}

HomodynePhaseModel::HomodynePhaseModel(double zeta, ParamSpace<double> space)
    : zeta_(zeta), space_(std::move(space)), settings_(ParamSpace<double>::interval(0.0, kPi)) {
  if (space_.dim() != 1) {
    throw std::invalid_argument("HomodynePhaseModel: parameter space must be one-dimensional");
  }
}

double HomodynePhaseModel::log_density(const Outcome& outcome, const VectorXd& params,
                                       const VectorXd& setting) const {
  return homodyne_phase_logpdf(std::get<double>(outcome), params(0), zeta_, setting(0));
}

double HomodynePhaseModel::batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                                                const SufficientStats& stats) const {
  return gaussian_batch_log_likelihood(homodyne_phase_variance(params(0), zeta_, setting(0)),
                                       stats.copies, stats.values(0));
}

MatrixXd HomodynePhaseModel::fisher_per_copy(const VectorXd& params,
                                             const VectorXd& setting) const {
  require_length(params, 1, "homodyne parameter");
  require_length(setting, 1, "homodyne setting");
  return MatrixXd::Constant(1, 1, homodyne_phase_fisher(params(0), zeta_, setting(0)));
}

std::vector<Outcome> HomodynePhaseModel::sample(const VectorXd& params, const VectorXd& setting,
                                                std::int64_t n, Rng& rng) const {
  std::normal_distribution<double> normal(
      0.0, std::sqrt(homodyne_phase_variance(params(0), zeta_, setting(0))));
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out.emplace_back(normal(rng));
  }
  return out;
}

SufficientStats HomodynePhaseModel::sample_stats(const VectorXd& params, const VectorXd& setting,
                                                 std::int64_t n, Rng& rng) const {
  std::chi_squared_distribution<double> chi2(static_cast<double>(n));
  SufficientStats stats{n, VectorXd(1)};
  stats.values(0) = homodyne_phase_variance(params(0), zeta_, setting(0)) * chi2(rng);
  return stats;
}

SufficientStats HomodynePhaseModel::summarize(const std::vector<Outcome>& outcomes) const {
  SufficientStats stats{static_cast<std::int64_t>(outcomes.size()), VectorXd::Zero(1)};
  for (const auto& o : outcomes) {
    const double x = std::get<double>(o);
    stats.values(0) += x * x;
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Three-path interferometer.

Matrix3cd tritter_unitary() {
  const std::complex<double> w = std::polar(1.0, kTwoPi / 3.0);
  Matrix3cd u;
  u << 1.0, w, w,
       w, 1.0, w,
       w, w, 1.0;
  return u / std::sqrt(3.0);
}

Matrix3cd three_path_unitary(double t1, double t2) {
  const Matrix3cd tritter = tritter_unitary();
  Eigen::Vector3cd phases(std::polar(1.0, t1), std::polar(1.0, t2), 1.0);
  return tritter * phases.asDiagonal() * tritter;
}

const std::array<std::array<int, 3>, 10>& occupation_triples() {
  static const std::array<std::array<int, 3>, 10> triples = [] {
    std::array<std::array<int, 3>, 10> t{};
    int k = 0;
    for (int n1 = 3; n1 >= 0; --n1) {
      for (int n2 = 3 - n1; n2 >= 0; --n2) {
        t[k++] = {n1, n2, 3 - n1 - n2};
      }
    }
    return t;
  }();
  return triples;
}

std::complex<double> permanent3(const Matrix3cd& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) + m(1, 2) * m(2, 1)) +
         m(0, 1) * (m(1, 0) * m(2, 2) + m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) + m(1, 1) * m(2, 0));
}

std::array<std::complex<double>, 10> three_photon_amplitudes(const Matrix3cd& unitary) {
  static constexpr double kFactorial[4] = {1.0, 1.0, 2.0, 6.0};
  std::array<std::complex<double>, 10> amps{};
  const auto& triples = occupation_triples();
  for (std::size_t k = 0; k < triples.size(); ++k) {
    // Rows repeated by output occupation; one column per input photon.
    Matrix3cd sub;
    int row = 0;
    for (int mode = 0; mode < 3; ++mode) {
      for (int rep = 0; rep < triples[k][mode]; ++rep) {
        sub.row(row++) = unitary.row(mode);
      }
    }
    const double norm = kFactorial[triples[k][0]] * kFactorial[triples[k][1]] * kFactorial[triples[k][2]];
    amps[k] = permanent3(sub) / std::sqrt(norm);
  }
  return amps;
}

std::array<double, 10> three_path_probs(double psi1, double psi2, double phi1, double phi2) {
  const auto amps = three_photon_amplitudes(three_path_unitary(psi1 - phi1, psi2 - phi2));
  std::array<double, 10> probs{};
  for (std::size_t k = 0; k < amps.size(); ++k) {
    probs[k] = std::norm(amps[k]);
  }
  return probs;
}

MatrixXd three_path_fisher(double psi1, double psi2, double phi1, double phi2, double copies,
                           double step) {
  const auto p = three_path_probs(psi1, psi2, phi1, phi2);
  const auto p1_hi = three_path_probs(psi1, psi2, phi1 + step, phi2);
  const auto p1_lo = three_path_probs(psi1, psi2, phi1 - step, phi2);
  const auto p2_hi = three_path_probs(psi1, psi2, phi1, phi2 + step);
  const auto p2_lo = three_path_probs(psi1, psi2, phi1, phi2 - step);
  Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < 1e-12) {
      continue;
    }
    const Eigen::Vector2d grad((p1_hi[k] - p1_lo[k]) / (2.0 * step),
                               (p2_hi[k] - p2_lo[k]) / (2.0 * step));
    f += grad * grad.transpose() / p[k];
  }
  return copies * f;
}

ThreePathModel::ThreePathModel(ParamSpace<double> space)
    : space_(std::move(space)), settings_(ParamSpace<double>::cube(2, 0.0, kTwoPi)) {
  if (space_.dim() != 2) {
    throw std::invalid_argument("ThreePathModel: parameter space must be two-dimensional");
  }
}

double ThreePathModel::log_density(const Outcome& outcome, const VectorXd& params,
                                   const VectorXd& setting) const {
  const int index = std::get<int>(outcome);
  if (index < 0 || index >= 10) {
    throw std::out_of_range("ThreePathModel: outcome index outside 0..9");
  }
  const auto p = three_path_probs(setting(0), setting(1), params(0), params(1));
  return p[index] > 0.0 ? std::log(p[index]) : kNegInf;
}

double ThreePathModel::batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                                            const SufficientStats& stats) const {
  const auto p = three_path_probs(setting(0), setting(1), params(0), params(1));
  double ll = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double count = stats.values(k);
    if (count == 0.0) {
      continue;
    }
    if (p[k] <= 0.0) {
      return kNegInf;
    }
    ll += count * std::log(p[k]);
  }
  return ll;
}

MatrixXd ThreePathModel::fisher_per_copy(const VectorXd& params, const VectorXd& setting) const {
  require_length(params, 2, "three-path parameter");
  require_length(setting, 2, "three-path setting");
  return three_path_fisher(setting(0), setting(1), params(0), params(1));
}

std::vector<Outcome> ThreePathModel::sample(const VectorXd& params, const VectorXd& setting,
                                            std::int64_t n, Rng& rng) const {
  const auto p = three_path_probs(setting(0), setting(1), params(0), params(1));
  std::discrete_distribution<int> pick(p.begin(), p.end());
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out.emplace_back(pick(rng));
  }
  return out;
}

SufficientStats ThreePathModel::sample_stats(const VectorXd& params, const VectorXd& setting,
                                             std::int64_t n, Rng& rng) const {
  const auto p = three_path_probs(setting(0), setting(1), params(0), params(1));
  SufficientStats stats{n, VectorXd::Zero(10)};
  std::int64_t remaining = n;
  double mass = 1.0;
  for (int k = 0; k < 9 && remaining > 0; ++k) {
    const double q = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    const std::int64_t c = draw(rng);
    stats.values(k) = static_cast<double>(c);
    remaining -= c;
    mass -= p[k];
  }
  stats.values(9) += static_cast<double>(remaining);
  return stats;
}

SufficientStats ThreePathModel::summarize(const std::vector<Outcome>& outcomes) const {
  SufficientStats stats{static_cast<std::int64_t>(outcomes.size()), VectorXd::Zero(10)};
  for (const auto& o : outcomes) {
    const int index = std::get<int>(o);
    if (index < 0 || index >= 10) {
      throw std::out_of_range("ThreePathModel: outcome index outside 0..9");
    }
    stats.values(index) += 1.0;
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Squeezed-state model.

double squeezed_variance(double nu, double alpha, double theta) {
  if (!(nu > 0.0)) {
    throw std::domain_error("squeezed_variance: nu must be positive");
  }
  const double nu2 = nu * nu;
  return (nu2 + 1.0 + (nu2 - 1.0) * std::cos(2.0 * alpha + 2.0 * theta)) / (4.0 * nu);
}

Eigen::Matrix2d squeezed_fisher_elements(double nu, double alpha, double theta) {
  if (!(nu > 0.0)) {
    throw std::domain_error("squeezed_fisher_elements: nu must be positive");
  }
  const double nu2 = nu * nu;
  const double c = std::cos(2.0 * alpha + 2.0 * theta);
  const double s = std::sin(2.0 * alpha + 2.0 * theta);
  const double num = nu2 + (nu2 + 1.0) * c - 1.0;
  const double den = nu2 + (nu2 - 1.0) * c + 1.0;
  const double den2 = den * den;
  Eigen::Matrix2d f;
  f(0, 0) = num * num / (2.0 * nu2 * den2);
  f(1, 1) = 2.0 * (nu2 - 1.0) * (nu2 - 1.0) * s * s / den2;
  f(0, 1) = (1.0 - nu2) * s * num / (nu * den2);
  f(1, 0) = f(0, 1);
  return f;
}

SqueezedStateModel::SqueezedStateModel(ParamSpace<double> space)
    : space_(std::move(space)), settings_(ParamSpace<double>::cube(2, 0.0, kPi)) {
  if (space_.dim() != 2 || !(space_.lower()(0) > 0.0)) {
    throw std::invalid_argument("SqueezedStateModel: needs a 2-d space with nu > 0");
  }
}

double SqueezedStateModel::log_density(const Outcome& outcome, const VectorXd& params,
                                       const VectorXd& setting) const {
  const auto& x = std::get<std::array<double, 2>>(outcome);
  return gaussian_logpdf(x[0], squeezed_variance(params(0), params(1), setting(0))) +
         gaussian_logpdf(x[1], squeezed_variance(params(0), params(1), setting(1)));
}

double SqueezedStateModel::batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                                                const SufficientStats& stats) const {
  return gaussian_batch_log_likelihood(squeezed_variance(params(0), params(1), setting(0)),
                                       stats.copies, stats.values(0)) +
         gaussian_batch_log_likelihood(squeezed_variance(params(0), params(1), setting(1)),
                                       stats.copies, stats.values(1));
}

MatrixXd SqueezedStateModel::fisher_per_copy(const VectorXd& params,
                                             const VectorXd& setting) const {
  require_length(params, 2, "squeezed parameter");
  require_length(setting, 2, "squeezed setting");
  return squeezed_fisher_elements(params(0), params(1), setting(0)) +
         squeezed_fisher_elements(params(0), params(1), setting(1));
}

std::vector<Outcome> SqueezedStateModel::sample(const VectorXd& params, const VectorXd& setting,
                                                std::int64_t n, Rng& rng) const {
  std::normal_distribution<double> first(
      0.0, std::sqrt(squeezed_variance(params(0), params(1), setting(0))));
  std::normal_distribution<double> second(
      0.0, std::sqrt(squeezed_variance(params(0), params(1), setting(1))));
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double x1 = first(rng);
    const double x2 = second(rng);
    out.emplace_back(std::array<double, 2>{x1, x2});
  }
  return out;
}

SufficientStats SqueezedStateModel::sample_stats(const VectorXd& params, const VectorXd& setting,
                                                 std::int64_t n, Rng& rng) const {
  std::chi_squared_distribution<double> chi2(static_cast<double>(n));
  SufficientStats stats{n, VectorXd(2)};
  stats.values(0) = squeezed_variance(params(0), params(1), setting(0)) * chi2(rng);
  stats.values(1) = squeezed_variance(params(0), params(1), setting(1)) * chi2(rng);
  return stats;
}

SufficientStats SqueezedStateModel::summarize(const std::vector<Outcome>& outcomes) const {
  SufficientStats stats{static_cast<std::int64_t>(outcomes.size()), VectorXd::Zero(2)};
  for (const auto& o : outcomes) {
    const auto& x = std::get<std::array<double, 2>>(o);
    stats.values(0) += x[0] * x[0];
    stats.values(1) += x[1] * x[1];
  }
  return stats;
}

std::unique_ptr<StatisticalModel> make_model(const std::string& name, double zeta) {
  if (name == "homodyne") {
    return std::make_unique<HomodynePhaseModel>(zeta);
  }
  if (name == "three-path") {
    return std::make_unique<ThreePathModel>();
  }
  if (name == "squeezed") {
    return std::make_unique<SqueezedStateModel>();
  }
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace bayesreg
