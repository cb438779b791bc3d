#ifndef BAYESREG_MODELS_HPP
#define BAYESREG_MODELS_HPP

#include "bayesreg/param_space.hpp"
#include "bayesreg/region.hpp"
#include "bayesreg/rng.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace bayesreg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// One measured datum: a discrete outcome index, a single quadrature, or a
/// quadrature pair (one per LO phase of a paired setting).
using Outcome = std::variant<int, double, std::array<double, 2>>;

enum class OutcomeKind { Discrete, Continuous, ContinuousPair };

/// Sufficient statistics of one batch measured with a single setting:
/// outcome counts for discrete models, per-phase sums of squared quadratures
/// for the zero-mean Gaussian models.
struct SufficientStats {
  std::int64_t copies = 0;
  VectorXd values;
};

/*
 * Common interface of the statistical models. Evaluation is pure; sampling
 * takes an explicit generator.
 */
class StatisticalModel {
 public:
  virtual ~StatisticalModel() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual int setting_dim() const = 0;
  virtual const ParamSpace<double>& param_space() const = 0;
  virtual const ParamSpace<double>& setting_space() const = 0;
  virtual OutcomeKind outcome_kind() const = 0;

  virtual double log_density(const Outcome& outcome, const VectorXd& params,
                             const VectorXd& setting) const = 0;

  /// Log-likelihood of a whole batch from its sufficient statistics; -inf
  /// when an observed outcome has zero probability.
  virtual double batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                                      const SufficientStats& stats) const = 0;

  /// Fisher information of one copy measured with `setting`.
  virtual MatrixXd fisher_per_copy(const VectorXd& params, const VectorXd& setting) const = 0;

  virtual std::vector<Outcome> sample(const VectorXd& params, const VectorXd& setting,
                                      std::int64_t n, Rng& rng) const = 0;

  /// Draws the sufficient statistics of n copies directly; same distribution
  /// as summarize(sample(...)).
  virtual SufficientStats sample_stats(const VectorXd& params, const VectorXd& setting,
                                       std::int64_t n, Rng& rng) const = 0;

  virtual SufficientStats summarize(const std::vector<Outcome>& outcomes) const = 0;
};

// ---------------------------------------------------------------------------
// Phase-shifted homodyne interferometer with squeezed-vacuum input (d = 1).

/// Quadrature variance [cosh 2z + cos(2 theta - 2 phi) sinh 2z] / 2.
double homodyne_phase_variance(double phi, double zeta, double theta);

/// Log of the normalised zero-mean Gaussian with the variance above.
double homodyne_phase_logpdf(double x, double phi, double zeta, double theta);

/// Fisher information of N copies, N (d sigma^2/d phi)^2 / (2 sigma^4).
double homodyne_phase_fisher(double phi, double zeta, double theta, double copies = 1.0);

/// The expression as printed alongside the model, with 2 sigma^2 in the
/// denominator. Kept for comparison only.
double homodyne_phase_fisher_printed(double phi, double zeta, double theta,
                                     double copies = 1.0);

enum class FisherConvention { Gaussian, Printed };

struct HomodyneOptimum {
  double theta = 0.0;   // argmax in [0, pi)
  double fisher = 0.0;  // per-copy information there
  bool degenerate = false;  // flat objective (zeta = 0)
  /// Nearest member of phi +- acos(+-tanh zeta)/2 (mod pi), and its distance.
  double closed_form_theta = 0.0;
  double closed_form_gap = 0.0;
  /// Nearest member of phi +- acos(-tanh 2 zeta)/2 (mod pi), the stationary
  /// point of the Gaussian-convention information, and its distance.
  double gaussian_branch_theta = 0.0;
  double gaussian_branch_gap = 0.0;
};

/// LO phase maximising the per-copy information: 1001-point grid on [0, pi)
/// followed by Brent refinement.
HomodyneOptimum homodyne_phase_opt_setting(double phi, double zeta,
                                           FisherConvention convention = FisherConvention::Gaussian);

/// Circular distance between two angles of period `period`.
double periodic_distance(double a, double b, double period);

class HomodynePhaseModel final : public StatisticalModel {
 public:
  explicit HomodynePhaseModel(double zeta,
                              ParamSpace<double> space = ParamSpace<double>::interval(0.0, 1.5707963267948966));

  double zeta() const { return zeta_; }

  std::string name() const override { return "homodyne"; }
  int dim() const override { return 1; }
  int setting_dim() const override { return 1; }
  const ParamSpace<double>& param_space() const override { return space_; }
  const ParamSpace<double>& setting_space() const override { return settings_; }
  OutcomeKind outcome_kind() const override { return OutcomeKind::Continuous; }

  double log_density(const Outcome& outcome, const VectorXd& params,
                     const VectorXd& setting) const override;
  double batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                              const SufficientStats& stats) const override;
  MatrixXd fisher_per_copy(const VectorXd& params, const VectorXd& setting) const override;
  std::vector<Outcome> sample(const VectorXd& params, const VectorXd& setting, std::int64_t n,
                              Rng& rng) const override;
  SufficientStats sample_stats(const VectorXd& params, const VectorXd& setting, std::int64_t n,
                               Rng& rng) const override;
  SufficientStats summarize(const std::vector<Outcome>& outcomes) const override;

 private:
  double zeta_;
  ParamSpace<double> space_;
  ParamSpace<double> settings_;
};

// ---------------------------------------------------------------------------
// Three-path interferometer with |1,1,1> input and photon counting (d = 2).

using Matrix3cd = Eigen::Matrix<std::complex<double>, 3, 3>;

/// Symmetric beam tritter.
Matrix3cd tritter_unitary();

/// Whole interferometer U3 diag(e^{i t1}, e^{i t2}, 1) U3 for phase offsets t.
Matrix3cd three_path_unitary(double t1, double t2);

/// Output occupations (n1, n2, n3), n1 + n2 + n3 = 3, in descending
/// lexicographic order: (3,0,0), (2,1,0), (2,0,1), ..., (0,0,3).
const std::array<std::array<int, 3>, 10>& occupation_triples();

/// Permanent of a 3x3 complex matrix.
std::complex<double> permanent3(const Matrix3cd& m);

/// Transition amplitudes <n1,n2,n3| U |1,1,1> in occupation_triples() order.
std::array<std::complex<double>, 10> three_photon_amplitudes(const Matrix3cd& unitary);

/// Born probabilities of the 10 outcomes with control phases psi and unknown phases phi.
std::array<double, 10> three_path_probs(double psi1, double psi2, double phi1, double phi2);

/// Fisher information of N copies in (phi1, phi2); central differences with
/// step h, outcomes with p < 1e-12 skipped.
MatrixXd three_path_fisher(double psi1, double psi2, double phi1, double phi2,
                           double copies = 1.0, double step = 1e-5);

class ThreePathModel final : public StatisticalModel {
 public:
  explicit ThreePathModel(ParamSpace<double> space = ParamSpace<double>::cube(2, 0.0, 1.5707963267948966));

  std::string name() const override { return "three-path"; }
  int dim() const override { return 2; }
  int setting_dim() const override { return 2; }
  const ParamSpace<double>& param_space() const override { return space_; }
  const ParamSpace<double>& setting_space() const override { return settings_; }
  OutcomeKind outcome_kind() const override { return OutcomeKind::Discrete; }

  double log_density(const Outcome& outcome, const VectorXd& params,
                     const VectorXd& setting) const override;
  double batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                              const SufficientStats& stats) const override;
  MatrixXd fisher_per_copy(const VectorXd& params, const VectorXd& setting) const override;
  std::vector<Outcome> sample(const VectorXd& params, const VectorXd& setting, std::int64_t n,
                              Rng& rng) const override;
  SufficientStats sample_stats(const VectorXd& params, const VectorXd& setting, std::int64_t n,
                               Rng& rng) const override;
  SufficientStats summarize(const std::vector<Outcome>& outcomes) const override;

 private:
  ParamSpace<double> space_;
  ParamSpace<double> settings_;
};

// ---------------------------------------------------------------------------
// Squeezed-state characterisation by paired homodyne phases (d = 2), with the
// temperature known and normalised to 1.

/// Quadrature variance [nu^2 + 1 + (nu^2 - 1) cos(2 alpha + 2 theta)] / (4 nu).
double squeezed_variance(double nu, double alpha, double theta);

/// Per-phase information matrix in (nu, alpha), closed-form elements.
Eigen::Matrix2d squeezed_fisher_elements(double nu, double alpha, double theta);

class SqueezedStateModel final : public StatisticalModel {
 public:
  explicit SqueezedStateModel(ParamSpace<double> space = ParamSpace<double>(
                                  (VectorXd(2) << 1.0, 0.0).finished(),
                                  (VectorXd(2) << 5.0, 1.5707963267948966).finished()));

  std::string name() const override { return "squeezed"; }
  int dim() const override { return 2; }
  int setting_dim() const override { return 2; }
  const ParamSpace<double>& param_space() const override { return space_; }
  const ParamSpace<double>& setting_space() const override { return settings_; }
  OutcomeKind outcome_kind() const override { return OutcomeKind::ContinuousPair; }

  double log_density(const Outcome& outcome, const VectorXd& params,
                     const VectorXd& setting) const override;
  double batch_log_likelihood(const VectorXd& params, const VectorXd& setting,
                              const SufficientStats& stats) const override;
  /// F(theta1) + F(theta2): one copy is one quadrature at each LO phase.
  MatrixXd fisher_per_copy(const VectorXd& params, const VectorXd& setting) const override;
  std::vector<Outcome> sample(const VectorXd& params, const VectorXd& setting, std::int64_t n,
                              Rng& rng) const override;
  SufficientStats sample_stats(const VectorXd& params, const VectorXd& setting, std::int64_t n,
                               Rng& rng) const override;
  SufficientStats summarize(const std::vector<Outcome>& outcomes) const override;

 private:
  ParamSpace<double> space_;
  ParamSpace<double> settings_;
};

/// Model by CLI name: "homodyne" (needs zeta), "three-path", "squeezed".
std::unique_ptr<StatisticalModel> make_model(const std::string& name, double zeta = 0.7);

}  // namespace bayesreg

#endif  // BAYESREG_MODELS_HPP
