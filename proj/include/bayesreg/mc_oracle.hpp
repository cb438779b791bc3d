#ifndef BAYESREG_MC_ORACLE_HPP
#define BAYESREG_MC_ORACLE_HPP

// Brute-force validators for the closed-form region formulas: Monte Carlo
// size / credibility / RSE over the actual likelihood, interval RSE under
// boundary truncation, and truncated-ball integrals.

#include "bayesreg/inference.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bayesreg {

enum class Proposal { Uniform, GaussianImportance };

std::string to_string(Proposal proposal);

struct MCConfig {
  std::int64_t samples = 100000;
  Proposal proposal = Proposal::GaussianImportance;
  std::uint64_t stream = 0;
  double proposal_scale = 1.5;  // standard-deviation inflation of the Gaussian proposal
};

struct MCRegionEstimate {
  double lambda = 1.0;
  double size = 0.0;
  double size_se = 0.0;
  double credibility = 0.0;
  double credibility_se = 0.0;
  std::int64_t accepted = 0;
  std::int64_t samples = 0;
  Proposal proposal = Proposal::Uniform;
  bool zero_acceptance = false;
};

struct MCRseEstimate {
  double rse = 0.0;
  double rse_se = 0.0;
  std::int64_t accepted = 0;
  std::int64_t samples = 0;
  Proposal proposal = Proposal::Uniform;
  bool zero_acceptance = false;
};

/// Size (prior fraction of {L >= lambda L_max}) and credibility (likelihood
/// mass fraction) by sampling. The Gaussian proposal is centred at the ML
/// estimate with covariance ml.fisher_at_ml^{-1}.
std::vector<MCRegionEstimate> mc_region_props(const StatisticalModel& model,
                                              std::span<const BatchSummary> batches,
                                              const MLResult& ml,
                                              const std::vector<double>& lambdas,
                                              const MCConfig& config);
MCRegionEstimate mc_region_props(const StatisticalModel& model,
                                 std::span<const BatchSummary> batches, const MLResult& ml,
                                 double lambda, const MCConfig& config);

/// Prior-weighted mean of |r' - reference|^2 over the lambda-region.
MCRseEstimate mc_rse(const StatisticalModel& model, std::span<const BatchSummary> batches,
                     const MLResult& ml, double lambda, const VectorXd& reference,
                     const MCConfig& config);

// ---------------------------------------------------------------------------
// One-dimensional truncation.

/// RSE of the interval [a, b] relative to r.
double rse_interval_actual(double r, double a, double b);

/// RSE of the as-if interval [a, 2 r_ml - a] relative to r.
double rse_interval_categorical(double r, double a, double r_ml);

/// rse_interval_actual - rse_interval_categorical in factored form.
double rse_interval_difference(double r, double a, double b, double r_ml);

// ---------------------------------------------------------------------------
// Ball of radius R in d dimensions with a cap of height h cut off by a hyperplane.

struct CapGeometry {
  int d = 1;
  double radius = 1.0;
  double height = 0.0;  // removed cap height, 0 <= h <= R
};

struct CapIntegrals {
  double integral = 0.0;  // of |r|^2 over the truncated ball
  double volume = 0.0;
  double rse = 0.0;       // integral / volume
};

/// Truncated-ball integrals; the cap part by adaptive quadrature over the
/// polar angle, d = 1 in closed form.
CapIntegrals cap_integrals(const CapGeometry& geom);

/// Midpoint-rule slicing of the truncated ball for the summation lemma:
/// index 0 is the lower half-ball (mirror of the slices), indices 1..n are
/// slabs of the upper half-ball in increasing height.
struct SliceSequences {
  std::vector<double> a;  // integrals of |r|^2
  std::vector<double> b;  // volumes
};
SliceSequences cap_slice_sequences(int d, double radius, int slices);

struct LemmaResult {
  bool holds = false;
  std::size_t k_star = 0;
};

/// Checks t(k) = sum_{j<=k} a_j / sum_{j<=k} b_j < t(0) for 1 <= k <= N-1 and
/// that t has a unique minimiser. Throws std::invalid_argument when the inputs
/// violate the preconditions (equal endpoint ratios, strictly increasing
/// a_j / b_j for j >= 1, nonnegative entries).
LemmaResult lemma_check(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bayesreg

#endif  // BAYESREG_MC_ORACLE_HPP
