#ifndef BAYESREG_INFERENCE_HPP
#define BAYESREG_INFERENCE_HPP

#include "bayesreg/models.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace bayesreg {

/// Setting plus sufficient statistics; all the likelihood needs from a batch.
struct BatchSummary {
  VectorXd setting;
  SufficientStats stats;
  std::int64_t copies() const { return stats.copies; }
};

/// Data measured with one setting.
struct Batch {
  VectorXd setting;
  std::vector<Outcome> outcomes;
  SufficientStats stats;

  Batch() = default;
  Batch(const StatisticalModel& model, VectorXd setting, std::vector<Outcome> outcomes);

  std::int64_t copies() const { return static_cast<std::int64_t>(outcomes.size()); }
  BatchSummary summary() const { return {setting, stats}; }
};

/// Ordered accumulation of batches.
class Dataset {
 public:
  void add(Batch batch);
  const std::vector<Batch>& batches() const { return batches_; }
  std::int64_t total_copies() const { return total_copies_; }
  bool empty() const { return batches_.empty(); }
  std::vector<BatchSummary> summaries() const;

 private:
  std::vector<Batch> batches_;
  std::int64_t total_copies_ = 0;
};

struct MLOptions {
  int grid_points = 101;  // per parameter dimension
  double param_tol = 1e-8;
  int max_iterations = 10000;
  double boundary_tol = 1e-6;  // relative to the box edge
};

struct MLResult {
  VectorXd estimate;
  double log_likelihood_max = 0.0;
  FisherMatrix fisher_at_ml;
  bool converged = false;
  bool boundary_hit = false;
  int iterations = 0;
};

struct FisherAssembly {
  FisherMatrix matrix;
  bool singular = false;  // det < 1e-300: the design is information deficient
};

/// Sum of batch log-likelihoods; -inf when some outcome is impossible.
double log_likelihood(const StatisticalModel& model, std::span<const BatchSummary> batches,
                      const VectorXd& params);
double log_likelihood(const StatisticalModel& model, const Dataset& data, const VectorXd& params);

/// Sum over batches of copies * per-copy Fisher information at `params`.
FisherAssembly fisher_at(const StatisticalModel& model, std::span<const BatchSummary> batches,
                         const VectorXd& params);
FisherAssembly fisher_at(const StatisticalModel& model, const Dataset& data,
                         const VectorXd& params);

/// Negative Hessian of the log-likelihood at `params` by central differences.
FisherMatrix observed_information(const StatisticalModel& model,
                                  std::span<const BatchSummary> batches, const VectorXd& params,
                                  double step = 1e-4);

/// Grid search over the parameter box (ties to the lowest lexicographic grid
/// index), then box-clamped simplex refinement.
MLResult ml_estimate(const StatisticalModel& model, std::span<const BatchSummary> batches,
                     const MLOptions& options = {});
MLResult ml_estimate(const StatisticalModel& model, const Dataset& data,
                     const MLOptions& options = {});

/// Simplex refinement only, started at `start`.
MLResult ml_refine(const StatisticalModel& model, std::span<const BatchSummary> batches,
                   const VectorXd& start, const MLOptions& options = {});

}  // namespace bayesreg

#endif  // BAYESREG_INFERENCE_HPP
