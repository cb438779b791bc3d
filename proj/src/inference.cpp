#include "bayesreg/inference.hpp"

#include "bayesreg/optimize.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bayesreg {

Batch::Batch(const StatisticalModel& model, VectorXd setting_in, std::vector<Outcome> outcomes_in)
    : setting(std::move(setting_in)), outcomes(std::move(outcomes_in)) {
  if (setting.size() != model.setting_dim()) {
    throw std::invalid_argument("Batch: setting length differs from the model's setting dimension");
  }
  stats = model.summarize(outcomes);
}

void Dataset::add(Batch batch) {
  total_copies_ += batch.copies();
  batches_.push_back(std::move(batch));
}

std::vector<BatchSummary> Dataset::summaries() const {
  std::vector<BatchSummary> out;
  out.reserve(batches_.size());
  for (const auto& b : batches_) {
    out.push_back(b.summary());
  }
  return out;
}

double log_likelihood(const StatisticalModel& model, std::span<const BatchSummary> batches,
                      const VectorXd& params) {
  double total = 0.0;
  for (const auto& b : batches) {
    total += model.batch_log_likelihood(params, b.setting, b.stats);
    if (total == -std::numeric_limits<double>::infinity()) {
      break;
    }
  }
  return total;
}

double log_likelihood(const StatisticalModel& model, const Dataset& data, const VectorXd& params) {
  const auto summaries = data.summaries();
  return log_likelihood(model, summaries, params);
}

FisherAssembly fisher_at(const StatisticalModel& model, std::span<const BatchSummary> batches,
                         const VectorXd& params) {
  FisherAssembly out{FisherMatrix::Zero(model.dim(), model.dim()), false};
  for (const auto& b : batches) {
    out.matrix += static_cast<double>(b.copies()) * model.fisher_per_copy(params, b.setting);
  }
  out.singular = !(out.matrix.determinant() >= 1e-300);
  return out;
}

FisherAssembly fisher_at(const StatisticalModel& model, const Dataset& data,
                         const VectorXd& params) {
  const auto summaries = data.summaries();
  return fisher_at(model, summaries, params);
}

FisherMatrix observed_information(const StatisticalModel& model,
                                  std::span<const BatchSummary> batches, const VectorXd& params,
                                  double step) {
  const int d = model.dim();
  auto f = [&](const VectorXd& x) { return log_likelihood(model, batches, x); };
  const double f0 = f(params);
  FisherMatrix hess(d, d);
  for (int i = 0; i < d; ++i) {
    VectorXd hi = params, lo = params;
    hi(i) += step;
    lo(i) -= step;
    hess(i, i) = (f(hi) - 2.0 * f0 + f(lo)) / (step * step);
    for (int j = 0; j < i; ++j) {
      VectorXd pp = params, pm = params, mp = params, mm = params;
      pp(i) += step; pp(j) += step;
      pm(i) += step; pm(j) -= step;
      mp(i) -= step; mp(j) += step;
      mm(i) -= step; mm(j) -= step;
      hess(i, j) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
      hess(j, i) = hess(i, j);
    }
  }
  return -hess;
}

namespace {

MLResult refine_from(const StatisticalModel& model, std::span<const BatchSummary> batches,
                     const VectorXd& start, const MLOptions& options, double initial_step) {
  const auto& space = model.param_space();
  SimplexOptions simplex;
  simplex.tolerance = options.param_tol;
  simplex.max_iterations = options.max_iterations;
  simplex.initial_step = initial_step;
  const SimplexResult fit = nelder_mead_box(
      [&](const VectorXd& x) { return -log_likelihood(model, batches, x); }, start, space,
      simplex);

  MLResult result;
  result.estimate = fit.x;
  result.log_likelihood_max = -fit.value;
  result.converged = fit.converged;
  result.iterations = fit.iterations;
  const VectorXd tol = options.boundary_tol * space.edges();
  result.boundary_hit = ((fit.x - space.lower()).array() <= tol.array()).any() ||
                        ((space.upper() - fit.x).array() <= tol.array()).any();
  result.fisher_at_ml = fisher_at(model, batches, fit.x).matrix;
  return result;
}

}  // namespace

MLResult ml_estimate(const StatisticalModel& model, std::span<const BatchSummary> batches,
                     const MLOptions& options) {
  if (batches.empty()) {
    throw std::invalid_argument("ml_estimate: dataset is empty");
  }
  if (options.grid_points < 2) {
    throw std::invalid_argument("ml_estimate: need at least two grid points per dimension");
  }
  const auto& space = model.param_space();
  const int d = model.dim();
  const int g = options.grid_points;
  const VectorXd spacing = space.edges() / static_cast<double>(g - 1);

  std::vector<int> index(d, 0);
  VectorXd point = space.lower();
  VectorXd best = point;
  double best_ll = -std::numeric_limits<double>::infinity();
  bool first = true;
  while (true) {
    for (int j = 0; j < d; ++j) {
      point(j) = (index[j] == g - 1) ? space.upper()(j) : space.lower()(j) + index[j] * spacing(j);
    }
    const double ll = log_likelihood(model, batches, point);
    if (first || ll > best_ll) {
      best_ll = ll;
      best = point;
      first = false;
    }
    // Last dimension varies fastest: lexicographic order of the index tuple.
    int j = d - 1;
    while (j >= 0 && ++index[j] == g) {
      index[j] = 0;
      --j;
    }
    if (j < 0) {
      break;
    }
  }

  return refine_from(model, batches, best, options, 1.0 / (g - 1));
}

MLResult ml_estimate(const StatisticalModel& model, const Dataset& data, const MLOptions& options) {
  const auto summaries = data.summaries();
  return ml_estimate(model, summaries, options);
}

MLResult ml_refine(const StatisticalModel& model, std::span<const BatchSummary> batches,
                   const VectorXd& start, const MLOptions& options) {
  if (batches.empty()) {
    throw std::invalid_argument("ml_refine: dataset is empty");
  }
  return refine_from(model, batches, start, options, 0.01);
}

}  // namespace bayesreg
