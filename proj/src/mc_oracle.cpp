#include "bayesreg/mc_oracle.hpp"

#include <Eigen/Cholesky>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace bayesreg {

std::string to_string(Proposal proposal) {
  return proposal == Proposal::Uniform ? "uniform" : "gaussian-importance";
}

namespace {

constexpr std::int64_t kChunk = 4096;

// Draws M points with prior/proposal weights. Chunks use their own streams so
// the sample set only depends on (stream, M).
struct WeightedSample {
  VectorXd point;
  double weight = 0.0;    // (1/V) / q, or 1 for uniform sampling
  double log_ratio = 0.0; // log L - log L_max
};

std::vector<WeightedSample> draw_weighted(const StatisticalModel& model,
                                          std::span<const BatchSummary> batches,
                                          const MLResult& ml, const MCConfig& config) {
  if (config.samples < 1) {
    throw std::invalid_argument("MCConfig: sample count must be positive");
  }
  const auto& space = model.param_space();
  const int d = model.dim();
  const double log_volume = std::log(space.volume());

  Eigen::MatrixXd chol_upper;
  double log_norm = 0.0;
  const bool importance = config.proposal == Proposal::GaussianImportance;
  if (importance) {
    if (ml.estimate.size() != d || ml.fisher_at_ml.rows() != d) {
      throw std::invalid_argument("mc oracle: importance proposal needs a valid ML result");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(ml.fisher_at_ml);
    if (llt.info() != Eigen::Success) {
      throw SingularFisherError("mc oracle: Fisher at the ML estimate is not positive definite");
    }
    chol_upper = llt.matrixU();
    // log q = log_norm - |z|^2 / 2
    double log_det = 0.0;
    for (int j = 0; j < d; ++j) {
      log_det += 2.0 * std::log(llt.matrixL()(j, j));
    }
    log_norm = -0.5 * d * std::log(boost::math::constants::two_pi<double>()) + 0.5 * log_det -
               d * std::log(config.proposal_scale);
  }

  std::vector<WeightedSample> out(static_cast<std::size_t>(config.samples));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  for (std::int64_t start = 0; start < config.samples; start += kChunk) {
    Rng rng = make_stream(config.stream, {static_cast<std::uint64_t>(start / kChunk)});
    const std::int64_t stop = std::min(config.samples, start + kChunk);
    for (std::int64_t i = start; i < stop; ++i) {
      auto& s = out[static_cast<std::size_t>(i)];
      if (importance) {
        VectorXd z(d);
        for (int j = 0; j < d; ++j) {
          z(j) = normal(rng);
        }
        s.point = ml.estimate +
                  config.proposal_scale * chol_upper.triangularView<Eigen::Upper>().solve(z);
        if (!space.contains(s.point)) {
          s.weight = 0.0;
          continue;
        }
        s.weight = std::exp(-log_volume - (log_norm - 0.5 * z.squaredNorm()));
      } else {
        s.point.resize(d);
        for (int j = 0; j < d; ++j) {
          s.point(j) = space.lower()(j) + space.edges()(j) * unit(rng);
        }
        s.weight = 1.0;
      }
      s.log_ratio = log_likelihood(model, batches, s.point) - ml.log_likelihood_max;
    }
  }
  return out;
}

struct RatioStat {
  double value = 0.0;
  double se = 0.0;
};

// Ratio estimator sum(num) / sum(den) with its delta-method standard error.
RatioStat ratio_estimate(const std::vector<double>& num, const std::vector<double>& den) {
  const auto m = static_cast<double>(num.size());
  double sn = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sn += num[i];
    sd += den[i];
  }
  if (sd <= 0.0) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
  }
  const double ratio = sn / sd;
  const double mean_den = sd / m;
  double var = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    const double r = num[i] - ratio * den[i];
    var += r * r;
  }
  var /= (m - 1.0);
  return {ratio, std::sqrt(var / m) / mean_den};
}

RatioStat mean_estimate(const std::vector<double>& x) {
  const auto m = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) {
    sum += v;
  }
  const double mean = sum / m;
  double var = 0.0;
  for (double v : x) {
    var += (v - mean) * (v - mean);
  }
  var /= std::max(1.0, m - 1.0);
  return {mean, std::sqrt(var / m)};
}

void check_lambda_open(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::domain_error("mc oracle: lambda must lie in (0, 1]");
  }
}

}  // namespace

std::vector<MCRegionEstimate> mc_region_props(const StatisticalModel& model,
                                              std::span<const BatchSummary> batches,
                                              const MLResult& ml,
                                              const std::vector<double>& lambdas,
                                              const MCConfig& config) {
  for (double lambda : lambdas) {
    check_lambda_open(lambda);
  }
  const auto samples = draw_weighted(model, batches, ml, config);
  const std::size_t m = samples.size();

  std::vector<double> in_w(m), like_in(m), like(m);
  for (std::size_t i = 0; i < m; ++i) {
    like[i] = samples[i].weight * std::exp(samples[i].log_ratio);
  }

  std::vector<MCRegionEstimate> out;
  for (double lambda : lambdas) {
    const double log_lambda = std::log(lambda);
    MCRegionEstimate est;
    est.lambda = lambda;
    est.samples = static_cast<std::int64_t>(m);
    est.proposal = config.proposal;
    for (std::size_t i = 0; i < m; ++i) {
      const bool inside = samples[i].weight > 0.0 && samples[i].log_ratio >= log_lambda;
      in_w[i] = inside ? samples[i].weight : 0.0;
      like_in[i] = inside ? like[i] : 0.0;
      est.accepted += inside ? 1 : 0;
    }
    est.zero_acceptance = est.accepted == 0;
    const RatioStat size = mean_estimate(in_w);
    const RatioStat cred = ratio_estimate(like_in, like);
    est.size = size.value;
    est.size_se = size.se;
    est.credibility = cred.value;
    est.credibility_se = cred.se;
    out.push_back(est);
  }
  return out;
}

MCRegionEstimate mc_region_props(const StatisticalModel& model,
                                 std::span<const BatchSummary> batches, const MLResult& ml,
                                 double lambda, const MCConfig& config) {
  return mc_region_props(model, batches, ml, std::vector<double>{lambda}, config).front();
}

MCRseEstimate mc_rse(const StatisticalModel& model, std::span<const BatchSummary> batches,
                     const MLResult& ml, double lambda, const VectorXd& reference,
                     const MCConfig& config) {
  check_lambda_open(lambda);
  if (reference.size() != model.dim()) {
    throw std::invalid_argument("mc_rse: reference length differs from the model dimension");
  }
  const auto samples = draw_weighted(model, batches, ml, config);
  const std::size_t m = samples.size();
  const double log_lambda = std::log(lambda);
  std::vector<double> num(m), den(m);
  MCRseEstimate est;
  est.samples = static_cast<std::int64_t>(m);
  est.proposal = config.proposal;
  for (std::size_t i = 0; i < m; ++i) {
    const bool inside = samples[i].weight > 0.0 && samples[i].log_ratio >= log_lambda;
    den[i] = inside ? samples[i].weight : 0.0;
    num[i] = inside ? den[i] * (samples[i].point - reference).squaredNorm() : 0.0;
    est.accepted += inside ? 1 : 0;
  }
  est.zero_acceptance = est.accepted == 0;
  const RatioStat r = ratio_estimate(num, den);
  est.rse = r.value;
  est.rse_se = r.se;
  return est;
}

// ---------------------------------------------------------------------------

double rse_interval_actual(double r, double a, double b) {
  if (!(a < b)) {
    throw std::invalid_argument("rse_interval_actual: need a < b");
  }
  return (a * a + a * b + b * b) / 3.0 - r * (a + b) + r * r;
}

double rse_interval_categorical(double r, double a, double r_ml) {
  if (!(a < r_ml)) {
    throw std::invalid_argument("rse_interval_categorical: need a < r_ml");
  }
  return rse_interval_actual(r, a, 2.0 * r_ml - a);
}

double rse_interval_difference(double r, double a, double b, double r_ml) {
  return (a + b - 2.0 * r_ml) * (b - 3.0 * r + 2.0 * r_ml) / 3.0;
}

// ---------------------------------------------------------------------------

namespace {

template <typename F>
double integrate_checked(F f, double lo, double hi) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-12, &error);
  if (!(error <= 1e-9 * std::max(1.0, std::abs(value)))) {
    throw std::runtime_error("cap_integrals: quadrature did not converge");
  }
  return value;
}

}  // namespace

CapIntegrals cap_integrals(const CapGeometry& geom) {
  const int d = geom.d;
  const double R = geom.radius;
  const double h = geom.height;
  if (d < 1 || !(R > 0.0) || !(h >= 0.0 && h <= R)) {
    throw std::invalid_argument("cap_integrals: need d >= 1, R > 0 and 0 <= h <= R");
  }
  CapIntegrals out;
  if (d == 1) {
    const double rest = R - h;
    out.volume = R + rest;
    out.integral = (R * R * R + rest * rest * rest) / 3.0;
  } else {
    const double ball = unit_ball_volume<double>(d) * std::pow(R, d);
    const double ball_integral = ball * R * R * d / (d + 2.0);
    double cap_volume = 0.0;
    double cap_integral = 0.0;
    if (h > 0.0) {
      const double base = R - h;
      const double upper = std::acos(base / R);
      const double sphere = 2.0 * std::pow(boost::math::constants::pi<double>(), 0.5 * (d - 1)) /
                            boost::math::tgamma(0.5 * (d - 1));
      auto radial = [&](double t, int power) {
        const double inner = base / std::cos(t);
        return std::pow(std::sin(t), d - 2) * (std::pow(R, power) - std::pow(inner, power)) / power;
      };
      cap_volume = sphere * integrate_checked([&](double t) { return radial(t, d); }, 0.0, upper);
      cap_integral =
          sphere * integrate_checked([&](double t) { return radial(t, d + 2); }, 0.0, upper);
    }
    out.volume = ball - cap_volume;
    out.integral = ball_integral - cap_integral;
  }
  out.rse = out.integral / out.volume;
  return out;
}

SliceSequences cap_slice_sequences(int d, double radius, int slices) {
  if (d < 1 || !(radius > 0.0) || slices < 1) {
    throw std::invalid_argument("cap_slice_sequences: need d >= 1, R > 0, slices >= 1");
  }
  SliceSequences out;
  out.a.assign(static_cast<std::size_t>(slices) + 1, 0.0);
  out.b.assign(static_cast<std::size_t>(slices) + 1, 0.0);
  const double dz = radius / slices;
  const double section = d == 1 ? 1.0 : unit_ball_volume<double>(d - 1);
  for (int j = 1; j <= slices; ++j) {
    const double z = (j - 0.5) * dz;
    const double rho2 = radius * radius - z * z;
    const double vol = section * std::pow(rho2, 0.5 * (d - 1)) * dz;
    // mean |r|^2 over a (d-1)-ball of radius rho at height z
    const double mean_r2 = z * z + (d - 1) * rho2 / (d + 1.0);
    out.b[j] = vol;
    out.a[j] = vol * mean_r2;
    out.a[0] += out.a[j];
    out.b[0] += out.b[j];
  }
  return out;
}

LemmaResult lemma_check(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 3) {
    throw std::invalid_argument("lemma_check: need equal-length sequences with N >= 2");
  }
  const std::size_t n = a.size() - 1;
  for (std::size_t j = 0; j <= n; ++j) {
    if (!(a[j] >= 0.0) || !(b[j] > 0.0)) {
      throw std::invalid_argument("lemma_check: entries must be nonnegative with b_j > 0");
    }
  }
  for (std::size_t j = 2; j <= n; ++j) {
    if (!(a[j] / b[j] > a[j - 1] / b[j - 1])) {
      throw std::invalid_argument("lemma_check: a_j / b_j must increase strictly from j = 1");
    }
  }
  double sa = 0.0, sb = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    sa += a[j];
    sb += b[j];
  }
  const double t0 = a[0] / b[0];
  if (std::abs(t0 - sa / sb) > 1e-12 * std::max(1.0, std::abs(t0))) {
    throw std::invalid_argument("lemma_check: a_0 / b_0 must equal sum(a) / sum(b)");
  }

  std::vector<double> t(n + 1);
  sa = sb = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    sa += a[k];
    sb += b[k];
    t[k] = sa / sb;
  }
  LemmaResult result;
  result.holds = true;
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    result.holds = result.holds && t[k] < t[0];
  }
  const auto best = std::min_element(t.begin(), t.end());
  result.k_star = static_cast<std::size_t>(best - t.begin());
  const auto ties = std::count(t.begin(), t.end(), *best);
  result.holds = result.holds && ties == 1;
  return result;
}

}  // namespace bayesreg
