#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "botwatch/cdfa.hpp"
#include "botwatch/util.hpp"

namespace botwatch::cdfa {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Sufficient statistics of one mixture component.
struct ClusterStats {
  int n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void remove(double x) {
    --n;
    sum -= x;
    sum_sq -= x * x;
  }
};

// Normal-Inverse-Gamma conjugate prior for a 1-D Gaussian with unknown mean
// and variance. With a0 = 1 the posterior Student-t degrees of freedom are
// the integer 2 + n, so the lgamma values can be tabulated once per fit.
struct NigPrior {
  double mu0 = 0.0;
  double kappa0 = 1.0;
  double a0 = 1.0;
  double b0 = 1.0;
};

class PredictiveTable {
 public:
  PredictiveTable(const NigPrior& prior, int max_n) : prior_(prior) {
    // lgamma_half_[i] = lgamma(i / 2); needed up to (2a0 + max_n + 1) / 2.
    lgamma_half_.resize(2 * max_n + 8);
    for (std::size_t i = 1; i < lgamma_half_.size(); ++i) {
      lgamma_half_[i] = std::lgamma(static_cast<double>(i) / 2.0);
    }
  }

  // Log posterior-predictive density of x under a component with the given
  // sufficient statistics (n may be zero: prior predictive).
  double log_predictive(double x, const ClusterStats& s) const {
    const double n = s.n;
    const double kappa_n = prior_.kappa0 + n;
    const double mean = s.n > 0 ? s.sum / n : 0.0;
    const double mu_n = (prior_.kappa0 * prior_.mu0 + s.sum) / kappa_n;
    double ss = s.sum_sq - n * mean * mean;  // within-component scatter
    if (ss < 0) ss = 0;                      // cancellation guard
    const double a_n = prior_.a0 + n / 2.0;
    const double b_n = prior_.b0 + 0.5 * ss +
                       prior_.kappa0 * n * (mean - prior_.mu0) *
                           (mean - prior_.mu0) / (2.0 * kappa_n);
    const double nu = 2.0 * a_n;                          // = 2a0 + n
    const double scale_sq = b_n * (kappa_n + 1.0) / (a_n * kappa_n);
    const int nu_i = static_cast<int>(std::lround(nu));   // exact: a0 = 1
    const double log_norm =
        lgamma_half_[nu_i + 1] - lgamma_half_[nu_i] -
        0.5 * std::log(nu * kPi * scale_sq);
    const double z = (x - mu_n) * (x - mu_n) / (nu * scale_sq);
    return log_norm - 0.5 * (nu + 1.0) * std::log1p(z);
  }

 private:
  NigPrior prior_;
  std::vector<double> lgamma_half_;
};

}  // namespace

std::vector<int> dpgmm_cluster(const std::vector<double>& values,
                               std::uint64_t seed, const DpgmmParams& params) {
  if (values.empty()) throw std::invalid_argument("no values to cluster");
  if (params.max_components < 1) {
    throw std::invalid_argument("max_components must be at least 1");
  }
  const std::size_t m = values.size();
  const int K = params.max_components;

  // Degenerate data needs no sampling (and would break the base measure).
  const bool all_equal =
      std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); });
  if (all_equal || K == 1) return std::vector<int>(m, 0);

  // Base measure centered on the data.
  const double data_mean =
      std::accumulate(values.begin(), values.end(), 0.0) / double(m);
  double data_var = 0.0;
  for (double v : values) data_var += (v - data_mean) * (v - data_mean);
  data_var /= double(m);
  NigPrior prior;
  prior.mu0 = data_mean;
  prior.kappa0 = 1.0;
  prior.a0 = 1.0;
  prior.b0 = std::max(data_var, 1e-6);

  PredictiveTable predictive(prior, static_cast<int>(m));
  Rng rng(mix_seed(seed, "dpgmm"));

  std::vector<int> assignment(m);
  std::vector<ClusterStats> clusters(K);
  for (std::size_t i = 0; i < m; ++i) {
    assignment[i] = static_cast<int>(rng.below(K));
    clusters[assignment[i]].add(values[i]);
  }

  const double prior_weight = params.alpha / K;
  std::vector<double> log_prob(K);
  for (int sweep = 0; sweep < params.sweeps; ++sweep) {
    for (std::size_t i = 0; i < m; ++i) {
      const double x = values[i];
      clusters[assignment[i]].remove(x);

      double best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < K; ++k) {
        log_prob[k] = std::log(clusters[k].n + prior_weight) +
                      predictive.log_predictive(x, clusters[k]);
        best = std::max(best, log_prob[k]);
      }
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        log_prob[k] = std::exp(log_prob[k] - best);
        total += log_prob[k];
      }
      double u = rng.next_unit() * total;
      int chosen = K - 1;
      for (int k = 0; k < K; ++k) {
        u -= log_prob[k];
        if (u < 0) {
          chosen = k;
          break;
        }
      }
      assignment[i] = chosen;
      clusters[chosen].add(x);
    }
  }
  return assignment;
}

MacSummary mac_cdfa(const std::vector<double>& values, std::uint64_t seed,
                    const DpgmmParams& params) {
  const std::size_t m = values.size();
  if (m < 5) {
    throw std::invalid_argument("mac_cdfa needs at least 5 distances");
  }
  const std::vector<int> assignment = dpgmm_cluster(values, seed, params);

  const int K = params.max_components;
  std::vector<int> size(K, 0);
  std::vector<double> sum(K, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    size[assignment[i]]++;
    sum[assignment[i]] += values[i];
  }
  std::vector<double> mean(K, 0.0);
  std::vector<double> variance(K, 0.0);
  for (int k = 0; k < K; ++k) {
    if (size[k] > 0) mean[k] = sum[k] / size[k];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const int k = assignment[i];
    variance[k] += (values[i] - mean[k]) * (values[i] - mean[k]);
  }
  for (int k = 0; k < K; ++k) {
    if (size[k] > 0) variance[k] /= size[k];
  }

  // A cluster qualifies when size ≥ m/5, compared exactly as 5·size ≥ m.
  MacSummary summary;
  int mac = -1;
  for (int k = 0; k < K; ++k) {
    if (size[k] == 0) continue;
    if (static_cast<std::size_t>(size[k]) * 5 >= m) {
      summary.qualified_count++;
      if (mac < 0 || mean[k] < mean[mac]) mac = k;
    }
  }
  if (mac < 0) {
    // Unreachable when ≤ K clusters partition m points (the largest is
    // always ≥ m/K ≥ m/5), but kept so a future K change cannot crash.
    for (int k = 0; k < K; ++k) {
      if (size[k] > 0 && (mac < 0 || size[k] > size[mac])) mac = k;
    }
    summary.qualified_count = 1;
  }
  summary.mean = mean[mac];
  summary.variance = variance[mac];
  return summary;
}

}  // namespace botwatch::cdfa
