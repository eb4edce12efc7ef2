#include "levytrans/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "levytrans/errors.hpp"

namespace levytrans {

double pareto_quantile(double alpha, double eps, double u) {
  if (!(alpha > 0.0) || !(eps > 0.0)) {
    throw ValidationError("pareto quantile needs positive alpha and eps");
  }
  if (!(u > 0.0) || u > 1.0) {
    throw ValidationError("quantile argument must lie in (0, 1]");
  }
  return eps * std::pow(u, -1.0 / alpha);
}

std::vector<double> sample_pareto(double alpha, double eps, std::size_t n, RngStream& rng) {
  if (n == 0) throw ValidationError("sample size must be positive");
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(pareto_quantile(alpha, eps, rng.next_uniform_open_closed()));
  }
  return out;
}

Empirical empirical_from_sample(std::vector<double> sample, double eps) {
  if (sample.empty()) throw ValidationError("cannot build an empirical measure from an empty sample");
  if (!(eps > 0.0)) throw ValidationError("threshold eps must be positive");
  for (double x : sample) {
    if (!std::isfinite(x) || x < eps) {
      throw ValidationError("sample entries must be finite and >= eps");
    }
  }
  Empirical e;
  e.sample = std::move(sample);
  e.eps = eps;
  std::sort(e.sample.begin(), e.sample.end());
  return e;
}

double ks_statistic_pareto(std::vector<double> sample, double alpha, double eps) {
  if (sample.empty()) throw ValidationError("KS statistic needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = 1.0 - std::pow(eps / sample[i], alpha);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    stat = std::max(stat, std::max(cdf - lo, hi - cdf));
  }
  return stat;
}

double ks_critical_value(std::size_t n, double level) {
  if (n == 0) throw ValidationError("KS critical value needs a positive sample size");
  if (!(level > 0.0) || !(level < 1.0)) {
    throw ValidationError("significance level must lie in (0, 1)");
  }
  return std::sqrt(-0.5 * std::log(level / 2.0) / static_cast<double>(n));
}

}  // namespace levytrans
