#include "levytrans/timeseries.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levytrans/csv.hpp"
#include "levytrans/distance.hpp"
#include "levytrans/errors.hpp"

namespace levytrans {

const char* regime_name(Regime r) { return r == Regime::Warm ? "warm" : "cold"; }
const char* sign_name(JumpSign s) { return s == JumpSign::Positive ? "pos" : "neg"; }

JumpCells extract_jumps(const std::vector<double>& series, const RegimeConfig& cfg) {
  if (series.size() < 2) {
    throw ValidationError("series needs at least two observations to form increments");
  }
  if (!(cfg.eps_plus > 0.0) || !(cfg.eps_minus > 0.0)) {
    throw ValidationError("jump thresholds must be positive");
  }
  if (!(cfg.delta >= 0.0)) throw ValidationError("band half-width must be nonnegative");
  JumpCells out;
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const double x = series[t];
    const double d = series[t + 1] - x;
    if (!std::isfinite(x) || !std::isfinite(d)) {
      throw ValidationError("series entry " + std::to_string(t) + " is not finite");
    }
    if (cfg.exclude_band && std::abs(x - cfg.s_star) <= cfg.delta) continue;
    const Regime regime = (x > cfg.s_star) ? Regime::Warm : Regime::Cold;
    if (d > cfg.eps_plus) {
      out.at(regime, JumpSign::Positive).push_back(d);
    } else if (d < -cfg.eps_minus) {
      out.at(regime, JumpSign::Negative).push_back(-d);
    }
  }
  return out;
}

FitReport fit_alpha(const std::vector<double>& sample, double eps, const FitGrid& grid) {
  if (sample.empty()) {
    throw ValidationError("empty jump cell: nothing to fit");
  }
  if (!(eps > 0.0)) throw ValidationError("threshold eps must be positive");
  for (double x : sample) {
    if (!(x > eps)) {
      throw ValidationError("sample entries must exceed eps; threshold the data first");
    }
  }
  if (!(grid.lo > 0.0) || !(grid.step > 0.0) || !(grid.hi >= grid.lo)) {
    throw ValidationError("fit grid needs 0 < lo <= hi and step > 0");
  }

  FitReport report;
  report.n = sample.size();
  report.eps = eps;
  const auto count = static_cast<std::size_t>(
      std::floor((grid.hi - grid.lo) / grid.step + 0.5));
  report.grid.reserve(count + 1);
  report.objective.reserve(count + 1);

  double best = std::numeric_limits<double>::infinity();
  double best_alpha = grid.lo;
  for (std::size_t k = 0; k <= count; ++k) {
    const double alpha = grid.lo + static_cast<double>(k) * grid.step;
    DistanceResult d;
    if (std::abs(alpha - 1.0) < 1e-6) {
      d = tp_quadrature(transport_empirical(sample),
                        transport_pareto(alpha, eps, pareto_probability_lambda(alpha, eps)),
                        1.0, 1e-9);
    } else {
      d = t1_empirical_vs_pareto(sample, eps, alpha);
    }
    const double value = normalize(d, eps).value;
    report.grid.push_back(alpha);
    report.objective.push_back(value);
    if (value < best) {  // ties keep the smallest exponent
      best = value;
      best_alpha = alpha;
    }
  }
  report.alpha_hat = best_alpha;
  report.min_objective = best;
  return report;
}

double weighted_exponent(const std::vector<std::pair<double, std::size_t>>& fits) {
  if (fits.empty()) throw ValidationError("weighted exponent needs at least one fit");
  double num = 0.0;
  double den = 0.0;
  for (const auto& [alpha, n] : fits) {
    num += alpha * static_cast<double>(n);
    den += static_cast<double>(n);
  }
  if (!(den > 0.0)) throw ValidationError("weighted exponent needs a positive total sample size");
  return num / den;
}

nlohmann::json fit_to_json(const FitReport& report) {
  return {{"alpha_hat", report.alpha_hat},
          {"min_objective", report.min_objective},
          {"n", report.n},
          {"eps", report.eps},
          {"grid", report.grid},
          {"objective", report.objective}};
}

std::string fit_curve_csv(const FitReport& report) {
  std::ostringstream out;
  out << "alpha,normalized_t1\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    out << format_double(report.grid[i]) << ',' << format_double(report.objective[i]) << '\n';
  }
  return out.str();
}

}  // namespace levytrans
