#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace levytrans {

// Regime split of a scalar series around a threshold state: warm above
// s_star, cold otherwise, with one-sided jump thresholds for the increments.
struct RegimeConfig {
  double s_star = -0.8;
  double delta = 0.1;
  double eps_plus = 0.36;
  double eps_minus = 0.34;
  // Drop increments whose pre-jump state lies within delta of s_star, where
  // the kernel interpolates between the plateaus.
  bool exclude_band = false;
};

enum class Regime { Warm = 0, Cold = 1 };
enum class JumpSign { Positive = 0, Negative = 1 };

const char* regime_name(Regime r);
const char* sign_name(JumpSign s);

// Jump magnitudes per (regime of the pre-state, increment sign). Negative
// jumps are stored as magnitudes |d|.
struct JumpCells {
  std::array<std::array<std::vector<double>, 2>, 2> cells;  // [regime][sign]

  std::vector<double>& at(Regime r, JumpSign s) {
    return cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
  }
  const std::vector<double>& at(Regime r, JumpSign s) const {
    return cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
  }
};

// Splits consecutive increments d_t = x_{t+1} - x_t by the regime of x_t and
// the sign of d_t; increments within [-eps_minus, eps_plus] are treated as
// continuous motion and discarded.
JumpCells extract_jumps(const std::vector<double>& series, const RegimeConfig& cfg);

struct FitGrid {
  double lo = 2.0;
  double hi = 6.0;
  double step = 0.1;
};

struct FitReport {
  double alpha_hat = 0.0;
  double min_objective = 0.0;  // normalized distance at the minimizer
  std::size_t n = 0;
  double eps = 0.0;
  std::vector<double> grid;
  std::vector<double> objective;  // normalized distance per grid point
};

// Minimizes the normalized distance between the empirical measure of the
// sample and the probability-normalized power tail over the exponent grid.
// Ties resolve to the smallest exponent. Entries at or below eps are the
// caller's responsibility to threshold away beforehand.
FitReport fit_alpha(const std::vector<double>& sample, double eps, const FitGrid& grid);

// Sample-size weighted average of fitted exponents.
double weighted_exponent(const std::vector<std::pair<double, std::size_t>>& fits);

nlohmann::json fit_to_json(const FitReport& report);
std::string fit_curve_csv(const FitReport& report);

}  // namespace levytrans
