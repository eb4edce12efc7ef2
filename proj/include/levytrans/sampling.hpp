#pragma once

#include <cstddef>
#include <vector>

#include "levytrans/measures.hpp"
#include "levytrans/rng.hpp"

namespace levytrans {

// Inverse-CDF quantile of the normalized power tail: eps * u^(-1/alpha) for
// u in (0, 1]; u = 1 hits the support edge eps exactly.
double pareto_quantile(double alpha, double eps, double u);

// n independent draws from the normalized power tail above eps.
std::vector<double> sample_pareto(double alpha, double eps, std::size_t n, RngStream& rng);

// Wraps a raw sample as an empirical measure collected above the threshold.
// Rejects empty samples and entries below eps.
Empirical empirical_from_sample(std::vector<double> sample, double eps);

// Two-sided Kolmogorov-Smirnov statistic of a sample against the power-tail
// CDF 1 - (eps/x)^alpha.
double ks_statistic_pareto(std::vector<double> sample, double alpha, double eps);

// Asymptotic two-sided critical value at the given significance level.
// Valid for moderate n (n >= 35 or so).
double ks_critical_value(std::size_t n, double level);

}  // namespace levytrans
