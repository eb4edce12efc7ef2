#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levytrans/measures.hpp"

namespace levytrans {

// Truncated ground metric |x - y| ^ 1 (capped at one).
inline double rho(double x, double y) {
  const double d = std::abs(x - y);
  return d < 1.0 ? d : 1.0;
}

struct DistanceResult {
  double value = 0.0;
  double order = 1.0;          // p of the underlying L^p integral
  std::string method;          // "closed_form" or "quadrature"
  double err_estimate = 0.0;   // absolute error bound for the integral itself
  bool normalized = false;     // true once scaled by the jump threshold
};

nlohmann::json distance_to_json(const DistanceResult& r);

// T_p between two transports: the p-th root of
//   integral rho(c1(v), c2(v))^p dv / v^2
// over the whole line. Segments are cut at every breakpoint of either
// transport plus the points where |c1 - c2| crosses 0 or 1; the unbounded
// tail is mapped to a finite interval by v -> 1/v, never integrated to
// infinity directly. Throws NumericError when the integral diverges (the
// measures are not comparable at this order).
DistanceResult tp_quadrature(const TransportFunction& c1, const TransportFunction& c2,
                             double p, double tol = 1e-10);

// Clamped split points of one empirical piece against the power branch:
// where the branch passes level-1 distance below, equality, and level-1
// distance above the piece value, clamped into [lower, upper].
struct KappaBreakpoints {
  double lower = 0.0;
  double upper = 0.0;
  double minus = 0.0;  // branch reaches value - 1 (0 floor)
  double zero = 0.0;   // branch reaches value
  double plus = 0.0;   // branch reaches value + 1
};

KappaBreakpoints kappa_breakpoints(double value, double alpha, double lambda,
                                   double lower, double upper);

// Exact T_1 between the empirical measure of the sample and the one-sided
// power tail, via per-interval antiderivatives. Requires alpha away from 1
// (log antiderivative case goes through the quadrature path) and a transport
// breakpoint alpha eps^alpha / lambda <= 1; lambda defaults to the
// probability normalization alpha eps^alpha.
DistanceResult t1_empirical_vs_pareto(const std::vector<double>& sample, double eps,
                                      double alpha,
                                      std::optional<double> lambda = std::nullopt);

// Exact T_1 between two-sided power laws sharing lambdas; exponents enter
// per side. Truncation of the ground metric at 1 is handled by splitting at
// the level crossings, so the result agrees with the quadrature oracle.
DistanceResult t1_pareto_pair(const TwoSidedPowerLaw& a, const TwoSidedPowerLaw& b);

// Upper-bound variant that drops the cap of the ground metric:
// lam+ |a1/(a1-1) - a2/(a2-1)| plus the mirrored term. Always >= the true T_1.
double t1_pareto_pair_untruncated(const TwoSidedPowerLaw& a, const TwoSidedPowerLaw& b);

// Closed-form T_1 for transports whose sides are each empty or one power
// piece (covers power tails of any parameterization). Empty optional when a
// side has a shape the closed form does not cover.
std::optional<DistanceResult> try_closed_form_t1(const TransportFunction& c1,
                                                 const TransportFunction& c2);

// T_2 between infinite-activity exponential-tail measures via numeric tail
// inversion plus quadrature.
DistanceResult t2_gamma_pair(const GammaTail& a, const GammaTail& b, double tol = 1e-10);

// Scales an order-1 distance by the jump threshold; with both measures
// supported outside (-eps, eps) the result lies in [0, 1].
DistanceResult normalize(DistanceResult d, double eps);

// Best available method for the pair: closed form when one applies (and
// force_quadrature is off), else the quadrature oracle.
DistanceResult distance_auto(const MeasureSpec& a, const MeasureSpec& b, double p,
                             double tol = 1e-10, bool force_quadrature = false);

}  // namespace levytrans
