#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace levytrans {

// ---------------------------------------------------------------------------
// Measure specifications.
//
// Every measure here is a Levy measure on R \ {0} represented, for distance
// purposes, by its transportation function against the Cauchy-type reference
// measure dv / v^2. Tails are the one-sided masses
//   tail_plus(u)  = mass of (u, +inf),   u > 0,
//   tail_minus(u) = mass of (-inf, -u),  u > 0.
// ---------------------------------------------------------------------------

// One-sided power tail supported on (eps, +inf) with density lambda / v^(a+1).
// tail_plus(u) = lambda * u^-alpha / alpha for u >= eps. The default lambda
// alpha * eps^alpha gives the measure total mass one.
struct ParetoTail {
  double alpha = 2.0;
  double eps = 1.0;
  double lambda = 2.0;
};

double pareto_probability_lambda(double alpha, double eps);
ParetoTail make_pareto(double alpha, double eps);
ParetoTail make_pareto(double alpha, double eps, double lambda);

// Two-sided power law defined as the pushforward of the transports
//   c(y) = -(|y| lam-)^(1/a-) for y <= -1/lam-,
//   c(y) = +(y lam+)^(1/a+)   for y >= +1/lam+,
// so tail_plus(u) = lam+ * max(u,1)^-a+ and symmetrically on the left.
// A zero lambda switches the corresponding side off.
struct TwoSidedPowerLaw {
  double alpha_plus = 2.0;
  double alpha_minus = 2.0;
  double lambda_plus = 1.0;
  double lambda_minus = 1.0;
};

// Infinite-activity one-sided measure with density gamma * exp(-lambda v) / v
// on (0, +inf); tail_plus(u) = gamma * E1(lambda u).
struct GammaTail {
  double gamma = 1.0;
  double lambda = 1.0;
};

// Empirical measure with mass 1/n at each (positive) sample point. eps records
// the threshold the sample was collected above; used for normalization.
struct Empirical {
  std::vector<double> sample;  // sorted ascending on validation
  double eps = 0.0;
};

// Measure given directly through its tail functions. A null side has no mass.
// Instances built from a (u, tail) table keep the table so they can be
// serialized back; code-supplied functions cannot round-trip through JSON.
struct GenericTail {
  std::function<double(double)> tail_plus;
  std::function<double(double)> tail_minus;
  double inversion_tol = 1e-12;
  std::vector<std::pair<double, double>> table_plus;
  std::vector<std::pair<double, double>> table_minus;
};

using MeasureSpec =
    std::variant<ParetoTail, TwoSidedPowerLaw, GammaTail, Empirical, GenericTail>;

// Throws ValidationError on parameter-domain violations; returns the spec with
// derived cleanups applied (empirical samples sorted).
MeasureSpec validated(MeasureSpec spec);

double tail_plus(const MeasureSpec& spec, double u);
double tail_minus(const MeasureSpec& spec, double u);

// Largest g >= 0 such that the measure puts no mass on (-g, g) \ {0}.
// Conservatively 0 for kinds whose support near 0 is not structurally known.
double support_gap(const MeasureSpec& spec);

// ---------------------------------------------------------------------------
// Transportation functions.
//
// A transport c is nondecreasing and sign-preserving; the measure it
// represents is the pushforward of dv/v^2 under c. Each side is stored as a
// sorted list of pieces over |v|; the transport is 0 below the first piece.
// Positive side right-continuous, negative side (after mirroring)
// left-continuous.
// ---------------------------------------------------------------------------

struct TransportPiece {
  enum class Kind { Constant, Power, Numeric };
  Kind kind = Kind::Constant;
  double lo = 0.0;     // piece covers [lo, lo of next piece)
  double value = 0.0;  // Constant: c(v) = value
  double coeff = 0.0;  // Power: c(v) = coeff * v^expo
  double expo = 0.0;
  std::function<double(double)> eval;  // Numeric: nondecreasing in v
};

class OneSidedTransport {
 public:
  OneSidedTransport() = default;
  explicit OneSidedTransport(std::vector<TransportPiece> pieces);

  // c(v) for v >= 0 in this side's own coordinates (always >= 0).
  double operator()(double v) const;

  // inf{ v >= 0 : c(v) > u } for u > 0; +inf if the level is never exceeded.
  // The reference-measure mass of {c > u} is 1 / upper_level_entry(u).
  double upper_level_entry(double u) const;

  bool trivial() const { return pieces_.empty(); }
  const std::vector<TransportPiece>& pieces() const { return pieces_; }

  // Piece starting points strictly above 0, ascending.
  std::vector<double> breakpoints() const;

 private:
  std::vector<TransportPiece> pieces_;
};

class TransportFunction {
 public:
  TransportFunction() = default;
  TransportFunction(OneSidedTransport positive, OneSidedTransport negative)
      : pos_(std::move(positive)), neg_(std::move(negative)) {}

  // Full-line evaluation; negative axis mirrors the stored branch.
  double operator()(double v) const;

  const OneSidedTransport& positive() const { return pos_; }
  const OneSidedTransport& negative() const { return neg_; }

  // Reference mass of {v : c(v) > u} (resp. {v : c(v) < -u}), u > 0. Equals
  // the represented measure's tails by the pushforward identity.
  double pushforward_tail_plus(double u) const;
  double pushforward_tail_minus(double u) const;

 private:
  OneSidedTransport pos_;
  OneSidedTransport neg_;
};

// Transport of the one-sided power tail: 0 below alpha eps^alpha / lambda,
// then (lambda v / alpha)^(1/alpha).
TransportFunction transport_pareto(double alpha, double eps, double lambda);
TransportFunction transport_pareto(const ParetoTail& spec);

// Transport of the empirical measure of n points: 0 on [0, 1), the i-th order
// statistic on [n/(n-i+1), n/(n-i)), the largest point from n on.
TransportFunction transport_empirical(std::vector<double> sample);
TransportFunction transport_empirical(const Empirical& spec);

// Pointwise generalized inverse: smallest u >= 0 with tail(u) <= 1/v, located
// by bracket doubling plus bisection to absolute tolerance tol.
double transport_from_tail(const std::function<double(double)>& tail, double v,
                           double tol = 1e-12);

// One-sided transport backed by numeric tail inversion. total_mass bounds the
// zero region (breakpoint at 1/total_mass); +inf means mass reaches the
// origin and the piece starts at 0.
OneSidedTransport numeric_transport(std::function<double(double)> tail,
                                    double total_mass, double tol = 1e-12);

TransportFunction two_sided_transport(const TwoSidedPowerLaw& spec);

// Dispatch on the spec kind.
TransportFunction transport(const MeasureSpec& spec);

// ---------------------------------------------------------------------------
// JSON round trip. Kinds: "pareto", "two_sided", "gamma", "empirical", "tail".
// ---------------------------------------------------------------------------
MeasureSpec measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const MeasureSpec& spec);

std::string kind_name(const MeasureSpec& spec);

}  // namespace levytrans
