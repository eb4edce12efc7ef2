#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levytrans/measures.hpp"
#include "levytrans/rng.hpp"

namespace levytrans {

// State-dependent one-sided jump component: probability-normalized power tail
// above eps whose exponent moves between a cold plateau (low states) and a
// warm plateau (high states) with a Lipschitz ramp across the band. weight
// scales the side's (state-independent) intensity.
struct KernelSide {
  double eps = 0.36;
  double alpha_warm = 2.0;
  double alpha_cold = 2.0;
  double weight = 1.0;
};

struct JumpKernel {
  double s_star = -0.8;
  double delta = 0.1;
  std::optional<KernelSide> plus;
  std::optional<KernelSide> minus;

  double intensity() const;
  double alpha_plus(double x) const;   // requires the side to be present
  double alpha_minus(double x) const;

  // State-frozen measure of one side (probability-normalized, scaled by the
  // side weight); used for distance sweeps over the state space.
  MeasureSpec side_measure_plus(double x) const;
  MeasureSpec side_measure_minus(double x) const;
};

struct Drift {
  enum class Kind { Zero, Constant, Linear };
  Kind kind = Kind::Zero;
  double a0 = 0.0;  // Constant: a0; Linear: a0 + a1 * x
  double a1 = 0.0;

  double operator()(double x) const;
  double lipschitz() const { return kind == Kind::Linear ? std::abs(a1) : 0.0; }
};

struct JumpDiffusionSpec {
  double x0 = 0.0;
  Drift drift;
  JumpKernel kernel;
};

JumpDiffusionSpec validated(JumpDiffusionSpec spec);
JumpDiffusionSpec sde_from_json(const nlohmann::json& j);
nlohmann::json sde_to_json(const JumpDiffusionSpec& spec);

// Jump marks shared between coupled paths: event time, side, and the uniform
// that the driven spec turns into a magnitude through its own inverse CDF.
struct JumpMark {
  double time = 0.0;
  bool positive_side = true;
  double u = 1.0;  // in (0, 1]
};

struct MarkStream {
  double horizon = 0.0;
  double total_intensity = 0.0;
  double weight_plus = 0.0;
  std::vector<JumpMark> marks;
};

// Draws the Poisson mark stream for the given side structure on [0, horizon].
MarkStream draw_marks(double weight_plus, double weight_minus, double horizon,
                      RngStream& rng);

struct Path {
  std::vector<double> time;
  std::vector<double> value;
  std::vector<std::uint8_t> jump_flag;
  std::size_t jump_count = 0;
};

// Event-driven simulation: exponential waits at the state-independent total
// intensity, explicit midpoint drift stepping at resolution dt between
// events, inverse-CDF magnitudes at the pre-jump state. Throws NumericError
// if |X| exceeds the overflow guard.
Path simulate(const JumpDiffusionSpec& spec, double horizon, double dt, RngStream& rng);

// Deterministic replay: the same marks always rebuild the same path.
Path simulate_with_marks(const JumpDiffusionSpec& spec, double horizon, double dt,
                         const MarkStream& marks);

struct CoupledRun {
  Path first;
  Path second;
  double sup_rho = 0.0;  // max over the shared grid of min(|X1-X2|, 1)
};

// Synchronous coupling: one mark stream drives both specs. The side structure
// (weights) must match; differing structures cannot share marks.
CoupledRun simulate_coupled(const JumpDiffusionSpec& a, const JumpDiffusionSpec& b,
                            double horizon, double dt, RngStream& rng);

std::string path_csv(const Path& path);

// ---------------------------------------------------------------------------
// Perturbation bounds: Delta aggregates the spec gaps; the estimate scales
// with G(Delta) = max(sqrt(Delta), Delta) up to an absolute constant.
// ---------------------------------------------------------------------------

double g_of(double x);

struct BoundReport {
  double delta = 0.0;
  double g_of_delta = 0.0;
  std::string order;  // "T1" or "T2"
  nlohmann::json components;
};

nlohmann::json bound_to_json(const BoundReport& r);

// First-order bound ingredient: initial gap plus the sup over states of the
// order-1 distance between the two kernels. The sup is evaluated on both
// plateaus (exact there) and a grid across the interpolation bands.
BoundReport bound_t1(const JumpDiffusionSpec& a, const JumpDiffusionSpec& b,
                     double x1, double x2, std::size_t band_points = 9);

// Second-order bound ingredients are supplied as sup-norm gaps by the caller;
// each missing ingredient is reported by name.
struct T2BoundInputs {
  std::optional<double> initial_gap;        // rho(x1, x2)
  std::optional<double> drift_gap;          // sup |a1 - a2|
  std::optional<double> big_jump_mass_gap;  // sup |abar1 - abar2|
  std::optional<double> diffusion_gap;      // sup |b1 - b2|
  std::optional<double> sup_t2;             // sup T2 of the kernels
};

BoundReport bound_t2(const T2BoundInputs& in);

// Mass of jumps of size above 1 (both sides); the "abar" ingredient of the
// second-order bound, evaluable on a state grid for representable kernels.
double big_jump_mass(const MeasureSpec& m);

}  // namespace levytrans
