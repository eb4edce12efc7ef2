#include "levytrans/jumpsde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levytrans/csv.hpp"
#include "levytrans/distance.hpp"
#include "levytrans/errors.hpp"
#include "levytrans/sampling.hpp"

namespace levytrans {

namespace {

constexpr double kOverflowGuard = 1e12;

double interp_alpha(double x, double s_star, double delta, double warm, double cold) {
  if (x >= s_star + delta) return warm;
  if (x <= s_star - delta) return cold;
  const double w = (x - (s_star - delta)) / (2.0 * delta);
  return cold + w * (warm - cold);
}

void check_side(const std::optional<KernelSide>& side, const char* name) {
  if (!side) return;
  if (!(side->eps > 0.0)) {
    throw ValidationError(std::string(name) + " side: eps must be positive");
  }
  if (!(side->alpha_warm >= 2.0) || !(side->alpha_cold >= 2.0)) {
    throw ValidationError(std::string(name) + " side: alpha plateaus must be >= 2");
  }
  if (!(side->weight >= 0.0) || !std::isfinite(side->weight)) {
    throw ValidationError(std::string(name) + " side: weight must be finite and >= 0");
  }
}

double side_weight(const std::optional<KernelSide>& side) {
  return side ? side->weight : 0.0;
}

}  // namespace

double JumpKernel::intensity() const {
  return side_weight(plus) + side_weight(minus);
}

double JumpKernel::alpha_plus(double x) const {
  if (!plus) throw ValidationError("kernel has no positive side");
  return interp_alpha(x, s_star, delta, plus->alpha_warm, plus->alpha_cold);
}

double JumpKernel::alpha_minus(double x) const {
  if (!minus) throw ValidationError("kernel has no negative side");
  return interp_alpha(x, s_star, delta, minus->alpha_warm, minus->alpha_cold);
}

MeasureSpec JumpKernel::side_measure_plus(double x) const {
  if (!plus) throw ValidationError("kernel has no positive side");
  const double a = alpha_plus(x);
  return ParetoTail{a, plus->eps, plus->weight * pareto_probability_lambda(a, plus->eps)};
}

MeasureSpec JumpKernel::side_measure_minus(double x) const {
  if (!minus) throw ValidationError("kernel has no negative side");
  const double a = alpha_minus(x);
  return ParetoTail{a, minus->eps, minus->weight * pareto_probability_lambda(a, minus->eps)};
}

double Drift::operator()(double x) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return a0;
    case Kind::Linear:
      return a0 + a1 * x;
  }
  return 0.0;
}

JumpDiffusionSpec validated(JumpDiffusionSpec spec) {
  if (!std::isfinite(spec.x0)) throw ValidationError("x0 must be finite");
  if (!(spec.kernel.delta > 0.0)) throw ValidationError("kernel band half-width must be positive");
  if (!std::isfinite(spec.kernel.s_star)) throw ValidationError("threshold state must be finite");
  check_side(spec.kernel.plus, "plus");
  check_side(spec.kernel.minus, "minus");
  if (!(spec.kernel.intensity() > 0.0)) {
    throw ValidationError("kernel needs at least one side with positive weight");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

MarkStream draw_marks(double weight_plus, double weight_minus, double horizon,
                      RngStream& rng) {
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  const double total = weight_plus + weight_minus;
  if (!(total > 0.0)) throw ValidationError("total jump intensity must be positive");
  MarkStream out;
  out.horizon = horizon;
  out.total_intensity = total;
  out.weight_plus = weight_plus;
  double t = 0.0;
  while (true) {
    t += rng.next_exponential(total);
    const double u_side = rng.next_uniform_closed_open();
    const double u_mag = rng.next_uniform_open_closed();
    if (t > horizon) break;
    out.marks.push_back(JumpMark{t, u_side < weight_plus / total, u_mag});
  }
  return out;
}

namespace {

struct PathBuilder {
  Path path;
  double dt;
  const Drift* drift;

  void record(double t, double x, bool jumped) {
    path.time.push_back(t);
    path.value.push_back(x);
    path.jump_flag.push_back(jumped ? 1 : 0);
    if (jumped) ++path.jump_count;
    if (std::abs(x) > kOverflowGuard) {
      throw NumericError("state exceeded the overflow guard at t=" + format_double(t));
    }
  }

  // Explicit midpoint stepping of dX = a(X) dt from t_from to t_to.
  void march(double t_from, double t_to, double& x) {
    if (!(t_to > t_from)) return;
    const double span = t_to - t_from;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt)));
    const double h = span / static_cast<double>(steps);
    for (std::size_t k = 1; k <= steps; ++k) {
      const double a0 = (*drift)(x);
      x += h * (*drift)(x + 0.5 * h * a0);
      record(t_from + static_cast<double>(k) * h, x, false);
    }
  }
};

}  // namespace

Path simulate_with_marks(const JumpDiffusionSpec& spec_in, double horizon, double dt,
                         const MarkStream& marks) {
  const JumpDiffusionSpec spec = validated(spec_in);
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(dt > 0.0)) throw ValidationError("drift step must be positive");

  PathBuilder b;
  b.dt = dt;
  b.drift = &spec.drift;
  b.path.time.reserve(marks.marks.size() + static_cast<std::size_t>(horizon / dt) + 2);

  double x = spec.x0;
  double t = 0.0;
  b.record(0.0, x, false);
  for (const JumpMark& m : marks.marks) {
    if (m.time > horizon) break;
    b.march(t, m.time, x);
    const double size =
        m.positive_side
            ? pareto_quantile(spec.kernel.alpha_plus(x), spec.kernel.plus->eps, m.u)
            : -pareto_quantile(spec.kernel.alpha_minus(x), spec.kernel.minus->eps, m.u);
    x += size;
    b.record(m.time, x, true);
    t = m.time;
  }
  b.march(t, horizon, x);
  return std::move(b.path);
}

Path simulate(const JumpDiffusionSpec& spec, double horizon, double dt, RngStream& rng) {
  const JumpDiffusionSpec s = validated(spec);
  const MarkStream marks = draw_marks(side_weight(s.kernel.plus),
                                      side_weight(s.kernel.minus), horizon, rng);
  return simulate_with_marks(s, horizon, dt, marks);
}

CoupledRun simulate_coupled(const JumpDiffusionSpec& a, const JumpDiffusionSpec& b,
                            double horizon, double dt, RngStream& rng) {
  const JumpDiffusionSpec sa = validated(a);
  const JumpDiffusionSpec sb = validated(b);
  const double wpa = side_weight(sa.kernel.plus), wma = side_weight(sa.kernel.minus);
  const double wpb = side_weight(sb.kernel.plus), wmb = side_weight(sb.kernel.minus);
  if (std::abs(wpa - wpb) > 1e-12 || std::abs(wma - wmb) > 1e-12) {
    throw ValidationError(
        "coupling incompatibility: the side structures (weights) differ, so the "
        "specs cannot share one mark stream");
  }
  const MarkStream marks = draw_marks(wpa, wma, horizon, rng);
  CoupledRun run;
  run.first = simulate_with_marks(sa, horizon, dt, marks);
  run.second = simulate_with_marks(sb, horizon, dt, marks);
  if (run.first.time.size() != run.second.time.size()) {
    throw NumericError("coupled paths disagree on the shared grid");
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < run.first.time.size(); ++i) {
    sup = std::max(sup, rho(run.first.value[i], run.second.value[i]));
  }
  run.sup_rho = sup;
  return run;
}

std::string path_csv(const Path& path) {
  std::string out = "time,value,jump_flag\n";
  for (std::size_t i = 0; i < path.time.size(); ++i) {
    out += format_double(path.time[i]);
    out += ',';
    out += format_double(path.value[i]);
    out += ',';
    out += path.jump_flag[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

double g_of(double x) {
  if (!(x >= 0.0)) throw ValidationError("bound argument must be nonnegative");
  return std::max(std::sqrt(x), x);
}

namespace {

TransportFunction kernel_transport(const JumpKernel& k, double x) {
  OneSidedTransport pos, neg;
  if (k.plus && k.plus->weight > 0.0) {
    pos = transport(k.side_measure_plus(x)).positive();
  }
  if (k.minus && k.minus->weight > 0.0) {
    neg = transport(k.side_measure_minus(x)).positive();
  }
  return TransportFunction(std::move(pos), std::move(neg));
}

double kernel_t1_at(const JumpKernel& ka, const JumpKernel& kb, double x) {
  const TransportFunction ca = kernel_transport(ka, x);
  const TransportFunction cb = kernel_transport(kb, x);
  if (auto closed = try_closed_form_t1(ca, cb)) return closed->value;
  return tp_quadrature(ca, cb, 1.0, 1e-10).value;
}

}  // namespace

BoundReport bound_t1(const JumpDiffusionSpec& a, const JumpDiffusionSpec& b,
                     double x1, double x2, std::size_t band_points) {
  const JumpDiffusionSpec sa = validated(a);
  const JumpDiffusionSpec sb = validated(b);
  if (band_points < 2) throw ValidationError("band grid needs at least 2 points");

  // Kernels are constant on both plateaus, so one probe per plateau is exact;
  // the interpolation bands are sampled.
  std::vector<double> xs;
  for (const JumpKernel* k : {&sa.kernel, &sb.kernel}) {
    xs.push_back(k->s_star - k->delta - 1.0);
    xs.push_back(k->s_star + k->delta + 1.0);
    for (std::size_t j = 0; j <= band_points; ++j) {
      xs.push_back(k->s_star - k->delta +
                   2.0 * k->delta * static_cast<double>(j) / static_cast<double>(band_points));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double sup = 0.0;
  double argmax = xs.front();
  for (double x : xs) {
    const double v = kernel_t1_at(sa.kernel, sb.kernel, x);
    if (v > sup) {
      sup = v;
      argmax = x;
    }
  }

  const double initial = rho(x1, x2);
  BoundReport r;
  r.delta = initial + sup;
  r.g_of_delta = g_of(r.delta);
  r.order = "T1";
  r.components = {{"initial_gap", initial},
                  {"sup_t1", sup},
                  {"argmax_state", argmax},
                  {"grid_size", xs.size()}};
  return r;
}

BoundReport bound_t2(const T2BoundInputs& in) {
  const auto need = [](const std::optional<double>& v, const char* name) -> double {
    if (!v) throw ValidationError(std::string("incomplete input: missing ") + name);
    if (!(*v >= 0.0) || !std::isfinite(*v)) {
      throw ValidationError(std::string(name) + " must be finite and >= 0");
    }
    return *v;
  };
  const double rho_x = need(in.initial_gap, "initial_gap");
  const double da = need(in.drift_gap, "drift_gap");
  const double dabar = need(in.big_jump_mass_gap, "big_jump_mass_gap");
  const double db = need(in.diffusion_gap, "diffusion_gap");
  const double st2 = need(in.sup_t2, "sup_t2");

  BoundReport r;
  r.delta = rho_x + da * da + dabar * dabar + db * db + st2 + st2 * st2;
  r.g_of_delta = g_of(r.delta);
  r.order = "T2";
  r.components = {{"initial_gap", rho_x},
                  {"drift_gap_sq", da * da},
                  {"big_jump_mass_gap_sq", dabar * dabar},
                  {"diffusion_gap_sq", db * db},
                  {"sup_t2", st2},
                  {"sup_t2_sq", st2 * st2}};
  return r;
}

double big_jump_mass(const MeasureSpec& m) {
  return tail_plus(m, 1.0) + tail_minus(m, 1.0);
}

nlohmann::json bound_to_json(const BoundReport& r) {
  return {{"delta", r.delta},
          {"g_of_delta", r.g_of_delta},
          {"order", r.order},
          {"components", r.components}};
}

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

namespace {

KernelSide side_from_json(const nlohmann::json& j, double default_eps) {
  KernelSide s;
  s.eps = j.value("eps", default_eps);
  s.alpha_warm = j.at("alpha_warm").get<double>();
  s.alpha_cold = j.at("alpha_cold").get<double>();
  s.weight = j.value("weight", 1.0);
  return s;
}

nlohmann::json side_to_json(const KernelSide& s) {
  return {{"eps", s.eps},
          {"alpha_warm", s.alpha_warm},
          {"alpha_cold", s.alpha_cold},
          {"weight", s.weight}};
}

}  // namespace

JumpDiffusionSpec sde_from_json(const nlohmann::json& j) {
  JumpDiffusionSpec spec;
  spec.x0 = j.value("x0", 0.0);
  if (j.contains("drift")) {
    const auto& d = j.at("drift");
    const std::string kind = d.value("kind", "zero");
    if (kind == "zero") {
      spec.drift.kind = Drift::Kind::Zero;
    } else if (kind == "constant") {
      spec.drift.kind = Drift::Kind::Constant;
      spec.drift.a0 = d.at("value").get<double>();
    } else if (kind == "linear") {
      spec.drift.kind = Drift::Kind::Linear;
      spec.drift.a0 = d.at("intercept").get<double>();
      spec.drift.a1 = d.at("slope").get<double>();
    } else {
      throw ValidationError("unknown drift kind \"" + kind + "\"");
    }
  }
  if (!j.contains("kernel")) throw ValidationError("spec needs a \"kernel\" object");
  const auto& k = j.at("kernel");
  spec.kernel.s_star = k.value("s_star", -0.8);
  spec.kernel.delta = k.value("delta", 0.1);
  if (k.contains("plus")) spec.kernel.plus = side_from_json(k.at("plus"), 0.36);
  if (k.contains("minus")) spec.kernel.minus = side_from_json(k.at("minus"), 0.34);
  return validated(spec);
}

nlohmann::json sde_to_json(const JumpDiffusionSpec& spec) {
  nlohmann::json drift;
  switch (spec.drift.kind) {
    case Drift::Kind::Zero:
      drift = {{"kind", "zero"}};
      break;
    case Drift::Kind::Constant:
      drift = {{"kind", "constant"}, {"value", spec.drift.a0}};
      break;
    case Drift::Kind::Linear:
      drift = {{"kind", "linear"}, {"intercept", spec.drift.a0}, {"slope", spec.drift.a1}};
      break;
  }
  nlohmann::json kernel{{"s_star", spec.kernel.s_star}, {"delta", spec.kernel.delta}};
  if (spec.kernel.plus) kernel["plus"] = side_to_json(*spec.kernel.plus);
  if (spec.kernel.minus) kernel["minus"] = side_to_json(*spec.kernel.minus);
  return {{"x0", spec.x0}, {"drift", drift}, {"kernel", kernel}};
}

}  // namespace levytrans
