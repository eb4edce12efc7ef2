#include "levytrans/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levytrans/csv.hpp"
#include "levytrans/errors.hpp"

namespace levytrans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTinyV = 1e-300;

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

double piece_upper_limit(const TransportPiece& p, double hi) {
  switch (p.kind) {
    case TransportPiece::Kind::Constant:
      return p.value;
    case TransportPiece::Kind::Power:
      return std::isinf(hi) ? kInf : p.coeff * std::pow(hi, p.expo);
    case TransportPiece::Kind::Numeric:
      return std::isinf(hi) ? kInf : p.eval(hi);
  }
  return 0.0;
}

double eval_piece(const TransportPiece& p, double v) {
  switch (p.kind) {
    case TransportPiece::Kind::Constant:
      return p.value;
    case TransportPiece::Kind::Power:
      return p.coeff * std::pow(v, p.expo);
    case TransportPiece::Kind::Numeric:
      return p.eval(std::max(v, kTinyV));
  }
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// OneSidedTransport
// ---------------------------------------------------------------------------

OneSidedTransport::OneSidedTransport(std::vector<TransportPiece> pieces)
    : pieces_(std::move(pieces)) {
  double prev_lo = -1.0;
  for (const auto& p : pieces_) {
    require(std::isfinite(p.lo) && p.lo >= 0.0, "transport piece start must be finite and >= 0");
    require(p.lo > prev_lo, "transport pieces must start at strictly increasing points");
    prev_lo = p.lo;
    switch (p.kind) {
      case TransportPiece::Kind::Constant:
        require(p.value >= 0.0 && std::isfinite(p.value),
                "constant transport piece needs a finite nonnegative value");
        break;
      case TransportPiece::Kind::Power:
        require(p.coeff > 0.0 && p.expo > 0.0,
                "power transport piece needs positive coefficient and exponent");
        require(p.lo > 0.0, "power transport piece cannot start at 0");
        break;
      case TransportPiece::Kind::Numeric:
        require(static_cast<bool>(p.eval), "numeric transport piece needs an evaluator");
        break;
    }
  }
}

double OneSidedTransport::operator()(double v) const {
  if (v < 0.0 || pieces_.empty() || v < pieces_.front().lo) return 0.0;
  // Last piece with lo <= v.
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), v,
      [](double x, const TransportPiece& p) { return x < p.lo; });
  return eval_piece(*std::prev(it), v);
}

double OneSidedTransport::upper_level_entry(double u) const {
  if (!(u > 0.0)) throw ValidationError("level must be positive");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const TransportPiece& p = pieces_[i];
    const double hi = (i + 1 < pieces_.size()) ? pieces_[i + 1].lo : kInf;
    if (!(piece_upper_limit(p, hi) > u)) continue;
    switch (p.kind) {
      case TransportPiece::Kind::Constant:
        return p.lo;  // jumps above u right at the piece start
      case TransportPiece::Kind::Power: {
        const double v = std::pow(u / p.coeff, 1.0 / p.expo);
        return std::clamp(v, p.lo, hi);
      }
      case TransportPiece::Kind::Numeric: {
        double lo = std::max(p.lo, kTinyV);
        if (p.eval(lo) > u) return p.lo;
        // Bracket [lo, hi_b] with c(lo) <= u < c(hi_b), then bisect in log
        // space; the transport is nondecreasing inside the piece.
        double hi_b = std::isinf(hi) ? std::max(1.0, 2.0 * lo) : hi;
        if (std::isinf(hi)) {
          int guard = 0;
          while (!(p.eval(hi_b) > u)) {
            hi_b *= 2.0;
            if (++guard > 1100) return kInf;  // level never exceeded
          }
        }
        for (int it = 0; it < 200; ++it) {
          const double mid = std::sqrt(lo * hi_b);
          if (p.eval(mid) > u) {
            hi_b = mid;
          } else {
            lo = mid;
          }
          if (hi_b - lo <= 1e-14 * hi_b) break;
        }
        return hi_b;
      }
    }
  }
  return kInf;
}

std::vector<double> OneSidedTransport::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    if (p.lo > 0.0) out.push_back(p.lo);
  }
  return out;
}

double TransportFunction::operator()(double v) const {
  if (v >= 0.0) return pos_(v);
  return -neg_(-v);
}

double TransportFunction::pushforward_tail_plus(double u) const {
  const double entry = pos_.upper_level_entry(u);
  return std::isinf(entry) ? 0.0 : 1.0 / entry;
}

double TransportFunction::pushforward_tail_minus(double u) const {
  const double entry = neg_.upper_level_entry(u);
  return std::isinf(entry) ? 0.0 : 1.0 / entry;
}

// ---------------------------------------------------------------------------
// Spec validation and tails
// ---------------------------------------------------------------------------

double pareto_probability_lambda(double alpha, double eps) {
  return alpha * std::pow(eps, alpha);
}

ParetoTail make_pareto(double alpha, double eps) {
  return make_pareto(alpha, eps, pareto_probability_lambda(alpha, eps));
}

ParetoTail make_pareto(double alpha, double eps, double lambda) {
  ParetoTail spec{alpha, eps, lambda};
  validated(spec);
  return spec;
}

MeasureSpec validated(MeasureSpec spec) {
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ParetoTail>) {
          require(s.alpha > 0.0 && std::isfinite(s.alpha), "pareto: alpha must be positive");
          require(s.eps > 0.0 && std::isfinite(s.eps), "pareto: eps must be positive");
          require(s.lambda > 0.0 && std::isfinite(s.lambda), "pareto: lambda must be positive");
        } else if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) {
          require(s.alpha_plus > 1.0 && s.alpha_minus > 1.0,
                  "two_sided: exponents must exceed 1");
          require(s.lambda_plus >= 0.0 && s.lambda_minus >= 0.0,
                  "two_sided: lambdas must be nonnegative");
          require(s.lambda_plus > 0.0 || s.lambda_minus > 0.0,
                  "two_sided: at least one side needs mass");
        } else if constexpr (std::is_same_v<T, GammaTail>) {
          require(s.gamma > 0.0 && std::isfinite(s.gamma), "gamma: gamma must be positive");
          require(s.lambda > 0.0 && std::isfinite(s.lambda), "gamma: lambda must be positive");
        } else if constexpr (std::is_same_v<T, Empirical>) {
          require(!s.sample.empty(), "empirical: sample must be nonempty");
          for (double x : s.sample) {
            require(std::isfinite(x) && x > 0.0,
                    "empirical: sample entries must be finite and positive");
          }
          require(s.eps >= 0.0, "empirical: eps must be nonnegative");
          std::sort(s.sample.begin(), s.sample.end());
        } else if constexpr (std::is_same_v<T, GenericTail>) {
          require(static_cast<bool>(s.tail_plus) || static_cast<bool>(s.tail_minus),
                  "tail: at least one side must be given");
          require(s.inversion_tol > 0.0, "tail: inversion tolerance must be positive");
        }
      },
      spec);
  return spec;
}

double tail_plus(const MeasureSpec& spec, double u) {
  if (!(u > 0.0)) throw ValidationError("tail argument must be positive");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ParetoTail>) {
          return s.lambda * std::pow(std::max(u, s.eps), -s.alpha) / s.alpha;
        } else if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) {
          return s.lambda_plus * std::pow(std::max(u, 1.0), -s.alpha_plus);
        } else if constexpr (std::is_same_v<T, GammaTail>) {
          return -s.gamma * std::expint(-s.lambda * u);
        } else if constexpr (std::is_same_v<T, Empirical>) {
          const auto& xs = s.sample;
          const auto it = std::upper_bound(xs.begin(), xs.end(), u);
          return static_cast<double>(xs.end() - it) / static_cast<double>(xs.size());
        } else {
          return s.tail_plus ? s.tail_plus(u) : 0.0;
        }
      },
      spec);
}

double tail_minus(const MeasureSpec& spec, double u) {
  if (!(u > 0.0)) throw ValidationError("tail argument must be positive");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) {
          return s.lambda_minus * std::pow(std::max(u, 1.0), -s.alpha_minus);
        } else if constexpr (std::is_same_v<T, GenericTail>) {
          return s.tail_minus ? s.tail_minus(u) : 0.0;
        } else {
          return 0.0;
        }
      },
      spec);
}

double support_gap(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ParetoTail>) {
          return s.eps;
        } else if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, Empirical>) {
          return s.sample.empty() ? 0.0 : s.sample.front();
        } else {
          return 0.0;
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Transport constructions
// ---------------------------------------------------------------------------

TransportFunction transport_pareto(double alpha, double eps, double lambda) {
  validated(ParetoTail{alpha, eps, lambda});
  TransportPiece p;
  p.kind = TransportPiece::Kind::Power;
  p.lo = alpha * std::pow(eps, alpha) / lambda;
  p.coeff = std::pow(lambda / alpha, 1.0 / alpha);
  p.expo = 1.0 / alpha;
  return TransportFunction(OneSidedTransport({p}), OneSidedTransport());
}

TransportFunction transport_pareto(const ParetoTail& spec) {
  return transport_pareto(spec.alpha, spec.eps, spec.lambda);
}

TransportFunction transport_empirical(std::vector<double> sample) {
  require(!sample.empty(), "empirical transport: sample must be nonempty");
  for (double x : sample) {
    require(std::isfinite(x) && x > 0.0,
            "empirical transport: sample entries must be finite and positive");
  }
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  std::vector<TransportPiece> pieces;
  pieces.reserve(sample.size());
  for (std::size_t i = 1; i <= sample.size(); ++i) {
    TransportPiece p;
    p.kind = TransportPiece::Kind::Constant;
    p.lo = n / (n - static_cast<double>(i) + 1.0);
    p.value = sample[i - 1];
    pieces.push_back(p);
  }
  return TransportFunction(OneSidedTransport(std::move(pieces)), OneSidedTransport());
}

TransportFunction transport_empirical(const Empirical& spec) {
  return transport_empirical(spec.sample);
}

double transport_from_tail(const std::function<double(double)>& tail, double v,
                           double tol) {
  if (!(v > 0.0)) throw ValidationError("transport argument must be positive");
  if (!(tol > 0.0)) throw ValidationError("inversion tolerance must be positive");
  const double target = 1.0 / v;
  const double at_origin = tail(kTinyV);
  if (at_origin <= target) {
    // The level set is empty only if the tail really is nonincreasing; a
    // rising tail reaches the level further out and must be rejected, not
    // silently mapped to zero.
    if (tail(1.0) > at_origin * (1.0 + 1e-12)) {
      throw ValidationError("tail function is not nonincreasing");
    }
    return 0.0;
  }
  double lo = 0.0;
  double hi = 1.0;
  double prev = kInf;
  int guard = 0;
  while (true) {
    const double t = tail(hi);
    if (t > prev * (1.0 + 1e-12)) {
      throw ValidationError("tail function is not nonincreasing");
    }
    prev = t;
    if (t <= target) break;
    lo = hi;
    hi *= 2.0;
    if (++guard > 1100) throw NumericError("tail does not decay below the requested level");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (tail(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

OneSidedTransport numeric_transport(std::function<double(double)> tail,
                                    double total_mass, double tol) {
  require(static_cast<bool>(tail), "numeric transport needs a tail function");
  require(total_mass > 0.0, "numeric transport needs positive total mass");
  TransportPiece p;
  p.kind = TransportPiece::Kind::Numeric;
  p.lo = std::isinf(total_mass) ? 0.0 : 1.0 / total_mass;
  p.eval = [tail = std::move(tail), tol](double v) {
    return transport_from_tail(tail, v, tol);
  };
  return OneSidedTransport({p});
}

TransportFunction two_sided_transport(const TwoSidedPowerLaw& spec) {
  validated(spec);
  OneSidedTransport pos, neg;
  if (spec.lambda_plus > 0.0) {
    TransportPiece p;
    p.kind = TransportPiece::Kind::Power;
    p.lo = 1.0 / spec.lambda_plus;
    p.coeff = std::pow(spec.lambda_plus, 1.0 / spec.alpha_plus);
    p.expo = 1.0 / spec.alpha_plus;
    pos = OneSidedTransport({p});
  }
  if (spec.lambda_minus > 0.0) {
    TransportPiece p;
    p.kind = TransportPiece::Kind::Power;
    p.lo = 1.0 / spec.lambda_minus;
    p.coeff = std::pow(spec.lambda_minus, 1.0 / spec.alpha_minus);
    p.expo = 1.0 / spec.alpha_minus;
    neg = OneSidedTransport({p});
  }
  return TransportFunction(std::move(pos), std::move(neg));
}

TransportFunction transport(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> TransportFunction {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ParetoTail>) {
          return transport_pareto(s);
        } else if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) {
          return two_sided_transport(s);
        } else if constexpr (std::is_same_v<T, GammaTail>) {
          const double g = s.gamma;
          const double lam = s.lambda;
          auto tail = [g, lam](double u) { return -g * std::expint(-lam * u); };
          return TransportFunction(
              numeric_transport(tail, std::numeric_limits<double>::infinity()),
              OneSidedTransport());
        } else if constexpr (std::is_same_v<T, Empirical>) {
          return transport_empirical(s);
        } else {
          OneSidedTransport pos, neg;
          if (s.tail_plus) {
            pos = numeric_transport(s.tail_plus, s.tail_plus(kTinyV), s.inversion_tol);
          }
          if (s.tail_minus) {
            neg = numeric_transport(s.tail_minus, s.tail_minus(kTinyV), s.inversion_tol);
          }
          return TransportFunction(std::move(pos), std::move(neg));
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

// Tail interpolated log-linearly through positive (u, tail) points; constant
// below the first point, zero above the last.
std::function<double(double)> table_tail(std::vector<std::pair<double, double>> pts) {
  return [pts = std::move(pts)](double u) -> double {
    if (u <= pts.front().first) return pts.front().second;
    if (u >= pts.back().first) return 0.0;
    auto it = std::upper_bound(
        pts.begin(), pts.end(), u,
        [](double x, const auto& p) { return x < p.first; });
    const auto& [u1, t1] = *std::prev(it);
    const auto& [u2, t2] = *it;
    const double w = (std::log(u) - std::log(u1)) / (std::log(u2) - std::log(u1));
    return std::exp((1.0 - w) * std::log(t1) + w * std::log(t2));
  };
}

std::vector<std::pair<double, double>> read_table(const nlohmann::json& arr,
                                                  const char* side) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 2) {
      throw ValidationError(std::string("tail ") + side + ": points must be [u, tail] pairs");
    }
    pts.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  if (pts.empty()) throw ValidationError(std::string("tail ") + side + ": empty point table");
  double prev_u = 0.0, prev_t = kInf;
  for (const auto& [u, t] : pts) {
    if (!(u > prev_u)) {
      throw ValidationError(std::string("tail ") + side + ": u grid must be strictly increasing");
    }
    if (!(t > 0.0) || t > prev_t * (1.0 + 1e-12)) {
      throw ValidationError(std::string("tail ") + side +
                            ": tail values must be positive and nonincreasing");
    }
    prev_u = u;
    prev_t = t;
  }
  return pts;
}

}  // namespace

MeasureSpec measure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("measure spec must be an object with a \"kind\" field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pareto") {
    const double alpha = j.at("alpha").get<double>();
    const double eps = j.at("eps").get<double>();
    const double lambda = j.contains("lambda") ? j.at("lambda").get<double>()
                                               : pareto_probability_lambda(alpha, eps);
    return validated(ParetoTail{alpha, eps, lambda});
  }
  if (kind == "two_sided") {
    TwoSidedPowerLaw s;
    s.alpha_plus = j.at("alpha_plus").get<double>();
    s.alpha_minus = j.at("alpha_minus").get<double>();
    s.lambda_plus = j.value("lambda_plus", 1.0);
    s.lambda_minus = j.value("lambda_minus", 1.0);
    return validated(s);
  }
  if (kind == "gamma") {
    return validated(GammaTail{j.at("gamma").get<double>(), j.at("lambda").get<double>()});
  }
  if (kind == "empirical") {
    Empirical s;
    s.eps = j.value("eps", 0.0);
    if (j.contains("sample")) {
      s.sample = j.at("sample").get<std::vector<double>>();
    } else if (j.contains("csv")) {
      s.sample = read_value_column(j.at("csv").get<std::string>());
    } else {
      throw ValidationError("empirical spec needs \"sample\" or \"csv\"");
    }
    return validated(s);
  }
  if (kind == "tail") {
    GenericTail s;
    s.inversion_tol = j.value("tol", 1e-12);
    if (j.contains("points_plus")) {
      s.table_plus = read_table(j.at("points_plus"), "plus");
      s.tail_plus = table_tail(s.table_plus);
    }
    if (j.contains("points_minus")) {
      s.table_minus = read_table(j.at("points_minus"), "minus");
      s.tail_minus = table_tail(s.table_minus);
    }
    return validated(s);
  }
  throw ValidationError("unknown measure kind \"" + kind + "\"");
}

nlohmann::json measure_to_json(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ParetoTail>) {
          return {{"kind", "pareto"}, {"alpha", s.alpha}, {"eps", s.eps}, {"lambda", s.lambda}};
        } else if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) {
          return {{"kind", "two_sided"},
                  {"alpha_plus", s.alpha_plus},
                  {"alpha_minus", s.alpha_minus},
                  {"lambda_plus", s.lambda_plus},
                  {"lambda_minus", s.lambda_minus}};
        } else if constexpr (std::is_same_v<T, GammaTail>) {
          return {{"kind", "gamma"}, {"gamma", s.gamma}, {"lambda", s.lambda}};
        } else if constexpr (std::is_same_v<T, Empirical>) {
          return {{"kind", "empirical"}, {"eps", s.eps}, {"sample", s.sample}};
        } else {
          if (s.table_plus.empty() && s.table_minus.empty()) {
            throw ValidationError("tail measure built from code cannot be serialized");
          }
          nlohmann::json out{{"kind", "tail"}, {"tol", s.inversion_tol}};
          if (!s.table_plus.empty()) out["points_plus"] = s.table_plus;
          if (!s.table_minus.empty()) out["points_minus"] = s.table_minus;
          return out;
        }
      },
      spec);
}

std::string kind_name(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ParetoTail>) return "pareto";
        if constexpr (std::is_same_v<T, TwoSidedPowerLaw>) return "two_sided";
        if constexpr (std::is_same_v<T, GammaTail>) return "gamma";
        if constexpr (std::is_same_v<T, Empirical>) return "empirical";
        return "tail";
      },
      spec);
}

}  // namespace levytrans
