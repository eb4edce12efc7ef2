#include <doctest.h>

#include <cmath>
#include <vector>

#include "levytrans/distance.hpp"
#include "levytrans/errors.hpp"
#include "levytrans/measures.hpp"
#include "levytrans/rng.hpp"
#include "levytrans/sampling.hpp"

using namespace levytrans;

TEST_CASE("truncated ground metric") {
  CHECK(rho(0.0, 0.5) == 0.5);
  CHECK(rho(0.5, 0.0) == 0.5);
  CHECK(rho(0.0, 3.0) == 1.0);
  CHECK(rho(-2.0, 2.0) == 1.0);
  CHECK(rho(1.25, 1.25) == 0.0);
}

TEST_CASE("order-1 antiderivative form: single-point sample by hand") {
  // Sample {0.5}, eps = 0.5, alpha = 2, probability normalization:
  //   integral_1^9 (0.5 sqrt(v) - 0.5) v^-2 dv + 1/9 = 1/3.
  const DistanceResult d = t1_empirical_vs_pareto({0.5}, 0.5, 2.0);
  CHECK(d.method == "closed_form");
  CHECK(d.order == 1.0);
  CHECK(d.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const DistanceResult q =
      tp_quadrature(transport_empirical({0.5}),
                    transport_pareto(2.0, 0.5, pareto_probability_lambda(2.0, 0.5)), 1.0,
                    1e-11);
  CHECK(q.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("antiderivative form matches the quadrature oracle on random samples") {
  RngStream rng(40, 1);
  for (int k = 0; k < 25; ++k) {
    const double alpha = 1.2 + 7.0 * rng.next_uniform_closed_open();
    const double eps = 0.3 + 0.7 * rng.next_uniform_closed_open();
    const std::size_t n = 1 + static_cast<std::size_t>(60.0 * rng.next_uniform_closed_open());
    const std::vector<double> s = sample_pareto(alpha, eps, n, rng);
    const double closed = t1_empirical_vs_pareto(s, eps, alpha).value;
    const double quad =
        tp_quadrature(transport_empirical(s),
                      transport_pareto(alpha, eps, pareto_probability_lambda(alpha, eps)),
                      1.0, 1e-11)
            .value;
    CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("antiderivative form argument validation") {
  CHECK_THROWS_AS(t1_empirical_vs_pareto({}, 0.5, 2.0), ValidationError);
  CHECK_THROWS_AS(t1_empirical_vs_pareto({1.0}, 0.0, 2.0), ValidationError);
  CHECK_THROWS_AS(t1_empirical_vs_pareto({1.0}, 0.5, 1.0000001), ValidationError);
  CHECK_THROWS_AS(t1_empirical_vs_pareto({0.4}, 0.5, 2.0), ValidationError);
  // Transport breakpoint above 1 contradicts the empirical slot layout.
  CHECK_THROWS_AS(t1_empirical_vs_pareto({1.0}, 0.5, 2.0, 0.01), ValidationError);
}

TEST_CASE("kappa breakpoints: clamped branch levels") {
  // value 2, alpha 2, lambda 0.5: branch reaches value-1 / value / value+1 at
  // kappa = 4, 16, 36.
  const KappaBreakpoints wide = kappa_breakpoints(2.0, 2.0, 0.5, 1.0, 50.0);
  CHECK(wide.minus == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(wide.zero == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(wide.plus == doctest::Approx(36.0).epsilon(1e-13));
  const KappaBreakpoints clamped = kappa_breakpoints(2.0, 2.0, 0.5, 1.0, 4.0);
  CHECK(clamped.minus == 4.0);
  CHECK(clamped.zero == 4.0);
  CHECK(clamped.plus == 4.0);
  // Values below 1 floor the value-1 level at the interval start.
  const KappaBreakpoints floored = kappa_breakpoints(0.5, 2.0, 0.5, 1.0, 50.0);
  CHECK(floored.minus == 1.0);
  CHECK_THROWS_AS(kappa_breakpoints(-1.0, 2.0, 0.5, 1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(kappa_breakpoints(1.0, 0.0, 0.5, 1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(kappa_breakpoints(1.0, 2.0, 0.5, 3.0, 2.0), ValidationError);
}

TEST_CASE("two-sided pair distance: capped and uncapped closed forms") {
  const TwoSidedPowerLaw a{3.0, 3.0, 1.0, 0.0};
  const TwoSidedPowerLaw b{4.0, 4.0, 1.0, 0.0};
  const double uncapped = t1_pareto_pair_untruncated(a, b);
  CHECK(uncapped == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  const DistanceResult capped = t1_pareto_pair(a, b);
  CHECK(capped.method == "closed_form");
  // Frozen against the quadrature oracle; the cap binds beyond v ~ 47.8 where
  // the transport gap first exceeds one.
  CHECK(capped.value == doctest::Approx(0.147045103267420).epsilon(1e-12));
  CHECK(capped.value < uncapped);
  const DistanceResult q =
      tp_quadrature(two_sided_transport(a), two_sided_transport(b), 1.0, 1e-11);
  CHECK(capped.value == doctest::Approx(q.value).epsilon(1e-9));
}

TEST_CASE("two-sided pair distance: both sides active") {
  const TwoSidedPowerLaw a{3.0, 2.5, 1.0, 0.7};
  const TwoSidedPowerLaw b{4.0, 3.5, 1.0, 0.7};
  const DistanceResult closed = t1_pareto_pair(a, b);
  const DistanceResult q =
      tp_quadrature(two_sided_transport(a), two_sided_transport(b), 1.0, 1e-11);
  CHECK(closed.value == doctest::Approx(q.value).epsilon(1e-9));
  // Symmetry of the closed form.
  CHECK(t1_pareto_pair(b, a).value == closed.value);
  // Identity.
  CHECK(t1_pareto_pair(a, a).value == 0.0);
  // Uncapped form dominates.
  CHECK(t1_pareto_pair_untruncated(a, b) >= closed.value);
}

TEST_CASE("two-sided pair distance requires shared lambdas") {
  const TwoSidedPowerLaw a{3.0, 3.0, 1.0, 1.0};
  const TwoSidedPowerLaw b{4.0, 4.0, 2.0, 1.0};
  CHECK_THROWS_AS(t1_pareto_pair(a, b), ValidationError);
  CHECK_THROWS_AS(t1_pareto_pair_untruncated(a, b), ValidationError);
}

TEST_CASE("quadrature symmetry and identity on table-backed tails") {
  const MeasureSpec a = measure_from_json(
      {{"kind", "tail"},
       {"points_plus", {{0.5, 2.0}, {1.0, 1.0}, {2.0, 0.25}, {4.0, 0.0625}}}});
  const MeasureSpec b = measure_from_json(
      {{"kind", "tail"},
       {"points_plus", {{0.5, 2.0}, {1.0, 0.8}, {2.0, 0.3}, {4.0, 0.05}}}});
  const double ab = tp_quadrature(transport(a), transport(b), 1.0, 1e-9).value;
  const double ba = tp_quadrature(transport(b), transport(a), 1.0, 1e-9).value;
  CHECK(ab > 0.0);
  CHECK(ab == doctest::Approx(ba).epsilon(1e-11));
  CHECK(tp_quadrature(transport(a), transport(a), 1.0, 1e-9).value ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-11));
}

TEST_CASE("order-1 integral diverges for incompatible infinite-mass tails") {
  GenericTail ga, gb;
  ga.tail_plus = [](double u) { return std::pow(u, -10.0 / 3.0); };
  gb.tail_plus = [](double u) { return std::pow(u / 2.0, -10.0 / 3.0); };
  CHECK_THROWS_AS(
      tp_quadrature(transport(MeasureSpec{ga}), transport(MeasureSpec{gb}), 1.0, 1e-6),
      NumericError);
}

TEST_CASE("order-2 distance between exponential-tail measures") {
  const GammaTail g1{1.0, 1.0};
  const DistanceResult zero = t2_gamma_pair(g1, g1, 1e-8);
  CHECK(zero.order == 2.0);
  CHECK(zero.method == "quadrature");
  CHECK(zero.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

  // Distance grows with the mass-parameter gap at fixed decay rate.
  const double d12 = t2_gamma_pair(g1, GammaTail{1.2, 1.0}, 1e-8).value;
  const double d15 = t2_gamma_pair(g1, GammaTail{1.5, 1.0}, 1e-8).value;
  const double d20 = t2_gamma_pair(g1, GammaTail{2.0, 1.0}, 1e-8).value;
  CHECK(d12 > 0.0);
  CHECK(d12 < d15);
  CHECK(d15 < d20);
  // Near-linear response: the ratio to the parameter gap stays within a
  // factor-two band across the sweep.
  const double r12 = d12 / 0.2, r20 = d20 / 1.0;
  CHECK(std::max(r12, r20) / std::min(r12, r20) < 2.0);

  // Same for the decay-rate gap at fixed mass parameter.
  const double e13 = t2_gamma_pair(g1, GammaTail{1.0, 1.3}, 1e-8).value;
  const double e20 = t2_gamma_pair(g1, GammaTail{1.0, 2.0}, 1e-8).value;
  CHECK(e13 > 0.0);
  CHECK(e13 < e20);
  // Symmetry.
  CHECK(t2_gamma_pair(GammaTail{1.0, 1.3}, g1, 1e-8).value ==
        doctest::Approx(e13).epsilon(1e-10));
}

TEST_CASE("automatic dispatch picks the antiderivative form when it applies") {
  RngStream rng(12, 3);
  const std::vector<double> s = sample_pareto(3.0, 0.36, 40, rng);
  const MeasureSpec emp = validated(Empirical{s, 0.36});
  const MeasureSpec par = ParetoTail{3.0, 0.36, pareto_probability_lambda(3.0, 0.36)};
  const DistanceResult closed = distance_auto(emp, par, 1.0);
  CHECK(closed.method == "closed_form");
  // Order of the arguments does not matter.
  CHECK(distance_auto(par, emp, 1.0).value == closed.value);
  const DistanceResult forced = distance_auto(emp, par, 1.0, 1e-11, true);
  CHECK(forced.method == "quadrature");
  CHECK(forced.value == doctest::Approx(closed.value).epsilon(1e-9));
  // Order 2 has no closed form here.
  CHECK(distance_auto(emp, par, 2.0, 1e-8).method == "quadrature");
}

TEST_CASE("automatic dispatch falls back to quadrature off the closed-form domain") {
  // Breakpoint alpha eps^alpha / lambda = 14 > 1: outside the antiderivative
  // form's domain, the dispatcher must route to quadrature instead of failing.
  const MeasureSpec par = ParetoTail{3.0, 0.36, 0.01};
  const MeasureSpec emp = validated(Empirical{{0.5, 0.9, 2.0}, 0.36});
  const DistanceResult d = distance_auto(emp, par, 1.0, 1e-9);
  CHECK(d.method == "quadrature");
  CHECK(d.value > 0.0);
  // Power-law pair: closed form applies for any parameterization.
  const DistanceResult pp =
      distance_auto(MeasureSpec{ParetoTail{2.0, 0.5, 4.0}}, par, 1.0);
  CHECK(pp.method == "closed_form");
  const DistanceResult ppq = distance_auto(MeasureSpec{ParetoTail{2.0, 0.5, 4.0}}, par, 1.0,
                                           1e-11, true);
  CHECK(pp.value == doctest::Approx(ppq.value).epsilon(1e-9));
}

TEST_CASE("normalization scales order-1 distances into [0, 1]") {
  const DistanceResult d = t1_empirical_vs_pareto({0.5}, 0.5, 2.0);
  const DistanceResult nd = normalize(d, 0.5);
  CHECK(nd.normalized);
  CHECK(nd.value == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
  CHECK(nd.value >= 0.0);
  CHECK(nd.value <= 1.0);
  CHECK_THROWS_AS(normalize(nd, 0.5), ValidationError);
  CHECK_THROWS_AS(normalize(d, 0.0), ValidationError);
  DistanceResult two = d;
  two.order = 2.0;
  CHECK_THROWS_AS(normalize(two, 0.5), ValidationError);
}

TEST_CASE("quadrature argument validation and error reporting") {
  const TransportFunction c = transport_pareto(3.0, 0.36, pareto_probability_lambda(3.0, 0.36));
  CHECK_THROWS_AS(tp_quadrature(c, c, 0.5, 1e-9), ValidationError);
  CHECK_THROWS_AS(tp_quadrature(c, c, 1.0, 0.0), ValidationError);
  RngStream rng(9, 9);
  const std::vector<double> s = sample_pareto(2.5, 0.4, 30, rng);
  const DistanceResult q = tp_quadrature(
      transport_empirical(s), transport_pareto(2.5, 0.4, pareto_probability_lambda(2.5, 0.4)),
      1.0, 1e-10);
  CHECK(q.err_estimate >= 0.0);
  CHECK(q.err_estimate < 1e-8);
  CHECK(distance_to_json(q).at("method") == "quadrature");
}
