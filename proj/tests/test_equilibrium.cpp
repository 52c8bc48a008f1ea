#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "routing/equilibrium.hpp"
#include "routing/io.hpp"
#include "support/test_support.hpp"

using namespace routing;
using testsupport::SplitMix64;

namespace {

// Independent single-class Wardrop oracle on parallel affine links
// l_i(f) = k_i a_i f + t_i: water-filling over support sets ordered by t.
FlowProfile single_class_wardrop(const Network& net, double demand) {
  std::vector<int> order(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int l, int r) { return net.road(l).t < net.road(r).t; });

  for (int used = 1; used <= net.size(); ++used) {
    // lambda solves sum_{i<used} (lambda - t_i) / (k_i a_i) = demand
    double inv = 0.0, shift = 0.0;
    for (int j = 0; j < used; ++j) {
      const Road& r = net.road(order[static_cast<std::size_t>(j)]);
      inv += 1.0 / (r.k * r.a);
      shift += r.t / (r.k * r.a);
    }
    const double lambda = (demand + shift) / inv;
    const bool all_positive = lambda > net.road(order[static_cast<std::size_t>(used - 1)]).t;
    const bool next_unattractive =
        used == net.size() || lambda <= net.road(order[static_cast<std::size_t>(used)]).t;
    if (all_positive && next_unattractive) {
      FlowProfile flow = FlowProfile::zero(net.size());
      for (int j = 0; j < used; ++j) {
        const int i = order[static_cast<std::size_t>(j)];
        flow.at(i).human = (lambda - net.road(i).t) / (net.road(i).k * net.road(i).a);
      }
      return flow;
    }
  }
  throw std::runtime_error("water-filling failed");
}

}  // namespace

TEST_CASE("support pattern solves on the two-road example") {
  const Network net = testsupport::fig1_network(2.0);
  const Demand demand{1.0, 1.0};
  const TollScheme no_tolls = TollScheme::zero(2);

  SUBCASE("separated routing, autonomous on road 1") {
    PatternSolve s = solve_support_pattern(net, demand, no_tolls, {{1}, {0}});
    REQUIRE(s.status == PatternStatus::Solved);
    CHECK(s.result->flow.at(0).human == doctest::Approx(0.0));
    CHECK(s.result->flow.at(1).human == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.result->flow.at(0).autonomous == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*s.result->lambda_human == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*s.result->lambda_autonomous == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.result->social_cost == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("reversed routing costs 2k") {
    PatternSolve s = solve_support_pattern(net, demand, no_tolls, {{0}, {1}});
    REQUIRE(s.status == PatternStatus::Solved);
    CHECK(s.result->flow.at(0).human == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.result->flow.at(1).autonomous == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*s.result->lambda_human == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(*s.result->lambda_autonomous == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.result->social_cost == doctest::Approx(4.0).epsilon(1e-12));
  }

  SUBCASE("full shared support is rank deficient") {
    PatternSolve s = solve_support_pattern(net, demand, no_tolls, {{0, 1}, {0, 1}});
    CHECK(s.status == PatternStatus::Degenerate);
  }
}

TEST_CASE("pattern preconditions") {
  const Network net = testsupport::fig1_network(2.0);
  const TollScheme no_tolls = TollScheme::zero(2);
  CHECK_THROWS_AS(solve_support_pattern(net, {1.0, 0.0}, no_tolls, {{0}, {1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_support_pattern(net, {1.0, 1.0}, no_tolls, {{}, {1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_support_pattern(net, {1.0, 1.0}, no_tolls, {{0, 7}, {1}}),
                  std::invalid_argument);
}

TEST_CASE("enumeration finds both isolated equilibria of the two-road example") {
  const Network net = testsupport::fig1_network(2.0);
  EnumerationResult r = enumerate_equilibria(net, {1.0, 1.0}, TollScheme::zero(2));
  REQUIRE(r.equilibria.size() == 2);
  CHECK(r.equilibria.front().social_cost == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.equilibria.back().social_cost == doctest::Approx(4.0).epsilon(1e-12));
  const SupportPattern full{{0, 1}, {0, 1}};
  CHECK(std::find(r.degenerate.begin(), r.degenerate.end(), full) != r.degenerate.end());
}

TEST_CASE("single road takes everything") {
  const Network net({{1.5, 2.0, 0.25}});
  EnumerationResult r = enumerate_equilibria(net, {0.75, 2.0}, TollScheme::zero(1));
  REQUIRE(r.equilibria.size() == 1);
  CHECK(r.equilibria[0].flow.at(0).human == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.equilibria[0].flow.at(0).autonomous == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("three-road example reproduces the published worst equilibrium") {
  const Network net = testsupport::fig2_network();
  const Demand demand = testsupport::fig2_demand();
  EquilibriumResult worst = worst_equilibrium(net, demand, TollScheme::zero(3));
  CHECK(worst.flow.at(0).human == doctest::Approx(1.125).epsilon(1e-9));
  CHECK(worst.flow.at(0).autonomous == doctest::Approx(0.0));
  CHECK(worst.flow.at(1).human == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(worst.flow.at(1).autonomous == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(worst.flow.at(2).human == doctest::Approx(0.0));
  CHECK(worst.flow.at(2).autonomous == doctest::Approx(1.5).epsilon(1e-9));
  for (int i = 0; i < 3; ++i) {
    const RoadFlow& f = worst.flow.at(i);
    CHECK(latency(net.road(i), f.human, f.autonomous) == doctest::Approx(5.0).epsilon(1e-9));
  }
  CHECK(worst.social_cost == doctest::Approx(25.625).epsilon(1e-9));

  EquilibriumResult best = best_equilibrium(net, demand, TollScheme::zero(3));
  CHECK(best.social_cost <= worst.social_cost);
}

TEST_CASE("worst and best equilibria on the two-road example") {
  const Network net = testsupport::fig1_network(2.0);
  CHECK(worst_equilibrium(net, {1.0, 1.0}, TollScheme::zero(2)).social_cost ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(best_equilibrium(net, {1.0, 1.0}, TollScheme::zero(2)).social_cost ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("enumeration cap is enforced by name") {
  std::vector<Road> roads(13, Road{1.0, 2.0, 0.0});
  const Network net(std::move(roads));
  CHECK_THROWS_WITH_AS(enumerate_equilibria(net, {1.0, 1.0}, TollScheme::zero(13)),
                       doctest::Contains("cap of 12"), std::invalid_argument);
}

TEST_CASE("verification follows the example table") {
  const Network net = testsupport::fig2_network();
  const Demand demand = testsupport::fig2_demand();
  const TollScheme no_tolls = TollScheme::zero(3);

  FlowProfile worst({{1.125, 0.0}, {1.5, 1.0}, {0.0, 1.5}});
  CHECK(verify_equilibrium(net, demand, no_tolls, worst, 1e-6).equilibrium);

  // The optimal routing is not an equilibrium without tolls: the two used
  // human roads cost about 2.58 and 2.76.
  FlowProfile opt({{0.0, 1.65}, {0.37, 0.85}, {2.26, 0.0}});
  VerifyResult v = verify_equilibrium(net, demand, no_tolls, opt, 1e-6);
  CHECK_FALSE(v.equilibrium);
  bool human_violation_on_used_road = false;
  for (const WardropViolation& violation : v.violations)
    if (violation.vehicle_class == VehicleClass::Human &&
        (violation.road == 1 || violation.road == 2))
      human_violation_on_used_road = true;
  CHECK(human_violation_on_used_road);
}

TEST_CASE("verification rejects malformed flows") {
  const Network net = testsupport::fig2_network();
  CHECK_THROWS_AS(verify_equilibrium(net, testsupport::fig2_demand(), TollScheme::zero(3),
                                     FlowProfile::zero(2), 1e-6),
                  std::invalid_argument);
}

TEST_CASE("zero autonomous demand reduces to the single-class equilibrium") {
  SplitMix64 rng(21);
  const testsupport::SuiteConfig cfg = testsupport::default_suite_config();
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = testsupport::random_network(rng, cfg);
    const double demand = rng.uniform(0.2, 5.0);
    EnumerationResult r =
        enumerate_equilibria(net, {demand, 0.0}, TollScheme::zero(net.size()));
    REQUIRE(r.equilibria.size() == 1);
    const FlowProfile expected = single_class_wardrop(net, demand);
    CHECK(r.equilibria[0].flow.distance(expected) < 1e-8);
    CHECK_FALSE(r.equilibria[0].lambda_autonomous.has_value());
  }
}

TEST_CASE("enumerated equilibria verify and match their supports") {
  SplitMix64 rng(22);
  const testsupport::SuiteConfig cfg = testsupport::default_suite_config();
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = testsupport::random_network(rng, cfg);
    const Demand demand = testsupport::random_demand(rng, cfg);
    EnumerationResult r = enumerate_equilibria(net, demand, TollScheme::zero(net.size()));
    for (const EquilibriumResult& eq : r.equilibria) {
      CHECK(verify_equilibrium(net, demand, TollScheme::zero(net.size()), eq.flow, 1e-7)
                .equilibrium);
      for (int i = 0; i < net.size(); ++i) {
        const bool in_h = std::binary_search(eq.pattern.human.begin(), eq.pattern.human.end(), i);
        const bool in_a = std::binary_search(eq.pattern.autonomous.begin(),
                                             eq.pattern.autonomous.end(), i);
        CHECK(in_h == (eq.flow.at(i).human > tol::support));
        CHECK(in_a == (eq.flow.at(i).autonomous > tol::support));
      }
    }
  }
}

TEST_CASE("enumeration output is deterministic") {
  const Network net = testsupport::fig2_network();
  const Demand demand = testsupport::fig2_demand();
  EnumerationResult a = enumerate_equilibria(net, demand, TollScheme::zero(3));
  EnumerationResult b = enumerate_equilibria(net, demand, TollScheme::zero(3));
  CHECK(io::dump_report(io::enumeration_report(net, demand, TollScheme::zero(3), a)) ==
        io::dump_report(io::enumeration_report(net, demand, TollScheme::zero(3), b)));
}

TEST_CASE("the empty-set error carries the degeneracy report") {
  EnumerationResult report;
  report.degenerate.push_back({{0, 1}, {0, 1}});
  NoIsolatedEquilibrium error(report);
  CHECK(error.report.degenerate.size() == 1);
  CHECK(std::string(error.what()).find("no isolated equilibrium") != std::string::npos);
}
