#include <doctest.h>

#include <stdexcept>

#include "routing/io.hpp"
#include "support/test_support.hpp"

using namespace routing;
using io::json;

TEST_CASE("network files parse strictly") {
  json good = json::parse(R"({
    "roads": [{"a": 1.0, "k": 4.0, "t": 0.5}, {"a": 1.0, "k": 2.0, "t": 1.0}],
    "demand": {"human": 1.0, "autonomous": 0.5}
  })");
  io::NetworkFile file = io::parse_network_file(good);
  CHECK(file.network.size() == 2);
  CHECK(file.network.road(0).k == 4.0);
  CHECK(file.demand.human == 1.0);
  CHECK_FALSE(file.tolls.has_value());

  SUBCASE("unknown top-level field") {
    good["speed_limit"] = 30;
    CHECK_THROWS_WITH_AS(io::parse_network_file(good), doctest::Contains("unknown field"),
                         std::runtime_error);
  }
  SUBCASE("unknown road field") {
    good["roads"][0]["lanes"] = 2;
    CHECK_THROWS_WITH_AS(io::parse_network_file(good), doctest::Contains("unknown field"),
                         std::runtime_error);
  }
  SUBCASE("missing demand component") {
    good["demand"].erase("autonomous");
    CHECK_THROWS_WITH_AS(io::parse_network_file(good), doctest::Contains("missing field"),
                         std::runtime_error);
  }
  SUBCASE("non-numeric entry") {
    good["roads"][0]["a"] = "fast";
    CHECK_THROWS_AS(io::parse_network_file(good), std::runtime_error);
  }
  SUBCASE("invalid road parameters are rejected by the model") {
    good["roads"][0]["a"] = -1.0;
    CHECK_THROWS_AS(io::parse_network_file(good), std::invalid_argument);
  }
}

TEST_CASE("toll arrays ride along in network files") {
  json j = json::parse(R"({
    "roads": [{"a": 1.0, "k": 2.0, "t": 0.0}, {"a": 2.0, "k": 0.5, "t": 0.0}],
    "demand": {"human": 1.0, "autonomous": 1.0},
    "tolls": [{"human": 0.5, "autonomous": 0.5}, {"human": 0.0, "autonomous": 0.0}]
  })");
  io::NetworkFile file = io::parse_network_file(j);
  REQUIRE(file.tolls.has_value());
  CHECK(file.tolls->at(0).human == 0.5);
  CHECK(file.tolls->is_undifferentiated());

  j["tolls"].erase(1);
  CHECK_THROWS_AS(io::parse_network_file(j), std::invalid_argument);  // length mismatch
}

TEST_CASE("reports can be re-ingested as flow and toll inputs") {
  const Network net = testsupport::fig2_network();
  const Demand demand = testsupport::fig2_demand();
  OptimumResult opt = optimal_routing(net, demand);

  json report = io::optimum_report(net, demand, opt);
  FlowProfile flow = io::parse_flows_file(report);
  CHECK(flow.size() == 3);
  CHECK(flow.distance(opt.flow) < 1e-8);  // 9 significant digits

  TollScheme tolls = synthesize_differentiated_tolls(net, opt, {3.0, std::nullopt});
  EnumerationResult under = enumerate_equilibria(net, demand, tolls);
  json synth = io::synthesis_report(net, demand, opt, 3.0, 3.5, tolls, under);
  TollScheme round_trip = io::parse_tolls_file(synth);
  REQUIRE(round_trip.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(round_trip.at(i).human - tolls.at(i).human) < 1e-7);
    CHECK(std::abs(round_trip.at(i).autonomous - tolls.at(i).autonomous) < 1e-7);
  }
}

TEST_CASE("numbers are clipped to nine significant digits") {
  CHECK(io::format9(1.0 / 3.0) == "0.333333333");
  CHECK(io::format9(25.625) == "25.625");
  CHECK(io::format9(-0.0) == "0");
  CHECK(io::round9(1.0 / 3.0) == 0.333333333);
  CHECK(io::round9(123456789.25) == 123456789.0);
  CHECK_THROWS_AS(io::round9(std::numeric_limits<double>::infinity()), std::runtime_error);
}

TEST_CASE("csv mirrors the table layout") {
  const Network net = testsupport::fig2_network();
  FlowProfile worst({{1.125, 0.0}, {1.5, 1.0}, {0.0, 1.5}});
  const std::string csv = io::routing_csv(net, worst, nullptr);
  CHECK(csv.find("road,human,autonomous,latency,toll_human,toll_autonomous\n") == 0);
  CHECK(csv.find("\n0,1.125,0,5,,") != std::string::npos);
  CHECK(csv.find("\n1,1.5,1,5,,") != std::string::npos);
  CHECK(csv.find("\n2,0,1.5,5,,") != std::string::npos);
}

TEST_CASE("flows and tolls files validate their shapes") {
  CHECK_THROWS_AS(io::parse_flows_file(json::parse(R"({"flows": []})")), std::runtime_error);
  CHECK_THROWS_AS(io::parse_flows_file(json::parse(R"({"routes": [1]})")), std::runtime_error);
  CHECK_THROWS_AS(io::parse_flows_file(json::parse(R"({"flows": [{"human": 1}]})")),
                  std::runtime_error);
  CHECK_THROWS_AS(io::parse_tolls_file(json::parse(R"({"tolls": [{"human": 1, "autonomous": 0, "x": 2}]})")),
                  std::runtime_error);
}
