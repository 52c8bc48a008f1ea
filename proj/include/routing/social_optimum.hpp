#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "routing/equilibrium.hpp"
#include "routing/model.hpp"

// Social-cost minimization. The per-road-pair exchange Hessian is
// indefinite whenever a_i(k_i-1) + a_j(k_j-1) != 0, so generic convex
// solvers do not apply. Instead: any optimum then shares at most one road
// between the classes, so we enumerate candidate structures (mixed road m
// or none, human support, autonomous support intersecting at most in m),
// solve each small linear KKT stationarity system exactly, and keep the
// cheapest feasible candidate. A brute-force simplex-grid oracle provides
// an independent cross-check.

namespace routing {

// Gradient of a road's contribution to social cost:
//   d/df_h = 2*k*a*f_h + a*(1+k)*f_a + t
//   d/df_a = a*(1+k)*f_h + 2*a*f_a + t
std::pair<double, double> marginal_costs(const Road& road, double f_h, double f_a);

struct RoadPairHessian {
  std::array<std::array<double, 2>, 2> matrix{};
  double determinant = 0.0;  // computed directly from the matrix entries
};

// Hessian of the two-road exchange cost in (f_h_i, f_a_i). Its determinant
// equals -(a_i(k_i-1) + a_j(k_j-1))^2, so it is indefinite unless that sum
// vanishes.
RoadPairHessian road_pair_hessian(const Road& road_i, const Road& road_j);

struct OptimumResult {
  FlowProfile flow;
  double social_cost = 0.0;
  std::vector<int> mixed_roads;             // both classes above tol::support
  SupportPattern pattern;                   // candidate support that produced the flow
  std::optional<double> multiplier_human;   // stationarity multiplier per class
  std::optional<double> multiplier_autonomous;
  // False when more than one k_i = 1 (or an exchange Hessian is singular)
  // forced full support enumeration; the one-mixed-road guarantee is void.
  bool structural_guarantee = true;
};

// Number of roads carrying both classes above `tolerance`.
int count_mixed_roads(const FlowProfile& flow, double tolerance);

// Globally optimal routing via KKT candidate enumeration. Throws
// std::invalid_argument past the enumeration cap.
OptimumResult optimal_routing(const Network& network, const Demand& demand,
                              int max_roads = kDefaultEnumerationCap);

struct GridOracleResult {
  FlowProfile flow;
  double social_cost = 0.0;
  // Lipschitz bound on social_cost - true optimal cost for this resolution.
  double gap_bound = 0.0;
};

// Brute-force minimum over a simplex grid of both classes' flow splits.
// `resolution` is the grid step as a fraction of each class demand.
// Throws std::invalid_argument when the grid would exceed `max_points`
// (the message carries the size estimate).
GridOracleResult grid_oracle(const Network& network, const Demand& demand,
                             double resolution = 0.01, double max_points = 5e8);

}  // namespace routing
