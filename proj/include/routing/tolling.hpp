#pragma once

#include <optional>
#include <vector>

#include "routing/model.hpp"
#include "routing/social_optimum.hpp"

// Toll synthesis. Given a socially optimal routing f*, each class pays a
// prohibitive toll P on the roads it does not use in f* and mu - latency_i(f*)
// elsewhere, so every user experiences exactly mu on its allowed roads and at
// least mu anywhere else; all equilibria under these tolls then cost the same
// as f*. Undifferentiated tolls (equal for both classes) cannot achieve this
// in general; the two-road closed form and a grid search quantify how close
// they get.

namespace routing {

struct TollSynthesisConfig {
  double mu = 0.0;                 // target equilibrium experienced cost
  std::optional<double> P;         // prohibitive toll; auto-computed when absent
};

// Largest used-road latency under the optimum; the smallest mu for which
// every non-prohibitive toll is nonnegative.
double default_mu(const Network& network, const OptimumResult& optimum);

// Smallest P this library accepts for a given mu; any user of a P-tolled
// road then pays at least mu even at zero flow.
double min_required_P(const Network& network, double mu);

// max(0, mu - min_i t_i) + 1: min_required_P with a unit safety margin.
double default_P(const Network& network, double mu);

// Per-class tolls enforcing the optimum: P on roads a class does not use in
// the optimum (empty roads are prohibited for both classes), mu - latency
// elsewhere. Requires at most one mixed road and, when config.P is given,
// P >= min_required_P; throws std::invalid_argument otherwise.
TollScheme synthesize_differentiated_tolls(const Network& network,
                                           const OptimumResult& optimum,
                                           const TollSynthesisConfig& config);

struct TwoRoadUndiffResult {
  double human_flow_road1 = 0.0;  // optimal human split onto the tolled road
  double toll_road1 = 0.0;        // undifferentiated toll inducing that split
  double worst_cost = 0.0;        // (7k + 3)/4 - 1/(k + 1)
};

// Best undifferentiated toll on the two-road family l1 = k f_h + f_a,
// l2 = f_h + k f_a with unit demand per class, via the closed-form minimizer
// of the worst-equilibrium cost. Throws std::domain_error for k < 1.
TwoRoadUndiffResult best_undifferentiated_toll_two_road(double k);

struct TollGridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

struct UndiffSearchResult {
  TollScheme tolls;
  double worst_cost = 0.0;
  // Toll vectors whose enumeration produced no isolated equilibrium.
  std::vector<std::vector<double>> skipped;
};

// Minimizes the worst-equilibrium cost over undifferentiated toll vectors on
// a grid. Road n's toll is pinned to zero: on a parallel network only toll
// differences matter. Requires n <= 4.
UndiffSearchResult undiff_toll_search(const Network& network, const Demand& demand,
                                      const TollGridSpec& spec);

}  // namespace routing
