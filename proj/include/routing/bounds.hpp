#pragma once

#include "routing/model.hpp"

// Price-of-autonomy bound k^sigma / (1 - xi(sigma)) and the empirical
// equilibrium-cost ratio it dominates: worst mixed-autonomy equilibrium cost
// over the all-human equilibrium cost at the same total demand.

namespace routing {

// xi(sigma) = sigma * (sigma + 1)^(-(sigma + 1) / sigma); lies in (0, 1)
// and increases with sigma. Throws std::domain_error for sigma < 1.
double xi(int sigma);

// k^sigma / (1 - xi(sigma)); at least 4/3. Requires k >= 1, sigma >= 1.
double price_of_autonomy_bound(double k, int sigma);

// Maximum per-road asymmetry: the ratio of a road's human latency
// coefficient (k*a) to its autonomous one (a), maximized over roads.
// For this affine model that is simply max_i k_i.
double network_asymmetry(const Network& network);

struct AutonomyRatio {
  double ratio = 0.0;
  double mixed_cost = 0.0;      // worst equilibrium at (h*f, (1-h)*f)
  double all_human_cost = 0.0;  // equilibrium at (f, 0)
};

// Splits `total_demand` into a human share `human_fraction` and compares the
// worst mixed equilibrium against the all-human one, both without tolls.
AutonomyRatio empirical_autonomy_ratio(const Network& network, double total_demand,
                                       double human_fraction);

}  // namespace routing
