#include "routing/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "routing/equilibrium.hpp"

namespace routing {

double xi(int sigma) {
  if (sigma < 1) throw std::domain_error("xi requires sigma >= 1");
  const double s = sigma;
  return s * std::pow(s + 1.0, -(s + 1.0) / s);
}

double price_of_autonomy_bound(double k, int sigma) {
  if (k < 1.0) throw std::domain_error("price-of-autonomy bound requires k >= 1");
  return std::pow(k, sigma) / (1.0 - xi(sigma));
}

double network_asymmetry(const Network& network) {
  // Human coefficient k*a over autonomous coefficient a: the ratio is k_i.
  double k = 0.0;
  for (const Road& r : network.roads()) k = std::max(k, r.k);
  return k;
}

AutonomyRatio empirical_autonomy_ratio(const Network& network, double total_demand,
                                       double human_fraction) {
  if (!(total_demand > 0.0)) throw std::domain_error("total demand must be positive");
  if (human_fraction < 0.0 || human_fraction > 1.0)
    throw std::domain_error("human fraction must lie in [0, 1]");

  const TollScheme no_tolls = TollScheme::zero(network.size());
  const Demand all_human{total_demand, 0.0};
  const Demand mixed{human_fraction * total_demand, (1.0 - human_fraction) * total_demand};

  AutonomyRatio out;
  out.all_human_cost = worst_equilibrium(network, all_human, no_tolls).social_cost;
  out.mixed_cost = worst_equilibrium(network, mixed, no_tolls).social_cost;
  out.ratio = out.mixed_cost / out.all_human_cost;
  return out;
}

}  // namespace routing
