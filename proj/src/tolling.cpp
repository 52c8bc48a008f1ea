#include "routing/tolling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "routing/equilibrium.hpp"

namespace routing {

double default_mu(const Network& network, const OptimumResult& optimum) {
  double mu = 0.0;
  for (int i = 0; i < network.size(); ++i) {
    const RoadFlow& f = optimum.flow.at(i);
    if (f.total() > tol::support)
      mu = std::max(mu, latency(network.road(i), f.human, f.autonomous));
  }
  return mu;
}

double min_required_P(const Network& network, double mu) {
  double min_t = std::numeric_limits<double>::infinity();
  for (const Road& r : network.roads()) min_t = std::min(min_t, r.t);
  return mu - min_t;
}

double default_P(const Network& network, double mu) {
  return std::max(0.0, min_required_P(network, mu)) + 1.0;
}

TollScheme synthesize_differentiated_tolls(const Network& network,
                                           const OptimumResult& optimum,
                                           const TollSynthesisConfig& config) {
  optimum.flow.validate(network, Demand{optimum.flow.total_human(), optimum.flow.total_autonomous()});
  if (count_mixed_roads(optimum.flow, tol::support) > 1)
    throw std::invalid_argument("toll synthesis requires an optimum with at most one mixed road");
  if (!std::isfinite(config.mu)) throw std::invalid_argument("mu must be finite");

  const double P = config.P.value_or(default_P(network, config.mu));
  if (P < min_required_P(network, config.mu))
    throw std::invalid_argument("P = " + std::to_string(P) + " is below the required bound " +
                                std::to_string(min_required_P(network, config.mu)) +
                                " (mu minus the smallest free-flow latency)");

  TollScheme tolls = TollScheme::zero(network.size());
  for (int i = 0; i < network.size(); ++i) {
    const RoadFlow& f = optimum.flow.at(i);
    const double ell = latency(network.road(i), f.human, f.autonomous);
    tolls.at(i).human = (f.human > tol::support) ? config.mu - ell : P;
    tolls.at(i).autonomous = (f.autonomous > tol::support) ? config.mu - ell : P;
  }
  return tolls;
}

TwoRoadUndiffResult best_undifferentiated_toll_two_road(double k) {
  if (k < 1.0) throw std::domain_error("two-road family requires k >= 1");
  // Worst-equilibrium cost with human split x onto the tolled road:
  //   g(x) = (k+1) x^2 - (3+k) x + 2 + 2k,  minimized on [0, 1].
  TwoRoadUndiffResult out;
  out.human_flow_road1 = std::clamp((3.0 + k) / (2.0 * (k + 1.0)), 0.0, 1.0);
  out.toll_road1 = (k + 1.0) * (1.0 - out.human_flow_road1);
  out.worst_cost = (7.0 * k + 3.0) / 4.0 - 1.0 / (k + 1.0);
  return out;
}

UndiffSearchResult undiff_toll_search(const Network& network, const Demand& demand,
                                      const TollGridSpec& spec) {
  demand.validate();
  const int n = network.size();
  if (n > 4) throw std::invalid_argument("undifferentiated toll search supports at most 4 roads");
  if (!(spec.step > 0.0)) throw std::invalid_argument("toll grid step must be positive");
  if (spec.hi < spec.lo) throw std::invalid_argument("toll grid upper bound below lower bound");

  const int per_axis = static_cast<int>(std::floor((spec.hi - spec.lo) / spec.step + 1e-9)) + 1;
  double total = 1.0;
  for (int i = 0; i + 1 < n; ++i) total *= per_axis;
  if (total > 1e7)
    throw std::invalid_argument("toll grid would hold about " + std::to_string(total) + " points");

  UndiffSearchResult out;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> best_tolls;

  std::vector<int> idx(static_cast<std::size_t>(std::max(0, n - 1)), 0);
  while (true) {
    std::vector<double> values(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i + 1 < n; ++i) values[static_cast<std::size_t>(i)] = spec.lo + idx[static_cast<std::size_t>(i)] * spec.step;

    TollScheme tolls = TollScheme::zero(n);
    for (int i = 0; i < n; ++i) tolls.at(i) = {values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(i)]};

    try {
      const double cost = worst_equilibrium(network, demand, tolls).social_cost;
      if (cost < best_cost || (cost == best_cost && values < best_tolls)) {
        best_cost = cost;
        best_tolls = values;
        out.tolls = tolls;
      }
    } catch (const NoIsolatedEquilibrium&) {
      out.skipped.push_back(values);
    }

    int axis = 0;
    for (; axis < n - 1; ++axis) {
      if (++idx[static_cast<std::size_t>(axis)] < per_axis) break;
      idx[static_cast<std::size_t>(axis)] = 0;
    }
    if (axis >= n - 1) break;
  }

  if (!std::isfinite(best_cost))
    throw std::runtime_error("every toll grid point lacked an isolated equilibrium");
  out.worst_cost = best_cost;
  return out;
}

}  // namespace routing
