#include "routing/model.hpp"

#include <cmath>
#include <stdexcept>

namespace routing {

const char* to_string(VehicleClass c) {
  return c == VehicleClass::Human ? "human" : "autonomous";
}

void Road::validate() const {
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("road congestion coefficient a must be strictly positive");
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("road asymmetry factor k must be strictly positive");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("road free-flow latency t must be nonnegative");
}

Network::Network(std::vector<Road> roads) : roads_(std::move(roads)) {
  if (roads_.empty()) throw std::invalid_argument("network needs at least one road");
  for (const Road& r : roads_) r.validate();
}

void Demand::validate() const {
  if (!(human >= 0.0) || !(autonomous >= 0.0) || !std::isfinite(human) || !std::isfinite(autonomous))
    throw std::invalid_argument("demands must be nonnegative");
  if (human <= 0.0 && autonomous <= 0.0)
    throw std::invalid_argument("at least one demand class must be positive");
}

double FlowProfile::total_human() const {
  double s = 0.0;
  for (const RoadFlow& f : flows) s += f.human;
  return s;
}

double FlowProfile::total_autonomous() const {
  double s = 0.0;
  for (const RoadFlow& f : flows) s += f.autonomous;
  return s;
}

void FlowProfile::validate(const Network& network, const Demand& demand, double tolerance) const {
  if (size() != network.size())
    throw std::invalid_argument("flow profile length does not match network");
  for (const RoadFlow& f : flows) {
    if (f.human < 0.0 || f.autonomous < 0.0)
      throw std::invalid_argument("flows must be nonnegative");
  }
  if (std::abs(total_human() - demand.human) > tolerance)
    throw std::invalid_argument("human flows do not conserve demand");
  if (std::abs(total_autonomous() - demand.autonomous) > tolerance)
    throw std::invalid_argument("autonomous flows do not conserve demand");
}

double FlowProfile::distance(const FlowProfile& other) const {
  if (size() != other.size())
    throw std::invalid_argument("flow profile sizes differ");
  double d = 0.0;
  for (int i = 0; i < size(); ++i) {
    d = std::max(d, std::abs(flows[static_cast<std::size_t>(i)].human - other.flows[static_cast<std::size_t>(i)].human));
    d = std::max(d, std::abs(flows[static_cast<std::size_t>(i)].autonomous - other.flows[static_cast<std::size_t>(i)].autonomous));
  }
  return d;
}

bool TollScheme::is_undifferentiated() const {
  for (const RoadToll& rt : tolls)
    if (rt.human != rt.autonomous) return false;
  return true;
}

void TollScheme::validate(const Network& network) const {
  if (size() != network.size())
    throw std::invalid_argument("toll scheme length does not match network");
}

double latency(const Road& road, double f_h, double f_a) {
  if (f_h < 0.0 || f_a < 0.0) throw std::domain_error("latency requires nonnegative flows");
  return road.k * road.a * f_h + road.a * f_a + road.t;
}

double class_cost(const Road& road, double f_h, double f_a, double toll) {
  return latency(road, f_h, f_a) + toll;
}

double social_cost(const Network& network, const FlowProfile& flow) {
  if (flow.size() != network.size())
    throw std::invalid_argument("flow profile length does not match network");
  double cost = 0.0;
  for (int i = 0; i < network.size(); ++i) {
    const RoadFlow& f = flow.at(i);
    cost += f.total() * latency(network.road(i), f.human, f.autonomous);
  }
  return cost;
}

}  // namespace routing
