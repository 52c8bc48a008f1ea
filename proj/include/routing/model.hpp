#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Core data model for two-class (human-driven / autonomous) routing on a
// network of parallel roads with heterogeneous affine latencies
//
//   latency_i(f_h, f_a) = k_i * a_i * f_h + a_i * f_a + t_i
//
// Human flow congests road i by the factor k_i relative to autonomous flow.
// All values are immutable after construction; every function here is pure.

namespace routing {

namespace tol {
// Absolute tolerance on demand conservation of a flow profile.
inline constexpr double conservation = 1e-9;
// Flows above this count as "strictly positive" (support membership).
inline constexpr double support = 1e-9;
// LU pivots below this flag a support-pattern system as degenerate.
inline constexpr double pivot = 1e-9;
// Slack allowed on off-support equilibrium / optimality inequalities.
inline constexpr double inequality = 1e-9;
// KKT off-support marginal-cost feasibility.
inline constexpr double multiplier = 1e-8;
// Flow-profile distance below which two equilibria are duplicates.
inline constexpr double dedup = 1e-7;
// Default tolerance for verify_equilibrium.
inline constexpr double verify_default = 1e-7;
}  // namespace tol

enum class VehicleClass { Human, Autonomous };

const char* to_string(VehicleClass c);

struct Road {
  double a = 1.0;  // congestion coefficient, delay per unit autonomous flow; > 0
  double k = 1.0;  // human asymmetry factor (human flow adds k*a delay per unit); > 0
  double t = 0.0;  // free-flow latency; >= 0

  void validate() const;  // throws std::invalid_argument on bad parameters
};

class Network {
 public:
  explicit Network(std::vector<Road> roads);

  int size() const { return static_cast<int>(roads_.size()); }
  const Road& road(int i) const { return roads_.at(static_cast<std::size_t>(i)); }
  const std::vector<Road>& roads() const { return roads_; }

 private:
  std::vector<Road> roads_;
};

struct Demand {
  double human = 0.0;
  double autonomous = 0.0;

  // Solver entry points additionally require at least one positive component.
  void validate() const;
  double total() const { return human + autonomous; }
};

struct RoadFlow {
  double human = 0.0;
  double autonomous = 0.0;

  double total() const { return human + autonomous; }
};

// Per-road nonnegative (human, autonomous) flows, one entry per road of the
// associated network. Conservation against a Demand is checked explicitly
// where a profile enters a solver or is read from a file.
struct FlowProfile {
  std::vector<RoadFlow> flows;

  FlowProfile() = default;
  explicit FlowProfile(std::vector<RoadFlow> f) : flows(std::move(f)) {}
  static FlowProfile zero(int n_roads) { return FlowProfile(std::vector<RoadFlow>(static_cast<std::size_t>(n_roads))); }

  int size() const { return static_cast<int>(flows.size()); }
  const RoadFlow& at(int i) const { return flows.at(static_cast<std::size_t>(i)); }
  RoadFlow& at(int i) { return flows.at(static_cast<std::size_t>(i)); }

  double total_human() const;
  double total_autonomous() const;

  // Throws std::invalid_argument if sizes mismatch, any flow is negative,
  // or the per-class sums deviate from the demand by more than `tolerance`.
  void validate(const Network& network, const Demand& demand,
                double tolerance = tol::conservation) const;

  // Max absolute componentwise distance to another profile of equal size.
  double distance(const FlowProfile& other) const;
};

struct RoadToll {
  double human = 0.0;
  double autonomous = 0.0;
};

// Per-road, per-class tolls. Negative values are subsidies and are legal;
// policy about them lives in the tolling module, not here.
struct TollScheme {
  std::vector<RoadToll> tolls;

  TollScheme() = default;
  explicit TollScheme(std::vector<RoadToll> t) : tolls(std::move(t)) {}
  static TollScheme zero(int n_roads) { return TollScheme(std::vector<RoadToll>(static_cast<std::size_t>(n_roads))); }

  int size() const { return static_cast<int>(tolls.size()); }
  const RoadToll& at(int i) const { return tolls.at(static_cast<std::size_t>(i)); }
  RoadToll& at(int i) { return tolls.at(static_cast<std::size_t>(i)); }

  // True iff both classes pay exactly the same toll on every road.
  bool is_undifferentiated() const;

  void validate(const Network& network) const;  // length check
};

// Affine road latency k*a*f_h + a*f_a + t. Throws std::domain_error on
// negative flow.
double latency(const Road& road, double f_h, double f_a);

// Experienced cost of one user class on a road: latency plus that class's toll.
double class_cost(const Road& road, double f_h, double f_a, double toll);

// Total experienced delay sum_i (f_h_i + f_a_i) * latency_i. Tolls are
// transfers and excluded. Throws std::invalid_argument on length mismatch.
double social_cost(const Network& network, const FlowProfile& flow);

}  // namespace routing
