#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "routing/model.hpp"

// Wardrop equilibria of the two-class routing game under per-class tolls.
//
// Fixing which roads each class uses (a support pattern) turns the
// equilibrium conditions into a square linear system: one equal-cost
// equation per supported (road, class) plus one demand equation per class
// with positive demand. Enumerating all patterns and keeping the solutions
// that satisfy strict positivity and the off-support inequalities yields
// every isolated equilibrium; rank-deficient systems signal continua and
// are flagged instead of solved.

namespace routing {

// Sorted road-index sets with positive human / autonomous flow.
struct SupportPattern {
  std::vector<int> human;
  std::vector<int> autonomous;

  bool operator==(const SupportPattern&) const = default;
};

// Lexicographic order on (human, autonomous) index lists.
bool pattern_less(const SupportPattern& lhs, const SupportPattern& rhs);

struct EquilibriumResult {
  FlowProfile flow;
  std::optional<double> lambda_human;      // common experienced cost, absent if class demand is zero
  std::optional<double> lambda_autonomous;
  SupportPattern pattern;
  double social_cost = 0.0;
};

enum class PatternStatus { Solved, Infeasible, Degenerate };

struct PatternSolve {
  PatternStatus status = PatternStatus::Infeasible;
  std::optional<EquilibriumResult> result;  // set iff status == Solved
};

// Solves the equal-cost linear system for one support pattern. Returns
// Solved with the unique equilibrium when all support flows exceed the
// support tolerance and off-support roads cost no less than the class
// cost; Infeasible when a sign or inequality condition fails; Degenerate
// when an LU pivot of the system matrix falls below tol::pivot.
PatternSolve solve_support_pattern(const Network& network, const Demand& demand,
                                   const TollScheme& tolls, const SupportPattern& pattern);

struct EnumerationResult {
  std::vector<EquilibriumResult> equilibria;    // cost ascending, ties by pattern
  std::vector<SupportPattern> degenerate;       // patterns with rank-deficient systems
};

constexpr int kDefaultEnumerationCap = 12;

struct NoIsolatedEquilibrium : std::runtime_error {
  explicit NoIsolatedEquilibrium(EnumerationResult report);
  EnumerationResult report;
};

// Exhaustive search over all support patterns (at most 2^n per class).
// Output is deduplicated (flow distance < tol::dedup, keeping the
// instance whose pattern equals the strict support) and deterministic.
// Throws std::invalid_argument when the network exceeds `max_roads`.
EnumerationResult enumerate_equilibria(const Network& network, const Demand& demand,
                                       const TollScheme& tolls,
                                       int max_roads = kDefaultEnumerationCap);

// Max / min social-cost elements of enumerate_equilibria. Throw
// NoIsolatedEquilibrium (carrying the degeneracy report) on an empty set.
EquilibriumResult worst_equilibrium(const Network& network, const Demand& demand,
                                    const TollScheme& tolls,
                                    int max_roads = kDefaultEnumerationCap);
EquilibriumResult best_equilibrium(const Network& network, const Demand& demand,
                                   const TollScheme& tolls,
                                   int max_roads = kDefaultEnumerationCap);

struct WardropViolation {
  int road = 0;
  VehicleClass vehicle_class = VehicleClass::Human;
  double slack = 0.0;  // amount by which the condition is broken
};

struct VerifyResult {
  bool equilibrium = false;
  std::optional<double> lambda_human;
  std::optional<double> lambda_autonomous;
  std::vector<WardropViolation> violations;
};

// Checks the Wardrop conditions of `flow` under `tolls`: used roads of a
// class share one experienced cost, unused roads cost no less. The class
// cost is taken as the minimum over that class's used roads.
VerifyResult verify_equilibrium(const Network& network, const Demand& demand,
                                const TollScheme& tolls, const FlowProfile& flow,
                                double tolerance = tol::verify_default);

}  // namespace routing
