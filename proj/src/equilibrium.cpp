#include "routing/equilibrium.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace routing {

namespace {

std::vector<int> mask_to_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

bool contains(const std::vector<int>& sorted, int value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

SupportPattern strict_support(const FlowProfile& flow) {
  SupportPattern p;
  for (int i = 0; i < flow.size(); ++i) {
    if (flow.at(i).human > tol::support) p.human.push_back(i);
    if (flow.at(i).autonomous > tol::support) p.autonomous.push_back(i);
  }
  return p;
}

}  // namespace

bool pattern_less(const SupportPattern& lhs, const SupportPattern& rhs) {
  if (lhs.human != rhs.human)
    return std::lexicographical_compare(lhs.human.begin(), lhs.human.end(),
                                        rhs.human.begin(), rhs.human.end());
  return std::lexicographical_compare(lhs.autonomous.begin(), lhs.autonomous.end(),
                                      rhs.autonomous.begin(), rhs.autonomous.end());
}

NoIsolatedEquilibrium::NoIsolatedEquilibrium(EnumerationResult r)
    : std::runtime_error("no isolated equilibrium: every support pattern was infeasible or degenerate"),
      report(std::move(r)) {}

PatternSolve solve_support_pattern(const Network& network, const Demand& demand,
                                   const TollScheme& tolls, const SupportPattern& pattern) {
  demand.validate();
  tolls.validate(network);
  const int n = network.size();
  for (int i : pattern.human)
    if (i < 0 || i >= n) throw std::invalid_argument("human support index out of range");
  for (int i : pattern.autonomous)
    if (i < 0 || i >= n) throw std::invalid_argument("autonomous support index out of range");

  const bool has_human = demand.human > 0.0;
  const bool has_auto = demand.autonomous > 0.0;
  if (!has_human && !pattern.human.empty())
    throw std::invalid_argument("zero human demand requires an empty human support");
  if (!has_auto && !pattern.autonomous.empty())
    throw std::invalid_argument("zero autonomous demand requires an empty autonomous support");
  if (has_human && pattern.human.empty())
    throw std::invalid_argument("positive human demand requires a nonempty human support");
  if (has_auto && pattern.autonomous.empty())
    throw std::invalid_argument("positive autonomous demand requires a nonempty autonomous support");

  const int nh = static_cast<int>(pattern.human.size());
  const int na = static_cast<int>(pattern.autonomous.size());
  const int dim = nh + na + (has_human ? 1 : 0) + (has_auto ? 1 : 0);
  const int col_lambda_h = nh + na;
  const int col_lambda_a = nh + na + (has_human ? 1 : 0);

  // Column index of a road's flow variable within the system, -1 if fixed to 0.
  auto hcol = [&](int road) {
    auto it = std::lower_bound(pattern.human.begin(), pattern.human.end(), road);
    return (it != pattern.human.end() && *it == road)
               ? static_cast<int>(it - pattern.human.begin())
               : -1;
  };
  auto acol = [&](int road) {
    auto it = std::lower_bound(pattern.autonomous.begin(), pattern.autonomous.end(), road);
    return (it != pattern.autonomous.end() && *it == road)
               ? nh + static_cast<int>(it - pattern.autonomous.begin())
               : -1;
  };

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  int row = 0;
  for (int i : pattern.human) {
    const Road& r = network.road(i);
    A(row, hcol(i)) = r.k * r.a;
    if (int c = acol(i); c >= 0) A(row, c) = r.a;
    A(row, col_lambda_h) = -1.0;
    b(row) = -r.t - tolls.at(i).human;
    ++row;
  }
  for (int i : pattern.autonomous) {
    const Road& r = network.road(i);
    if (int c = hcol(i); c >= 0) A(row, c) = r.k * r.a;
    A(row, acol(i)) = r.a;
    A(row, col_lambda_a) = -1.0;
    b(row) = -r.t - tolls.at(i).autonomous;
    ++row;
  }
  if (has_human) {
    for (int c = 0; c < nh; ++c) A(row, c) = 1.0;
    b(row) = demand.human;
    ++row;
  }
  if (has_auto) {
    for (int c = 0; c < na; ++c) A(row, nh + c) = 1.0;
    b(row) = demand.autonomous;
    ++row;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < tol::pivot)
    return {PatternStatus::Degenerate, std::nullopt};
  const Eigen::VectorXd x = lu.solve(b);

  FlowProfile flow = FlowProfile::zero(n);
  for (int j = 0; j < nh; ++j) {
    const double v = x(j);
    if (v <= tol::support) return {PatternStatus::Infeasible, std::nullopt};
    flow.at(pattern.human[static_cast<std::size_t>(j)]).human = v;
  }
  for (int j = 0; j < na; ++j) {
    const double v = x(nh + j);
    if (v <= tol::support) return {PatternStatus::Infeasible, std::nullopt};
    flow.at(pattern.autonomous[static_cast<std::size_t>(j)]).autonomous = v;
  }
  if (std::abs(flow.total_human() - demand.human) > tol::conservation ||
      std::abs(flow.total_autonomous() - demand.autonomous) > tol::conservation)
    return {PatternStatus::Infeasible, std::nullopt};

  std::optional<double> lambda_h, lambda_a;
  if (has_human) lambda_h = x(col_lambda_h);
  if (has_auto) lambda_a = x(col_lambda_a);

  // Off-support roads must cost each class at least its common cost.
  for (int i = 0; i < n; ++i) {
    const RoadFlow& f = flow.at(i);
    if (has_human && !contains(pattern.human, i)) {
      const double c = class_cost(network.road(i), f.human, f.autonomous, tolls.at(i).human);
      if (c < *lambda_h - tol::inequality) return {PatternStatus::Infeasible, std::nullopt};
    }
    if (has_auto && !contains(pattern.autonomous, i)) {
      const double c = class_cost(network.road(i), f.human, f.autonomous, tolls.at(i).autonomous);
      if (c < *lambda_a - tol::inequality) return {PatternStatus::Infeasible, std::nullopt};
    }
  }

  EquilibriumResult result;
  result.social_cost = social_cost(network, flow);
  result.flow = std::move(flow);
  result.lambda_human = lambda_h;
  result.lambda_autonomous = lambda_a;
  result.pattern = pattern;
  return {PatternStatus::Solved, std::move(result)};
}

EnumerationResult enumerate_equilibria(const Network& network, const Demand& demand,
                                       const TollScheme& tolls, int max_roads) {
  demand.validate();
  tolls.validate(network);
  const int n = network.size();
  if (n > max_roads)
    throw std::invalid_argument("network has " + std::to_string(n) +
                                " roads, exceeding the enumeration cap of " +
                                std::to_string(max_roads));

  const bool has_human = demand.human > 0.0;
  const bool has_auto = demand.autonomous > 0.0;
  const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);

  std::vector<std::uint32_t> human_masks, auto_masks;
  if (has_human)
    for (std::uint32_t m = 1; m <= full; ++m) human_masks.push_back(m);
  else
    human_masks.push_back(0);
  if (has_auto)
    for (std::uint32_t m = 1; m <= full; ++m) auto_masks.push_back(m);
  else
    auto_masks.push_back(0);

  EnumerationResult out;
  for (std::uint32_t hm : human_masks) {
    for (std::uint32_t am : auto_masks) {
      SupportPattern pattern{mask_to_indices(hm), mask_to_indices(am)};
      PatternSolve solve = solve_support_pattern(network, demand, tolls, pattern);
      if (solve.status == PatternStatus::Degenerate) {
        out.degenerate.push_back(std::move(pattern));
      } else if (solve.status == PatternStatus::Solved) {
        out.equilibria.push_back(std::move(*solve.result));
      }
    }
  }

  // Dedup near-identical flows; prefer the instance whose pattern is the
  // strict support, then the lexicographically smallest pattern.
  std::vector<EquilibriumResult> unique;
  for (EquilibriumResult& candidate : out.equilibria) {
    bool merged = false;
    for (EquilibriumResult& kept : unique) {
      if (kept.flow.distance(candidate.flow) < tol::dedup) {
        const bool cand_strict = candidate.pattern == strict_support(candidate.flow);
        const bool kept_strict = kept.pattern == strict_support(kept.flow);
        if ((cand_strict && !kept_strict) ||
            (cand_strict == kept_strict && pattern_less(candidate.pattern, kept.pattern)))
          kept = std::move(candidate);
        merged = true;
        break;
      }
    }
    if (!merged) unique.push_back(std::move(candidate));
  }
  out.equilibria = std::move(unique);

  std::sort(out.equilibria.begin(), out.equilibria.end(),
            [](const EquilibriumResult& lhs, const EquilibriumResult& rhs) {
              if (lhs.social_cost != rhs.social_cost) return lhs.social_cost < rhs.social_cost;
              return pattern_less(lhs.pattern, rhs.pattern);
            });
  std::sort(out.degenerate.begin(), out.degenerate.end(), pattern_less);
  return out;
}

namespace {

EquilibriumResult pick_extreme(EnumerationResult result, bool worst) {
  if (result.equilibria.empty()) throw NoIsolatedEquilibrium(std::move(result));
  // The list is sorted by cost ascending with deterministic tie-breaks.
  return worst ? result.equilibria.back() : result.equilibria.front();
}

}  // namespace

EquilibriumResult worst_equilibrium(const Network& network, const Demand& demand,
                                    const TollScheme& tolls, int max_roads) {
  return pick_extreme(enumerate_equilibria(network, demand, tolls, max_roads), true);
}

EquilibriumResult best_equilibrium(const Network& network, const Demand& demand,
                                   const TollScheme& tolls, int max_roads) {
  return pick_extreme(enumerate_equilibria(network, demand, tolls, max_roads), false);
}

VerifyResult verify_equilibrium(const Network& network, const Demand& demand,
                                const TollScheme& tolls, const FlowProfile& flow,
                                double tolerance) {
  demand.validate();
  tolls.validate(network);
  // Conservation is deliberately not enforced here: the verdict concerns the
  // Wardrop conditions of the flow as given (e.g. a rounded published
  // routing), not its bookkeeping against the demand.
  if (flow.size() != network.size())
    throw std::invalid_argument("flow profile length does not match network");
  for (const RoadFlow& f : flow.flows)
    if (f.human < 0.0 || f.autonomous < 0.0)
      throw std::invalid_argument("flows must be nonnegative");

  VerifyResult out;
  out.equilibrium = true;
  for (VehicleClass cls : {VehicleClass::Human, VehicleClass::Autonomous}) {
    const double class_demand = (cls == VehicleClass::Human) ? demand.human : demand.autonomous;
    if (class_demand <= 0.0) continue;

    double lambda = std::numeric_limits<double>::infinity();
    for (int i = 0; i < network.size(); ++i) {
      const RoadFlow& f = flow.at(i);
      const double used = (cls == VehicleClass::Human) ? f.human : f.autonomous;
      if (used <= tol::support) continue;
      const double toll = (cls == VehicleClass::Human) ? tolls.at(i).human : tolls.at(i).autonomous;
      lambda = std::min(lambda, class_cost(network.road(i), f.human, f.autonomous, toll));
    }
    if (cls == VehicleClass::Human) out.lambda_human = lambda;
    else out.lambda_autonomous = lambda;

    for (int i = 0; i < network.size(); ++i) {
      const RoadFlow& f = flow.at(i);
      const double used = (cls == VehicleClass::Human) ? f.human : f.autonomous;
      const double toll = (cls == VehicleClass::Human) ? tolls.at(i).human : tolls.at(i).autonomous;
      const double cost = class_cost(network.road(i), f.human, f.autonomous, toll);
      if (used > tol::support) {
        if (std::abs(cost - lambda) > tolerance) {
          out.equilibrium = false;
          out.violations.push_back({i, cls, std::abs(cost - lambda)});
        }
      } else if (cost < lambda - tolerance) {
        out.equilibrium = false;
        out.violations.push_back({i, cls, lambda - cost});
      }
    }
  }
  return out;
}

}  // namespace routing
