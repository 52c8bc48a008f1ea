#include "routing/social_optimum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace routing {

std::pair<double, double> marginal_costs(const Road& road, double f_h, double f_a) {
  if (f_h < 0.0 || f_a < 0.0) throw std::domain_error("marginal costs require nonnegative flows");
  const double dh = 2.0 * road.k * road.a * f_h + road.a * (1.0 + road.k) * f_a + road.t;
  const double da = road.a * (1.0 + road.k) * f_h + 2.0 * road.a * f_a + road.t;
  return {dh, da};
}

RoadPairHessian road_pair_hessian(const Road& road_i, const Road& road_j) {
  RoadPairHessian h;
  h.matrix[0][0] = 2.0 * road_i.a * road_i.k + 2.0 * road_j.a * road_j.k;
  h.matrix[0][1] = (road_i.k + 1.0) * road_i.a + (road_j.k + 1.0) * road_j.a;
  h.matrix[1][0] = h.matrix[0][1];
  h.matrix[1][1] = 2.0 * road_i.a + 2.0 * road_j.a;
  h.determinant = h.matrix[0][0] * h.matrix[1][1] - h.matrix[0][1] * h.matrix[1][0];
  return h;
}

int count_mixed_roads(const FlowProfile& flow, double tolerance) {
  int count = 0;
  for (const RoadFlow& f : flow.flows)
    if (f.human > tolerance && f.autonomous > tolerance) ++count;
  return count;
}

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

struct Candidate {
  int mixed_road = -1;  // -1 when no road is shared
  SupportPattern pattern;
  FlowProfile flow;
  double cost = 0.0;
  std::optional<double> multiplier_human, multiplier_autonomous;
};

bool candidate_order_less(const Candidate& lhs, const Candidate& rhs) {
  if (lhs.mixed_road != rhs.mixed_road) return lhs.mixed_road < rhs.mixed_road;
  return pattern_less(lhs.pattern, rhs.pattern);
}

// Solves the stationarity system for one candidate structure: equal
// marginal social cost across each class's support plus demand
// conservation. Returns the candidate when the system is regular, flows
// are nonnegative, and off-support marginals are no cheaper.
std::optional<Candidate> solve_kkt_pattern(const Network& network, const Demand& demand,
                                           int mixed_road, const SupportPattern& pattern) {
  const bool has_human = demand.human > 0.0;
  const bool has_auto = demand.autonomous > 0.0;
  const int nh = static_cast<int>(pattern.human.size());
  const int na = static_cast<int>(pattern.autonomous.size());
  const int dim = nh + na + (has_human ? 1 : 0) + (has_auto ? 1 : 0);
  const int col_lambda_h = nh + na;
  const int col_lambda_a = nh + na + (has_human ? 1 : 0);

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
    A(row, hcol(i)) = 2.0 * r.k * r.a;
    if (int c = acol(i); c >= 0) A(row, c) = r.a * (1.0 + r.k);
    A(row, col_lambda_h) = -1.0;
    b(row) = -r.t;
    ++row;
  }
  for (int i : pattern.autonomous) {
    const Road& r = network.road(i);
    if (int c = hcol(i); c >= 0) A(row, c) = r.a * (1.0 + r.k);
    A(row, acol(i)) = 2.0 * r.a;
    A(row, col_lambda_a) = -1.0;
    b(row) = -r.t;
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
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < tol::pivot) return std::nullopt;
  const Eigen::VectorXd x = lu.solve(b);

  constexpr double kSignSlack = 1e-12;
  FlowProfile flow = FlowProfile::zero(network.size());
  for (int j = 0; j < nh; ++j) {
    double v = x(j);
    if (v < -kSignSlack) return std::nullopt;
    flow.at(pattern.human[static_cast<std::size_t>(j)]).human = std::max(v, 0.0);
  }
  for (int j = 0; j < na; ++j) {
    double v = x(nh + j);
    if (v < -kSignSlack) return std::nullopt;
    flow.at(pattern.autonomous[static_cast<std::size_t>(j)]).autonomous = std::max(v, 0.0);
  }

  std::optional<double> lambda_h, lambda_a;
  if (has_human) lambda_h = x(col_lambda_h);
  if (has_auto) lambda_a = x(col_lambda_a);

  for (int i = 0; i < network.size(); ++i) {
    const RoadFlow& f = flow.at(i);
    const auto [dh, da] = marginal_costs(network.road(i), f.human, f.autonomous);
    if (has_human && !contains(pattern.human, i) && dh < *lambda_h - tol::multiplier)
      return std::nullopt;
    if (has_auto && !contains(pattern.autonomous, i) && da < *lambda_a - tol::multiplier)
      return std::nullopt;
  }

  Candidate cand;
  cand.mixed_road = mixed_road;
  cand.pattern = pattern;
  cand.cost = social_cost(network, flow);
  cand.flow = std::move(flow);
  cand.multiplier_human = lambda_h;
  cand.multiplier_autonomous = lambda_a;
  return cand;
}

// The one-mixed-road structure is guaranteed with at most one k_i = 1.
// With more, optima can mix freely on the unit-asymmetry roads, so the
// search widens to every support pair.
bool structure_guarantee_holds(const Network& network) {
  constexpr double kUnitTol = 1e-9;
  int unit_k = 0;
  for (const Road& r : network.roads())
    if (std::abs(r.k - 1.0) <= kUnitTol) ++unit_k;
  return unit_k <= 1;
}

std::optional<Candidate> best_candidate(const Network& network, const Demand& demand,
                                        bool restrict_one_mixed) {
  const int n = network.size();
  const bool has_human = demand.human > 0.0;
  const bool has_auto = demand.autonomous > 0.0;
  const std::uint32_t full = (1u << n) - 1u;

  std::optional<Candidate> best;
  auto consider = [&](int mixed_road, std::uint32_t hm, std::uint32_t am) {
    if (has_human && hm == 0) return;
    if (!has_human && hm != 0) return;
    if (has_auto && am == 0) return;
    if (!has_auto && am != 0) return;
    SupportPattern pattern{mask_to_indices(hm), mask_to_indices(am)};
    std::optional<Candidate> cand = solve_kkt_pattern(network, demand, mixed_road, pattern);
    if (!cand) return;
    if (!best || cand->cost < best->cost ||
        (cand->cost == best->cost && candidate_order_less(*cand, *best)))
      best = std::move(cand);
  };

  if (!restrict_one_mixed) {
    for (std::uint32_t hm = 0; hm <= full; ++hm)
      for (std::uint32_t am = 0; am <= full; ++am) consider(-1, hm, am);
    return best;
  }

  // Disjoint supports.
  for (std::uint32_t hm = 0; hm <= full; ++hm) {
    const std::uint32_t rest = full & ~hm;
    for (std::uint32_t am = rest;; am = (am - 1) & rest) {
      consider(-1, hm, am);
      if (am == 0) break;
    }
  }
  // Exactly one shared road m.
  if (has_human && has_auto) {
    for (int m = 0; m < n; ++m) {
      const std::uint32_t mbit = 1u << m;
      const std::uint32_t others = full & ~mbit;
      for (std::uint32_t hsub = others;; hsub = (hsub - 1) & others) {
        const std::uint32_t hm = hsub | mbit;
        const std::uint32_t rest = others & ~hsub;
        for (std::uint32_t asub = rest;; asub = (asub - 1) & rest) {
          consider(m, hm, asub | mbit);
          if (asub == 0) break;
        }
        if (hsub == 0) break;
      }
    }
  }
  return best;
}

}  // namespace

OptimumResult optimal_routing(const Network& network, const Demand& demand, int max_roads) {
  demand.validate();
  const int n = network.size();
  if (n > max_roads)
    throw std::invalid_argument("network has " + std::to_string(n) +
                                " roads, exceeding the enumeration cap of " +
                                std::to_string(max_roads));

  const bool guaranteed = structure_guarantee_holds(network);
  std::optional<Candidate> best = best_candidate(network, demand, guaranteed);
  if (!best && guaranteed) best = best_candidate(network, demand, false);
  if (!best) throw std::runtime_error("no feasible KKT candidate found");

  OptimumResult out;
  out.flow = std::move(best->flow);
  out.social_cost = best->cost;
  for (int i = 0; i < n; ++i)
    if (out.flow.at(i).human > tol::support && out.flow.at(i).autonomous > tol::support)
      out.mixed_roads.push_back(i);
  out.pattern = std::move(best->pattern);
  out.multiplier_human = best->multiplier_human;
  out.multiplier_autonomous = best->multiplier_autonomous;
  out.structural_guarantee = guaranteed;
  return out;
}

namespace {

double composition_count(int slots, int parts) {
  // C(slots + parts - 1, parts - 1) as a double; fine for size estimates.
  double c = 1.0;
  for (int i = 1; i < parts; ++i) c = c * (slots + i) / i;
  return c;
}

}  // namespace

GridOracleResult grid_oracle(const Network& network, const Demand& demand,
                             double resolution, double max_points) {
  demand.validate();
  if (!(resolution > 0.0) || resolution > 1.0)
    throw std::invalid_argument("grid resolution must lie in (0, 1]");
  const int n = network.size();
  const int steps = std::max(1, static_cast<int>(std::llround(1.0 / resolution)));

  const bool has_human = demand.human > 0.0;
  const bool has_auto = demand.autonomous > 0.0;
  const double points_h = has_human ? composition_count(steps, n) : 1.0;
  const double points_a = has_auto ? composition_count(steps, n) : 1.0;
  if (points_h * points_a > max_points)
    throw std::invalid_argument("grid would hold about " +
                                std::to_string(points_h * points_a) +
                                " points, over the budget of " + std::to_string(max_points));

  const double step_h = has_human ? demand.human / steps : 0.0;
  const double step_a = has_auto ? demand.autonomous / steps : 0.0;

  std::vector<double> human(n, 0.0);
  std::vector<double> autonomous(n, 0.0);
  double best_cost = std::numeric_limits<double>::infinity();
  FlowProfile best_flow = FlowProfile::zero(n);

  // Assign road i's autonomous share, accumulating cost as we descend.
  std::function<void(int, int, double)> scan_auto = [&](int i, int left, double cost) {
    if (cost >= best_cost) return;
    if (i == n - 1) {
      autonomous[static_cast<std::size_t>(i)] = left * step_a;
      const double f_h = human[static_cast<std::size_t>(i)];
      const double f_a = autonomous[static_cast<std::size_t>(i)];
      const double total = cost + (f_h + f_a) * latency(network.road(i), f_h, f_a);
      if (total < best_cost) {
        best_cost = total;
        for (int r = 0; r < n; ++r)
          best_flow.at(r) = {human[static_cast<std::size_t>(r)], autonomous[static_cast<std::size_t>(r)]};
      }
      return;
    }
    for (int c = 0; c <= left; ++c) {
      autonomous[static_cast<std::size_t>(i)] = c * step_a;
      const double f_h = human[static_cast<std::size_t>(i)];
      const double f_a = autonomous[static_cast<std::size_t>(i)];
      scan_auto(i + 1, left - c, cost + (f_h + f_a) * latency(network.road(i), f_h, f_a));
    }
  };

  std::function<void(int, int)> scan_human = [&](int i, int left) {
    if (i == n - 1) {
      human[static_cast<std::size_t>(i)] = left * step_h;
      scan_auto(0, has_auto ? steps : 0, 0.0);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      human[static_cast<std::size_t>(i)] = c * step_h;
      scan_human(i + 1, left - c);
    }
  };
  scan_human(0, has_human ? steps : 0);

  double lipschitz_h = 0.0, lipschitz_a = 0.0;
  for (const Road& r : network.roads()) {
    const auto [dh, da] = marginal_costs(r, demand.human, demand.autonomous);
    lipschitz_h = std::max(lipschitz_h, dh);
    lipschitz_a = std::max(lipschitz_a, da);
  }

  GridOracleResult out;
  out.flow = std::move(best_flow);
  out.social_cost = best_cost;
  out.gap_bound = lipschitz_h * n * step_h + lipschitz_a * n * step_a;
  return out;
}

}  // namespace routing
