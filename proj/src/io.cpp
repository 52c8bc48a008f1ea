#include "routing/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "routing/bounds.hpp"

namespace routing::io {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

void require_keys(const json& j, const std::string& what, const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!j.is_object()) fail(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!required.contains(key) && !optional.contains(key))
      fail(what + " has unknown field \"" + key + "\"");
  }
  for (const std::string& key : required)
    if (!j.contains(key)) fail(what + " is missing field \"" + key + "\"");
}

double number_field(const json& j, const std::string& what, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(what + " field \"" + key + "\" must be a number");
  return v.get<double>();
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

TollScheme parse_toll_array(const json& arr, const std::string& what) {
  if (!arr.is_array() || arr.empty()) fail(what + " must be a nonempty array");
  TollScheme tolls;
  for (const json& entry : arr) {
    require_keys(entry, what + " entry", {"human", "autonomous"});
    tolls.tolls.push_back({number_field(entry, what, "human"),
                           number_field(entry, what, "autonomous")});
  }
  return tolls;
}

}  // namespace

double round9(double value) {
  if (!std::isfinite(value)) fail("report values must be finite");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // drop the sign of -0
}

std::string format9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value == 0.0 ? 0.0 : value);
  return buf;
}

NetworkFile parse_network_file(const json& j) {
  require_keys(j, "network file", {"roads", "demand"}, {"tolls"});
  const json& roads_json = j.at("roads");
  if (!roads_json.is_array() || roads_json.empty()) fail("\"roads\" must be a nonempty array");

  std::vector<Road> roads;
  for (const json& rj : roads_json) {
    require_keys(rj, "road", {"a", "k", "t"});
    roads.push_back({number_field(rj, "road", "a"), number_field(rj, "road", "k"),
                     number_field(rj, "road", "t")});
  }

  const json& dj = j.at("demand");
  require_keys(dj, "demand", {"human", "autonomous"});

  NetworkFile out{Network(std::move(roads)),
                  Demand{number_field(dj, "demand", "human"),
                         number_field(dj, "demand", "autonomous")},
                  std::nullopt};
  if (j.contains("tolls")) {
    out.tolls = parse_toll_array(j.at("tolls"), "toll");
    out.tolls->validate(out.network);
  }
  return out;
}

NetworkFile load_network_file(const std::string& path) {
  return parse_network_file(load_json(path));
}

FlowProfile parse_flows_file(const json& j) {
  if (!j.is_object() || !j.contains("flows")) fail("flows file needs a \"flows\" array");
  const json& arr = j.at("flows");
  if (!arr.is_array() || arr.empty()) fail("\"flows\" must be a nonempty array");
  FlowProfile flow;
  for (const json& fj : arr) {
    require_keys(fj, "flow entry", {"human", "autonomous"});
    flow.flows.push_back({number_field(fj, "flow entry", "human"),
                          number_field(fj, "flow entry", "autonomous")});
  }
  return flow;
}

FlowProfile load_flows_file(const std::string& path) { return parse_flows_file(load_json(path)); }

TollScheme parse_tolls_file(const json& j) {
  if (!j.is_object() || !j.contains("tolls")) fail("tolls file needs a \"tolls\" array");
  return parse_toll_array(j.at("tolls"), "toll");
}

TollScheme load_tolls_file(const std::string& path) { return parse_tolls_file(load_json(path)); }

json flows_to_json(const FlowProfile& flow) {
  json arr = json::array();
  for (const RoadFlow& f : flow.flows)
    arr.push_back({{"human", round9(f.human)}, {"autonomous", round9(f.autonomous)}});
  return arr;
}

json tolls_to_json(const TollScheme& tolls) {
  json arr = json::array();
  for (const RoadToll& t : tolls.tolls)
    arr.push_back({{"human", round9(t.human)}, {"autonomous", round9(t.autonomous)}});
  return arr;
}

json pattern_to_json(const SupportPattern& pattern) {
  return {{"human", pattern.human}, {"autonomous", pattern.autonomous}};
}

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(round9(*v)) : json(nullptr);
}

json latencies_to_json(const Network& network, const FlowProfile& flow) {
  json arr = json::array();
  for (int i = 0; i < network.size(); ++i)
    arr.push_back(round9(latency(network.road(i), flow.at(i).human, flow.at(i).autonomous)));
  return arr;
}

json degeneracy_to_json(const EnumerationResult& enumeration) {
  json arr = json::array();
  for (const SupportPattern& p : enumeration.degenerate) arr.push_back(pattern_to_json(p));
  return arr;
}

json demand_to_json(const Demand& demand) {
  return {{"human", round9(demand.human)}, {"autonomous", round9(demand.autonomous)}};
}

}  // namespace

json equilibrium_to_json(const Network& network, const TollScheme& tolls,
                         const EquilibriumResult& eq) {
  (void)tolls;
  json j;
  j["flows"] = flows_to_json(eq.flow);
  j["latencies"] = latencies_to_json(network, eq.flow);
  j["lambda_human"] = optional_number(eq.lambda_human);
  j["lambda_autonomous"] = optional_number(eq.lambda_autonomous);
  j["support_human"] = eq.pattern.human;
  j["support_autonomous"] = eq.pattern.autonomous;
  j["social_cost"] = round9(eq.social_cost);
  return j;
}

json equilibrium_report(const Network& network, const Demand& demand, const TollScheme& tolls,
                        const EquilibriumResult& eq, const EnumerationResult& enumeration) {
  json j;
  j["demand"] = demand_to_json(demand);
  j["tolls"] = tolls_to_json(tolls);
  json body = equilibrium_to_json(network, tolls, eq);
  for (auto& [key, value] : body.items()) j[key] = value;
  j["equilibrium_count"] = enumeration.equilibria.size();
  j["degenerate_count"] = enumeration.degenerate.size();
  j["degenerate_patterns"] = degeneracy_to_json(enumeration);
  return j;
}

json enumeration_report(const Network& network, const Demand& demand, const TollScheme& tolls,
                        const EnumerationResult& enumeration) {
  json j;
  j["demand"] = demand_to_json(demand);
  j["tolls"] = tolls_to_json(tolls);
  json eqs = json::array();
  for (const EquilibriumResult& eq : enumeration.equilibria)
    eqs.push_back(equilibrium_to_json(network, tolls, eq));
  j["equilibrium_count"] = enumeration.equilibria.size();
  j["equilibria"] = eqs;
  j["degenerate_count"] = enumeration.degenerate.size();
  j["degenerate_patterns"] = degeneracy_to_json(enumeration);
  return j;
}

json optimum_report(const Network& network, const Demand& demand, const OptimumResult& opt) {
  json j;
  j["demand"] = demand_to_json(demand);
  j["flows"] = flows_to_json(opt.flow);
  j["latencies"] = latencies_to_json(network, opt.flow);
  j["social_cost"] = round9(opt.social_cost);
  j["mixed_roads"] = opt.mixed_roads;
  j["mixed_road_count"] = opt.mixed_roads.size();
  j["support_human"] = opt.pattern.human;
  j["support_autonomous"] = opt.pattern.autonomous;
  j["multiplier_human"] = optional_number(opt.multiplier_human);
  j["multiplier_autonomous"] = optional_number(opt.multiplier_autonomous);
  j["structural_guarantee"] = opt.structural_guarantee;
  return j;
}

json synthesis_report(const Network& network, const Demand& demand, const OptimumResult& opt,
                      double mu, double P, const TollScheme& tolls,
                      const EnumerationResult& under_tolls) {
  json j;
  j["mu"] = round9(mu);
  j["P"] = round9(P);
  j["tolls"] = tolls_to_json(tolls);
  j["optimum"] = optimum_report(network, demand, opt);

  double max_dev = 0.0;
  json costs = json::array();
  json transcript = json::array();
  for (const EquilibriumResult& eq : under_tolls.equilibria) {
    costs.push_back(round9(eq.social_cost));
    max_dev = std::max(max_dev, std::abs(eq.social_cost - opt.social_cost));
    transcript.push_back(equilibrium_to_json(network, tolls, eq));
  }
  json verification;
  verification["equilibrium_count"] = under_tolls.equilibria.size();
  verification["social_costs"] = costs;
  verification["max_deviation_from_optimum"] = round9(max_dev);
  verification["all_match_optimum"] =
      !under_tolls.equilibria.empty() && max_dev <= 1e-6;
  verification["equilibria"] = transcript;
  verification["degenerate_count"] = under_tolls.degenerate.size();
  j["verification"] = verification;
  return j;
}

json undiff_search_report(const TollGridSpec& spec, const UndiffSearchResult& result) {
  json j;
  j["grid"] = {{"lo", round9(spec.lo)}, {"hi", round9(spec.hi)}, {"step", round9(spec.step)}};
  j["tolls"] = tolls_to_json(result.tolls);
  j["worst_cost"] = round9(result.worst_cost);
  json skipped = json::array();
  for (const std::vector<double>& point : result.skipped) {
    json p = json::array();
    for (double v : point) p.push_back(round9(v));
    skipped.push_back(p);
  }
  j["skipped_grid_points"] = skipped;
  return j;
}

json bound_report(double k, int sigma) {
  json j;
  j["k"] = round9(k);
  j["sigma"] = sigma;
  j["xi"] = round9(xi(sigma));
  j["bound"] = round9(price_of_autonomy_bound(k, sigma));
  return j;
}

json verify_report(const VerifyResult& verdict) {
  json j;
  j["equilibrium"] = verdict.equilibrium;
  j["lambda_human"] = optional_number(verdict.lambda_human);
  j["lambda_autonomous"] = optional_number(verdict.lambda_autonomous);
  json violations = json::array();
  for (const WardropViolation& v : verdict.violations)
    violations.push_back({{"road", v.road},
                          {"class", to_string(v.vehicle_class)},
                          {"slack", round9(v.slack)}});
  j["violations"] = violations;
  return j;
}

namespace {

void append_routing_rows(std::ostringstream& out, const Network& network,
                         const FlowProfile& flow, const TollScheme* tolls,
                         const int* solution_index) {
  for (int i = 0; i < network.size(); ++i) {
    const RoadFlow& f = flow.at(i);
    if (solution_index) out << *solution_index << ',';
    out << i << ',' << format9(f.human) << ',' << format9(f.autonomous) << ','
        << format9(latency(network.road(i), f.human, f.autonomous)) << ',';
    if (tolls) out << format9(tolls->at(i).human) << ',' << format9(tolls->at(i).autonomous);
    else out << ',';
    out << '\n';
  }
}

}  // namespace

std::string routing_csv(const Network& network, const FlowProfile& flow,
                        const TollScheme* tolls) {
  std::ostringstream out;
  out << "road,human,autonomous,latency,toll_human,toll_autonomous\n";
  append_routing_rows(out, network, flow, tolls, nullptr);
  return out.str();
}

std::string enumeration_csv(const Network& network,
                            const std::vector<EquilibriumResult>& equilibria,
                            const TollScheme* tolls) {
  std::ostringstream out;
  out << "solution,road,human,autonomous,latency,toll_human,toll_autonomous\n";
  for (std::size_t s = 0; s < equilibria.size(); ++s) {
    const int index = static_cast<int>(s);
    append_routing_rows(out, network, equilibria[s].flow, tolls, &index);
  }
  return out.str();
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace routing::io
