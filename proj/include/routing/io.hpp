#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "routing/equilibrium.hpp"
#include "routing/model.hpp"
#include "routing/social_optimum.hpp"
#include "routing/tolling.hpp"

// JSON file schemas and report builders. Reports use a stable field order
// and 9-significant-digit numbers so identical inputs yield byte-identical
// output; flow and toll reports can be fed back in as --flows / --tolls
// inputs.

namespace routing::io {

using json = nlohmann::ordered_json;

// Rounds to 9 significant digits (the report precision); normalizes -0.
double round9(double value);
std::string format9(double value);

struct NetworkFile {
  Network network;
  Demand demand;
  std::optional<TollScheme> tolls;
};

// Strict parse of {"roads":[{"a","k","t"}...], "demand":{"human","autonomous"},
// "tolls":[{"human","autonomous"}...]?}; unknown fields are rejected.
NetworkFile parse_network_file(const json& j);
NetworkFile load_network_file(const std::string& path);

// {"flows":[{"human","autonomous"}...]}; extra top-level keys are ignored so
// emitted reports can be re-ingested.
FlowProfile parse_flows_file(const json& j);
FlowProfile load_flows_file(const std::string& path);

// {"tolls":[{"human","autonomous"}...]}; extra top-level keys are ignored.
TollScheme parse_tolls_file(const json& j);
TollScheme load_tolls_file(const std::string& path);

json flows_to_json(const FlowProfile& flow);
json tolls_to_json(const TollScheme& tolls);
json pattern_to_json(const SupportPattern& pattern);
json equilibrium_to_json(const Network& network, const TollScheme& tolls,
                         const EquilibriumResult& eq);

// Single-equilibrium report (--worst / --best): top-level "flows" plus the
// degeneracy report.
json equilibrium_report(const Network& network, const Demand& demand, const TollScheme& tolls,
                        const EquilibriumResult& eq, const EnumerationResult& enumeration);
// --all report: "equilibria" list plus the degeneracy report.
json enumeration_report(const Network& network, const Demand& demand, const TollScheme& tolls,
                        const EnumerationResult& enumeration);
json optimum_report(const Network& network, const Demand& demand, const OptimumResult& opt);
json synthesis_report(const Network& network, const Demand& demand, const OptimumResult& opt,
                      double mu, double P, const TollScheme& tolls,
                      const EnumerationResult& under_tolls);
json undiff_search_report(const TollGridSpec& spec, const UndiffSearchResult& result);
json bound_report(double k, int sigma);
json verify_report(const VerifyResult& verdict);

// Table-style CSV: road,human,autonomous,latency,toll_human,toll_autonomous.
// Toll columns are left empty when `tolls` is null. A leading "solution"
// column is added when several routings are printed together.
std::string routing_csv(const Network& network, const FlowProfile& flow,
                        const TollScheme* tolls);
std::string enumeration_csv(const Network& network,
                            const std::vector<EquilibriumResult>& equilibria,
                            const TollScheme* tolls);

std::string dump_report(const json& j);  // 2-space indent, trailing newline

}  // namespace routing::io
