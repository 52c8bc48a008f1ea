// Command-line front end for the two-class parallel routing solvers.
//
//   routing-cli equilibria NETWORK [--tolls FILE] [--worst|--best|--all] [--tol X]
//   routing-cli optimal    NETWORK
//   routing-cli tolls      NETWORK [--mu X|auto] [--P X|auto] [--undiff-grid LO:HI:STEP]
//   routing-cli bound      [NETWORK] [--k X] [--sigma N]
//   routing-cli verify     NETWORK --flows FILE [--tolls FILE] [--tol X]
//
// Reports go to stdout (JSON by default, --format csv for flow tables),
// diagnostics to stderr. Exit codes: 0 ok, 1 invalid input, 2 no isolated
// equilibrium.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "routing/bounds.hpp"
#include "routing/equilibrium.hpp"
#include "routing/io.hpp"
#include "routing/model.hpp"
#include "routing/social_optimum.hpp"
#include "routing/tolling.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitNoEquilibrium = 2;

struct CsvUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

routing::TollGridSpec parse_grid_spec(const std::string& spec) {
  routing::TollGridSpec out;
  char colon1 = 0, colon2 = 0;
  std::istringstream in(spec);
  if (!(in >> out.lo >> colon1 >> out.hi >> colon2 >> out.step) || colon1 != ':' ||
      colon2 != ':' || !in.eof())
    throw std::runtime_error("grid spec must look like LO:HI:STEP, got \"" + spec + "\"");
  return out;
}

int run_equilibria(const std::string& network_path, const std::string& tolls_path,
                   bool worst, bool best, double tol, const std::string& format) {
  routing::io::NetworkFile file = routing::io::load_network_file(network_path);
  routing::TollScheme tolls = file.tolls.value_or(routing::TollScheme::zero(file.network.size()));
  if (!tolls_path.empty()) tolls = routing::io::load_tolls_file(tolls_path);
  tolls.validate(file.network);

  routing::EnumerationResult enumeration =
      routing::enumerate_equilibria(file.network, file.demand, tolls);

  // Self-check: every reported equilibrium must pass Wardrop verification.
  for (const routing::EquilibriumResult& eq : enumeration.equilibria) {
    if (!routing::verify_equilibrium(file.network, file.demand, tolls, eq.flow, tol).equilibrium)
      throw std::runtime_error("internal error: enumerated equilibrium failed verification");
  }

  if (worst || best) {
    if (enumeration.equilibria.empty()) {
      std::cout << routing::io::dump_report(
          routing::io::enumeration_report(file.network, file.demand, tolls, enumeration));
      return kExitNoEquilibrium;
    }
    const routing::EquilibriumResult& eq =
        worst ? enumeration.equilibria.back() : enumeration.equilibria.front();
    if (format == "csv")
      std::cout << routing::io::routing_csv(file.network, eq.flow, &tolls);
    else
      std::cout << routing::io::dump_report(
          routing::io::equilibrium_report(file.network, file.demand, tolls, eq, enumeration));
    return kExitOk;
  }

  if (format == "csv")
    std::cout << routing::io::enumeration_csv(file.network, enumeration.equilibria, &tolls);
  else
    std::cout << routing::io::dump_report(
        routing::io::enumeration_report(file.network, file.demand, tolls, enumeration));
  return enumeration.equilibria.empty() ? kExitNoEquilibrium : kExitOk;
}

int run_optimal(const std::string& network_path, const std::string& format) {
  routing::io::NetworkFile file = routing::io::load_network_file(network_path);
  routing::OptimumResult opt = routing::optimal_routing(file.network, file.demand);
  if (format == "csv")
    std::cout << routing::io::routing_csv(file.network, opt.flow, nullptr);
  else
    std::cout << routing::io::dump_report(
        routing::io::optimum_report(file.network, file.demand, opt));
  return kExitOk;
}

int run_tolls(const std::string& network_path, const std::string& mu_arg,
              const std::string& p_arg, const std::string& grid_arg,
              const std::string& format) {
  routing::io::NetworkFile file = routing::io::load_network_file(network_path);

  if (!grid_arg.empty()) {
    if (format == "csv") throw CsvUnsupported("csv output is not defined for the grid search");
    routing::TollGridSpec spec = parse_grid_spec(grid_arg);
    routing::UndiffSearchResult result =
        routing::undiff_toll_search(file.network, file.demand, spec);
    std::cout << routing::io::dump_report(routing::io::undiff_search_report(spec, result));
    return kExitOk;
  }

  routing::OptimumResult opt = routing::optimal_routing(file.network, file.demand);
  routing::TollSynthesisConfig config;
  config.mu = (mu_arg == "auto") ? routing::default_mu(file.network, opt) : std::stod(mu_arg);
  if (p_arg != "auto") config.P = std::stod(p_arg);
  const double P = config.P.value_or(routing::default_P(file.network, config.mu));

  routing::TollScheme tolls = routing::synthesize_differentiated_tolls(file.network, opt, config);
  if (format == "csv") {
    std::cout << routing::io::routing_csv(file.network, opt.flow, &tolls);
    return kExitOk;
  }
  routing::EnumerationResult under_tolls =
      routing::enumerate_equilibria(file.network, file.demand, tolls);
  std::cout << routing::io::dump_report(routing::io::synthesis_report(
      file.network, file.demand, opt, config.mu, P, tolls, under_tolls));
  return kExitOk;
}

int run_bound(const std::string& network_path, std::optional<double> k, int sigma) {
  if (!network_path.empty()) {
    routing::io::NetworkFile file = routing::io::load_network_file(network_path);
    k = routing::network_asymmetry(file.network);
  }
  if (!k) throw std::runtime_error("bound needs a network file or --k");
  std::cout << routing::io::dump_report(routing::io::bound_report(*k, sigma));
  return kExitOk;
}

int run_verify(const std::string& network_path, const std::string& flows_path,
               const std::string& tolls_path, double tol) {
  routing::io::NetworkFile file = routing::io::load_network_file(network_path);
  routing::FlowProfile flow = routing::io::load_flows_file(flows_path);
  routing::TollScheme tolls = file.tolls.value_or(routing::TollScheme::zero(file.network.size()));
  if (!tolls_path.empty()) tolls = routing::io::load_tolls_file(tolls_path);
  tolls.validate(file.network);

  // Input sanity at 1% of total demand: published routings come rounded, so
  // exact conservation cannot be demanded of a flows file.
  const double file_tol = 1e-2 * std::max(1.0, file.demand.human + file.demand.autonomous);
  flow.validate(file.network, file.demand, file_tol);

  routing::VerifyResult verdict =
      routing::verify_equilibrium(file.network, file.demand, tolls, flow, tol);
  std::cout << routing::io::dump_report(routing::io::verify_report(verdict));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-class routing on parallel roads: equilibria, optima, tolls, bounds"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  std::string network_path, tolls_path, flows_path, format = "json";
  std::string mu_arg = "auto", p_arg = "auto", grid_arg;
  double tol = routing::tol::verify_default;
  std::optional<double> k_arg;
  int sigma = 1;
  bool worst = false, best = false, all = false;

  CLI::App* equilibria = app.add_subcommand("equilibria", "Enumerate isolated Wardrop equilibria");
  equilibria->add_option("network", network_path, "network JSON file")->required();
  equilibria->add_option("--tolls", tolls_path, "toll scheme JSON file");
  equilibria->add_flag("--worst", worst, "report only the worst equilibrium");
  equilibria->add_flag("--best", best, "report only the best equilibrium");
  equilibria->add_flag("--all", all, "report every equilibrium (default)");
  equilibria->add_option("--tol", tol, "verification tolerance");
  equilibria->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* optimal = app.add_subcommand("optimal", "Socially optimal routing");
  optimal->add_option("network", network_path, "network JSON file")->required();
  optimal->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* tolls_cmd = app.add_subcommand("tolls", "Synthesize optimality-enforcing tolls");
  tolls_cmd->add_option("network", network_path, "network JSON file")->required();
  tolls_cmd->add_option("--mu", mu_arg, "target experienced cost, or 'auto'");
  tolls_cmd->add_option("--P", p_arg, "prohibitive toll, or 'auto'");
  tolls_cmd->add_option("--undiff-grid", grid_arg,
                        "LO:HI:STEP grid search over undifferentiated tolls");
  tolls_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* bound = app.add_subcommand("bound", "Price-of-autonomy bound");
  bound->add_option("network", network_path, "network JSON file (sets k)");
  bound->add_option("--k", k_arg, "maximum degree of asymmetry");
  bound->add_option("--sigma", sigma, "maximum polynomial degree");

  CLI::App* verify = app.add_subcommand("verify", "Check Wardrop conditions of a routing");
  verify->add_option("network", network_path, "network JSON file")->required();
  verify->add_option("--flows", flows_path, "flow profile JSON file")->required();
  verify->add_option("--tolls", tolls_path, "toll scheme JSON file");
  verify->add_option("--tol", tol, "verdict tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (equilibria->parsed()) {
      if ((worst && best) || (all && (worst || best)))
        throw std::runtime_error("--worst, --best and --all are mutually exclusive");
      return run_equilibria(network_path, tolls_path, worst, best, tol, format);
    }
    if (optimal->parsed()) return run_optimal(network_path, format);
    if (tolls_cmd->parsed()) return run_tolls(network_path, mu_arg, p_arg, grid_arg, format);
    if (bound->parsed()) return run_bound(network_path, k_arg, sigma);
    if (verify->parsed()) return run_verify(network_path, flows_path, tolls_path, tol);
  } catch (const routing::NoIsolatedEquilibrium& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoEquilibrium;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
