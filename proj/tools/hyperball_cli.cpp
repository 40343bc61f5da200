// Command-line driver. Exit codes: 0 all checks pass, 1 a check failed,
// 2 bad configuration or arguments.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hyperball/cli/commands.hpp"
#include "hyperball/cli/config.hpp"

namespace hc = hyperball::cli;

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic-ball harmonic analysis experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  long long seed = -1;
  int n = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "flat key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_option("--seed", seed, "base seed for random test data")->check(CLI::NonNegativeNumber);
  app.add_option("--n", n, "restrict the sweep to one dimension");
  app.add_flag("--quiet", quiet, "suppress the summary");

  const std::map<std::string, std::pair<std::string, std::function<hc::Report(const hc::ExperimentConfig&)>>> commands = {
      {"verify-dirichlet", {"D residuals and extension consistency", hc::cmd_verify_dirichlet}},
      {"parity-scan", {"growth of the N^{n-1} pairing by parity of n", hc::cmd_parity_scan}},
      {"kernel-identity", {"Euclidean/hyperbolic Poisson intertwining and eta mass", hc::cmd_kernel_identity}},
      {"atom-bound", {"H^p norms of atom extensions", hc::cmd_atom_bound}},
      {"boundary-ops", {"N^k against Q_k(Delta_sigma) at the boundary", hc::cmd_boundary_ops}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  hc::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = hc::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (n != 0) cfg.n = n;
    if (!out_path.empty()) cfg.out = out_path;
    hc::validate(cfg);
  } catch (const hc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  hc::Report rep;
  try {
    rep = commands.at(name).second(cfg);
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return 1;
  }

  if (cfg.out.empty()) {
    std::cout << rep.csv << std::flush;
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os) {
      std::cerr << "cannot write '" << cfg.out << "'\n";
      return 2;
    }
    os << rep.csv;
  }
  if (!quiet) {
    std::ostream& log = cfg.out.empty() ? std::cerr : std::cout;
    for (const auto& line : rep.summary) log << line << '\n';
    log << name << ": " << (rep.pass ? "PASS" : "FAIL") << '\n';
  }
  return rep.pass ? 0 : 1;
}
