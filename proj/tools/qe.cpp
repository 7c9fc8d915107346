// qe: build randomized Cayley-graph eigenbases, run concentration and
// delocalization experiments, replay manifests.
//
// Exit codes: 0 success, 2 validation or configuration error, 3 I/O error.

#include <iostream>

#include <CLI11.hpp>

#include "qe/harness.hpp"

namespace {

struct Flags {
  std::string group, gens, irreps, preset, out = ".", beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials, p;
  std::optional<double> tolerance;
  std::size_t restarts = 50, random_samples = 1000, lipschitz_pairs = 10000;
};

void common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--group,--base", f.group, "catalog spec (e.g. cyclic:12, product:symmetric:3,cyclic:5) or group JSON path");
  cmd->add_option("--gens", f.gens, "comma-separated generator indices (default: family generators)");
  cmd->add_option("--irreps", f.irreps, "irrep bundle JSON for groups without a catalog route");
  cmd->add_option("--seed", f.seed, "root seed (drawn from system entropy and recorded when absent)");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
}

qe::ExperimentConfig to_config(const std::string& command, const Flags& f) {
  qe::ExperimentConfig c;
  c.command = command;
  c.group = f.group;
  c.gens = f.gens;
  c.irreps = f.irreps;
  c.seed = f.seed;
  c.trials = f.trials;
  c.p = f.p;
  c.preset = f.preset;
  c.out = f.out;
  c.tolerance = f.tolerance;
  c.restarts = f.restarts;
  c.random_samples = f.random_samples;
  c.lipschitz_pairs = f.lipschitz_pairs;
  if (!f.beta.empty()) c.betas = qe::parse_double_list(f.beta);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum ergodicity experiments on Cayley graphs of finite groups"};
  app.require_subcommand(1);
  Flags f;
  std::string manifest;

  auto* build = app.add_subcommand("build", "build a randomized eigenbasis and its QE report");
  common(build, f);
  build->add_option("--trials", f.trials, "number of random unit test functions (default 20)");
  build->add_option("--tolerance", f.tolerance, "basis invariant tolerance (default 1e-9)");
  build->add_option("--restarts", f.restarts, "alternating sup-search restarts")->capture_default_str();
  build->add_option("--random-samples", f.random_samples, "random sup-search samples")->capture_default_str();

  auto* conc = app.add_subcommand("concentration", "Haar second moment, tail and Lipschitz experiments");
  common(conc, f);
  conc->add_option("--preset", f.preset, "preset name or preset JSON path")->required();
  conc->add_option("--trials", f.trials, "Monte Carlo trials (default: preset)");
  conc->add_option("--beta", f.beta, "comma-separated beta grid (tail presets)");
  conc->add_option("--lipschitz-pairs", f.lipschitz_pairs, "sampled pairs per matrix")->capture_default_str();

  auto* deloc = app.add_subcommand("deloc", "product spectrum, delocalization ratios and QE lower witness");
  common(deloc, f);
  deloc->add_option("--p", f.p, "odd prime p > 3")->required();
  deloc->add_option("--trials", f.trials, "restarts per eigenspace (default 16)");
  deloc->add_option("--tolerance", f.tolerance, "eigenvalue clustering and collision tolerance (default 1e-8)");

  auto* exp = app.add_subcommand("export", "write a group table and its irreps as JSON");
  common(exp, f);

  auto* rep = app.add_subcommand("replay", "re-run the configuration stored in a manifest");
  rep->add_option("manifest", manifest, "manifest.json path")->required();
  rep->add_option("--out", f.out, "output directory (default: the manifest's directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    qe::RunResult result;
    if (rep->parsed()) {
      result = qe::replay(manifest, rep->count("--out") ? f.out : "");
    } else {
      std::string name;
      for (auto* sub : {build, conc, deloc, exp})
        if (sub->parsed()) name = sub->get_name();
      result = qe::execute(to_config(name, f));
    }
    for (const auto& o : result.outputs) std::cout << o << "\n";
    if (!result.summary.is_null()) std::cout << result.summary.dump() << "\n";
    return 0;
  } catch (const qe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qe::exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: IoError: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
