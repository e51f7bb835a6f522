// Experiment driver: deploy | ssa | msa | compare | testcase N [a|b]
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "dude/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir, formula;
  std::optional<double> alpha, A, epsilon_u, gamma, ratio, hysteresis;
  std::optional<std::size_t> iterations, replications, grid_resolution;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key=value scenario file");
  app->add_option("--seed", f.seed, "base seed; replication k uses seed+k");
  app->add_option("--out-dir", f.out_dir, "output directory");
  app->add_option("--alpha", f.alpha, "alpha-fairness parameter");
  app->add_option("--A", f.A, "asymmetry penalty weight (SSA)");
  app->add_option("--epsilon-u", f.epsilon_u, "allowed |R - R'| gap (MSA)");
  app->add_option("--gamma", f.gamma, "subgradient step");
  app->add_option("--iterations", f.iterations, "MSA iterations");
  app->add_option("--ratio", f.ratio, "femto to macro intensity ratio");
  app->add_option("--replications", f.replications, "number of maps");
  app->add_option("--grid-resolution", f.grid_resolution, "coverage raster cells per side");
  app->add_option("--allocation-formula", f.formula, "original | modified")
      ->check(CLI::IsMember({"original", "modified"}));
  app->add_option("--hysteresis", f.hysteresis, "MSA switching margin");
}

dude::ScenarioConfig resolve(dude::ScenarioConfig c, const Flags& f) {
  if (!f.config.empty()) c = dude::load_config(f.config, c);
  if (f.seed) c.seed = *f.seed;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.A) c.A = *f.A;
  if (f.epsilon_u) c.epsilon_u = *f.epsilon_u;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.iterations) c.iterations = *f.iterations;
  if (f.ratio) c.femto_ratio = *f.ratio;
  if (f.replications) c.replications = *f.replications;
  if (f.grid_resolution) c.grid_resolution = *f.grid_resolution;
  if (f.formula) c.allocation_formula = *f.formula;
  if (f.hysteresis) c.hysteresis = *f.hysteresis;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupled UL/DL association and allocation simulator"};
  app.require_subcommand(1);
  Flags flags;
  int tc_number = 0;
  std::string tc_variant;

  auto* deploy = app.add_subcommand("deploy", "association statistics over random maps");
  auto* ssa = app.add_subcommand("ssa", "fixed-association allocation");
  auto* msa = app.add_subcommand("msa", "joint association and allocation");
  auto* compare = app.add_subcommand("compare", "baseline vs SSA vs MSA on the same maps");
  auto* testcase = app.add_subcommand("testcase", "run a small hand-made scenario");
  testcase->add_option("n", tc_number, "scenario number 1-6")->required()->check(CLI::Range(1, 6));
  testcase->add_option("variant", tc_variant, "a | b (scenario 6)")->check(CLI::IsMember({"a", "b"}));
  for (auto* s : {deploy, ssa, msa, compare, testcase}) add_common(s, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    dude::RunRequest req;
    dude::ScenarioConfig base;
    if (deploy->parsed()) req.mode = dude::Mode::deploy;
    else if (ssa->parsed()) req.mode = dude::Mode::ssa;
    else if (msa->parsed()) req.mode = dude::Mode::msa;
    else if (compare->parsed()) req.mode = dude::Mode::compare;
    else req.mode = dude::Mode::testcase;

    if (req.mode == dude::Mode::testcase) {
      req.testcase = tc_number;
      req.variant = tc_variant.empty() ? 0 : tc_variant[0];
      if (tc_number == 6 && !req.variant) req.variant = 'a';
      base = dude::testcase_defaults(req.testcase, req.variant);
    } else {
      base = dude::mode_defaults(req.mode);
    }
    const auto cfg = resolve(base, flags);
    std::cout << dude::run_scenario(cfg, req);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
