#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "ffdpat/config.hpp"
#include "ffdpat/error.hpp"
#include "ffdpat/experiment.hpp"
#include "ffdpat/selftest.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kIo = 3, kDivergence = 4, kSelftest = 5 };

struct Common {
  std::string config;
  std::string scale = "desk";
  std::string out;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value config file applied on top of --scale");
  cmd->add_option("--scale", c.scale, "base preset")->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--out", c.out, "output directory (overrides output.dir)");
  cmd->add_option("--algorithm", c.algorithm,
                  "landweber_one_step | proximal_one_step | proximal_two_step");
  cmd->add_option("--seed", c.seed, "noise seed (overrides noise.seed)");
}

ffdpat::ExperimentConfig resolve(const Common& c) {
  auto cfg = ffdpat::ExperimentConfig::preset(c.scale);
  if (!c.config.empty()) cfg = ffdpat::ExperimentConfig::load(c.config, cfg);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (!c.algorithm.empty()) {
    try {
      cfg.algorithm = ffdpat::parse_algorithm(c.algorithm);
    } catch (const ffdpat::InvalidArgument& e) {
      throw ffdpat::ConfigError(e.what());
    }
  }
  if (c.seed) cfg.noise_seed = *c.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Final-time projection photoacoustic tomography: simulation and reconstruction"};
  app.require_subcommand(1);

  Common sim;
  auto* simulate = app.add_subcommand("simulate", "simulate projection data");
  add_common(simulate, sim);

  Common rec;
  std::string data_dir;
  bool constant_speed = false;
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct from simulated data");
  add_common(reconstruct, rec);
  reconstruct->add_option("--data", data_dir, "directory with sinogram_noisy.sno (default: out)");
  reconstruct->add_flag("--assume-constant-speed", constant_speed,
                        "reconstruct with the mean speed instead of the true map");

  std::string recon_path;
  std::string truth_path;
  std::string eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "compare a reconstruction with the truth");
  evaluate->add_option("recon", recon_path, "reconstruction (.f2d)")->required();
  evaluate->add_option("truth", truth_path, "ground truth (.f2d)")->required();
  evaluate->add_option("--out", eval_out, "directory for difference.pgm");

  bool inject_fault = false;
  auto* selftest = app.add_subcommand("selftest", "run the small-scale invariant battery");
  selftest->add_flag("--inject-adjoint-fault", inject_fault,
                     "perturb the adjoint in the dot tests (checks that failures are caught)");

  Common adj;
  int pairs = 3;
  auto* adjoint_test = app.add_subcommand("adjoint-test", "dot tests on the configured operator");
  add_common(adjoint_test, adj);
  adjoint_test->add_option("--pairs", pairs, "random pairs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) {
      const auto cfg = resolve(sim);
      const auto rep = ffdpat::cmd_simulate(cfg, cfg.output_dir);
      std::cout << "wrote " << cfg.output_dir << "\n"
                << "noise relative error " << rep.noise_rel_error << "\n"
                << "boundary/peak ratio  " << rep.wrap_ratio << "\n";
    } else if (*reconstruct) {
      auto cfg = resolve(rec);
      if (constant_speed) cfg.assume_constant_speed = true;
      const std::string data = data_dir.empty() ? cfg.output_dir : data_dir;
      const auto rep = ffdpat::cmd_reconstruct(cfg, data, cfg.output_dir);
      std::cout << ffdpat::to_string(cfg.algorithm) << ": " << rep.iterations
                << " iterations, objective " << rep.final_objective;
      if (rep.final_rel_error) std::cout << ", relative error " << *rep.final_rel_error;
      std::cout << "\n";
    } else if (*evaluate) {
      const auto rep = ffdpat::cmd_evaluate(recon_path, truth_path, eval_out);
      std::cout << "relative L2 error " << rep.rel_l2_error << "\n"
                << "max abs error     " << rep.max_abs_error << "\n";
    } else if (*selftest) {
      const auto checks = ffdpat::run_selftest({inject_fault});
      if (!ffdpat::print_report(std::cout, checks)) return kSelftest;
    } else if (*adjoint_test) {
      const ffdpat::Experiment exp(resolve(adj));
      std::vector<ffdpat::SelftestCheck> checks;
      for (int s = 1; s <= pairs; ++s) {
        const auto seed = static_cast<std::uint64_t>(s);
        checks.push_back({"wave pair " + std::to_string(s),
                          ffdpat::wave_dot_test(exp.wave(), seed), 1e-10, false});
        checks.push_back({"operator pair " + std::to_string(s),
                          ffdpat::operator_dot_test(exp.op(), seed), 1e-10, false});
      }
      for (auto& c : checks) c.passed = c.value <= c.threshold;
      if (!ffdpat::print_report(std::cout, checks)) return kSelftest;
    }
  } catch (const ffdpat::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ffdpat::DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDivergence;
  } catch (const ffdpat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
