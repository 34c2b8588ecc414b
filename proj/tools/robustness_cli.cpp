#include <iostream>

#include <CLI11.hpp>

#include "robustness/cli.hpp"

namespace rc = robustness::cli;

int main(int argc, char** argv) {
  CLI::App app{"Robustness of entanglement for finite-dimensional states"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.footer(
      "State files are JSON: {\"dims\": [n1, n2, ...], \"matrix\": [[[re, im], ...], ...]} for\n"
      "density matrices or {\"dims\": [...], \"vector\": [[re, im], ...]} for pure states.\n"
      "\n"
      "CSV output (--csv):\n"
      "  volume            columns sample_index,separable_flag (flag 1 = separable)\n"
      "  other commands    columns key,value; nested report keys are dot-joined\n"
      "\n"
      "Exit status: 0 success, 2 validation or parse error, 3 solver did not converge.");

  rc::Command cmd;
  bool csv = false;
  bool json_flag = false;
  std::uint64_t seed = 1;
  auto* fmt = app.add_flag("--csv", csv, "Emit CSV instead of JSON");
  app.add_flag("--json", json_flag, "Emit JSON (default)")->excludes(fmt);
  app.add_option("--seed", seed, "Seed for the solver restarts and the volume sampler");
  app.add_flag("--tolerance-report", cmd.tolerance_report, "Print tolerance constants to stderr");

  rc::PureCmd pure;
  auto* s_pure = app.add_subcommand("pure", "Schmidt coefficients, entropy, robustness, random robustness");
  s_pure->add_option("state", pure.state_path, "Pure state file")->required()->check(CLI::ExistingFile);

  rc::MixedCmd mixed;
  std::string method = "auto";
  auto* s_mixed = app.add_subcommand("mixed", "Robustness of a density matrix");
  s_mixed->add_option("state", mixed.state_path, "State file")->required()->check(CLI::ExistingFile);
  s_mixed->add_option("--method", method, "bounds | solve | auto")
      ->check(CLI::IsMember({"bounds", "solve", "auto"}));

  rc::PseudomixtureCmd pm;
  auto* s_pm = app.add_subcommand("pseudomixture", "Write an optimal pseudomixture to a JSON file");
  s_pm->add_option("state", pm.state_path, "State file")->required()->check(CLI::ExistingFile);
  s_pm->add_option("out", pm.out_path, "Output JSON path")->required();

  rc::RandomRobustnessCmd rr;
  auto* s_rr = app.add_subcommand("random-robustness", "Robustness relative to the maximally mixed state");
  s_rr->add_option("state", rr.state_path, "State file")->required()->check(CLI::ExistingFile);

  rc::VolumeCmd vol;
  std::string dims = "2,2";
  std::uint64_t vol_seed = 0;
  auto* s_vol = app.add_subcommand("volume", "Monte Carlo estimate of the separable fraction");
  s_vol->add_option("--dims", dims, "Comma-separated local dimensions")->capture_default_str();
  s_vol->add_option("--samples", vol.samples, "Number of samples")->capture_default_str()->check(CLI::PositiveNumber);
  auto* vol_seed_opt = s_vol->add_option("--seed", vol_seed, "Sampler seed (overrides the global --seed)");
  s_vol->add_option("--workers", vol.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  rc::CheckSeparableCmd chk;
  auto* s_chk = app.add_subcommand("check-separable", "Exact separability verdict for 2x2 and 2x3");
  s_chk->add_option("state", chk.state_path, "State file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rc::ExitCode::validation_error;
  }

  cmd.format = csv ? rc::Format::csv : rc::Format::json;
  cmd.seed = seed;
  try {
    if (s_pure->parsed()) {
      cmd.sub = pure;
    } else if (s_mixed->parsed()) {
      mixed.method = rc::parse_method(method);
      cmd.sub = mixed;
    } else if (s_pm->parsed()) {
      cmd.sub = pm;
    } else if (s_rr->parsed()) {
      cmd.sub = rr;
    } else if (s_vol->parsed()) {
      vol.dims = rc::parse_dims(dims);
      if (vol_seed_opt->count() > 0) vol.seed = vol_seed;
      cmd.sub = vol;
    } else {
      cmd.sub = chk;
    }
  } catch (const robustness::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rc::ExitCode::validation_error;
  }
  return rc::run(cmd, std::cout, std::cerr);
}
