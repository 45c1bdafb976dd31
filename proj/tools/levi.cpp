// Command-line front end: analyze | scan | certify | model | reproduce.
// JSON report to stdout (or --out FILE), human-readable summary to stderr.
// Exit codes: 0 ok, 1 input error, 2 condition failure, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "levikit/levikit.hpp"

namespace {

using levikit::cli::CmdResult;
using levikit::cli::RunConfig;

int emit(const CmdResult& res, const RunConfig& cfg) {
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << cfg.out_path << "'\n";
      return levikit::cli::kInputError;
    }
    out << res.json;
  } else {
    std::cout << res.json;
  }
  std::cerr << res.table;
  return res.code;
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_input) {
  if (needs_input)
    cmd->add_option("input", cfg.input_path, "input .dfn file")->required();
  cmd->add_option("--q", cfg.q, "form degree q (1 <= q <= n-1)");
  cmd->add_option("--A", cfg.A, "estimate constant A");
  double t_holder = 0;
  cmd->add_option_function<double>(
      "--t", [&cfg](double v) { cfg.t_override = v; }, "override parameter t");
  (void)t_holder;
  cmd->add_option_function<std::vector<double>>(
      "--center",
      [&cfg](const std::vector<double>& v) { cfg.center = v; },
      "anchor point as 2n reals: re z1 im z1 ...");
  cmd->add_option("--radius", cfg.radius, "sampling radius");
  cmd->add_option("--samples", cfg.samples, "sample count");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--out", cfg.out_path, "write the JSON report to FILE");
  cmd->add_option("--tau-sign", cfg.tol.sign, "eigenvalue sign tolerance");
  cmd->add_option("--boundary-tol", cfg.tol.boundary, "boundary residual tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levi-form spectra and maximal-estimate conditions for domains in C^n"};
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* analyze = app.add_subcommand("analyze", "single-point analysis and verdicts");
  add_common(analyze, cfg, true);

  CLI::App* scan = app.add_subcommand("scan", "seeded boundary sampling in a ball");
  add_common(scan, cfg, true);
  scan->add_option("--radius-sweep", cfg.radius_sweep, "additional radii for a sup A_min table");

  CLI::App* certify = app.add_subcommand("certify", "validate an Upsilon field");
  add_common(certify, cfg, true);
  certify->add_option("--preset", cfg.preset, "built-in field: tangential | example2 | zq");
  certify->add_option_function<double>(
      "--field-t", [&cfg](double v) { cfg.preset_t = v; }, "tangential preset scaling t");
  certify->add_option("--a", cfg.preset_a, "field parameter a");
  certify->add_option_function<double>(
      "--b", [&cfg](double v) { cfg.preset_b = v; }, "field parameter b");
  certify->add_option_function<double>(
      "--eta", [&cfg](double v) { cfg.eta = v; }, "eta for Theta evaluation");

  CLI::App* model = app.add_subcommand("model", "quadric-model certification of A");
  add_common(model, cfg, true);
  model->add_option_function<double>(
      "--tau", [&cfg](double v) { cfg.tau = v; }, "also run the finite-tau Monte Carlo at this tau");

  CLI::App* reproduce = app.add_subcommand("reproduce", "closed-form example tables");
  reproduce->add_option("which", cfg.which, "example1 | example2")->required();
  reproduce->add_option("--out", cfg.out_path, "write the JSON report to FILE");

  CLI11_PARSE(app, argc, argv);

  try {
    CmdResult res;
    if (analyze->parsed())
      res = levikit::cli::cmd_analyze(cfg);
    else if (scan->parsed())
      res = levikit::cli::cmd_scan(cfg);
    else if (certify->parsed())
      res = levikit::cli::cmd_certify(cfg);
    else if (model->parsed())
      res = levikit::cli::cmd_model(cfg);
    else
      res = levikit::cli::cmd_reproduce(cfg);
    return emit(res, cfg);
  } catch (const levikit::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return levikit::cli::kInputError;
  } catch (const levikit::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return levikit::cli::kNumericalFailure;
  } catch (const levikit::EvalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return levikit::cli::kNumericalFailure;
  } catch (const levikit::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return levikit::cli::kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return levikit::cli::kNumericalFailure;
  }
}
