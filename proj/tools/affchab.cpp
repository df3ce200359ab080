#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "achab/report.hpp"

using namespace achab;

namespace {

int emit_error(const std::exception& e, const std::string& out_path) {
  nlohmann::json rec = {{"status", "error"}, {"error", error_record(e)}};
  std::cerr << rec.dump() << "\n";
  if (!out_path.empty()) std::ofstream(out_path) << rec.dump(2) << "\n";
  return static_cast<int>(RunStatus::Error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine Chabauty for S-integral points on curves"};
  app.require_subcommand(1);

  std::string problem_path, out_path;
  long p = 0;
  int precision = 0, sigma = -1, digits = 8, max_loss = 4;
  bool serial = false;

  auto* solve = app.add_subcommand("solve", "compute the Chabauty locus for every reduction type");
  solve->add_option("problem", problem_path, "problem file (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--p", p, "auxiliary prime");
  solve->add_option("--prec", precision, "working precision N");
  solve->add_option("--sigma", sigma, "index of a single reduction type");
  solve->add_option("--out", out_path, "write the JSON report here");
  solve->add_option("--digits", digits, "digits shown in the report");
  solve->add_flag("--serial", serial, "run without OpenMP");

  auto* verify = app.add_subcommand("verify", "check known points against the annihilating differentials");
  verify->add_option("problem", problem_path, "problem file (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--p", p, "auxiliary prime");
  verify->add_option("--prec", precision, "working precision N");
  verify->add_option("--out", out_path, "write the JSON result here");
  verify->add_option("--max-loss", max_loss, "allowed digit loss");
  verify->add_flag("--serial", serial, "run without OpenMP");

  CLI11_PARSE(app, argc, argv);

  SolveOptions options;
  if (p) options.p = p;
  if (precision) options.precision = precision;
  if (sigma >= 0) options.sigma = sigma;
  options.digits = digits;
  options.mode = serial ? Execution::Serial : Execution::Parallel;

  try {
    ProblemFile file = load_problem(problem_path);
    if (solve->parsed()) {
      SolveOutcome res = run_solve(file, options);
      std::cout << res.summary;
      if (!out_path.empty()) std::ofstream(out_path) << res.report.dump(2) << "\n";
      return static_cast<int>(res.status);
    }
    VerifyOutcome res = run_verify(file, options, max_loss);
    std::cout << res.summary;
    if (!out_path.empty()) std::ofstream(out_path) << res.report.dump(2) << "\n";
    if (!res.pass) return static_cast<int>(RunStatus::Error);
    return static_cast<int>(res.status);
  } catch (const std::exception& e) {
    return emit_error(e, out_path);
  }
}
