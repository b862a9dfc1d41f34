// persist: canonical form, peripheral projection and persistent-algebra
// checks for stochastic matrices, plus the two matrix-algebra lifts.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "persist/errors.hpp"
#include "persist/report.hpp"

namespace {

struct OutputOptions {
  std::string format = "text";
  std::string path;
};

int emit(const persist::AnalysisOutcome& outcome, const OutputOptions& out) {
  const std::string text = out.format == "json" ? persist::to_json_text(outcome.report)
                                                : persist::to_text(outcome.report);
  if (out.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out.path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write '" << out.path << "'\n";
      return persist::kExitInput;
    }
    file << text;
  }
  if (!outcome.verified) {
    std::cerr << "error: persistent-algebra verification failed\n";
    return persist::kExitVerification;
  }
  return persist::kExitOk;
}

void add_common(CLI::App* cmd, persist::AnalysisOptions& opts, OutputOptions& out) {
  cmd->add_option("--tol", opts.tol, "projection and algebra tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--zero-tol", opts.zero_tol, "structural-zero threshold")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--epsilon", opts.epsilon, "decoherence-time threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-squarings", opts.max_squarings, "squaring budget for P")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", out.format, "report format")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--output", out.path, "write the report to this file");
}

persist::InputFormat resolve_format(const std::string& requested, const std::string& path) {
  if (requested == "json") return persist::InputFormat::json;
  if (requested == "csv") return persist::InputFormat::csv;
  return persist::infer_format(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent dynamics of finite stochastic matrices"};
  app.require_subcommand(1);

  persist::AnalysisOptions opts;
  OutputOptions out;
  std::string matrix_path;
  std::string input_format = "auto";
  double alpha = 0.0;
  double beta = 0.0;

  auto* analyze = app.add_subcommand("analyze", "analyze a stochastic matrix file");
  analyze->add_option("matrix", matrix_path, "CSV or JSON matrix file")->required();
  analyze->add_option("--input-format", input_format, "csv, json or auto (by extension)")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  add_common(analyze, opts, out);

  auto* lift = app.add_subcommand("lift", "analyze a UCP lift to matrix algebras");
  lift->require_subcommand(1);
  auto* pullover = lift->add_subcommand("pullover", "Phi = S composed with the diagonal expectation");
  pullover->add_option("matrix", matrix_path, "CSV or JSON matrix file")->required();
  pullover->add_option("--input-format", input_format, "csv, json or auto (by extension)")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  add_common(pullover, opts, out);
  auto* damping = lift->add_subcommand("phase-damping", "two-angle map on 2x2 matrices");
  damping->add_option("--alpha", alpha, "first angle (radians)")->required();
  damping->add_option("--beta", beta, "second angle (radians)")->required();
  add_common(damping, opts, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return persist::kExitInput;
  }

  try {
    if (analyze->parsed()) {
      return emit(persist::run_analyze(matrix_path, resolve_format(input_format, matrix_path), opts),
                  out);
    }
    if (pullover->parsed()) {
      return emit(
          persist::run_lift_pullover(matrix_path, resolve_format(input_format, matrix_path), opts),
          out);
    }
    return emit(persist::run_lift_phase_damping(alpha, beta, opts), out);
  } catch (const persist::Error& e) {
    std::cerr << "error [" << persist::to_string(e.kind()) << "]: " << e.what() << '\n';
    return persist::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return persist::exit_code_for(e);
  }
}
