#pragma once

#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "persist/chain_structure.hpp"
#include "persist/choi_effros.hpp"
#include "persist/matrix.hpp"
#include "persist/spectral.hpp"

namespace persist {

enum class InputFormat { csv, json };

// ".json" selects json; everything else is read as csv.
InputFormat infer_format(std::string_view path);

struct MatrixInput {
  std::vector<std::vector<double>> rows;
  std::string name;
  std::string digest;  // "fnv1a64:<hex>" of the raw bytes
};

// Throws InputError(ParseError) on malformed text.
std::vector<std::vector<double>> parse_csv(std::string_view text);
MatrixInput parse_json_matrix(std::string_view text);

// Throws InputError(IoError) when the file cannot be read.
MatrixInput read_matrix_file(const std::string& path, InputFormat format);

StochasticMatrix parse_matrix(const std::string& path, InputFormat format,
                              double validation_tol = kDefaultValidationTol);

std::string fnv1a_digest(std::string_view bytes);

struct AnalysisOptions {
  double tol = kDefaultProjTol;  // projection and algebra tolerance
  double zero_tol = kDefaultZeroTol;
  double epsilon = 1e-3;         // decoherence-time threshold
  int max_squarings = kDefaultMaxSquarings;
};

struct AnalysisOutcome {
  nlohmann::json report;
  bool verified = false;
};

// Full pipeline on an in-memory matrix. `input` becomes the report's "input".
AnalysisOutcome analyze_matrix(const StochasticMatrix& s, nlohmann::json input,
                               const AnalysisOptions& options = {});

AnalysisOutcome run_analyze(const std::string& path, InputFormat format,
                            const AnalysisOptions& options = {});

AnalysisOutcome run_lift_pullover(const std::string& path, InputFormat format,
                                  const AnalysisOptions& options = {});

AnalysisOutcome run_lift_phase_damping(double alpha, double beta,
                                       const AnalysisOptions& options = {});

// 0 ok, 2 input, 3 no convergence, 4 verification failed; 1 for anything else.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNoConvergence = 3;
inline constexpr int kExitVerification = 4;
int exit_code_for(const std::exception& e) noexcept;

// Key-sorted JSON with every floating value written with 17 significant digits.
std::string to_json_text(const nlohmann::json& report);
std::string to_text(const nlohmann::json& report);

// Copy of the report with the "timings" section removed.
nlohmann::json without_timings(nlohmann::json report);

}  // namespace persist
