#pragma once

#include "ach/gjms.hpp"
#include "ach/indicial.hpp"

#include <string>

namespace ach::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Resolve a background from a built-in name ("heisenberg",
/// "constant-scal:<s>", "constant:<s>:<a_re>:<a_im>", "flat-grid:<n>",
/// "torus:<n>:<eps>") or from a JSON spec file path.
Background parse_background(const std::string& name_or_path, Mode mode, double tol = 1e-10);
Background background_from_json_text(const std::string& text, Mode mode, double tol = 1e-10);

std::string solve_result_to_json(const SolveResult& res);
/// Reconstructs the result together with its background (the stored spec
/// must be reconstructible: built-in, constant, or full chart data).
SolveResult solve_result_from_json(const std::string& text, Background* bg_out);

std::string residuals_to_csv(const SolveResult& res);

std::string tensor_to_json(const ThetaTensor& t);

std::string gjms_output_to_json(int k, const Scalar& lambda, const GjmsOutput& out, double selfadjoint_defect);

std::string indicial_report_to_json(const DetCheckReport& rep, const GrowthProbe* probe);

/// FNV-1a hash of a canonical(ised) config document, as 16 hex digits.
std::string config_hash(const std::string& config_json);

/// Test functions for the CLI: "const:<re>,<im>", "fourier:<kx>,<ky>,<kt>",
/// "random:<seed>" (grid backgrounds only for the latter two).
FieldValue parse_test_function(const std::string& spec, const Background& bg);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace ach::io
