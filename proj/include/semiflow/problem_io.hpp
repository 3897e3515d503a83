#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "semiflow/core.hpp"
#include "semiflow/matrixkit.hpp"

#include <nlohmann/json_fwd.hpp>

namespace semiflow::io {

enum class ProblemKind {
  Stein,
  Pencil,
  Nme,
  Dare,
  ScalarLinear,
  ScalarRational,
  ScalarPair,
};

const char* to_string(ProblemKind kind);

/// A parsed problem manifest. Matrices arrive either inline (2-D arrays of
/// numbers or [re, im] pairs) or as relative paths to Matrix Market sidecar
/// files; scalars are numbers or [re, im] pairs. All entries are validated
/// finite and dimension-checked for the kind; violations raise
/// ProblemFormatError naming the offending field.
struct ProblemFile {
  ProblemKind kind = ProblemKind::Stein;
  std::map<std::string, Matrix> matrices;
  Eigen::Index subspace_dim = 0;          // pencil only
  std::map<std::string, Complex> scalars; // scalar kinds only

  const Matrix& matrix(const std::string& name) const;
  Complex scalar(const std::string& name) const;
};

ProblemFile load_problem(const std::filesystem::path& path);

/// Matrix Market exchange format, array and coordinate variants,
/// real/complex/integer fields, general/symmetric/hermitian symmetry.
Matrix read_matrix_market(const std::filesystem::path& path);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

/// History CSV: header k,index,residual,elapsed_us and one row per accepted
/// iterate. Residuals are printed with %.17g so identical runs produce
/// byte-identical bodies apart from the timing column.
void write_history_csv(const std::filesystem::path& path,
                       const ConvergenceReport& report);

/// One bench comparison row.
struct BenchRow {
  std::string mode;
  int order = 1;
  std::int64_t outer_steps = 0;
  std::int64_t total_applies = 0;
  double final_residual = 0.0;
  std::optional<double> estimated_order;
  std::string status;
};
void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows);

/// JSON snippets for solution files.
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json report_to_json(const ConvergenceReport& report);

/// Deterministic shortest-roundtrip double formatting used by the writers.
std::string format_double(double value);

}  // namespace semiflow::io
