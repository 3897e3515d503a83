#include "semiflow/problem_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace semiflow::io {

using nlohmann::json;

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Stein: return "stein";
    case ProblemKind::Pencil: return "pencil";
    case ProblemKind::Nme: return "nme";
    case ProblemKind::Dare: return "dare";
    case ProblemKind::ScalarLinear: return "scalar-linear";
    case ProblemKind::ScalarRational: return "scalar-rational";
    case ProblemKind::ScalarPair: return "scalar-pair";
  }
  return "unknown";
}

namespace {

ProblemKind parse_kind(const std::string& text) {
  if (text == "stein") return ProblemKind::Stein;
  if (text == "pencil") return ProblemKind::Pencil;
  if (text == "nme") return ProblemKind::Nme;
  if (text == "dare") return ProblemKind::Dare;
  if (text == "scalar-linear") return ProblemKind::ScalarLinear;
  if (text == "scalar-rational") return ProblemKind::ScalarRational;
  if (text == "scalar-pair") return ProblemKind::ScalarPair;
  throw ProblemFormatError("field 'kind': unknown problem kind '" + text +
                           "'");
}

Complex parse_complex(const json& value, const std::string& field) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() &&
      value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  throw ProblemFormatError("field '" + field +
                           "': expected a number or an [re, im] pair");
}

Matrix parse_inline_matrix(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) {
    throw ProblemFormatError("field '" + field +
                             "': expected a non-empty 2-D array");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(value.size());
  if (!value[0].is_array() || value[0].empty()) {
    throw ProblemFormatError("field '" + field +
                             "': rows must be non-empty arrays");
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(value[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() ||
        static_cast<Eigen::Index>(row.size()) != cols) {
      throw ProblemFormatError("field '" + field + "': row " +
                               std::to_string(i) + " has inconsistent length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = parse_complex(row[static_cast<std::size_t>(j)],
                              field + "[" + std::to_string(i) + "][" +
                                  std::to_string(j) + "]");
    }
  }
  return m;
}

void require_finite(const Matrix& m, const std::string& field) {
  if (!m.allFinite()) {
    throw ProblemFormatError("field '" + field +
                             "': matrix contains non-finite entries");
  }
}

void require_square(const ProblemFile& problem, const std::string& field,
                    Eigen::Index n) {
  const Matrix& m = problem.matrix(field);
  if (m.rows() != n || m.cols() != n) {
    throw ProblemFormatError("field 'matrices." + field + "': expected " +
                             std::to_string(n) + "x" + std::to_string(n) +
                             ", got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
  }
}

void validate_problem(const ProblemFile& problem) {
  auto need_matrix = [&](const char* name) {
    if (!problem.matrices.count(name)) {
      throw ProblemFormatError(std::string("field 'matrices.") + name +
                               "': missing for kind " +
                               to_string(problem.kind));
    }
  };
  auto need_scalar = [&](const char* name) {
    if (!problem.scalars.count(name)) {
      throw ProblemFormatError(std::string("field '") + name +
                               "': missing for kind " +
                               to_string(problem.kind));
    }
  };
  switch (problem.kind) {
    case ProblemKind::Stein: {
      for (const char* name : {"A", "B", "C"}) need_matrix(name);
      const Matrix& a = problem.matrix("A");
      const Matrix& b = problem.matrix("B");
      const Matrix& c = problem.matrix("C");
      if (a.rows() != a.cols())
        throw ProblemFormatError("field 'matrices.A': must be square");
      if (b.rows() != b.cols())
        throw ProblemFormatError("field 'matrices.B': must be square");
      if (c.rows() != a.rows() || c.cols() != b.rows()) {
        throw ProblemFormatError("field 'matrices.C': expected " +
                                 std::to_string(a.rows()) + "x" +
                                 std::to_string(b.rows()));
      }
      break;
    }
    case ProblemKind::Pencil: {
      for (const char* name : {"A", "B"}) need_matrix(name);
      const Eigen::Index n = problem.matrix("A").rows();
      require_square(problem, "A", n);
      require_square(problem, "B", n);
      if (problem.subspace_dim < 1 || problem.subspace_dim > n) {
        throw ProblemFormatError(
            "field 'm': subspace dimension must lie in [1, " +
            std::to_string(n) + "]");
      }
      break;
    }
    case ProblemKind::Nme: {
      for (const char* name : {"Q", "A", "B"}) need_matrix(name);
      const Eigen::Index n = problem.matrix("Q").rows();
      for (const char* name : {"Q", "A", "B"}) require_square(problem, name, n);
      break;
    }
    case ProblemKind::Dare: {
      for (const char* name : {"A", "G", "H"}) need_matrix(name);
      const Eigen::Index n = problem.matrix("A").rows();
      for (const char* name : {"A", "G", "H"}) require_square(problem, name, n);
      break;
    }
    case ProblemKind::ScalarLinear:
      for (const char* name : {"a", "b", "x1"}) need_scalar(name);
      break;
    case ProblemKind::ScalarRational:
      for (const char* name : {"a", "b"}) need_scalar(name);
      if (problem.scalar("b") == Complex{0.0, 0.0}) {
        throw ProblemFormatError("field 'b': must be nonzero");
      }
      if (problem.scalar("a") == problem.scalar("b")) {
        throw ProblemFormatError("field 'a': must differ from b");
      }
      break;
    case ProblemKind::ScalarPair:
      for (const char* name : {"x1", "y1"}) need_scalar(name);
      if (problem.scalar("x1") * problem.scalar("y1") == Complex{0.0, 0.0}) {
        throw ProblemFormatError("field 'x1': x1 and y1 must be nonzero");
      }
      break;
  }
}

}  // namespace

const Matrix& ProblemFile::matrix(const std::string& name) const {
  const auto it = matrices.find(name);
  if (it == matrices.end()) {
    throw ProblemFormatError("field 'matrices." + name + "': missing");
  }
  return it->second;
}

Complex ProblemFile::scalar(const std::string& name) const {
  const auto it = scalars.find(name);
  if (it == scalars.end()) {
    throw ProblemFormatError("field '" + name + "': missing");
  }
  return it->second;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ProblemFormatError("cannot open problem file " + path.string());
  }
  json doc;
  try {
    stream >> doc;
  } catch (const json::parse_error& err) {
    throw ProblemFormatError("problem file " + path.string() +
                             " is not valid JSON: " + err.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ProblemFormatError("field 'kind': missing or not a string");
  }
  ProblemFile problem;
  problem.kind = parse_kind(doc["kind"].get<std::string>());

  if (doc.contains("matrices")) {
    if (!doc["matrices"].is_object()) {
      throw ProblemFormatError("field 'matrices': expected an object");
    }
    for (const auto& [name, value] : doc["matrices"].items()) {
      Matrix m;
      if (value.is_string()) {
        const auto sidecar = path.parent_path() / value.get<std::string>();
        m = read_matrix_market(sidecar);
      } else {
        m = parse_inline_matrix(value, "matrices." + name);
      }
      require_finite(m, "matrices." + name);
      problem.matrices.emplace(name, std::move(m));
    }
  }
  if (doc.contains("m")) {
    if (!doc["m"].is_number_integer()) {
      throw ProblemFormatError("field 'm': expected an integer");
    }
    problem.subspace_dim = doc["m"].get<Eigen::Index>();
  }
  for (const char* name : {"a", "b", "x1", "y1"}) {
    if (doc.contains(name)) {
      problem.scalars[name] = parse_complex(doc[name], name);
    }
  }
  validate_problem(problem);
  return problem;
}

namespace {

std::string lower(std::string text) {
  for (char& c : text) c = static_cast<char>(std::tolower(c));
  return text;
}

// Token-based numeric read so that "nan"/"inf" survive parsing and are then
// rejected by the finiteness check instead of silently failing the stream.
double read_value(std::istream& stream, const std::filesystem::path& path,
                  const char* what) {
  std::string token;
  if (!(stream >> token)) {
    throw ProblemFormatError(path.string() + ": truncated " + what);
  }
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw ProblemFormatError(path.string() + ": bad numeric token '" + token +
                             "'");
  }
  return value;
}

}  // namespace

Matrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ProblemFormatError("cannot open Matrix Market file " + path.string());
  }
  std::string header;
  if (!std::getline(stream, header) || header.rfind("%%MatrixMarket", 0) != 0) {
    throw ProblemFormatError(path.string() + ": missing %%MatrixMarket header");
  }
  std::istringstream head(header);
  std::string tag, object, format, field, symmetry;
  head >> tag >> object >> format >> field >> symmetry;
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") {
    throw ProblemFormatError(path.string() + ": unsupported object " + object);
  }
  if (field != "real" && field != "complex" && field != "integer") {
    throw ProblemFormatError(path.string() + ": unsupported field " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "hermitian") {
    throw ProblemFormatError(path.string() + ": unsupported symmetry " +
                             symmetry);
  }

  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  if (format == "array") {
    Eigen::Index rows = 0, cols = 0;
    if (!(sizes >> rows >> cols) || rows < 1 || cols < 1) {
      throw ProblemFormatError(path.string() + ": bad array size line");
    }
    Matrix m(rows, cols);
    // Array data is column-major; symmetric/hermitian files list the lower
    // triangle only.
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Eigen::Index start = symmetry == "general" ? 0 : j;
      for (Eigen::Index i = start; i < rows; ++i) {
        const double re = read_value(stream, path, "array data");
        const double im =
            field == "complex" ? read_value(stream, path, "complex pair") : 0.0;
        m(i, j) = {re, im};
        if (symmetry != "general" && i != j) {
          m(j, i) = symmetry == "hermitian" ? std::conj(m(i, j)) : m(i, j);
        }
      }
    }
    return m;
  }
  if (format == "coordinate") {
    Eigen::Index rows = 0, cols = 0;
    long long nnz = 0;
    if (!(sizes >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0) {
      throw ProblemFormatError(path.string() + ": bad coordinate size line");
    }
    Matrix m = Matrix::Zero(rows, cols);
    for (long long k = 0; k < nnz; ++k) {
      Eigen::Index i = 0, j = 0;
      if (!(stream >> i >> j)) {
        throw ProblemFormatError(path.string() + ": truncated coordinate data");
      }
      const double re = read_value(stream, path, "coordinate data");
      const double im =
          field == "complex" ? read_value(stream, path, "complex pair") : 0.0;
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ProblemFormatError(path.string() + ": coordinate out of range");
      }
      m(i - 1, j - 1) = {re, im};
      if (symmetry != "general" && i != j) {
        m(j - 1, i - 1) =
            symmetry == "hermitian" ? std::conj(m(i - 1, j - 1))
                                    : m(i - 1, j - 1);
      }
    }
    return m;
  }
  throw ProblemFormatError(path.string() + ": unsupported format " + format);
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream stream(path);
  if (!stream) {
    throw ProblemFormatError("cannot write Matrix Market file " +
                             path.string());
  }
  stream << "%%MatrixMarket matrix array complex general\n";
  stream << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      stream << format_double(m(i, j).real()) << " "
             << format_double(m(i, j).imag()) << "\n";
    }
  }
}

void write_history_csv(const std::filesystem::path& path,
                       const ConvergenceReport& report) {
  std::ofstream stream(path);
  if (!stream) {
    throw ProblemFormatError("cannot write history CSV " + path.string());
  }
  stream << "k,index,residual,elapsed_us\n";
  for (std::size_t k = 0; k < report.residuals.size(); ++k) {
    stream << (k + 1) << "," << report.iterate_indices[k] << ","
           << format_double(report.residuals[k]) << "," << report.elapsed_us[k]
           << "\n";
  }
}

void write_bench_csv(const std::filesystem::path& path,
                     const std::vector<BenchRow>& rows) {
  std::ofstream stream(path);
  if (!stream) {
    throw ProblemFormatError("cannot write bench CSV " + path.string());
  }
  stream << "mode,r,outer_steps,total_applies,final_residual,estimated_order,"
            "status\n";
  for (const BenchRow& row : rows) {
    stream << row.mode << "," << row.order << "," << row.outer_steps << ","
           << row.total_applies << "," << format_double(row.final_residual)
           << ","
           << (row.estimated_order ? format_double(*row.estimated_order) : "")
           << "," << row.status << "\n";
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

json report_to_json(const ConvergenceReport& report) {
  json out{{"status", semiflow::to_string(report.status)},
           {"steps", report.steps()},
           {"total_applies", report.total_applies},
           {"final_residual", report.final_residual()}};
  if (report.estimated_order) out["estimated_order"] = *report.estimated_order;
  if (report.estimated_rate) out["estimated_rate"] = *report.estimated_rate;
  if (!report.breakdown_detail.empty()) {
    out["breakdown_detail"] = report.breakdown_detail;
  }
  return out;
}

}  // namespace semiflow::io
