#include "lqo/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lqo/errors.hpp"

namespace lqo {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError("system file " + path + ": " + what, path);
}

Matrix matrix_from_market_file(const std::filesystem::path& file, const std::string& path) {
  std::ifstream in(file);
  if (!in) schema_error(path, "cannot open Matrix Market file '" + file.string() + "'");
  try {
    return read_matrix_market(in);
  } catch (const ValidationError& e) {
    schema_error(path, e.what());
  }
}

Matrix matrix_from_json(const json& node, const std::string& path, Eigen::Index rows,
                        Eigen::Index cols, const ParseOptions& options) {
  if (node.is_object()) {
    if (!node.contains("matrix_market") || !node["matrix_market"].is_string()) {
      schema_error(path, "expected a nested array or {\"matrix_market\": PATH}");
    }
    std::filesystem::path file = node["matrix_market"].get<std::string>();
    if (file.is_relative()) file = options.base_dir / file;
    Matrix m = matrix_from_market_file(file, path);
    if (m.rows() != rows || m.cols() != cols) {
      schema_error(path, "Matrix Market data is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    }
    return m;
  }
  if (!node.is_array()) schema_error(path, "expected an array of rows");
  if (static_cast<Eigen::Index>(node.size()) != rows) {
    schema_error(path, "has " + std::to_string(node.size()) + " rows, expected " +
                           std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = node[static_cast<std::size_t>(i)];
    const std::string row_path = path + "/" + std::to_string(i);
    if (!row.is_array()) schema_error(row_path, "expected an array");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      schema_error(row_path, "has " + std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(cols));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) schema_error(row_path + "/" + std::to_string(j), "expected a number");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

Eigen::Index count_field(const json& doc, const char* key) {
  const std::string path = std::string("/") + key;
  if (!doc.contains(key)) schema_error(path, "missing");
  const json& v = doc[key];
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    schema_error(path, "expected a nonnegative integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json system_to_json(const LqoSystem& s) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n_states"] = s.states();
  doc["n_inputs"] = s.inputs();
  doc["n_outputs"] = s.outputs();
  doc["A"] = matrix_to_json(s.a());
  doc["B"] = matrix_to_json(s.b());
  doc["C"] = matrix_to_json(s.c());
  json m = json::array();
  for (const Matrix& mi : s.m()) m.push_back(matrix_to_json(mi));
  doc["M"] = std::move(m);
  return doc;
}

json interval_to_json(const TimeInterval& t) {
  json j;
  j["t0"] = t.start();
  if (t.is_infinite()) {
    j["t1"] = "inf";
  } else {
    j["t1"] = t.end();
  }
  return j;
}

json complex_list(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json residual_to_json(const Residual& r) {
  return {{"norm", r.norm}, {"scale", r.scale}, {"relative", r.relative()}};
}

json residuals_to_json(const OptimalityReport& r) {
  json out;
  out["horizon"] = r.limited ? "limited" : "infinite";
  out["interval"] = interval_to_json(r.interval);
  if (r.limited) out["frechet_variant"] = to_string(r.variant);

  double op2 = 0.0;
  json op2_list = json::array();
  for (const Residual& x : r.op2) {
    op2 = std::max(op2, x.norm);
    op2_list.push_back(residual_to_json(x));
  }
  out["residual_norms"] = {{"op1", r.op1.norm}, {"op2", op2}, {"op3", r.op3.norm},
                           {"op4", r.op4.norm}};
  out["details"] = {{"op1", residual_to_json(r.op1)},
                    {"op2", op2_list},
                    {"op3", residual_to_json(r.op3)},
                    {"op4", residual_to_json(r.op4)},
                    {"petrov_galerkin_term_norm", norm2(r.petrov_galerkin_term)},
                    {"l_tau_norm", norm2(r.l_tau)}};
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

LqoSystem parse_system(std::string_view text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("system file is not valid JSON: ") + e.what(),
                          "byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) schema_error("/", "expected a JSON object");

  if (doc.contains("schema_version")) {
    const json& v = doc["schema_version"];
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
      schema_error("/schema_version", "unsupported schema version (expected " +
                                          std::to_string(kSchemaVersion) + ")");
    }
  }
  const Eigen::Index n = count_field(doc, "n_states");
  const Eigen::Index m = count_field(doc, "n_inputs");
  const Eigen::Index p = count_field(doc, "n_outputs");

  for (const char* key : {"A", "B", "C", "M"}) {
    if (!doc.contains(key)) schema_error(std::string("/") + key, "missing");
  }
  Matrix a = matrix_from_json(doc["A"], "/A", n, n, options);
  Matrix b = matrix_from_json(doc["B"], "/B", n, m, options);
  Matrix c = matrix_from_json(doc["C"], "/C", p, n, options);

  const json& mlist = doc["M"];
  if (!mlist.is_array()) schema_error("/M", "expected a list of matrices");
  if (static_cast<Eigen::Index>(mlist.size()) != p) {
    throw ValidationError("M length " + std::to_string(mlist.size()) + " ≠ p " + std::to_string(p),
                          "/M");
  }
  std::vector<Matrix> ms;
  for (std::size_t i = 0; i < mlist.size(); ++i) {
    ms.push_back(matrix_from_json(mlist[i], "/M/" + std::to_string(i), n, n, options));
  }

  LqoSystem system(std::move(a), std::move(b), std::move(c), std::move(ms));
  return options.require_hurwitz ? validate(std::move(system)) : system;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'", path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'", path.string());
  out << text;
  if (!out) throw ValidationError("write to '" + path.string() + "' failed", path.string());
}

LqoSystem load_system(const std::filesystem::path& path, bool require_hurwitz) {
  ParseOptions options;
  options.require_hurwitz = require_hurwitz;
  options.base_dir = path.parent_path();
  try {
    return parse_system(read_text_file(path), options);
  } catch (const Error& e) {
    // Prefix the file so multi-file commands say which input was bad.
    if (e.kind() == ErrorKind::validation) {
      throw ValidationError(path.string() + ": " + e.what(), e.context());
    }
    throw;
  }
}

std::string serialize_system(const LqoSystem& system) {
  return system_to_json(system).dump(2) + "\n";
}

void save_system(const std::filesystem::path& path, const LqoSystem& system) {
  write_text_file(path, serialize_system(system));
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty Matrix Market stream");
  std::string lower = line;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  std::istringstream banner(lower);
  std::string tag, object, layout, field, symmetry;
  banner >> tag >> object >> layout >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") {
    throw ValidationError("missing %%MatrixMarket matrix banner");
  }
  if (layout != "array" && layout != "coordinate") {
    throw ValidationError("unsupported Matrix Market layout '" + layout + "'");
  }
  if (field != "real" && field != "double" && field != "integer") {
    throw ValidationError("unsupported Matrix Market field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ValidationError("unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  do {
    if (!std::getline(in, line)) throw ValidationError("Matrix Market size line missing");
    line = trim(line);
  } while (line.empty() || line[0] == '%');

  std::istringstream size_line(line);
  long rows = 0, cols = 0, entries = 0;
  size_line >> rows >> cols;
  if (layout == "coordinate") size_line >> entries;
  if (!size_line || rows < 0 || cols < 0) throw ValidationError("bad Matrix Market size line");

  Matrix m = Matrix::Zero(rows, cols);
  auto next_value = [&](double& v) {
    while (in >> std::ws && in.peek() == '%') std::getline(in, line);
    return static_cast<bool>(in >> v);
  };

  if (layout == "array") {
    // Column-major; the symmetric variant stores the lower triangle only.
    for (long j = 0; j < cols; ++j) {
      for (long i = symmetric ? j : 0; i < rows; ++i) {
        double v = 0.0;
        if (!next_value(v)) throw ValidationError("Matrix Market array data ended early");
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
      }
    }
  } else {
    for (long k = 0; k < entries; ++k) {
      double ri = 0.0, ci = 0.0, v = 0.0;
      if (!next_value(ri) || !next_value(ci) || !next_value(v)) {
        throw ValidationError("Matrix Market coordinate data ended early");
      }
      const auto i = static_cast<long>(ri) - 1;
      const auto j = static_cast<long>(ci) - 1;
      if (i < 0 || i >= rows || j < 0 || j >= cols) {
        throw ValidationError("Matrix Market entry " + std::to_string(k + 1) + " out of range");
      }
      m(i, j) = v;
      if (symmetric) m(j, i) = v;
    }
  }
  require_finite(m, "Matrix Market data");
  return m;
}

std::string serialize_report(const ReductionReport& r) {
  json doc;
  doc["method"] = to_string(r.method);
  doc["interval"] = interval_to_json(r.interval);
  doc["order"] = r.rom.states();
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  doc["termination"] = to_string(r.termination);
  doc["rom_hurwitz"] = r.rom_hurwitz;
  doc["non_hurwitz_iterations"] = r.non_hurwitz_iterations;
  json history = json::array();
  for (const ComplexVector& poles : r.pole_history) history.push_back(complex_list(poles));
  doc["pole_history"] = std::move(history);
  doc["convergence_metric"] = r.convergence_metric;
  if (r.hsv) doc["hankel_singular_values"] = r.hsv->sigma;
  if (r.residuals) {
    const json res = residuals_to_json(*r.residuals);
    doc["residual_norms"] = res["residual_norms"];
    doc["residual_details"] = res["details"];
    doc["residual_horizon"] = res["horizon"];
  }
  doc["diagnostics"] = r.diagnostics;
  doc["rom"] = system_to_json(r.rom);
  return doc.dump(2) + "\n";
}

std::string serialize_residuals(const OptimalityReport& report) {
  return residuals_to_json(report).dump(2) + "\n";
}

}  // namespace lqo
