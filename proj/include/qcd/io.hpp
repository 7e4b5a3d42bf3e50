#pragma once

// JSON / CSV serialization and input parsing for the command-line tool.

#include <qcd/banded.hpp>
#include <qcd/bundles.hpp>
#include <qcd/canonical.hpp>
#include <qcd/error.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/shifts.hpp>
#include <qcd/spectra.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qcd::io {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// ---- JSON -------------------------------------------------------------------------

inline json to_json(const Quaternion& q) { return json::array({q.a0, q.a1, q.a2, q.a3}); }

inline json to_json(const QVector& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

inline json to_json(const QMatrix& A) {
  json rows = json::array();
  for (std::size_t r = 0; r < A.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < A.cols(); ++c) row.push_back(to_json(A(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// G[m][k][i][j]
inline json to_json(const GramData& g) {
  json t = json::array();
  for (std::size_t m = 0; m <= g.order; ++m) {
    json tm = json::array();
    for (std::size_t k = 0; k <= g.order; ++k) {
      json tk = json::array();
      for (std::size_t i = 0; i < g.rank; ++i) {
        json ti = json::array();
        for (std::size_t j = 0; j < g.rank; ++j) ti.push_back(to_json(g.at(m, k, i, j)));
        tk.push_back(std::move(ti));
      }
      tm.push_back(std::move(tk));
    }
    t.push_back(std::move(tm));
  }
  return t;
}

inline json to_json(const PencilResult& r) {
  json j;
  j["s"] = to_json(r.s);
  j["sigma_min"] = r.sigma_min;
  j["sigma_max"] = r.sigma_max;
  j["kernel_dim_H"] = r.kernel_dim_H;
  j["complex_kernel_dim"] = r.complex_kernel_dim;
  j["surjectivity"] = r.surjectivity;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

inline json to_json(const ProbeReport& rep) {
  json j;
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json x;
    x["s"] = to_json(e.s);
    x["N"] = e.N;
    x["kernel_dim_H"] = e.kernel_dim_H;
    x["sigma_min"] = e.sigma_min;
    x["surjectivity"] = e.surjectivity;
    if (!e.diagnostic.empty()) x["diagnostic"] = e.diagnostic;
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  j["sample_stable"] = rep.sample_stable;
  j["n"] = rep.n ? json(*rep.n) : json(nullptr);
  return j;
}

inline json to_json(const JetFrame& F) {
  json j;
  j["base"] = to_json(F.base);
  j["order"] = F.order;
  j["rank"] = F.rank();
  json sections = json::array();
  for (const auto& sec : F.jets) {
    json js = json::array();
    for (const auto& v : sec) js.push_back(to_json(v));
    sections.push_back(std::move(js));
  }
  j["jets"] = std::move(sections);
  return j;
}

inline json to_json(const CanonicalRep& rep) {
  json j;
  j["base"] = to_json(rep.base);
  j["size"] = rep.size;
  j["N"] = to_json(rep.N);
  j["diag_residual"] = rep.diag_residual;
  j["lower_residual"] = rep.lower_residual;
  return j;
}

inline json to_json(const GramComparison& c) {
  json j;
  j["condition3"] = c.condition3;
  j["all_blocks"] = c.all_blocks;
  j["dev_condition3"] = c.dev_condition3;
  j["dev_all"] = c.dev_all;
  j["worst_block"] = json::array({c.worst_m, c.worst_k});
  return j;
}

inline json envelope(std::string_view command) {
  json j;
  j["schema"] = schema_version;
  j["command"] = std::string(command);
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- JSON input ---------------------------------------------------------------------

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::invalid_argument, origin + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::invalid_argument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline Quaternion quaternion_from_json(const json& j, const std::string& what) {
  if (j.is_number()) return Quaternion(j.get<double>());
  if (!j.is_array() || j.size() != 4)
    throw error(errc::invalid_argument, what + ": expected a number or a 4-array");
  double a[4];
  for (std::size_t t = 0; t < 4; ++t) {
    if (!j[t].is_number()) throw error(errc::invalid_argument, what + ": non-numeric component");
    a[t] = j[t].get<double>();
  }
  return {a[0], a[1], a[2], a[3]};
}

inline QMatrix qmatrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw error(errc::invalid_argument, what + ": expected nested arrays");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw error(errc::invalid_argument, what + ": expected nested arrays");
  const std::size_t cols = j[0].size();
  QMatrix A(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw error(errc::invalid_argument, what + ": ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c)
      A(r, c) = quaternion_from_json(j[r][c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return A;
}

inline WeightRule weights_from_list(const json& j, const std::string& origin) {
  if (!j.is_array() || j.empty()) throw error(errc::invalid_argument, origin + ": expected a non-empty list of weights");
  std::vector<Quaternion> ws;
  for (std::size_t n = 0; n < j.size(); ++n) ws.push_back(quaternion_from_json(j[n], origin + "[" + std::to_string(n) + "]"));
  return WeightRule::listed(std::move(ws), "custom:" + origin);
}

// Weight DSL: const:c | ratio | custom:file.json
inline WeightRule parse_weight_rule(const std::string& spec) {
  if (spec == "ratio") return WeightRule::ratio();
  if (spec.rfind("const:", 0) == 0) {
    try {
      return WeightRule::constant(parse_quaternion(spec.substr(6)));
    } catch (const std::exception& e) {
      throw error(errc::invalid_argument, "bad constant weight '" + spec + "': " + e.what());
    }
  }
  if (spec.rfind("custom:", 0) == 0) {
    const std::string path = spec.substr(7);
    return weights_from_list(read_json_file(path), path);
  }
  throw error(errc::invalid_argument, "unknown weight rule '" + spec + "' (const:c, ratio, custom:file.json)");
}

// Operator description:
//   {"schema": 1, "kind": "banded", "diag": q, "weights": "const:1", "patch": [[r, c, q], ...]}
//   {"schema": 1, "kind": "dense", "matrix": [[q, ...], ...]}
struct OperatorSpec {
  bool dense = false;
  BandedOperator banded;
  QMatrix matrix;

  QMatrix at(std::size_t N) const { return dense ? matrix : truncate(banded, N); }
};

inline OperatorSpec operator_from_json(const json& j, const std::string& origin) {
  if (!j.is_object()) throw error(errc::invalid_argument, origin + ": expected a JSON object");
  if (j.contains("schema") && j["schema"] != schema_version)
    throw error(errc::invalid_argument, origin + ": unsupported schema");
  const std::string kind = j.value("kind", "");
  OperatorSpec op;
  if (kind == "dense") {
    if (!j.contains("matrix")) throw error(errc::invalid_argument, origin + ": missing 'matrix'");
    op.dense = true;
    op.matrix = qmatrix_from_json(j["matrix"], origin + ".matrix");
    if (!op.matrix.square()) throw error(errc::invalid_argument, origin + ": matrix must be square");
    return op;
  }
  if (kind != "banded") throw error(errc::invalid_argument, origin + ": 'kind' must be 'banded' or 'dense'");
  op.banded.name = j.value("name", "custom");
  if (j.contains("diag")) op.banded.diag = quaternion_from_json(j["diag"], origin + ".diag");
  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (w.is_string()) op.banded.weights = parse_weight_rule(w.get<std::string>());
    else op.banded.weights = weights_from_list(w, origin + ".weights");
  }
  if (j.contains("patch")) {
    const json& p = j["patch"];
    if (!p.is_array()) throw error(errc::invalid_argument, origin + ".patch: expected a list");
    for (const auto& e : p) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        throw error(errc::invalid_argument, origin + ".patch: entries are [row, col, value]");
      op.banded.patch[{e[0].get<std::size_t>(), e[1].get<std::size_t>()}] =
          quaternion_from_json(e[2], origin + ".patch value");
    }
  }
  return op;
}

inline OperatorSpec read_operator(const std::string& path) { return operator_from_json(read_json_file(path), path); }

inline const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> names{"tci", "cndu-T", "cndu-T-tilde", "shift"};
  return names;
}

// Built-in operators; "shift" takes its weights from the DSL string.
inline OperatorSpec operator_by_name(const std::string& name, const std::string& weights = "const:1") {
  OperatorSpec op;
  if (name == "tci") op.banded = tci_operator();
  else if (name == "cndu-T") op.banded = cndu_T();
  else if (name == "cndu-T-tilde") op.banded = cndu_T_tilde();
  else if (name == "shift") op.banded = weighted_shift(parse_weight_rule(weights));
  else throw error(errc::invalid_argument, "unknown operator '" + name + "'");
  return op;
}

inline std::string operator_label(const OperatorSpec& op) { return op.dense ? std::string("dense") : op.banded.name; }

// ---- CSV ----------------------------------------------------------------------------

// '.' decimal, ',' separator, LF endings; values printed round-trip exact.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) { row_strings(header); }

  CsvWriter& row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw error(errc::invalid_argument, "csv row width mismatch");
    row_strings(cells);
    return *this;
  }

  const std::string& str() const { return out_; }

  static std::string num(double v) { return format_real(v); }
  static std::string num(std::size_t v) { return std::to_string(v); }
  static std::string boolean(bool b) { return b ? "true" : "false"; }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out_ += ',';
      out_ += quote(cells[c]);
    }
    out_ += '\n';
  }
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }

  std::size_t cols_;
  std::string out_;
};

}  // namespace qcd::io
