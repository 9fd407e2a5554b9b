// SPDX-License-Identifier: Apache-2.0
#include "qmlim/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace qmlim {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Complex parse_complex(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string(where) + ": complex scalars must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector parse_vector(const json& j, Eigen::Index dim, const char* where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
    throw ParseError(std::string(where) + ": expected a vector of length " +
                     std::to_string(dim));
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = parse_complex(j[i], where);
  return v;
}

Matrix parse_matrix(const json& j, Eigen::Index dim, const char* where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
    throw ParseError(std::string(where) + ": expected a " + std::to_string(dim) +
                     "x" + std::to_string(dim) + " row-major matrix");
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      throw ParseError(std::string(where) + ": row " + std::to_string(i) +
                       " has wrong length");
    for (Eigen::Index k = 0; k < dim; ++k) m(i, k) = parse_complex(row[k], where);
  }
  return m;
}

ordered_json dump_complex(const Complex& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json dump_vector(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(dump_complex(v(i)));
  return out;
}

ordered_json dump_matrix(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(dump_complex(m(i, k)));
    out.push_back(row);
  }
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (static_cast<unsigned char>(c) < 0x20) continue;  // names are plain text
    out += c;
  }
  return out;
}

}  // namespace

LoadedModel load_model(const std::string& path,
                       std::optional<double> validation_override) {
  const std::string bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("top level must be an object");
    if (doc.value("schema_version", std::string{}) != "1")
      throw ParseError("schema_version must be \"1\"");

    LoadedModel out;
    out.checksum = fnv1a64_hex(bytes);
    if (doc.contains("tolerances")) {
      const json& t = doc["tolerances"];
      out.tol = Tolerances(t.value("cluster_gap", out.tol.cluster_gap),
                           t.value("zero_threshold", out.tol.zero_threshold),
                           t.value("validation", out.tol.validation));
    }
    if (validation_override) out.tol.validation = *validation_override;

    const Eigen::Index dh = doc.at("dim_h").get<Eigen::Index>();
    const Eigen::Index dk = doc.at("dim_k").get<Eigen::Index>();
    if (dh <= 0 || dk <= 0) throw ParseError("dimensions must be positive");

    NamedModel& m = out.model;
    m.name = doc.value("name", std::string("model"));
    Vector xi = parse_vector(doc.at("xi"), dk, "xi");
    Matrix u = parse_matrix(doc.at("u"), dh * dk, "u");
    Matrix meter = parse_matrix(doc.at("m"), dk, "m");
    m.observable = parse_matrix(doc.at("a"), dh, "a");
    require_hermitian(m.observable, out.tol.validation, "a");
    m.process = MeasuringProcess::make(dh, dk, std::move(xi), std::move(u),
                                       std::move(meter), out.tol);
    if (doc.contains("psi_list"))
      for (std::size_t i = 0; i < doc["psi_list"].size(); ++i) {
        Vector psi = parse_vector(doc["psi_list"][i], dh, "psi_list");
        if (std::abs(psi.norm() - 1.0) > 1e-10)
          throw ParseError("psi_list[" + std::to_string(i) + "] is not normalized");
        m.psi_list.push_back(std::move(psi));
      }
    if (doc.contains("conserved"))
      for (const json& c : doc["conserved"]) {
        ConservedPair pair;
        pair.kind = law_kind_from_string(c.at("kind").get<std::string>());
        pair.l1 = parse_matrix(c.at("l1"), dh, "conserved l1");
        pair.l2 = parse_matrix(c.at("l2"), dk, "conserved l2");
        require_hermitian(pair.l1, out.tol.validation, "conserved l1");
        require_hermitian(pair.l2, out.tol.validation, "conserved l2");
        m.conserved.push_back(std::move(pair));
      }
    if (doc.contains("expected")) {
      const json& e = doc["expected"];
      auto get = [&](const char* key) -> std::optional<bool> {
        if (e.contains(key)) return e[key].get<bool>();
        return std::nullopt;
      };
      m.expected.precise = get("precise");
      m.expected.nondisturbing = get("nondisturbing");
      m.expected.araki_yanase = get("araki_yanase");
      m.expected.repeatable = get("repeatable");
      if (e.contains("conserved"))
        for (const json& b : e["conserved"]) m.expected.conserved.push_back(b.get<bool>());
      if (e.contains("yanase"))
        for (const json& b : e["yanase"]) m.expected.yanase.push_back(b.get<bool>());
    }
    return out;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void save_model(const std::string& path, const NamedModel& m) {
  ordered_json doc;
  doc["schema_version"] = "1";
  doc["name"] = m.name;
  doc["dim_h"] = m.process.dim_h();
  doc["dim_k"] = m.process.dim_k();
  doc["xi"] = dump_vector(m.process.xi());
  doc["u"] = dump_matrix(m.process.u());
  doc["m"] = dump_matrix(m.process.meter());
  doc["a"] = dump_matrix(m.observable);
  doc["psi_list"] = ordered_json::array();
  for (const Vector& psi : m.psi_list) doc["psi_list"].push_back(dump_vector(psi));
  doc["conserved"] = ordered_json::array();
  for (const ConservedPair& c : m.conserved) {
    ordered_json pair;
    pair["kind"] = to_string(c.kind);
    pair["l1"] = dump_matrix(c.l1);
    pair["l2"] = dump_matrix(c.l2);
    doc["conserved"].push_back(pair);
  }
  ordered_json e;
  if (m.expected.precise) e["precise"] = *m.expected.precise;
  if (m.expected.nondisturbing) e["nondisturbing"] = *m.expected.nondisturbing;
  if (m.expected.araki_yanase) e["araki_yanase"] = *m.expected.araki_yanase;
  if (m.expected.repeatable) e["repeatable"] = *m.expected.repeatable;
  if (!m.expected.conserved.empty()) e["conserved"] = m.expected.conserved;
  if (!m.expected.yanase.empty()) e["yanase"] = m.expected.yanase;
  if (!e.empty()) doc["expected"] = e;

  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw Error("save_model: cannot write '" + path + "'");
  outf << doc.dump(1) << "\n";
}

CheckResult make_check(std::string name, double value, double threshold,
                       bool expected) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.pass = value <= threshold;
  c.expected = expected;
  c.ok = c.pass == c.expected;
  return c;
}

void Report::finalize() {
  verdict = "PASS";
  for (const CheckResult& c : checks)
    if (!c.ok) verdict = "FAIL";
}

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

namespace {

const char* yn(bool b) { return b ? "true" : "false"; }

void render_rows_json(std::ostringstream& os, const Report& r) {
  os << " \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const CheckResult& c = r.checks[i];
    os << (i ? ",\n  " : "\n  ");
    os << "{\"name\": \"" << json_escape(c.name) << "\", \"value\": "
       << format_sig12(c.value) << ", \"threshold\": " << format_sig12(c.threshold)
       << ", \"pass\": " << yn(c.pass) << ", \"expected\": " << yn(c.expected)
       << ", \"ok\": " << yn(c.ok) << "}";
  }
  os << (r.checks.empty() ? "],\n" : "\n ],\n");
  if (!r.bound_rows.empty()) {
    os << " \"bound_rows\": [";
    for (std::size_t i = 0; i < r.bound_rows.size(); ++i) {
      const BoundRowOut& b = r.bound_rows[i];
      os << (i ? ",\n  " : "\n  ");
      os << "{\"pair\": " << b.pair << ", \"psi\": " << b.psi
         << ", \"kernel\": " << yn(b.kernel);
      if (!b.kernel) {
        os << ", \"eps_sq\": " << format_sig12(b.eps_sq)
           << ", \"rhs_general\": " << format_sig12(b.rhs_general);
        if (b.rhs_yanase)
          os << ", \"rhs_yanase\": " << format_sig12(*b.rhs_yanase);
        os << ", \"ratio_R\": " << format_sig12(b.ratio_R)
           << ", \"cv\": " << format_sig12(b.cv);
      }
      os << "}";
    }
    os << "\n ],\n";
  }
  if (r.optimum) {
    const OptimumOut& o = *r.optimum;
    os << " \"optimum\": {\"l_min\": " << format_sig12(o.l_min)
       << ", \"l_max\": " << format_sig12(o.l_max)
       << ", \"p_min\": " << format_sig12(o.p_min)
       << ", \"p_max\": " << format_sig12(o.p_max)
       << ", \"r_min\": " << format_sig12(o.r_min) << ",\n"
       << "  \"state\": [";
    for (std::size_t i = 0; i < o.state.size(); ++i) {
      os << (i ? ", " : "") << "[" << format_sig12(o.state[i].real()) << ", "
         << format_sig12(o.state[i].imag()) << "]";
    }
    os << "],\n  \"ratio_at_state\": " << format_sig12(o.ratio_at_state)
       << ", \"cv_at_state\": " << format_sig12(o.cv_at_state);
    if (o.grid_min) os << ", \"grid_min\": " << format_sig12(*o.grid_min);
    os << "},\n";
  }
}

}  // namespace

std::string render_report_json(const Report& r, const std::string& timestamp) {
  std::ostringstream os;
  os << "{\n";
  os << " \"schema_version\": \"1\",\n";
  os << " \"tool\": \"" << json_escape(r.tool) << "\",\n";
  os << " \"command\": \"" << json_escape(r.command) << "\",\n";
  os << " \"model\": \"" << json_escape(r.model) << "\",\n";
  os << " \"model_checksum\": \"" << json_escape(r.model_checksum) << "\",\n";
  os << " \"seed\": " << r.seed << ",\n";
  os << " \"tolerance\": " << format_sig12(r.tolerance) << ",\n";
  render_rows_json(os, r);
  os << " \"verdict\": \"" << json_escape(r.verdict) << "\",\n";
  std::string body = os.str();
  std::string checksum = fnv1a64_hex(body);
  os << " \"timestamp\": \"" << json_escape(timestamp) << "\",\n";
  os << " \"checksum\": \"" << checksum << "\"\n";
  os << "}\n";
  return os.str();
}

std::string render_report_text(const Report& r, const std::string& timestamp) {
  std::ostringstream os;
  os << r.tool << " report\n";
  os << "command: " << r.command << "\n";
  os << "model: " << r.model << "\n";
  os << "model_checksum: " << r.model_checksum << "\n";
  os << "seed: " << r.seed << "\n";
  os << "tolerance: " << format_sig12(r.tolerance) << "\n";
  for (const CheckResult& c : r.checks)
    os << "check " << c.name << ": value=" << format_sig12(c.value)
       << " threshold=" << format_sig12(c.threshold) << " pass=" << yn(c.pass)
       << " expected=" << yn(c.expected) << " ok=" << yn(c.ok) << "\n";
  for (const BoundRowOut& b : r.bound_rows) {
    os << "bound pair=" << b.pair << " psi=" << b.psi;
    if (b.kernel) {
      os << " kernel=true";
    } else {
      os << " eps_sq=" << format_sig12(b.eps_sq)
         << " rhs_general=" << format_sig12(b.rhs_general);
      if (b.rhs_yanase) os << " rhs_yanase=" << format_sig12(*b.rhs_yanase);
      os << " R=" << format_sig12(b.ratio_R) << " cv=" << format_sig12(b.cv);
    }
    os << "\n";
  }
  if (r.optimum) {
    const OptimumOut& o = *r.optimum;
    os << "optimum l_min=" << format_sig12(o.l_min)
       << " l_max=" << format_sig12(o.l_max) << "\n";
    os << "optimum p_min=" << format_sig12(o.p_min)
       << " p_max=" << format_sig12(o.p_max)
       << " r_min=" << format_sig12(o.r_min) << "\n";
    os << "optimum state=";
    for (std::size_t i = 0; i < o.state.size(); ++i)
      os << (i ? " " : "") << "[" << format_sig12(o.state[i].real()) << ","
         << format_sig12(o.state[i].imag()) << "]";
    os << "\n";
    os << "optimum ratio_at_state=" << format_sig12(o.ratio_at_state)
       << " cv_at_state=" << format_sig12(o.cv_at_state);
    if (o.grid_min) os << " grid_min=" << format_sig12(*o.grid_min);
    os << "\n";
  }
  os << "verdict: " << r.verdict << "\n";
  std::string body = os.str();
  os << "timestamp: " << timestamp << "\n";
  os << "checksum: " << fnv1a64_hex(body) << "\n";
  return os.str();
}

std::string utc_timestamp_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qmlim
