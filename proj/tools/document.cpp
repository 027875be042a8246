#include "document.hpp"

namespace superlat::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) fail("expected a rational string");
  return parse_rational(j.get<std::string>());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Json to_json(const QMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

Json to_json(const Certificate& cert) {
  Json out;
  out["verdict"] = to_string(cert.verdict);
  out["equation"] = cert.equation;
  out["constants"] = Json::object();
  for (const auto& [k, v] : cert.constants) out["constants"][k] = v;
  out["witness"] = cert.witness ? to_json(cert.witness->m) : Json(nullptr);
  return out;
}

Json to_json(const CandidateIsometry& c, bool canonical) {
  Json out;
  out["M"] = to_json(c.m);
  out["integral"] = c.integral;
  out["canonical"] = canonical;
  Json prov;
  prov["s"] = c.provenance.s.get_str();
  prov["btilde"] = to_json(c.provenance.btilde);
  prov["atilde"] = to_json(c.provenance.atilde);
  prov["t"] = Json::array();
  for (const auto& t : c.provenance.t) prov["t"].push_back(t.get_str());
  prov["c"] = Json::array();
  for (const auto& v : c.provenance.c) prov["c"].push_back(to_json(v));
  out["provenance"] = std::move(prov);
  return out;
}

Json to_json(const SearchStats& st) {
  Json out;
  out["eq1_raw"] = st.eq1_raw;
  out["eq1_canonical"] = st.eq1_canonical;
  out["eq3_raw"] = st.eq3_raw;
  out["eq3_canonical"] = st.eq3_canonical;
  out["eq2_pairs"] = st.eq2_pairs;
  out["eq2_pairs_canonical"] = st.eq2_pairs_canonical;
  out["joint_survivors"] = st.joint_survivors;
  out["joint_survivors_canonical"] = st.joint_survivors_canonical;
  out["cs_pruned"] = st.cs_pruned;
  out["dual_rejected"] = st.dual_rejected;
  out["verify_rejected"] = st.verify_rejected;
  out["rational_candidates"] = st.rational_candidates;
  out["integral_candidates"] = st.integral_candidates;
  out["integral_canonical"] = st.integral_canonical;
  return out;
}

QVector vector_from_json(const Json& j) {
  if (!j.is_array()) fail("expected a vector");
  std::vector<Rational> xs;
  for (const auto& e : j) xs.push_back(rational_from_json(e));
  return QVector(std::move(xs));
}

QMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("expected a matrix");
  std::vector<QVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) fail("ragged matrix");
  return QMatrix::from_rows(rows);
}

Certificate certificate_from_json(const Json& j) {
  Certificate cert;
  try {
    cert.verdict = verdict_from_string(field(j, "verdict").get<std::string>());
    cert.equation = field(j, "equation").get<std::string>();
    for (const auto& [k, v] : field(j, "constants").items()) cert.constants[k] = v.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed certificate: ") + e.what());
  }
  const Json& wit = field(j, "witness");
  if (!wit.is_null()) {
    CandidateIsometry c;
    c.m = matrix_from_json(wit);
    c.integral = is_unimodular(c.m);
    cert.witness = std::move(c);
  }
  return cert;
}

namespace {

bool is_flat_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

// Like dump(2), but arrays of scalars stay on one line so matrices read row by row.
void write(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (!j.is_structured() || j.empty()) {
    out += j.dump();
    return;
  }
  if (is_flat_array(j)) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
    return;
  }
  const bool obj = j.is_object();
  out += obj ? "{\n" : "[\n";
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i) {
    out += inner;
    if (obj) out += Json(it.key()).dump() + ": ";
    write(*it, indent + 2, out);
    if (i + 1 < j.size()) out += ",";
    out += "\n";
  }
  out += pad + (obj ? "}" : "]");
}

}  // namespace

std::string dump(const Json& doc) {
  std::string out;
  write(doc, 0, out);
  return out + "\n";
}

}  // namespace superlat::cli
