#include "problem_file.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "superlat/error.hpp"
#include "superlat/linalg.hpp"

namespace superlat::cli {

namespace {

using Rows = std::vector<std::vector<Rational>>;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

bool is_label(const std::string& tok) {
  return tok == "n" || tok == "B" || tok == "Bprime" || tok == "w" || tok == "z0" || tok == "phi";
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  return toks;
}

std::vector<Rational> parse_row(const std::vector<std::string>& toks, std::size_t from) {
  std::vector<Rational> row;
  for (std::size_t i = from; i < toks.size(); ++i) row.push_back(parse_rational(toks[i]));
  return row;
}

QMatrix to_matrix(const Rows& rows, std::size_t n, const std::string& label) {
  if (rows.size() != n) fail(label + ": expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(label + ": row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                  " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QVector to_integral_vector(const std::vector<Rational>& row, std::size_t n, const std::string& label) {
  if (row.size() != n) fail(label + ": expected " + std::to_string(n) + " entries");
  QVector v(row);
  if (!is_integral(v)) fail(label + ": entries must be integers");
  return v;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  std::map<std::string, Rows> blocks;
  std::string current;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    std::size_t from = 0;
    if (is_label(toks[0])) {
      current = toks[0];
      if (blocks.count(current)) fail("line " + std::to_string(lineno) + ": duplicate block '" + current + "'");
      blocks[current];
      from = 1;
      if (toks.size() == 1) continue;
    } else if (current.empty()) {
      fail("line " + std::to_string(lineno) + ": data before any label");
    } else if (std::isalpha(static_cast<unsigned char>(toks[0][0]))) {
      fail("line " + std::to_string(lineno) + ": unknown label '" + toks[0] + "'");
    }
    blocks[current].push_back(parse_row(toks, from));
  }

  if (!blocks.count("B")) fail("missing block 'B'");
  ProblemFile pf;
  if (blocks.count("n")) {
    const auto& rows = blocks["n"];
    if (rows.size() != 1 || rows[0].size() != 1 || !is_integer(rows[0][0]) || rows[0][0] < 1) {
      fail("n: expected one positive integer");
    }
    pf.n = rows[0][0].get_num().get_ui();
  } else {
    pf.n = blocks["B"].size();
  }
  const std::size_t n = pf.n;

  pf.b = to_matrix(blocks["B"], n, "B");
  if (!is_symmetric(pf.b)) fail("B is not symmetric");
  if (blocks.count("Bprime")) {
    pf.bprime = to_matrix(blocks["Bprime"], n, "Bprime");
    if (!is_symmetric(*pf.bprime)) fail("Bprime is not symmetric");
  }
  if (blocks.count("w")) {
    const auto& rows = blocks["w"];
    if (rows.size() != 1) fail("w: expected a single row");
    pf.w = to_integral_vector(rows[0], n, "w");
    if (pf.w->is_zero()) fail("w must be nonzero");
  }
  if (blocks.count("z0")) {
    const auto& rows = blocks["z0"];
    if (rows.size() + 1 != n) fail("z0: expected " + std::to_string(n - 1) + " rows");
    for (const auto& r : rows) pf.z0.push_back(to_integral_vector(r, n, "z0"));
  }
  if (blocks.count("phi")) pf.phi = to_matrix(blocks["phi"], n, "phi");
  return pf;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ProblemFile load_problem(const std::string& path) { return parse_problem(read_file(path)); }

QMatrix load_matrix(const std::string& path, std::size_t n) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  Rows rows;
  bool labeled = false;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (std::isalpha(static_cast<unsigned char>(toks[0][0]))) {
      labeled = true;
      break;
    }
    rows.push_back(parse_row(toks, 0));
  }
  if (labeled) {
    ProblemFile pf = parse_problem(text);
    if (!pf.phi) fail("'" + path + "' has no phi block");
    if (pf.n != n) fail("phi has the wrong size");
    return *pf.phi;
  }
  return to_matrix(rows, n, "phi");
}

QVector parse_vector(std::string_view text) {
  std::string s(text);
  for (char& c : s)
    if (c == ',') c = ' ';
  auto toks = tokens_of(s);
  if (toks.empty()) fail("empty vector");
  return QVector(parse_row(toks, 0));
}

}  // namespace superlat::cli
