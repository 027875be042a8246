#pragma once

// Plain-text problem files. Labeled blocks, one label per line:
//
//   # comment
//   n 4
//   B
//   1 0 0 0
//   ...
//   Bprime
//   ...
//   w 1 0 0 0
//   z0
//   0 1 0 0
//   ...
//   phi
//   ...
//
// Values may follow a label on the same line. Entries are integers or p/q.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superlat/rational.hpp"

namespace superlat::cli {

struct ProblemFile {
  std::size_t n = 0;
  QMatrix b;
  std::optional<QMatrix> bprime;
  std::optional<QVector> w;
  std::vector<QVector> z0;
  std::optional<QMatrix> phi;
};

/// Throws Error(ParseError) on unknown labels, wrong shapes, non-symmetric
/// B or Bprime, non-integral or zero w, and z0 rows that are not integral.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::string& path);

/// A matrix file: either a problem file with a `phi` block or bare rows.
QMatrix load_matrix(const std::string& path, std::size_t n);

/// "1,0,0" or "1 0 0".
QVector parse_vector(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace superlat::cli
