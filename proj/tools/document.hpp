#pragma once

// JSON result documents. Rationals are "p/q" strings, matrices arrays of rows.

#include <json.hpp>

#include "superlat/isosearch.hpp"

namespace superlat::cli {

using Json = nlohmann::ordered_json;

Json to_json(const QVector& v);
Json to_json(const QMatrix& m);
Json to_json(const Certificate& cert);
Json to_json(const CandidateIsometry& c, bool canonical);
Json to_json(const SearchStats& st);

/// Inverses; throw Error(ParseError) on malformed input.
QVector vector_from_json(const Json& j);
QMatrix matrix_from_json(const Json& j);
Certificate certificate_from_json(const Json& j);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& doc);

}  // namespace superlat::cli
