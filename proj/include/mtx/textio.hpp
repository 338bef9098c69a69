#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtx/class_model.hpp"
#include "mtx/diagnostics.hpp"
#include "mtx/rdbms_model.hpp"
#include "mtx/transform.hpp"

namespace mtx {

// Both parsers accept any byte sequence and return either a model or
// positioned diagnostics, never crash. Name resolution runs after the full
// parse, so forward references are legal. Syntactically recoverable input
// with semantic defects (duplicate names, wrong element kinds) still parses;
// those defects are the validators' responsibility. `file` only labels the
// diagnostics' source spans.
Outcome<ClassModel> parse_class_model(std::string_view text, std::string_view file = "<input>");
Outcome<RdbmsModel> parse_rdbms_model(std::string_view text, std::string_view file = "<input>");

// Canonical printers. Laws, for any validated model m:
//   parse(print(m)) is structurally equal to m (for class models, modulo
//   regrouping of the classifier list into primitives-then-classes order);
//   print(parse(print(m))) == print(m) byte-for-byte.
std::string print_class_model(const ClassModel& model);
std::string print_rdbms_model(const RdbmsModel& model);

// One link per line, `R<k>\t<source_path>\t<target_path>`, sorted by
// (target_path, rule, source_path).
std::string print_traces(std::vector<TraceLink> traces);

// SQL DDL view of a validated model: one CREATE TABLE statement per table,
// blank line between statements. String maps to VARCHAR(255), Int to
// INTEGER, any other primitive name is uppercased verbatim.
std::string emit_ddl(const RdbmsModel& model);

}  // namespace mtx
