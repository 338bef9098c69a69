#include "mtx/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace mtx {

std::string_view to_string(DiagCode code) {
  switch (code) {
    case DiagCode::NoPrimary: return "NO_PRIMARY";
    case DiagCode::EmptyAttrs: return "EMPTY_ATTRS";
    case DiagCode::CyclicInheritance: return "CYCLIC_INHERITANCE";
    case DiagCode::DupName: return "DUP_NAME";
    case DiagCode::BadRef: return "BAD_REF";
    case DiagCode::DupAttr: return "DUP_ATTR";
    case DiagCode::NoTables: return "NO_TABLES";
    case DiagCode::EmptyTable: return "EMPTY_TABLE";
    case DiagCode::NoPkey: return "NO_PKEY";
    case DiagCode::PkeyForeignCol: return "PKEY_FOREIGN_COL";
    case DiagCode::FkBadTarget: return "FK_BAD_TARGET";
    case DiagCode::FkBadCol: return "FK_BAD_COL";
    case DiagCode::FlattenCycle: return "FLATTEN_CYCLE";
    case DiagCode::DupColumn: return "DUP_COLUMN";
    case DiagCode::FkToNonpersistentRoot: return "FK_TO_NONPERSISTENT_ROOT";
    case DiagCode::ParseError: return "PARSE_ERROR";
    case DiagCode::UnresolvedName: return "UNRESOLVED_NAME";
  }
  return "UNKNOWN";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& diag, std::string_view fallback_file) {
  std::ostringstream out;
  if (diag.span.has_value()) {
    const SourceSpan& span = *diag.span;
    out << (span.file.empty() ? fallback_file : std::string_view(span.file)) << ':' << span.line
        << ':' << span.column << ": ";
  } else if (!fallback_file.empty()) {
    out << fallback_file << ": ";
  }
  out << to_string(diag.severity) << ' ' << to_string(diag.code) << ": ";
  if (!diag.path.empty()) {
    out << diag.path << ": ";
  }
  out << diag.message;
  return out.str();
}

}  // namespace mtx
