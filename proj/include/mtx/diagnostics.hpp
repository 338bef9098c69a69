#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mtx {

enum class Severity { Error, Warning };

// Closed set of diagnostic codes emitted anywhere in the toolkit.
enum class DiagCode {
  // class-model validation
  NoPrimary,
  EmptyAttrs,
  CyclicInheritance,
  DupName,
  BadRef,
  DupAttr,
  // rdbms-model validation
  NoTables,
  EmptyTable,
  NoPkey,
  PkeyForeignCol,
  FkBadTarget,
  FkBadCol,
  // transformation
  FlattenCycle,
  DupColumn,
  FkToNonpersistentRoot,
  // text syntax
  ParseError,
  UnresolvedName,
};

std::string_view to_string(DiagCode code);
std::string_view to_string(Severity severity);

// Position of a token or error inside a source file. Line and column are
// 1-based; length is in bytes.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::ParseError;
  std::string path;     // element path, e.g. "class Customer / attr addr"
  std::string message;  // human text
  std::optional<SourceSpan> span;

  static Diagnostic error(DiagCode code, std::string path, std::string message) {
    return Diagnostic{Severity::Error, code, std::move(path), std::move(message), std::nullopt};
  }
  static Diagnostic error_at(DiagCode code, SourceSpan span, std::string message) {
    return Diagnostic{Severity::Error, code, "", std::move(message), std::move(span)};
  }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// One-line rendering: "file:line:col: error CODE: message" for diagnostics
// that originated in parsing, "file: error CODE: path: message" otherwise.
std::string format_diagnostic(const Diagnostic& diag, std::string_view fallback_file = "");

// Result of an operation that either yields a value or diagnostics.
// Some operations may attach non-fatal diagnostics alongside a value;
// ok() means a value is present and no diagnostic is an error.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value() && !has_errors(diagnostics); }
  explicit operator bool() const { return ok(); }

  T& operator*() { return *value; }
  const T& operator*() const { return *value; }
  T* operator->() { return &*value; }
  const T* operator->() const { return &*value; }

  static Outcome success(T v) { return Outcome{std::move(v), {}}; }
  static Outcome failure(Diagnostic diag) {
    Outcome out;
    out.diagnostics.push_back(std::move(diag));
    return out;
  }
  static Outcome failure(std::vector<Diagnostic> diags) {
    Outcome out;
    out.diagnostics = std::move(diags);
    return out;
  }
};

// Contract violations (stale element ids, queries on models that violate a
// stated precondition). These are programming errors, not user input errors.
class ModelError : public std::logic_error {
 public:
  ModelError(DiagCode code, const std::string& what) : std::logic_error(what), code_(code) {}
  DiagCode code() const { return code_; }

 private:
  DiagCode code_;
};

}  // namespace mtx
