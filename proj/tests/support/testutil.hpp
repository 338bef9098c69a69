#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtx/class_model.hpp"
#include "mtx/rdbms_model.hpp"
#include "mtx/transform.hpp"

namespace mtx::test {

// Paths baked in at build time.
std::string bin_path();
std::string data_dir();
std::string data_file(const std::string& relative);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
bool file_exists(const std::string& path);

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string path(const std::string& name) const;

 private:
  std::string root_;
};

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI binary with the given arguments and captures the outcome.
RunResult run_mtx(const std::vector<std::string>& args);

// Diagnostic inspection shorthand for assertions.
bool has_code(const std::vector<Diagnostic>& diags, DiagCode code);
std::string diag_text(const std::vector<Diagnostic>& diags);

// True when a trace path names an existing element of the model.
bool source_path_resolves(const ClassModel& model, const std::string& path);
bool target_path_resolves(const RdbmsModel& model, const std::string& path);

// All trace-totality violations for a transformation result: output
// elements no link covers, plus links whose endpoints do not resolve.
// Empty means the trace is total and well-formed.
std::vector<std::string> trace_totality_gaps(const ClassModel& source, const RdbmsModel& model,
                                             const std::vector<TraceLink>& traces);

// Parses print_traces output back into links (inverse of the printer).
std::vector<TraceLink> parse_trace_lines(const std::string& text);

}  // namespace mtx::test
