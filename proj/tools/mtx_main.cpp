#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtx/class_model.hpp"
#include "mtx/rdbms_model.hpp"
#include "mtx/textio.hpp"
#include "mtx/transform.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    return std::nullopt;
  }
  return std::move(buffer).str();
}

// All output files are written to a temp path and renamed into place, so a
// failing run never leaves a partially written file behind.
bool write_file_atomic(const std::string& path, std::string_view content) {
  std::filesystem::path target(path);
  std::filesystem::path temp(path + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "mtx: cannot write " << temp.string() << "\n";
      return false;
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::cerr << "mtx: cannot write " << temp.string() << "\n";
      std::error_code ec;
      std::filesystem::remove(temp, ec);
      return false;
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::cerr << "mtx: cannot rename " << temp.string() << " to " << path << ": "
              << ec.message() << "\n";
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    return false;
  }
  return true;
}

void print_diagnostics(const std::vector<mtx::Diagnostic>& diags, const std::string& file) {
  for (const mtx::Diagnostic& diag : diags) {
    std::cerr << mtx::format_diagnostic(diag, file) << "\n";
  }
}

int run_validate(const std::string& input) {
  std::optional<std::string> text = read_file(input);
  if (!text.has_value()) {
    std::cerr << "mtx: cannot read " << input << "\n";
    return 2;
  }
  mtx::Outcome<mtx::ClassModel> parsed = mtx::parse_class_model(*text, input);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, input);
    return 1;
  }
  std::vector<mtx::Diagnostic> diags = mtx::validate_class_model(*parsed);
  print_diagnostics(diags, input);
  return mtx::has_errors(diags) ? 1 : 0;
}

int run_transform(const std::string& input, const std::string& out_path,
                  const std::string& trace_path, bool ddl) {
  std::optional<std::string> text = read_file(input);
  if (!text.has_value()) {
    std::cerr << "mtx: cannot read " << input << "\n";
    return 2;
  }
  mtx::Outcome<mtx::ClassModel> parsed = mtx::parse_class_model(*text, input);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, input);
    return 1;
  }
  std::vector<mtx::Diagnostic> source_diags = mtx::validate_class_model(*parsed);
  if (mtx::has_errors(source_diags)) {
    print_diagnostics(source_diags, input);
    return 1;
  }
  mtx::Outcome<mtx::TransformResult> result = mtx::transform(*parsed);
  if (!result.ok()) {
    print_diagnostics(result.diagnostics, input);
    return 1;
  }
  std::vector<mtx::Diagnostic> target_diags = mtx::validate_rdbms_model(result->model);
  if (mtx::has_errors(target_diags)) {
    print_diagnostics(target_diags, input);
    return 1;
  }
  std::string model_text =
      ddl ? mtx::emit_ddl(result->model) : mtx::print_rdbms_model(result->model);
  if (!write_file_atomic(out_path, model_text)) {
    return 2;
  }
  if (!trace_path.empty() && !write_file_atomic(trace_path, mtx::print_traces(result->traces))) {
    return 2;
  }
  return 0;
}

int run_print(const std::string& input, const std::string& kind) {
  std::optional<std::string> text = read_file(input);
  if (!text.has_value()) {
    std::cerr << "mtx: cannot read " << input << "\n";
    return 2;
  }
  if (kind == "class") {
    mtx::Outcome<mtx::ClassModel> parsed = mtx::parse_class_model(*text, input);
    if (!parsed.ok()) {
      print_diagnostics(parsed.diagnostics, input);
      return 1;
    }
    std::cout << mtx::print_class_model(*parsed);
    return 0;
  }
  mtx::Outcome<mtx::RdbmsModel> parsed = mtx::parse_rdbms_model(*text, input);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, input);
    return 1;
  }
  std::cout << mtx::print_rdbms_model(*parsed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class-model to RDBMS-model transformation toolkit"};
  app.require_subcommand(1);

  std::string input;
  std::string out_path;
  std::string trace_path;
  std::string kind;
  bool ddl = false;

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a class model");
  validate->add_option("file", input, "class model file")->required();

  CLI::App* transform =
      app.add_subcommand("transform", "transform a class model into an RDBMS model");
  transform->add_option("file", input, "class model file")->required();
  transform->add_option("--out", out_path, "output model file")->required();
  transform->add_option("--trace", trace_path, "trace link output file");
  transform->add_flag("--ddl", ddl, "write SQL DDL instead of model syntax");

  CLI::App* print = app.add_subcommand("print", "reprint a model file in canonical form");
  print->add_option("file", input, "model file")->required();
  print->add_option("--kind", kind, "input kind: class or rdbms")
      ->required()
      ->check(CLI::IsMember({"class", "rdbms"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(validate)) {
    return run_validate(input);
  }
  if (app.got_subcommand(transform)) {
    return run_transform(input, out_path, trace_path, ddl);
  }
  return run_print(input, kind);
}
