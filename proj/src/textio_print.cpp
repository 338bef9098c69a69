#include <algorithm>
#include <cctype>
#include <string>
#include <tuple>

#include "mtx/textio.hpp"

namespace mtx {

namespace {

void append_joined(std::string& out, const std::vector<std::string>& parts) {
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += parts[i];
  }
}

std::string ddl_type(const std::string& primitive) {
  if (primitive == "String") {
    return "VARCHAR(255)";
  }
  if (primitive == "Int") {
    return "INTEGER";
  }
  std::string out = primitive;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string print_class_model(const ClassModel& model) {
  std::string out;
  for (const Classifier& classifier : model.classifiers()) {
    if (const PrimitiveDataType* prim = std::get_if<PrimitiveDataType>(&classifier)) {
      out += "primitive " + prim->name + "\n";
    }
  }
  for (const Classifier& classifier : model.classifiers()) {
    const Class* cls = std::get_if<Class>(&classifier);
    if (cls == nullptr) {
      continue;
    }
    out += "class " + cls->name;
    if (cls->is_persistent) {
      out += " persistent";
    }
    if (cls->parent.has_value()) {
      out += " extends " + model.classifier_name(*cls->parent);
    }
    out += " {\n";
    for (const Attribute& attr : cls->attributes) {
      out += "  ";
      if (attr.is_primary) {
        out += "primary ";
      }
      out += "attr " + attr.name + " : " + model.classifier_name(attr.type) + "\n";
    }
    out += "}\n";
  }
  for (const Association& assoc : model.associations()) {
    out += "association " + assoc.name + " : " + model.classifier_name(assoc.src) + " -> " +
           model.classifier_name(assoc.dest) + "\n";
  }
  return out;
}

std::string print_rdbms_model(const RdbmsModel& model) {
  std::string out;
  for (const Table& table : model.tables) {
    out += "table " + table.name + " {\n";
    for (const Column& column : table.columns) {
      out += "  col " + column.name + " : " + column.type + "\n";
    }
    out += "  pkey (";
    std::vector<std::string> names;
    for (uint32_t idx : table.pkey) {
      names.push_back(table.columns[idx].name);
    }
    append_joined(out, names);
    out += ")\n";
    for (const FKey& fkey : table.fkeys) {
      out += "  fkey (";
      names.clear();
      for (uint32_t idx : fkey.cols) {
        names.push_back(table.columns[idx].name);
      }
      append_joined(out, names);
      out += ") references " + model.tables[fkey.references].name + "\n";
    }
    out += "}\n";
  }
  return out;
}

std::string print_traces(std::vector<TraceLink> traces) {
  std::sort(traces.begin(), traces.end(), [](const TraceLink& a, const TraceLink& b) {
    return std::tie(a.target_path, a.rule, a.source_path) <
           std::tie(b.target_path, b.rule, b.source_path);
  });
  std::string out;
  for (const TraceLink& link : traces) {
    out += std::string(to_string(link.rule)) + "\t" + link.source_path + "\t" +
           link.target_path + "\n";
  }
  return out;
}

std::string emit_ddl(const RdbmsModel& model) {
  std::string out;
  for (size_t t = 0; t < model.tables.size(); ++t) {
    const Table& table = model.tables[t];
    if (t > 0) {
      out += "\n";
    }
    out += "CREATE TABLE " + table.name + " (\n";
    std::vector<std::string> lines;
    for (const Column& column : table.columns) {
      lines.push_back("  " + column.name + " " + ddl_type(column.type));
    }
    std::vector<std::string> names;
    for (uint32_t idx : table.pkey) {
      names.push_back(table.columns[idx].name);
    }
    std::string pkey_line = "  PRIMARY KEY (";
    append_joined(pkey_line, names);
    lines.push_back(pkey_line + ")");
    for (const FKey& fkey : table.fkeys) {
      names.clear();
      for (uint32_t idx : fkey.cols) {
        names.push_back(table.columns[idx].name);
      }
      std::string fkey_line = "  FOREIGN KEY (";
      append_joined(fkey_line, names);
      lines.push_back(fkey_line + ") REFERENCES " + model.tables[fkey.references].name);
    }
    for (size_t l = 0; l < lines.size(); ++l) {
      out += lines[l];
      out += (l + 1 < lines.size()) ? ",\n" : "\n";
    }
    out += ");\n";
  }
  return out;
}

}  // namespace mtx
