#include "mtx/rdbms_model.hpp"

#include <set>
#include <string>

namespace mtx {

namespace {

std::string quoted(std::string_view name) {
  return "\"" + std::string(name) + "\"";
}

}  // namespace

std::optional<uint32_t> RdbmsModel::find_table(std::string_view name) const {
  for (uint32_t i = 0; i < tables.size(); ++i) {
    if (tables[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<Diagnostic> validate_rdbms_model(const RdbmsModel& model) {
  std::vector<Diagnostic> diags;

  if (model.tables.empty()) {
    diags.push_back(
        Diagnostic::error(DiagCode::NoTables, "model", "model contains no tables"));
    return diags;
  }

  std::set<std::string_view> table_names;
  for (uint32_t t = 0; t < model.tables.size(); ++t) {
    const Table& table = model.tables[t];
    if (!table_names.insert(table.name).second) {
      diags.push_back(Diagnostic::error(DiagCode::DupName, table_path(model, t),
                                        "duplicate table name " + quoted(table.name)));
    }

    if (table.columns.empty()) {
      diags.push_back(
          Diagnostic::error(DiagCode::EmptyTable, table_path(model, t), "table has no columns"));
    }
    std::set<std::string_view> column_names;
    for (uint32_t c = 0; c < table.columns.size(); ++c) {
      if (!column_names.insert(table.columns[c].name).second) {
        diags.push_back(
            Diagnostic::error(DiagCode::DupName, column_path(model, t, c),
                              "duplicate column name " + quoted(table.columns[c].name)));
      }
    }

    if (table.pkey.empty()) {
      diags.push_back(
          Diagnostic::error(DiagCode::NoPkey, table_path(model, t), "table has no primary key"));
    }
    for (uint32_t col : table.pkey) {
      if (col >= table.columns.size()) {
        diags.push_back(Diagnostic::error(DiagCode::PkeyForeignCol, table_path(model, t),
                                          "primary key names a column not owned by this table"));
      }
    }

    for (uint32_t k = 0; k < table.fkeys.size(); ++k) {
      const FKey& fkey = table.fkeys[k];
      if (fkey.references >= model.tables.size()) {
        diags.push_back(Diagnostic::error(DiagCode::FkBadTarget, fkey_path(model, t, k),
                                          "foreign key references a nonexistent table"));
      }
      if (fkey.cols.empty()) {
        diags.push_back(Diagnostic::error(DiagCode::FkBadCol, fkey_path(model, t, k),
                                          "foreign key has no columns"));
      }
      for (uint32_t col : fkey.cols) {
        if (col >= table.columns.size()) {
          diags.push_back(Diagnostic::error(DiagCode::FkBadCol, fkey_path(model, t, k),
                                            "foreign key names a column not owned by this table"));
        }
      }
    }
  }

  return diags;
}

std::string table_path(const RdbmsModel& model, uint32_t table) {
  return "table " + model.tables.at(table).name;
}

std::string column_path(const RdbmsModel& model, uint32_t table, uint32_t column) {
  return table_path(model, table) + " / col " + model.tables.at(table).columns.at(column).name;
}

std::string fkey_path(const RdbmsModel& model, uint32_t table, uint32_t fkey) {
  return table_path(model, table) + " / fkey " + std::to_string(fkey + 1);
}

}  // namespace mtx
