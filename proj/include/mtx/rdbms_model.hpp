#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtx/diagnostics.hpp"

namespace mtx {

struct Column {
  std::string name;
  std::string type;  // primitive type name
  friend bool operator==(const Column&, const Column&) = default;
};

// A group of columns in the owning table referencing another table.
struct FKey {
  uint32_t references = 0;     // table index within the model
  std::vector<uint32_t> cols;  // column indices within the owning table
  friend bool operator==(const FKey&, const FKey&) = default;
};

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<uint32_t> pkey;  // ordered subset of this table's columns
  std::vector<FKey> fkeys;
  friend bool operator==(const Table&, const Table&) = default;
};

struct RdbmsModel {
  std::vector<Table> tables;

  std::optional<uint32_t> find_table(std::string_view name) const;
  friend bool operator==(const RdbmsModel&, const RdbmsModel&) = default;
};

// Empty result iff the model is well-formed: at least one table, each table
// nonempty with a nonempty primary key over its own columns, foreign keys
// resolving to existing tables and own columns, unique names throughout.
std::vector<Diagnostic> validate_rdbms_model(const RdbmsModel& model);

std::string table_path(const RdbmsModel& model, uint32_t table);
std::string column_path(const RdbmsModel& model, uint32_t table, uint32_t column);
std::string fkey_path(const RdbmsModel& model, uint32_t table, uint32_t fkey);

}  // namespace mtx
