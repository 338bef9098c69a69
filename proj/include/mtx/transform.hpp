#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtx/class_model.hpp"
#include "mtx/diagnostics.hpp"
#include "mtx/rdbms_model.hpp"

namespace mtx {

// Identifies which transformation rule produced a target element.
enum class Rule { R1 = 1, R2, R3, R4, R5, R6, R7 };

std::string_view to_string(Rule rule);

// Foreign-key grouping attached to a flattened column. All columns carrying
// the same group id form one foreign key referencing `target`'s hierarchy.
struct FkGroup {
  uint32_t id = 0;
  ClassifierRef target;
  friend bool operator==(const FkGroup&, const FkGroup&) = default;
};

// One column produced by flattening: the underscore-joined name chain, the
// resolved primitive type, whether it participates in the table's primary
// key, and its foreign-key group when it descends from a reference to a
// persistent class.
struct ColumnSpec {
  std::string name;
  std::string type;
  bool is_primary = false;
  std::optional<FkGroup> fk_group;
  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

// Provenance record: which rule mapped which source element onto which
// target element. Paths use the same syntax as diagnostics paths.
struct TraceLink {
  Rule rule = Rule::R1;
  std::string source_path;
  std::string target_path;
  friend auto operator<=>(const TraceLink&, const TraceLink&) = default;
};

struct TransformResult {
  RdbmsModel model;
  std::vector<TraceLink> traces;
};

// One entry of a table's attribute-column plan: the class declaring the
// attribute and its index there. `overrides` marks entries that replaced a
// same-named attribute contributed by an earlier hierarchy member.
struct PlanEntry {
  ClassifierRef owner;
  uint32_t attr_index = 0;
  bool overrides = false;
  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// Walks the hierarchy rooted at `root` in pre-order and merges every
// member's local attributes into one name-keyed ordered list: a same-named
// attribute overrides in place, a new name is appended. The result fixes
// the attribute-column ordering of the hierarchy's table.
std::vector<PlanEntry> merged_attribute_plan(const ClassModel& model, ClassifierRef root);

// Flattens one attribute into columns:
//  - a primitive-typed attribute becomes a single column named by joining
//    prefix and attribute name with underscores;
//  - a persistent-class-typed attribute becomes the flattening of that
//    class's effective primary attributes, all sharing one foreign-key
//    group (nested groups inside the expansion collapse into it);
//  - a non-persistent-class-typed attribute inlines every effective
//    attribute of the class plus its outgoing associations; inner primary
//    flags count only while the whole prefix chain is primary.
// The expansion recurses to arbitrary depth; mutual recursion that cannot
// terminate is reported as FLATTEN_CYCLE.
Outcome<std::vector<ColumnSpec>> flatten_attribute(const ClassModel& model,
                                                   const std::vector<std::string>& name_prefix,
                                                   const std::string& attr_name,
                                                   ClassifierRef attr_type, bool primary_context);

// An association flattens exactly like a non-primary class-typed attribute
// named after the association.
Outcome<std::vector<ColumnSpec>> flatten_association(const ClassModel& model,
                                                     uint32_t assoc_index);

// Builds the flattening-dependency graph and reports one FLATTEN_CYCLE per
// elementary cycle. A class depends fully on every non-persistent class it
// references and on the primary-key derivation of every persistent class it
// references; primary-key derivations in turn depend only on primary
// attributes. An empty result guarantees the transformation terminates.
std::vector<Diagnostic> detect_cycles(const ClassModel& model);

// Full source-to-target transformation. One table per hierarchy containing
// at least one persistent class, named after the hierarchy root, carrying
// the merged attribute columns of all members followed by the columns of
// every association leaving a member. Requires a source model that passed
// validate_class_model; fails with diagnostics on flattening cycles or on
// column-name collisions.
Outcome<TransformResult> transform(const ClassModel& source);

}  // namespace mtx
