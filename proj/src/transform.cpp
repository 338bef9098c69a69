#include "mtx/transform.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace mtx {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
    case Rule::R6: return "R6";
    case Rule::R7: return "R7";
  }
  return "R?";
}

namespace {

std::string join_name(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += '_';
    }
    out += parts[i];
  }
  return out;
}

// Rotates a cycle's class names so that the lexicographically smallest
// rotation comes first; makes equal cycles compare equal regardless of the
// entry point they were discovered from.
std::vector<std::string> canonical_rotation(std::vector<std::string> names) {
  std::vector<std::string> best = names;
  for (size_t r = 1; r < names.size(); ++r) {
    std::rotate(names.begin(), names.begin() + 1, names.end());
    best = std::min(best, names);
  }
  return best;
}

std::string format_cycle(const std::vector<std::string>& names) {
  std::string out = "flattening cycle: ";
  for (const std::string& name : names) {
    out += name;
    out += " -> ";
  }
  out += names.front();
  return out;
}

Diagnostic cycle_diagnostic(std::vector<std::string> names) {
  names = canonical_rotation(std::move(names));
  return Diagnostic::error(DiagCode::FlattenCycle, "class " + names.front(),
                           format_cycle(names));
}

Rule attribute_rule(const ClassModel& model, ClassifierRef type) {
  if (const Class* cls = model.as_class(type)) {
    return cls->is_persistent ? Rule::R4 : Rule::R5;
  }
  return Rule::R3;
}

Rule association_rule(const ClassModel& model, ClassifierRef dest) {
  const Class* cls = model.as_class(dest);
  return (cls != nullptr && !cls->is_persistent) ? Rule::R2 : Rule::R4;
}

// One source element on the expansion chain of a column: the rule that maps
// it plus its element path. The last link is always the primitive-typed
// attribute that fixed the column's type.
struct ChainLink {
  Rule rule;
  std::string path;
};

struct FlatColumn {
  ColumnSpec spec;
  std::vector<ChainLink> chain;
};

// Recursive column producer shared by the whole-model transformation and the
// standalone flatten entry points. Expansion of a class runs in one of two
// modes (all members vs primary members); re-entering a mode already being
// expanded on the current chain can never terminate, so it is pruned and
// reported as a cycle.
struct Flattener {
  enum class Mode { Full, Pkey };

  const ClassModel& model;
  std::vector<FlatColumn> out;
  std::vector<Diagnostic> diags;

  std::vector<std::string> prefix;
  std::vector<ChainLink> chain;
  std::vector<std::pair<uint32_t, Mode>> active;
  std::set<std::string> reported_cycles;

  uint32_t next_group = 0;
  std::vector<ClassifierRef> group_targets;
  std::vector<std::string> group_sources;

  explicit Flattener(const ClassModel& m) : model(m) {}

  void attribute(AttrRef ref, bool primary_context, std::optional<FkGroup> group) {
    const Attribute& attr = attribute_at(model, ref);
    prefix.push_back(attr.name);
    chain.push_back({attribute_rule(model, attr.type), attribute_path(model, ref)});
    value(attr.type, primary_context && attr.is_primary, group);
    chain.pop_back();
    prefix.pop_back();
  }

  void association(uint32_t index, std::optional<FkGroup> group) {
    const Association& assoc = model.association(index);
    prefix.push_back(assoc.name);
    chain.push_back({association_rule(model, assoc.dest), association_path(model, index)});
    value(assoc.dest, false, group);
    chain.pop_back();
    prefix.pop_back();
  }

  // Flattens a value of `type`; the referencing element is already on
  // `prefix` and `chain`.
  void value(ClassifierRef type, bool primary, std::optional<FkGroup> group) {
    if (const PrimitiveDataType* prim = model.as_primitive(type)) {
      out.push_back({ColumnSpec{join_name(prefix), prim->name, primary, group}, chain});
      return;
    }
    const Class* cls = model.as_class(type);
    assert(cls != nullptr);

    if (cls->is_persistent) {
      if (!group.has_value()) {
        group = FkGroup{next_group++, type};
        group_targets.push_back(type);
        group_sources.push_back(chain.back().path);
      }
      if (!enter(type, Mode::Pkey)) {
        return;
      }
      for (AttrRef ref : all_attributes(model, type)) {
        if (attribute_at(model, ref).is_primary) {
          attribute(ref, primary, group);
        }
      }
      leave();
      return;
    }

    if (!enter(type, Mode::Full)) {
      return;
    }
    for (AttrRef ref : all_attributes(model, type)) {
      attribute(ref, primary, group);
    }
    for (uint32_t index : associations_from(model, type)) {
      association(index, group);
    }
    leave();
  }

  bool enter(ClassifierRef cls, Mode mode) {
    auto task = std::pair{cls.index, mode};
    auto hit = std::find(active.begin(), active.end(), task);
    if (hit != active.end()) {
      std::vector<std::string> names;
      for (auto it = hit; it != active.end(); ++it) {
        names.push_back(model.classifier_name(ClassifierRef{it->first}));
      }
      Diagnostic diag = cycle_diagnostic(std::move(names));
      if (reported_cycles.insert(diag.message).second) {
        diags.push_back(std::move(diag));
      }
      return false;
    }
    active.push_back(task);
    return true;
  }

  void leave() { active.pop_back(); }
};

Outcome<std::vector<ColumnSpec>> finish(Flattener&& fl) {
  if (has_errors(fl.diags)) {
    return Outcome<std::vector<ColumnSpec>>::failure(std::move(fl.diags));
  }
  std::vector<ColumnSpec> specs;
  specs.reserve(fl.out.size());
  for (FlatColumn& col : fl.out) {
    specs.push_back(std::move(col.spec));
  }
  return Outcome<std::vector<ColumnSpec>>::success(std::move(specs));
}

}  // namespace

std::vector<PlanEntry> merged_attribute_plan(const ClassModel& model, ClassifierRef root) {
  std::vector<PlanEntry> plan;
  std::vector<std::string_view> names;
  for (ClassifierRef member : hierarchy_members(model, root)) {
    const Class* cls = model.as_class(member);
    for (uint32_t i = 0; i < cls->attributes.size(); ++i) {
      const std::string& name = cls->attributes[i].name;
      auto hit = std::find(names.begin(), names.end(), name);
      if (hit == names.end()) {
        names.push_back(name);
        plan.push_back(PlanEntry{member, i, false});
      } else {
        plan[static_cast<size_t>(hit - names.begin())] = PlanEntry{member, i, true};
      }
    }
  }
  return plan;
}

Outcome<std::vector<ColumnSpec>> flatten_attribute(const ClassModel& model,
                                                   const std::vector<std::string>& name_prefix,
                                                   const std::string& attr_name,
                                                   ClassifierRef attr_type,
                                                   bool primary_context) {
  Flattener fl(model);
  fl.prefix = name_prefix;
  fl.prefix.push_back(attr_name);
  fl.chain.push_back({attribute_rule(model, attr_type), "attr " + attr_name});
  fl.value(attr_type, primary_context, std::nullopt);
  return finish(std::move(fl));
}

Outcome<std::vector<ColumnSpec>> flatten_association(const ClassModel& model,
                                                     uint32_t assoc_index) {
  Flattener fl(model);
  fl.association(assoc_index, std::nullopt);
  return finish(std::move(fl));
}

namespace {

// Dependency graph over expansion tasks, two nodes per classifier:
// 2*i expands classifier i fully, 2*i+1 expands its primary members.
std::vector<std::vector<uint32_t>> task_graph(const ClassModel& model) {
  const uint32_t n = static_cast<uint32_t>(model.classifier_count());
  std::vector<std::vector<uint32_t>> adj(2 * static_cast<size_t>(n));

  auto target = [&](ClassifierRef type) -> std::optional<uint32_t> {
    const Class* cls = model.as_class(type);
    if (cls == nullptr) {
      return std::nullopt;
    }
    return 2 * type.index + (cls->is_persistent ? 1 : 0);
  };

  for (uint32_t i = 0; i < n; ++i) {
    if (model.as_class(ClassifierRef{i}) == nullptr) {
      continue;
    }
    for (AttrRef ref : all_attributes(model, ClassifierRef{i})) {
      const Attribute& attr = attribute_at(model, ref);
      if (std::optional<uint32_t> t = target(attr.type)) {
        adj[2 * i].push_back(*t);
        if (attr.is_primary) {
          adj[2 * i + 1].push_back(*t);
        }
      }
    }
    for (uint32_t index : associations_from(model, ClassifierRef{i})) {
      if (std::optional<uint32_t> t = target(model.association(index).dest)) {
        adj[2 * i].push_back(*t);
      }
    }
  }
  for (std::vector<uint32_t>& edges : adj) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  return adj;
}

// Exact acyclicity test; returns one cycle (as a task sequence) if any.
std::optional<std::vector<uint32_t>> find_any_cycle(
    const std::vector<std::vector<uint32_t>>& adj) {
  enum : char { White, Active, Done };
  std::vector<char> color(adj.size(), White);
  std::vector<uint32_t> path;
  std::optional<std::vector<uint32_t>> found;

  std::function<bool(uint32_t)> visit = [&](uint32_t v) {
    color[v] = Active;
    path.push_back(v);
    for (uint32_t w : adj[v]) {
      if (color[w] == Active) {
        auto start = std::find(path.begin(), path.end(), w);
        found = std::vector<uint32_t>(start, path.end());
        return true;
      }
      if (color[w] == White && visit(w)) {
        return true;
      }
    }
    color[v] = Done;
    path.pop_back();
    return false;
  };

  for (uint32_t v = 0; v < adj.size(); ++v) {
    if (color[v] == White && visit(v)) {
      return found;
    }
  }
  return std::nullopt;
}

// Enumerates elementary cycles: each is discovered exactly once, from its
// smallest task id. Step-bounded so that adversarial graphs cannot hang the
// validator; the caller falls back to a single witness cycle if the budget
// runs out before anything is found.
std::vector<std::vector<uint32_t>> enumerate_cycles(
    const std::vector<std::vector<uint32_t>>& adj, size_t max_cycles, long budget) {
  std::vector<std::vector<uint32_t>> cycles;
  std::vector<char> on_path(adj.size(), 0);
  std::vector<uint32_t> path;

  std::function<void(uint32_t, uint32_t)> visit = [&](uint32_t s, uint32_t v) {
    if (--budget < 0 || cycles.size() >= max_cycles) {
      return;
    }
    for (uint32_t w : adj[v]) {
      if (w == s) {
        if (cycles.size() < max_cycles) {
          cycles.push_back(path);
        }
      } else if (w > s && !on_path[w]) {
        on_path[w] = 1;
        path.push_back(w);
        visit(s, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };

  for (uint32_t s = 0; s < adj.size() && budget > 0; ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    visit(s, s);
    on_path[s] = 0;
  }
  return cycles;
}

}  // namespace

std::vector<Diagnostic> detect_cycles(const ClassModel& model) {
  std::vector<std::vector<uint32_t>> adj = task_graph(model);

  std::optional<std::vector<uint32_t>> witness = find_any_cycle(adj);
  if (!witness.has_value()) {
    return {};
  }

  std::vector<std::vector<uint32_t>> cycles = enumerate_cycles(adj, 64, 200000);
  if (cycles.empty()) {
    cycles.push_back(*witness);
  }

  std::set<std::vector<std::string>> distinct;
  for (const std::vector<uint32_t>& cycle : cycles) {
    std::vector<std::string> names;
    names.reserve(cycle.size());
    for (uint32_t task : cycle) {
      names.push_back(model.classifier_name(ClassifierRef{task / 2}));
    }
    distinct.insert(canonical_rotation(std::move(names)));
  }

  std::vector<Diagnostic> diags;
  for (const std::vector<std::string>& names : distinct) {
    diags.push_back(Diagnostic::error(DiagCode::FlattenCycle, "class " + names.front(),
                                      format_cycle(names)));
  }
  return diags;
}

namespace {

struct EntrySpan {
  AttrRef attr;
  bool overrides = false;
  size_t first = 0;
  size_t last = 0;
};

struct TableBuild {
  ClassifierRef root;
  std::vector<FlatColumn> cols;
  std::vector<EntrySpan> entries;
  std::vector<uint32_t> fkey_groups;  // minted group id per foreign key
};

}  // namespace

Outcome<TransformResult> transform(const ClassModel& source) {
  using Result = Outcome<TransformResult>;

  std::vector<Diagnostic> cycle_diags = detect_cycles(source);
  if (has_errors(cycle_diags)) {
    return Result::failure(std::move(cycle_diags));
  }

  // One table per hierarchy containing at least one persistent class.
  const uint32_t n = static_cast<uint32_t>(source.classifier_count());
  std::vector<std::optional<uint32_t>> table_of(n);
  std::vector<uint32_t> roots;
  for (uint32_t i = 0; i < n; ++i) {
    const Class* cls = source.as_class(ClassifierRef{i});
    if (cls == nullptr || cls->parent.has_value()) {
      continue;
    }
    std::vector<ClassifierRef> members = hierarchy_members(source, ClassifierRef{i});
    bool persistent = std::any_of(members.begin(), members.end(), [&](ClassifierRef m) {
      return source.as_class(m)->is_persistent;
    });
    if (!persistent) {
      continue;
    }
    table_of[i] = static_cast<uint32_t>(roots.size());
    roots.push_back(i);
  }

  Flattener fl(source);
  std::vector<TableBuild> builds;
  for (uint32_t root : roots) {
    TableBuild tb{ClassifierRef{root}, {}, {}, {}};
    for (const PlanEntry& entry : merged_attribute_plan(source, tb.root)) {
      AttrRef ref{entry.owner, entry.attr_index};
      size_t first = fl.out.size();
      fl.attribute(ref, true, std::nullopt);
      tb.entries.push_back(EntrySpan{ref, entry.overrides, first, fl.out.size()});
    }
    std::set<uint32_t> members;
    for (ClassifierRef m : hierarchy_members(source, tb.root)) {
      members.insert(m.index);
    }
    for (uint32_t a = 0; a < source.association_count(); ++a) {
      if (members.count(source.associations()[a].src.index) > 0) {
        fl.association(a, std::nullopt);
      }
    }
    tb.cols = std::move(fl.out);
    fl.out.clear();
    builds.push_back(std::move(tb));
  }

  std::vector<Diagnostic> diags = std::move(fl.diags);
  RdbmsModel rm;
  for (TableBuild& tb : builds) {
    Table table;
    table.name = source.classifier_name(tb.root);

    std::set<std::string_view> names;
    std::set<std::string_view> dup_reported;
    std::map<uint32_t, uint32_t> fkey_of_group;
    for (uint32_t c = 0; c < tb.cols.size(); ++c) {
      const ColumnSpec& spec = tb.cols[c].spec;
      if (!names.insert(spec.name).second && dup_reported.insert(spec.name).second) {
        diags.push_back(Diagnostic::error(
            DiagCode::DupColumn, "table " + table.name + " / col " + spec.name,
            "flattened attributes collide on column name \"" + spec.name + "\""));
      }
      table.columns.push_back(Column{spec.name, spec.type});
      if (spec.is_primary) {
        table.pkey.push_back(c);
      }
      if (spec.fk_group.has_value()) {
        uint32_t gid = spec.fk_group->id;
        auto [it, fresh] = fkey_of_group.emplace(gid, static_cast<uint32_t>(table.fkeys.size()));
        if (fresh) {
          ClassifierRef target_root = hierarchy_root(source, fl.group_targets[gid]);
          std::optional<uint32_t> target_table = table_of[target_root.index];
          if (!target_table.has_value()) {
            diags.push_back(Diagnostic::error(
                DiagCode::FkToNonpersistentRoot, "table " + table.name,
                "foreign key target " + source.classifier_name(target_root) +
                    " has no table"));
            target_table = 0;
          }
          table.fkeys.push_back(FKey{*target_table, {}});
          tb.fkey_groups.push_back(gid);
        }
        table.fkeys[it->second].cols.push_back(c);
      }
    }
    rm.tables.push_back(std::move(table));
  }
  if (has_errors(diags)) {
    return Result::failure(std::move(diags));
  }

  std::vector<TraceLink> traces;
  for (uint32_t t = 0; t < builds.size(); ++t) {
    const TableBuild& tb = builds[t];
    traces.push_back(TraceLink{Rule::R1, classifier_path(source, tb.root), table_path(rm, t)});
    for (ClassifierRef m : hierarchy_members(source, tb.root)) {
      if (m != tb.root) {
        traces.push_back(TraceLink{Rule::R7, classifier_path(source, m), table_path(rm, t)});
      }
    }
    for (uint32_t c = 0; c < tb.cols.size(); ++c) {
      std::string cpath = column_path(rm, t, c);
      for (const ChainLink& link : tb.cols[c].chain) {
        traces.push_back(TraceLink{link.rule, link.path, cpath});
      }
    }
    for (const EntrySpan& span : tb.entries) {
      if (!span.overrides) {
        continue;
      }
      for (size_t c = span.first; c < span.last; ++c) {
        traces.push_back(TraceLink{Rule::R6, attribute_path(source, span.attr),
                                   column_path(rm, t, static_cast<uint32_t>(c))});
      }
    }
    for (uint32_t f = 0; f < tb.fkey_groups.size(); ++f) {
      traces.push_back(
          TraceLink{Rule::R4, fl.group_sources[tb.fkey_groups[f]], fkey_path(rm, t, f)});
    }
  }

  return Result::success(TransformResult{std::move(rm), std::move(traces)});
}

}  // namespace mtx
