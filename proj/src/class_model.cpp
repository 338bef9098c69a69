#include "mtx/class_model.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>

namespace mtx {

namespace {

std::atomic<uint32_t> g_next_model_uid{1};

std::string quoted(std::string_view name) {
  std::string out;
  out.reserve(name.size() + 2);
  out.push_back('"');
  out.append(name);
  out.push_back('"');
  return out;
}

}  // namespace

ClassModel::ClassModel() : uid_(g_next_model_uid.fetch_add(1)) {}

const Classifier& ClassModel::classifier(ClassifierRef ref) const {
  if (!in_range(ref)) {
    throw ModelError(DiagCode::BadRef, "classifier reference out of range");
  }
  return classifiers_[ref.index];
}

const Association& ClassModel::association(uint32_t index) const {
  if (index >= associations_.size()) {
    throw ModelError(DiagCode::BadRef, "association reference out of range");
  }
  return associations_[index];
}

const Class* ClassModel::as_class(ClassifierRef ref) const {
  return std::get_if<Class>(&classifier(ref));
}

const PrimitiveDataType* ClassModel::as_primitive(ClassifierRef ref) const {
  return std::get_if<PrimitiveDataType>(&classifier(ref));
}

const std::string& ClassModel::classifier_name(ClassifierRef ref) const {
  return std::visit([](const auto& c) -> const std::string& { return c.name; }, classifier(ref));
}

std::optional<ClassifierRef> ClassModel::find_classifier(std::string_view name) const {
  for (uint32_t i = 0; i < classifiers_.size(); ++i) {
    if (classifier_name(ClassifierRef{i}) == name) {
      return ClassifierRef{i};
    }
  }
  return std::nullopt;
}

void ClassModel::check_uid(ElementId id) const {
  if (id.model_uid != uid_) {
    throw ModelError(DiagCode::BadRef, "element id belongs to a different model");
  }
}

ClassifierRef ClassModel::resolve_classifier(ElementId id) const {
  check_uid(id);
  if (id.kind != ElementKind::Classifier || id.index >= classifiers_.size()) {
    throw ModelError(DiagCode::BadRef, "stale or non-classifier element id");
  }
  return ClassifierRef{id.index};
}

uint32_t ClassModel::resolve_association(ElementId id) const {
  check_uid(id);
  if (id.kind != ElementKind::Association || id.index >= associations_.size()) {
    throw ModelError(DiagCode::BadRef, "stale or non-association element id");
  }
  return id.index;
}

const Attribute& ClassModel::resolve_attribute(ElementId id) const {
  check_uid(id);
  if (id.kind != ElementKind::Attribute || id.index >= classifiers_.size()) {
    throw ModelError(DiagCode::BadRef, "stale or non-attribute element id");
  }
  const Class* cls = as_class(ClassifierRef{id.index});
  if (cls == nullptr || id.sub >= cls->attributes.size()) {
    throw ModelError(DiagCode::BadRef, "stale attribute element id");
  }
  return cls->attributes[id.sub];
}

ClassifierRef ClassModel::append_classifier(Classifier classifier) {
  classifiers_.push_back(std::move(classifier));
  return ClassifierRef{static_cast<uint32_t>(classifiers_.size() - 1)};
}

uint32_t ClassModel::append_association(Association association) {
  associations_.push_back(std::move(association));
  return static_cast<uint32_t>(associations_.size() - 1);
}

void ClassModel::append_attribute(ClassifierRef cls, Attribute attribute) {
  if (!in_range(cls) || !std::holds_alternative<Class>(classifiers_[cls.index])) {
    throw ModelError(DiagCode::BadRef, "attribute owner is not a class");
  }
  std::get<Class>(classifiers_[cls.index]).attributes.push_back(std::move(attribute));
}

Outcome<ElementId> ClassModel::add_primitive(std::string name) {
  if (find_classifier(name).has_value()) {
    return Outcome<ElementId>::failure(Diagnostic::error(
        DiagCode::DupName, "primitive " + name, "duplicate classifier name " + quoted(name)));
  }
  ClassifierRef ref = append_classifier(PrimitiveDataType{std::move(name)});
  return Outcome<ElementId>::success(ElementId{uid_, ElementKind::Classifier, ref.index, 0});
}

Outcome<ElementId> ClassModel::add_class(std::string name, bool is_persistent,
                                         std::optional<ElementId> parent) {
  if (find_classifier(name).has_value()) {
    return Outcome<ElementId>::failure(Diagnostic::error(
        DiagCode::DupName, "class " + name, "duplicate classifier name " + quoted(name)));
  }
  std::optional<ClassifierRef> parent_ref;
  if (parent.has_value()) {
    ClassifierRef ref = resolve_classifier(*parent);
    if (as_class(ref) == nullptr) {
      return Outcome<ElementId>::failure(Diagnostic::error(
          DiagCode::BadRef, "class " + name, "parent " + quoted(classifier_name(ref)) + " is not a class"));
    }
    parent_ref = ref;
  }
  ClassifierRef ref = append_classifier(Class{std::move(name), is_persistent, parent_ref, {}});
  return Outcome<ElementId>::success(ElementId{uid_, ElementKind::Classifier, ref.index, 0});
}

Outcome<ElementId> ClassModel::add_attribute(ElementId cls, std::string name, bool is_primary,
                                             ElementId type) {
  ClassifierRef owner = resolve_classifier(cls);
  const Class* owner_class = as_class(owner);
  if (owner_class == nullptr) {
    return Outcome<ElementId>::failure(Diagnostic::error(
        DiagCode::BadRef, classifier_path(*this, owner), "attribute owner is not a class"));
  }
  for (const Attribute& attr : owner_class->attributes) {
    if (attr.name == name) {
      return Outcome<ElementId>::failure(
          Diagnostic::error(DiagCode::DupAttr, attribute_path(*this, AttrRef{owner, 0}),
                            "duplicate attribute name " + quoted(name) + " in class " +
                                quoted(owner_class->name)));
    }
  }
  ClassifierRef type_ref = resolve_classifier(type);
  append_attribute(owner, Attribute{std::move(name), is_primary, type_ref});
  uint32_t sub = static_cast<uint32_t>(as_class(owner)->attributes.size() - 1);
  return Outcome<ElementId>::success(ElementId{uid_, ElementKind::Attribute, owner.index, sub});
}

Outcome<ElementId> ClassModel::add_association(std::string name, ElementId src, ElementId dest) {
  ClassifierRef src_ref = resolve_classifier(src);
  ClassifierRef dest_ref = resolve_classifier(dest);
  if (as_class(src_ref) == nullptr || as_class(dest_ref) == nullptr) {
    return Outcome<ElementId>::failure(Diagnostic::error(DiagCode::BadRef, "association " + name,
                                                         "association endpoints must be classes"));
  }
  uint32_t index = append_association(Association{std::move(name), src_ref, dest_ref});
  return Outcome<ElementId>::success(ElementId{uid_, ElementKind::Association, index, 0});
}

const Attribute& attribute_at(const ClassModel& model, AttrRef ref) {
  const Class* cls = model.as_class(ref.owner);
  if (cls == nullptr || ref.index >= cls->attributes.size()) {
    throw ModelError(DiagCode::BadRef, "attribute reference out of range");
  }
  return cls->attributes[ref.index];
}

namespace {

// Parent chain from the root ancestor down to `cls`, inclusive.
// Throws on a cycle or on a parent that is not a class.
std::vector<ClassifierRef> inheritance_chain(const ClassModel& model, ClassifierRef cls) {
  std::vector<ClassifierRef> chain;
  std::set<uint32_t> seen;
  ClassifierRef cur = cls;
  while (true) {
    if (!seen.insert(cur.index).second) {
      throw ModelError(DiagCode::CyclicInheritance,
                       "inheritance cycle at " + classifier_path(model, cur));
    }
    const Class* c = model.as_class(cur);
    if (c == nullptr) {
      throw ModelError(DiagCode::BadRef, classifier_path(model, cur) + " is not a class");
    }
    chain.push_back(cur);
    if (!c->parent.has_value()) {
      break;
    }
    cur = *c->parent;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

std::vector<AttrRef> all_attributes(const ClassModel& model, ClassifierRef cls) {
  std::vector<AttrRef> merged;
  for (ClassifierRef level : inheritance_chain(model, cls)) {
    const Class& c = *model.as_class(level);
    for (uint32_t i = 0; i < c.attributes.size(); ++i) {
      const std::string& name = c.attributes[i].name;
      auto pos = std::find_if(merged.begin(), merged.end(), [&](AttrRef ref) {
        return attribute_at(model, ref).name == name;
      });
      if (pos != merged.end()) {
        *pos = AttrRef{level, i};  // override keeps the ancestor's position
      } else {
        merged.push_back(AttrRef{level, i});
      }
    }
  }
  return merged;
}

ClassifierRef hierarchy_root(const ClassModel& model, ClassifierRef cls) {
  return inheritance_chain(model, cls).front();
}

std::vector<ClassifierRef> hierarchy_members(const ClassModel& model, ClassifierRef root) {
  // Children in declaration order, depth-first, root first.
  std::vector<ClassifierRef> members;
  std::vector<ClassifierRef> stack{root};
  while (!stack.empty()) {
    ClassifierRef cur = stack.back();
    stack.pop_back();
    members.push_back(cur);
    std::vector<ClassifierRef> children;
    for (uint32_t i = 0; i < model.classifier_count(); ++i) {
      const Class* c = model.as_class(ClassifierRef{i});
      if (c != nullptr && c->parent.has_value() && c->parent->index == cur.index) {
        children.push_back(ClassifierRef{i});
      }
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      stack.push_back(*it);
    }
  }
  return members;
}

std::vector<uint32_t> associations_from(const ClassModel& model, ClassifierRef cls) {
  std::set<uint32_t> sources;
  for (ClassifierRef c : inheritance_chain(model, cls)) {
    sources.insert(c.index);
  }
  std::vector<uint32_t> result;
  for (uint32_t i = 0; i < model.association_count(); ++i) {
    if (sources.count(model.association(i).src.index) != 0) {
      result.push_back(i);
    }
  }
  return result;
}

namespace {

bool ref_in_range(const ClassModel& model, ClassifierRef ref) {
  return ref.index < model.classifier_count();
}

// Reports one CYCLIC_INHERITANCE diagnostic per distinct parent cycle,
// and returns the set of classes whose chain never reaches a root (either
// on a cycle or below one); those are excluded from the attribute checks.
std::set<uint32_t> check_inheritance(const ClassModel& model, std::vector<Diagnostic>& diags) {
  std::set<uint32_t> broken;
  std::set<std::set<uint32_t>> reported_cycles;
  for (uint32_t start = 0; start < model.classifier_count(); ++start) {
    const Class* cls = model.as_class(ClassifierRef{start});
    if (cls == nullptr) {
      continue;
    }
    std::vector<uint32_t> path{start};
    std::set<uint32_t> seen{start};
    ClassifierRef cur{start};
    while (true) {
      const Class* c = model.as_class(cur);
      if (c == nullptr || !c->parent.has_value()) {
        break;  // reached a root or a bad parent (reported separately)
      }
      ClassifierRef parent = *c->parent;
      if (!ref_in_range(model, parent) || model.as_class(parent) == nullptr) {
        break;
      }
      if (seen.count(parent.index) != 0) {
        broken.insert(path.begin(), path.end());
        // isolate the cycle members: the tail of the path from `parent` on
        auto cycle_begin = std::find(path.begin(), path.end(), parent.index);
        std::set<uint32_t> cycle(cycle_begin, path.end());
        if (reported_cycles.insert(cycle).second) {
          std::ostringstream msg;
          msg << "inheritance cycle:";
          for (auto it = cycle_begin; it != path.end(); ++it) {
            msg << ' ' << model.classifier_name(ClassifierRef{*it});
          }
          diags.push_back(Diagnostic::error(DiagCode::CyclicInheritance,
                                            classifier_path(model, ClassifierRef{*cycle_begin}),
                                            msg.str()));
        }
        break;
      }
      seen.insert(parent.index);
      path.push_back(parent.index);
      cur = parent;
    }
    // A chain that ended in a cycle marked everything on `path`, so classes
    // sitting below a cycle are caught by their own walk.
  }
  return broken;
}

}  // namespace

std::vector<Diagnostic> validate_class_model(const ClassModel& model) {
  std::vector<Diagnostic> diags;

  // Classifier name uniqueness.
  std::map<std::string_view, uint32_t> first_seen;
  for (uint32_t i = 0; i < model.classifier_count(); ++i) {
    ClassifierRef ref{i};
    auto [it, inserted] = first_seen.emplace(model.classifier_name(ref), i);
    if (!inserted) {
      diags.push_back(Diagnostic::error(
          DiagCode::DupName, classifier_path(model, ref),
          "duplicate classifier name " + quoted(model.classifier_name(ref))));
    }
  }

  // Reference integrity: parents, attribute types.
  for (uint32_t i = 0; i < model.classifier_count(); ++i) {
    ClassifierRef ref{i};
    const Class* cls = model.as_class(ref);
    if (cls == nullptr) {
      continue;
    }
    if (cls->parent.has_value()) {
      if (!ref_in_range(model, *cls->parent)) {
        diags.push_back(Diagnostic::error(DiagCode::BadRef, classifier_path(model, ref),
                                          "parent reference does not resolve"));
      } else if (model.as_class(*cls->parent) == nullptr) {
        diags.push_back(Diagnostic::error(
            DiagCode::BadRef, classifier_path(model, ref),
            "parent " + quoted(model.classifier_name(*cls->parent)) + " is not a class"));
      }
    }
    std::set<std::string_view> attr_names;
    for (uint32_t a = 0; a < cls->attributes.size(); ++a) {
      const Attribute& attr = cls->attributes[a];
      if (!attr_names.insert(attr.name).second) {
        diags.push_back(Diagnostic::error(
            DiagCode::DupName, attribute_path(model, AttrRef{ref, a}),
            "duplicate attribute name " + quoted(attr.name) + " in class " + quoted(cls->name)));
      }
      if (!ref_in_range(model, attr.type)) {
        diags.push_back(Diagnostic::error(DiagCode::BadRef,
                                          attribute_path(model, AttrRef{ref, a}),
                                          "attribute type does not resolve"));
      }
    }
  }

  // Association endpoints must be classes.
  for (uint32_t i = 0; i < model.association_count(); ++i) {
    const Association& assoc = model.association(i);
    for (ClassifierRef end : {assoc.src, assoc.dest}) {
      if (!ref_in_range(model, end)) {
        diags.push_back(Diagnostic::error(DiagCode::BadRef, association_path(model, i),
                                          "association endpoint does not resolve"));
      } else if (model.as_class(end) == nullptr) {
        diags.push_back(Diagnostic::error(
            DiagCode::BadRef, association_path(model, i),
            "association endpoint " + quoted(model.classifier_name(end)) + " is not a class"));
      }
    }
  }

  std::set<uint32_t> broken = check_inheritance(model, diags);

  // The attribute constraint: every class, including non-persistent ones,
  // must end up with at least one attribute and at least one primary one.
  for (uint32_t i = 0; i < model.classifier_count(); ++i) {
    ClassifierRef ref{i};
    const Class* cls = model.as_class(ref);
    if (cls == nullptr || broken.count(i) != 0) {
      continue;
    }
    bool chain_ok = true;
    for (ClassifierRef cur = ref;;) {
      const Class* c = model.as_class(cur);
      if (c == nullptr || !c->parent.has_value()) {
        break;
      }
      if (!ref_in_range(model, *c->parent) || model.as_class(*c->parent) == nullptr) {
        chain_ok = false;
        break;
      }
      cur = *c->parent;
    }
    if (!chain_ok) {
      continue;  // BAD_REF already reported; attributes cannot be merged
    }
    std::vector<AttrRef> attrs = all_attributes(model, ref);
    if (attrs.empty()) {
      diags.push_back(Diagnostic::error(DiagCode::EmptyAttrs, classifier_path(model, ref),
                                        "class has no local or inherited attributes"));
    }
    bool has_primary = std::any_of(attrs.begin(), attrs.end(), [&](AttrRef a) {
      return attribute_at(model, a).is_primary;
    });
    if (!has_primary) {
      diags.push_back(Diagnostic::error(DiagCode::NoPrimary, classifier_path(model, ref),
                                        "class has no primary attribute"));
    }
  }

  return diags;
}

std::string classifier_path(const ClassModel& model, ClassifierRef ref) {
  const char* kind = model.as_class(ref) != nullptr ? "class " : "primitive ";
  return kind + model.classifier_name(ref);
}

std::string attribute_path(const ClassModel& model, AttrRef ref) {
  return classifier_path(model, ref.owner) + " / attr " + attribute_at(model, ref).name;
}

std::string association_path(const ClassModel& model, uint32_t index) {
  return "association " + model.association(index).name;
}

}  // namespace mtx
