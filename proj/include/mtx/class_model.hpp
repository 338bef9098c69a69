#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtx/diagnostics.hpp"

namespace mtx {

// Index of a classifier within one ClassModel. Intra-model references
// (attribute types, parents, association endpoints) are stored this way;
// they stay valid across copies of the model.
struct ClassifierRef {
  uint32_t index = 0;
  friend auto operator<=>(const ClassifierRef&, const ClassifierRef&) = default;
};

enum class ElementKind { Classifier, Attribute, Association };

// Opaque handle returned by the build ops. Carries the identity of the
// owning model so that dereferencing a foreign or stale id fails loudly
// instead of silently binding to an unrelated element.
struct ElementId {
  uint32_t model_uid = 0;
  ElementKind kind = ElementKind::Classifier;
  uint32_t index = 0;
  uint32_t sub = 0;  // attribute index within its class, for Attribute ids
  friend bool operator==(const ElementId&, const ElementId&) = default;
};

struct PrimitiveDataType {
  std::string name;
  friend bool operator==(const PrimitiveDataType&, const PrimitiveDataType&) = default;
};

struct Attribute {
  std::string name;
  bool is_primary = false;
  ClassifierRef type;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Class {
  std::string name;
  bool is_persistent = false;
  std::optional<ClassifierRef> parent;
  std::vector<Attribute> attributes;
  friend bool operator==(const Class&, const Class&) = default;
};

using Classifier = std::variant<PrimitiveDataType, Class>;

struct Association {
  std::string name;
  ClassifierRef src;
  ClassifierRef dest;  // destination multiplicity is always 1
  friend bool operator==(const Association&, const Association&) = default;
};

// Source object graph: classifiers (classes and primitive data types) plus
// directed associations, all in declaration order. Immutable after build;
// shareable read-only across threads.
class ClassModel {
 public:
  ClassModel();

  // Checked build ops. Each returns the new element's id, or a diagnostic
  // when a name is already taken or a referenced element does not exist.
  Outcome<ElementId> add_primitive(std::string name);
  Outcome<ElementId> add_class(std::string name, bool is_persistent,
                               std::optional<ElementId> parent = std::nullopt);
  Outcome<ElementId> add_attribute(ElementId cls, std::string name, bool is_primary,
                                   ElementId type);
  Outcome<ElementId> add_association(std::string name, ElementId src, ElementId dest);

  // Unchecked structural appends. The parser uses these so that models with
  // semantic defects (duplicate names, bad endpoints) can still be built and
  // then reported coherently by validate_class_model.
  ClassifierRef append_classifier(Classifier classifier);
  uint32_t append_association(Association association);
  void append_attribute(ClassifierRef cls, Attribute attribute);

  std::span<const Classifier> classifiers() const { return classifiers_; }
  std::span<const Association> associations() const { return associations_; }
  size_t classifier_count() const { return classifiers_.size(); }
  size_t association_count() const { return associations_.size(); }

  const Classifier& classifier(ClassifierRef ref) const;
  const Association& association(uint32_t index) const;
  const Class* as_class(ClassifierRef ref) const;
  const PrimitiveDataType* as_primitive(ClassifierRef ref) const;
  const std::string& classifier_name(ClassifierRef ref) const;
  std::optional<ClassifierRef> find_classifier(std::string_view name) const;

  // Checked dereference of builder-issued ids; throws ModelError on a
  // foreign-model or out-of-range id.
  ClassifierRef resolve_classifier(ElementId id) const;
  uint32_t resolve_association(ElementId id) const;
  const Attribute& resolve_attribute(ElementId id) const;

  uint32_t uid() const { return uid_; }

  // Structural equality; the model identity tag is deliberately ignored.
  friend bool operator==(const ClassModel& a, const ClassModel& b) {
    return a.classifiers_ == b.classifiers_ && a.associations_ == b.associations_;
  }

 private:
  bool in_range(ClassifierRef ref) const { return ref.index < classifiers_.size(); }
  void check_uid(ElementId id) const;

  uint32_t uid_;
  std::vector<Classifier> classifiers_;
  std::vector<Association> associations_;
};

// An attribute position inside a model: owning class + index into its
// local attribute list.
struct AttrRef {
  ClassifierRef owner;
  uint32_t index = 0;
  friend bool operator==(const AttrRef&, const AttrRef&) = default;
};

const Attribute& attribute_at(const ClassModel& model, AttrRef ref);

// Local and inherited attributes of a class. The merge starts from the root
// ancestor's attributes in declaration order; a descendant attribute whose
// name matches an ancestor's replaces it in place, new names are appended.
// Requires an acyclic parent chain (throws ModelError otherwise).
std::vector<AttrRef> all_attributes(const ClassModel& model, ClassifierRef cls);

// The parentless ancestor of a class (the class itself when parentless).
ClassifierRef hierarchy_root(const ClassModel& model, ClassifierRef cls);

// Depth-first pre-order walk of the subclass tree rooted at `root`;
// children are visited in model declaration order.
std::vector<ClassifierRef> hierarchy_members(const ClassModel& model, ClassifierRef root);

// Indices of associations whose src is `cls` or any of its ancestors,
// in model declaration order.
std::vector<uint32_t> associations_from(const ClassModel& model, ClassifierRef cls);

// Full well-formedness check; collects every finding instead of stopping at
// the first. An empty result licenses every other operation on the model.
std::vector<Diagnostic> validate_class_model(const ClassModel& model);

// Element paths used in diagnostics and trace links.
std::string classifier_path(const ClassModel& model, ClassifierRef ref);
std::string attribute_path(const ClassModel& model, AttrRef ref);
std::string association_path(const ClassModel& model, uint32_t index);

}  // namespace mtx
