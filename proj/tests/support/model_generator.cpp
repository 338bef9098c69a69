#include "support/model_generator.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtx/transform.hpp"

namespace mtx::test {

namespace {

constexpr const char* kAttrPool[] = {"alpha", "beta",  "gamma", "delta", "epsilon",
                                     "zeta",  "theta", "iota",  "kappa", "sigma"};

ClassModel build_candidate(uint32_t seed) {
  std::mt19937 rng(seed);
  auto chance = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };
  auto pick = [&](uint32_t n) {
    return std::uniform_int_distribution<uint32_t>(0, n - 1)(rng);
  };

  ClassModel model;
  ClassifierRef string_ref = model.append_classifier(PrimitiveDataType{"String"});
  ClassifierRef int_ref = model.append_classifier(PrimitiveDataType{"Int"});
  const uint32_t first_class_index = 2;

  const uint32_t n_classes = 1 + pick(6);
  std::vector<ClassifierRef> classes;
  // Expansion depth a reference into the class costs: full inlining for
  // non-persistent targets, primary-key derivation for persistent ones.
  std::vector<uint32_t> ref_depth;
  uint32_t assoc_counter = 0;
  bool any_persistent = false;

  auto class_pos = [&](ClassifierRef ref) { return ref.index - first_class_index; };

  for (uint32_t ci = 0; ci < n_classes; ++ci) {
    Class cls;
    cls.name = "C" + std::to_string(ci);
    cls.is_persistent = chance(0.5);
    if (ci + 1 == n_classes && !any_persistent) {
      cls.is_persistent = true;
    }
    any_persistent = any_persistent || cls.is_persistent;

    std::optional<ClassifierRef> parent;
    if (ci > 0 && chance(0.35)) {
      parent = classes[pick(ci)];
      cls.parent = parent;
    }

    // Effective attributes coming from the parent chain; overriding keeps
    // their primary flags so no table can lose its key to an override.
    std::vector<std::pair<std::string, bool>> inherited;
    if (parent.has_value()) {
      for (AttrRef ref : all_attributes(model, *parent)) {
        const Attribute& attr = attribute_at(model, ref);
        inherited.emplace_back(attr.name, attr.is_primary);
      }
    }

    // Only classes with a recorded depth are referenceable, which excludes
    // the class currently being built and keeps every reference acyclic.
    auto eligible_targets = [&]() {
      std::vector<ClassifierRef> out;
      for (size_t pos = 0; pos < ref_depth.size(); ++pos) {
        if (ref_depth[pos] <= 2) {
          out.push_back(classes[pos]);
        }
      }
      return out;
    };
    auto pick_type = [&]() -> ClassifierRef {
      std::vector<ClassifierRef> targets = eligible_targets();
      if (!targets.empty() && chance(0.3)) {
        return targets[pick(static_cast<uint32_t>(targets.size()))];
      }
      return chance(0.5) ? string_ref : int_ref;
    };

    std::set<std::string> used_names;
    const bool is_root = !parent.has_value();
    uint32_t n_attrs = is_root ? 1 + pick(4) : pick(4);
    for (uint32_t ai = 0; ai < n_attrs; ++ai) {
      Attribute attr;
      if (is_root && ai == 0) {
        attr.name = kAttrPool[pick(3)];
        attr.is_primary = true;
        attr.type = chance(0.5) ? string_ref : int_ref;
      } else if (!inherited.empty() && chance(0.3)) {
        auto [name, primary] = inherited[pick(static_cast<uint32_t>(inherited.size()))];
        if (used_names.count(name) > 0) {
          continue;
        }
        attr.name = name;
        attr.is_primary = primary;
        attr.type = pick_type();
      } else {
        attr.name = kAttrPool[pick(std::size(kAttrPool))];
        bool clashes = used_names.count(attr.name) > 0 ||
                       std::any_of(inherited.begin(), inherited.end(),
                                   [&](const auto& in) { return in.first == attr.name; });
        if (clashes) {
          continue;
        }
        attr.is_primary = chance(0.25);
        attr.type = pick_type();
      }
      used_names.insert(attr.name);
      cls.attributes.push_back(std::move(attr));
    }

    ClassifierRef ref = model.append_classifier(std::move(cls));
    classes.push_back(ref);

    if (ci > 0) {
      uint32_t n_assocs = pick(3);
      for (uint32_t s = 0; s < n_assocs; ++s) {
        std::vector<ClassifierRef> targets = eligible_targets();
        if (targets.empty()) {
          break;
        }
        Association assoc;
        assoc.name = "rel" + std::to_string(assoc_counter++);
        assoc.src = ref;
        assoc.dest = targets[pick(static_cast<uint32_t>(targets.size()))];
        model.append_association(std::move(assoc));
      }
    }

    // Record how deep a reference into this class expands.
    uint32_t full = 1;
    uint32_t pkey = 1;
    for (AttrRef aref : all_attributes(model, ref)) {
      const Attribute& attr = attribute_at(model, aref);
      if (model.as_class(attr.type) == nullptr) {
        continue;
      }
      uint32_t depth = 1 + ref_depth[class_pos(attr.type)];
      full = std::max(full, depth);
      if (attr.is_primary) {
        pkey = std::max(pkey, depth);
      }
    }
    for (uint32_t index : associations_from(model, ref)) {
      uint32_t depth = 1 + ref_depth[class_pos(model.association(index).dest)];
      full = std::max(full, depth);
    }
    ref_depth.push_back(model.as_class(ref)->is_persistent ? pkey : full);
  }
  return model;
}

}  // namespace

ClassModel random_model(uint32_t seed) {
  for (uint32_t attempt = 0; attempt < 8; ++attempt) {
    ClassModel model = build_candidate(seed + attempt * 1000003u);
    if (validate_class_model(model).empty() && detect_cycles(model).empty()) {
      return model;
    }
  }
  throw std::runtime_error("random_model: no valid candidate for seed " + std::to_string(seed));
}

}  // namespace mtx::test
