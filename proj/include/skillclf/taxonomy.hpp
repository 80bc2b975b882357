#pragma once

#include <array>
#include <charconv>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "skillclf/error.hpp"

namespace skillclf {

inline constexpr int kClassCount = 6;

struct SkillClass {
  int id;
  std::string_view name;
  int subclass_count;
};

/// The six ESCO transversal skill classes and their subclass counts.
class Taxonomy {
 public:
  static const Taxonomy& esco() {
    static const Taxonomy instance;
    return instance;
  }

  const std::array<SkillClass, kClassCount>& classes() const noexcept { return classes_; }

  bool has_class(int class_id) const noexcept { return class_id >= 1 && class_id <= kClassCount; }

  const SkillClass& at(int class_id) const {
    if (!has_class(class_id)) {
      throw Error(ErrorCode::InvalidLabel, "class index out of range: " + std::to_string(class_id));
    }
    return classes_[static_cast<std::size_t>(class_id - 1)];
  }

  int subclass_count(int class_id) const { return at(class_id).subclass_count; }

  bool contains(int class_id, std::optional<int> subclass) const noexcept {
    if (!has_class(class_id)) return false;
    if (!subclass) return true;
    return *subclass >= 1 &&
           *subclass <= classes_[static_cast<std::size_t>(class_id - 1)].subclass_count;
  }

 private:
  Taxonomy() = default;

  std::array<SkillClass, kClassCount> classes_{{
      {1, "Core skills and competences", 3},
      {2, "Thinking skills and competences", 4},
      {3, "Self-management skills and competences", 4},
      {4, "Social and communication skills and competences", 5},
      {5, "Physical and manual skills and competences", 2},
      {6, "Life skills and competences", 6},
  }};
};

/// A class label "T<x>" or a subclass label "T<x>.<y>". Bare class labels
/// order before their subclasses.
struct SkillLabel {
  int class_index = 1;
  std::optional<int> subclass_index;

  auto operator<=>(const SkillLabel&) const = default;

  bool is_subclass() const noexcept { return subclass_index.has_value(); }

  std::string str() const {
    std::string out = "T" + std::to_string(class_index);
    if (subclass_index) out += "." + std::to_string(*subclass_index);
    return out;
  }
};

namespace detail {

inline std::optional<int> parse_small_int(std::string_view text) {
  if (text.empty() || text.size() > 9) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses "T<x>" or "T<x>.<y>" and validates it against the taxonomy.
inline SkillLabel parse_label(std::string_view text, const Taxonomy& taxonomy = Taxonomy::esco()) {
  auto fail = [&] { return Error(ErrorCode::InvalidLabel, "'" + std::string(text) + "'"); };
  if (text.size() < 2 || text.front() != 'T') throw fail();
  std::string_view body = text.substr(1);
  SkillLabel label;
  const auto dot = body.find('.');
  auto cls = detail::parse_small_int(body.substr(0, dot));
  if (!cls) throw fail();
  label.class_index = *cls;
  if (dot != std::string_view::npos) {
    auto sub = detail::parse_small_int(body.substr(dot + 1));
    if (!sub) throw fail();
    label.subclass_index = *sub;
  }
  if (!taxonomy.contains(label.class_index, label.subclass_index)) throw fail();
  return label;
}

/// Accepts "T3" or "3".
inline int parse_class_id(std::string_view text, const Taxonomy& taxonomy = Taxonomy::esco()) {
  if (!text.empty() && (text.front() == 'T' || text.front() == 't')) text.remove_prefix(1);
  auto value = detail::parse_small_int(text);
  if (!value || !taxonomy.has_class(*value)) {
    throw Error(ErrorCode::InvalidLabel, "not a skill class: '" + std::string(text) + "'");
  }
  return *value;
}

}  // namespace skillclf
