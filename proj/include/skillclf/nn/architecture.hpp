#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillclf/error.hpp"

namespace skillclf::nn {

enum class Activation { Sigmoid, Tanh, Elu, LRelu };

constexpr std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Elu: return "elu";
    case Activation::LRelu: return "lrelu";
  }
  return "?";
}

inline Activation parse_activation(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto a : {Activation::Sigmoid, Activation::Tanh, Activation::Elu, Activation::LRelu}) {
    if (lower == to_string(a)) return a;
  }
  throw Error(ErrorCode::UnknownActivation, "'" + std::string(name) + "'");
}

/// Width 0 on the output layer stands for "no", the per-class output count
/// substituted when a level-2 grid is instantiated for a class.
inline constexpr int kOutputPlaceholder = 0;

struct LayerSpec {
  int width = 1;
  Activation activation = Activation::Sigmoid;

  bool operator==(const LayerSpec&) const = default;
};

struct ArchitectureSpec {
  int input_dim = 1;
  std::vector<LayerSpec> layers;

  bool operator==(const ArchitectureSpec&) const = default;

  int output_dim() const { return layers.empty() ? 0 : layers.back().width; }
  bool has_placeholder() const { return !layers.empty() && layers.back().width == kOutputPlaceholder; }

  /// Copy with the output width fixed to `outputs`.
  ArchitectureSpec with_outputs(int outputs) const {
    ArchitectureSpec copy = *this;
    copy.layers.back().width = outputs;
    return copy;
  }
};

namespace detail {

inline std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline int parse_width(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::SyntaxError, "bad width '" + std::string(text) + "' in '" + std::string(whole) + "'");
  }
  if (value <= 0) {
    throw Error(ErrorCode::NonPositiveWidth, "width " + std::string(text) + " in '" + std::string(whole) + "'");
  }
  return value;
}

inline ArchitectureSpec parse_architecture_impl(std::string_view text, bool allow_placeholder) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(trim_ws(text.substr(start, colon == std::string_view::npos ? colon : colon - start)));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2) {
    throw Error(ErrorCode::SyntaxError, "expected '<in> : <w>(<act>) ...', got '" + std::string(text) + "'");
  }
  ArchitectureSpec spec;
  spec.input_dim = parse_width(parts[0], text);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto part = parts[i];
    const auto open = part.find('(');
    if (open == std::string_view::npos || part.back() != ')') {
      throw Error(ErrorCode::SyntaxError, "layer '" + std::string(part) + "' is not '<width>(<activation>)'");
    }
    const auto width_text = trim_ws(part.substr(0, open));
    const auto act_text = trim_ws(part.substr(open + 1, part.size() - open - 2));
    LayerSpec layer;
    const bool last = i + 1 == parts.size();
    if (width_text == "no") {
      if (!allow_placeholder || !last) {
        throw Error(ErrorCode::SyntaxError, "'no' width is only allowed on the output layer of a level-2 grid");
      }
      layer.width = kOutputPlaceholder;
    } else {
      layer.width = parse_width(width_text, text);
    }
    layer.activation = parse_activation(act_text);
    spec.layers.push_back(layer);
  }
  if (spec.layers.back().activation != Activation::Sigmoid) {
    throw Error(ErrorCode::SyntaxError, "output layer must use sigmoid in '" + std::string(text) + "'");
  }
  return spec;
}

}  // namespace detail

/// Parses "768 : 81(lrelu) : 9(lrelu) : 1(sigmoid)".
inline ArchitectureSpec parse_architecture(std::string_view text) {
  return detail::parse_architecture_impl(text, false);
}

/// Same as parse_architecture, but also accepts "no" as the output width.
inline ArchitectureSpec parse_architecture_template(std::string_view text) {
  return detail::parse_architecture_impl(text, true);
}

inline std::string format_architecture(const ArchitectureSpec& spec) {
  std::string out = std::to_string(spec.input_dim);
  for (const auto& layer : spec.layers) {
    out += " : ";
    out += layer.width == kOutputPlaceholder ? std::string("no") : std::to_string(layer.width);
    out += "(";
    out += to_string(layer.activation);
    out += ")";
  }
  return out;
}

}  // namespace skillclf::nn
