#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skillclf {

namespace detail {

/// Decodes one UTF-8 sequence starting at `pos`. Returns the code point and
/// advances `pos`; invalid or overlong sequences yield 0xFFFFFFFF and skip a
/// single byte.
inline std::uint32_t next_code_point(std::string_view s, std::size_t& pos) {
  constexpr std::uint32_t kInvalid = 0xFFFFFFFFu;
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  std::uint32_t cp = 0;
  std::uint32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + static_cast<std::size_t>(extra) >= s.size()) {
    ++pos;
    return kInvalid;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kInvalid;
  }
  pos += static_cast<std::size_t>(extra) + 1;
  return cp;
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_unicode_space(std::uint32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

/// Controls, invisible format characters and noncharacters.
inline bool is_non_printable(std::uint32_t cp) {
  if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) return true;
  if (cp >= 0x200B && cp <= 0x200F) return true;
  if (cp >= 0x202A && cp <= 0x202E) return true;
  if (cp >= 0x2060 && cp <= 0x2064) return true;
  if (cp == 0xFEFF || cp == 0xFFFE || cp == 0xFFFF) return true;
  if (cp >= 0xFFF9 && cp <= 0xFFFB) return true;
  return false;
}

constexpr bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
constexpr bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
constexpr bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }
constexpr bool is_scheme_char(char c) { return is_ascii_alnum(c) || c == '+' || c == '.' || c == '-'; }
constexpr bool is_email_local_char(char c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
constexpr bool is_email_domain_char(char c) { return is_ascii_alnum(c) || c == '.' || c == '-'; }

inline std::size_t token_end(std::string_view s, std::size_t from) {
  while (from < s.size() && s[from] != ' ') ++from;
  return from;
}

/// Removes one URL occurrence; returns false when none is left.
inline bool erase_one_url(std::string& s) {
  for (std::size_t pos = s.find("://"); pos != std::string::npos; pos = s.find("://", pos + 1)) {
    std::size_t start = pos;
    while (start > 0 && is_scheme_char(s[start - 1])) --start;
    while (start < pos && !is_ascii_alpha(s[start])) ++start;
    if (start == pos) continue;
    s.erase(start, token_end(s, pos) - start);
    return true;
  }
  for (std::size_t pos = 0; pos + 4 <= s.size(); ++pos) {
    const bool at_boundary = pos == 0 || !is_ascii_alnum(s[pos - 1]);
    if (!at_boundary) continue;
    if ((s[pos] | 0x20) == 'w' && (s[pos + 1] | 0x20) == 'w' && (s[pos + 2] | 0x20) == 'w' &&
        s[pos + 3] == '.') {
      s.erase(pos, token_end(s, pos) - pos);
      return true;
    }
  }
  return false;
}

inline bool erase_one_email(std::string& s) {
  for (std::size_t at = s.find('@'); at != std::string::npos; at = s.find('@', at + 1)) {
    std::size_t start = at;
    while (start > 0 && is_email_local_char(s[start - 1])) --start;
    std::size_t end = at + 1;
    while (end < s.size() && is_email_domain_char(s[end])) ++end;
    while (end > at + 1 && (s[end - 1] == '.' || s[end - 1] == '-')) --end;
    const std::string_view domain(s.data() + at + 1, end - at - 1);
    const auto dot = domain.find('.');
    if (start == at || dot == std::string_view::npos || dot == 0) continue;
    s.erase(start, end - start);
    return true;
  }
  return false;
}

}  // namespace detail

/// Cleans raw ad text: drops URLs, e-mail addresses and non-printable
/// characters, turns ';' into ',', and collapses whitespace. Letters outside
/// ASCII are kept as-is. Idempotent.
inline std::string scrub_text(std::string_view raw) {
  std::string text;
  text.reserve(raw.size());
  for (std::size_t pos = 0; pos < raw.size();) {
    const std::uint32_t cp = detail::next_code_point(raw, pos);
    if (cp == 0xFFFFFFFFu) continue;
    if (detail::is_unicode_space(cp)) {
      text.push_back(' ');
    } else if (!detail::is_non_printable(cp)) {
      detail::append_utf8(text, cp);
    }
  }

  // Removing one address can splice its neighbours into a new one.
  while (detail::erase_one_url(text) || detail::erase_one_email(text)) {
  }

  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c == ';' ? ',' : c);
  }
  return out;
}

/// Splits on newlines and on runs of '.', '!' or '?' that are followed by
/// whitespace or the end of text. Terminators are dropped and fragments
/// trimmed; empty fragments are discarded.
inline std::vector<std::string> split_sentences(std::string_view text) {
  auto is_terminator = [](char c) { return c == '.' || c == '!' || c == '?'; };
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };

  std::vector<std::string> out;
  auto flush = [&](std::string_view piece) {
    while (!piece.empty() && is_space(piece.front())) piece.remove_prefix(1);
    while (!piece.empty() && is_space(piece.back())) piece.remove_suffix(1);
    if (!piece.empty()) out.emplace_back(piece);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '\n') {
      flush(text.substr(start, i - start));
      start = ++i;
      continue;
    }
    if (is_terminator(text[i])) {
      std::size_t run_end = i;
      while (run_end < text.size() && is_terminator(text[run_end])) ++run_end;
      if (run_end == text.size() || is_space(text[run_end])) {
        flush(text.substr(start, i - start));
        start = i = run_end;
        continue;
      }
      i = run_end;
      continue;
    }
    ++i;
  }
  flush(text.substr(start));
  return out;
}

}  // namespace skillclf
