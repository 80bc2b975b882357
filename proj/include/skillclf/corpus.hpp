#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillclf/error.hpp"
#include "skillclf/random.hpp"
#include "skillclf/taxonomy.hpp"

namespace skillclf {

/// Identity of a sentence: job ad id plus the sentence's index in that ad.
struct RecordKey {
  std::string ad_id;
  int sentence_index = 1;

  auto operator<=>(const RecordKey&) const = default;

  std::string str() const { return ad_id + ":" + std::to_string(sentence_index); }
};

struct SentenceRecord {
  std::string ad_id;
  int sentence_index = 1;
  std::string text;
  std::set<SkillLabel> labels;  // empty means "no transversal skill"

  RecordKey key() const { return {ad_id, sentence_index}; }
  bool operator==(const SentenceRecord&) const = default;
};

struct Corpus {
  std::vector<SentenceRecord> records;
  std::string provenance;

  /// Provenance is informational and does not take part in equality.
  bool operator==(const Corpus& other) const { return records == other.records; }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline bool has_control_char(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x20 || u == 0x7F;
  });
}

}  // namespace detail

/// Decodes one corpus line: `ad_id: idx; text; labels` where labels is "0"
/// or a comma-separated list of "T<x>" / "T<x>.<y>".
inline SentenceRecord parse_annotated_line(std::string_view line,
                                           const Taxonomy& taxonomy = Taxonomy::esco()) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto quoted = "'" + std::string(line) + "'";
  if (std::count(line.begin(), line.end(), ';') != 2) {
    throw Error(ErrorCode::MalformedLine, "expected exactly two ';' delimiters in " + quoted);
  }
  const auto first = line.find(';');
  const auto second = line.find(';', first + 1);
  const std::string_view head = line.substr(0, first);
  const std::string_view text = detail::trim(line.substr(first + 1, second - first - 1));
  const std::string_view labels = detail::trim(line.substr(second + 1));

  const auto colon = head.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::MalformedLine, "missing ':' after the ad id in " + quoted);
  }
  SentenceRecord record;
  const auto ad_id = detail::trim(head.substr(0, colon));
  if (ad_id.empty() || ad_id.find_first_of(" \t") != std::string_view::npos) {
    throw Error(ErrorCode::MalformedLine, "bad ad id in " + quoted);
  }
  record.ad_id = std::string(ad_id);

  const auto index_text = detail::trim(head.substr(colon + 1));
  const auto index = detail::parse_small_int(index_text);
  if (!index || *index < 1) {
    throw Error(ErrorCode::InvalidIndex, "sentence index '" + std::string(index_text) + "' in " + quoted);
  }
  record.sentence_index = *index;

  if (text.empty() || detail::has_control_char(text)) {
    throw Error(ErrorCode::MalformedLine, "empty or non-printable sentence text in " + quoted);
  }
  record.text = std::string(text);

  if (labels.empty()) throw Error(ErrorCode::MalformedLine, "missing labels in " + quoted);
  if (labels == "0") return record;
  std::size_t start = 0;
  while (start <= labels.size()) {
    auto comma = labels.find(',', start);
    if (comma == std::string_view::npos) comma = labels.size();
    record.labels.insert(parse_label(detail::trim(labels.substr(start, comma - start)), taxonomy));
    start = comma + 1;
  }
  return record;
}

/// Parses a whole corpus document. Blank lines and '#' comments are skipped.
inline Corpus parse_corpus(std::string_view document, const Taxonomy& taxonomy = Taxonomy::esco(),
                           std::string provenance = "document") {
  Corpus corpus;
  corpus.provenance = std::move(provenance);
  std::set<RecordKey> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < document.size()) {
    auto end = document.find('\n', start);
    if (end == std::string_view::npos) end = document.size();
    const auto line = document.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    try {
      auto record = parse_annotated_line(line, taxonomy);
      if (!seen.insert(record.key()).second) {
        throw Error(ErrorCode::DuplicateRecord, "key " + record.key().str() + " already present");
      }
      corpus.records.push_back(std::move(record));
    } catch (const Error& e) {
      e.rethrow_with_context("line " + std::to_string(line_no));
    }
  }
  return corpus;
}

inline std::string format_labels(const std::set<SkillLabel>& labels) {
  if (labels.empty()) return "0";
  std::string out;
  for (const auto& label : labels) {
    if (!out.empty()) out += ", ";
    out += label.str();
  }
  return out;
}

inline std::string write_record(const SentenceRecord& r) {
  return r.ad_id + ": " + std::to_string(r.sentence_index) + "; " + r.text + "; " + format_labels(r.labels);
}

inline std::string write_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& record : corpus.records) {
    out += write_record(record);
    out += '\n';
  }
  return out;
}

inline std::set<int> derive_level1_labels(const SentenceRecord& record) {
  std::set<int> classes;
  for (const auto& label : record.labels) classes.insert(label.class_index);
  return classes;
}

// --- synthetic corpora -----------------------------------------------------

struct SyntheticSpec {
  std::map<SkillLabel, int> counts;
  int negative_count = 0;
  std::uint64_t seed = 0;
};

/// Subclass instance counts per ESCO subclass, as annotated in the original
/// job-ad corpus.
inline std::map<SkillLabel, int> reference_subclass_counts() {
  const std::array<std::array<int, 6>, kClassCount> table{{
      {106, 7, 29, 0, 0, 0},
      {99, 101, 137, 107, 0, 0},
      {186, 176, 94, 122, 0, 0},
      {169, 181, 209, 142, 54, 0},
      {8, 13, 0, 0, 0, 0},
      {8, 10, 15, 31, 32, 33},
  }};
  std::map<SkillLabel, int> counts;
  for (int c = 1; c <= kClassCount; ++c) {
    for (int s = 1; s <= Taxonomy::esco().subclass_count(c); ++s) {
      counts[SkillLabel{c, s}] = table[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(s - 1)];
    }
  }
  return counts;
}

namespace detail {

inline constexpr int kKeywordsPerLabel = 4;

inline constexpr std::array<std::string_view, 40> kFillerWords{
    "the", "a", "we", "our", "team", "position", "offer", "company", "role", "work",
    "office", "project", "daily", "new", "candidate", "will", "is", "are", "for", "with",
    "in", "of", "and", "to", "on", "this", "that", "department", "located", "based",
    "contract", "salary", "benefits", "schedule", "start", "date", "full", "time", "site", "unit"};

/// Keyword vocabulary for a label; disjoint across labels by construction.
inline std::string keyword(const SkillLabel& label, int k) {
  std::string word = "t" + std::to_string(label.class_index);
  if (label.subclass_index) word += "s" + std::to_string(*label.subclass_index);
  return word + "k" + std::to_string(k);
}

inline std::string synthetic_sentence(Rng& rng, const SkillLabel* label) {
  std::vector<std::string> words;
  if (label) {
    const auto keywords = 2 + rng.below(2);
    for (std::uint64_t i = 0; i < keywords; ++i) {
      words.push_back(keyword(*label, static_cast<int>(rng.below(kKeywordsPerLabel))));
    }
  }
  const auto fillers = (label ? 3 : 4) + rng.below(label ? 5 : 7);
  for (std::uint64_t i = 0; i < fillers; ++i) {
    words.emplace_back(kFillerWords[rng.below(kFillerWords.size())]);
  }
  rng.shuffle(std::span<std::string>(words));
  std::string sentence;
  for (const auto& w : words) {
    if (!sentence.empty()) sentence += ' ';
    sentence += w;
  }
  return sentence;
}

}  // namespace detail

/// Builds a corpus whose labeled sentences carry keywords unique to their
/// label, mixed with shared filler words; negatives use filler words only.
/// Records are shuffled and grouped into ads of 12 sentences.
inline Corpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                        const Taxonomy& taxonomy = Taxonomy::esco()) {
  if (spec.negative_count < 0) throw Error(ErrorCode::InvalidSpec, "negative count must be >= 0");
  for (const auto& [label, count] : spec.counts) {
    if (!taxonomy.contains(label.class_index, label.subclass_index)) {
      throw Error(ErrorCode::InvalidSpec, "label " + label.str() + " is not in the taxonomy");
    }
    if (count < 0) throw Error(ErrorCode::InvalidSpec, "count for " + label.str() + " must be >= 0");
  }

  Rng rng(derive_seed(spec.seed, 0x5e47));
  std::vector<SentenceRecord> records;
  for (const auto& [label, count] : spec.counts) {
    for (int i = 0; i < count; ++i) {
      SentenceRecord r;
      r.text = detail::synthetic_sentence(rng, &label);
      r.labels.insert(label);
      records.push_back(std::move(r));
    }
  }
  for (int i = 0; i < spec.negative_count; ++i) {
    SentenceRecord r;
    r.text = detail::synthetic_sentence(rng, nullptr);
    records.push_back(std::move(r));
  }
  rng.shuffle(std::span<SentenceRecord>(records));

  constexpr std::size_t kSentencesPerAd = 12;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].ad_id = "syn-" + std::to_string(i / kSentencesPerAd + 1);
    records[i].sentence_index = static_cast<int>(i % kSentencesPerAd) + 1;
  }
  return Corpus{std::move(records), "synthetic"};
}

}  // namespace skillclf
