#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "skillclf/corpus.hpp"
#include "skillclf/error.hpp"
#include "skillclf/random.hpp"

namespace skillclf {

inline constexpr std::size_t kEmbeddingDim = 768;

using EmbeddingVector = std::vector<double>;

struct EmbeddingTable {
  std::string provider_id;
  std::size_t dim = kEmbeddingDim;
  std::map<RecordKey, EmbeddingVector> entries;

  bool operator==(const EmbeddingTable&) const = default;
};

/// Deterministic bag-of-tokens embedding. Each lowercased whitespace token
/// seeds an Rng with mix64(fnv1a64(token) ^ mix64(seed)) and contributes
/// `dim` standard-normal draws; the token vectors are summed in sorted token
/// order and the sum is L2-normalized. No tokens gives the zero vector.
inline EmbeddingVector hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  std::sort(tokens.begin(), tokens.end());

  EmbeddingVector sum(dim, 0.0);
  const std::uint64_t seed_mix = mix64(seed);
  for (const auto& token : tokens) {
    Rng rng(mix64(fnv1a64(token) ^ seed_mix));
    for (auto& v : sum) v += rng.normal();
  }
  double norm = 0.0;
  for (double v : sum) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& v : sum) v /= norm;
  }
  return sum;
}

/// Source of sentence vectors. Implementations are read-only once built.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(const SentenceRecord& record) const = 0;
};

class HashEmbedder final : public EmbeddingProvider {
 public:
  HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

  std::string id() const override { return "hash(seed=" + std::to_string(seed_) + ")"; }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(const SentenceRecord& record) const override {
    return hash_embed(record.text, dim_, seed_);
  }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

inline const EmbeddingVector& lookup_embedding(const EmbeddingTable& table, const RecordKey& key) {
  const auto it = table.entries.find(key);
  if (it == table.entries.end()) {
    throw Error(ErrorCode::MissingKey, "no embedding for " + key.str());
  }
  return it->second;
}

/// Serves vectors from a precomputed table, keyed by sentence identity.
class TableEmbedder final : public EmbeddingProvider {
 public:
  explicit TableEmbedder(std::shared_ptr<const EmbeddingTable> table) : table_(std::move(table)) {}

  std::string id() const override { return table_->provider_id; }
  std::size_t dim() const override { return table_->dim; }
  EmbeddingVector embed(const SentenceRecord& record) const override {
    return lookup_embedding(*table_, record.key());
  }

 private:
  std::shared_ptr<const EmbeddingTable> table_;
};

inline EmbeddingTable embed_corpus(const Corpus& corpus, const EmbeddingProvider& provider) {
  EmbeddingTable table{provider.id(), provider.dim(), {}};
  for (const auto& record : corpus.records) {
    table.entries.emplace(record.key(), provider.embed(record));
  }
  return table;
}

// --- TSV file format -------------------------------------------------------
//
//   #dim=<D>\tcount=<N>\tprovider=<id>
//   <ad_id>:<sent_idx>\tf1\t...\tfD          (N rows, sorted by key)

namespace detail {

inline void append_float9(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  out.append(buf, ptr);
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::size_t parse_header_size(std::string_view field, std::string_view name) {
  if (field.substr(0, name.size()) != name) {
    throw Error(ErrorCode::BadHeader, "expected field '" + std::string(name) + "'");
  }
  field.remove_prefix(name.size());
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::BadHeader, "bad value for '" + std::string(name) + "'");
  }
  return value;
}

inline RecordKey parse_embedding_key(std::string_view text) {
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::BadFormat, "bad embedding key '" + std::string(text) + "'");
  }
  const auto index = parse_small_int(text.substr(colon + 1));
  if (!index || *index < 1) {
    throw Error(ErrorCode::BadFormat, "bad sentence index in key '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, colon)), *index};
}

}  // namespace detail

inline std::string write_embedding_file(const EmbeddingTable& table) {
  std::string out = "#dim=" + std::to_string(table.dim) + "\tcount=" + std::to_string(table.entries.size()) +
                    "\tprovider=" + table.provider_id + "\n";
  for (const auto& [key, vec] : table.entries) {
    out += key.str();
    for (double v : vec) {
      out += '\t';
      detail::append_float9(out, v);
    }
    out += '\n';
  }
  return out;
}

inline EmbeddingTable read_embedding_file(std::string_view document) {
  auto next_line = [&document](std::string_view& line) {
    if (document.empty()) return false;
    auto end = document.find('\n');
    if (end == std::string_view::npos) end = document.size();
    line = document.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    document.remove_prefix(std::min(end + 1, document.size()));
    return true;
  };

  std::string_view line;
  if (!next_line(line) || line.empty() || line.front() != '#') {
    throw Error(ErrorCode::BadHeader, "missing '#dim=...' header line");
  }
  const auto header = detail::split_tabs(line.substr(1));
  if (header.size() != 3 || header[2].substr(0, 9) != "provider=") {
    throw Error(ErrorCode::BadHeader, "expected '#dim=<D>\\tcount=<N>\\tprovider=<id>'");
  }
  EmbeddingTable table;
  table.dim = detail::parse_header_size(header[0], "dim=");
  const auto count = detail::parse_header_size(header[1], "count=");
  table.provider_id = std::string(header[2].substr(9));
  if (table.dim == 0) throw Error(ErrorCode::BadHeader, "dim must be positive");

  std::size_t row = 0;
  while (next_line(line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = detail::split_tabs(line);
    const auto context = "row " + std::to_string(row);
    if (fields.size() - 1 != table.dim) {
      throw Error(ErrorCode::DimensionMismatch, context + " has " + std::to_string(fields.size() - 1) +
                                                    " values, header declares " + std::to_string(table.dim));
    }
    auto key = detail::parse_embedding_key(fields[0]);
    EmbeddingVector vec(table.dim);
    for (std::size_t i = 0; i < table.dim; ++i) {
      const auto f = fields[i + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[i]);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(vec[i])) {
        throw Error(ErrorCode::UnparsableFloat, context + " value " + std::to_string(i + 1) + " '" + std::string(f) + "'");
      }
    }
    if (!table.entries.emplace(key, std::move(vec)).second) {
      throw Error(ErrorCode::DuplicateKey, context + " repeats key " + key.str());
    }
  }
  if (table.entries.size() != count) {
    throw Error(ErrorCode::CountMismatch, "header declares " + std::to_string(count) + " rows, found " +
                                              std::to_string(table.entries.size()));
  }
  return table;
}

}  // namespace skillclf
