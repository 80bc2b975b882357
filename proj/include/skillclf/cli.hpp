#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skillclf/corpus.hpp"
#include "skillclf/embedding.hpp"
#include "skillclf/error.hpp"
#include "skillclf/evaluation.hpp"
#include "skillclf/hierarchy.hpp"
#include "skillclf/io.hpp"
#include "skillclf/text.hpp"

namespace skillclf::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// One line on the diagnostic stream with everything needed to rerun.
inline void log_config(std::ostream& err, const std::string& command, const nlohmann::json& config) {
  err << "skillclf " << command << " " << config.dump() << "\n";
}

inline SkillLabel label_from_json_key(const std::string& key) { return parse_label(key); }

inline SyntheticSpec read_synthetic_spec(const fs::path& path, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  try {
    const auto doc = nlohmann::json::parse(io::read_file(path));
    if (doc.value("counts", nlohmann::json()).is_string() && doc["counts"] == "reference") {
      spec.counts = reference_subclass_counts();
    } else {
      for (const auto& [key, value] : doc.at("counts").items()) spec.counts[label_from_json_key(key)] = value.get<int>();
    }
    spec.negative_count = doc.value("negatives", 0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSpec, path.string() + ": " + e.what());
  }
  return spec;
}

inline std::optional<std::uint64_t> hash_seed_from_provider(const std::string& provider) {
  const std::string prefix = "hash(seed=";
  if (provider.rfind(prefix, 0) != 0 || provider.back() != ')') return std::nullopt;
  return std::stoull(provider.substr(prefix.size(), provider.size() - prefix.size() - 1));
}

inline Corpus load_corpus(const fs::path& path) {
  return parse_corpus(io::read_file(path), Taxonomy::esco(), path.filename().string());
}

inline std::map<int, ModelConfig> configs_for_all_classes(const TrialConfig& trial) {
  std::map<int, ModelConfig> configs;
  for (int c = 1; c <= kClassCount; ++c) configs[c] = ModelConfig{trial.architecture, trial.hyperparams};
  return configs;
}

inline const TrialConfig& pick_trial(const std::vector<TrialConfig>& grid, std::optional<int> id, const std::string& what) {
  if (!id) return grid.front();
  for (const auto& t : grid) {
    if (t.trial_id == *id) return t;
  }
  throw UsageError(what + ": no trial " + std::to_string(*id));
}

inline std::string format_probabilities(const PredictedLabels& p) {
  std::string out;
  char buf[48];
  for (const auto& [c, prediction] : p.classes) {
    std::snprintf(buf, sizeof(buf), "%sT%d=%.6f", out.empty() ? "" : ",", c, prediction.probability);
    out += buf;
  }
  return out;
}

}  // namespace detail

/// Parses argv (without the program name) and runs one pipeline stage.
/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Hierarchical transversal-skill classifier for job-ad sentences", "skillclf"};
  app.require_subcommand(1, 1);

  std::string in_path, out_path, spec_path, provider, table_path, corpus_path, embeddings_path;
  std::string grid_path, level1_grid, level2_grid, models_dir, text, class_name;
  std::uint64_t seed = 0;
  std::size_t dim = kEmbeddingDim, k = 5, repeats = 5, jobs = 1;
  int level = 1;
  double threshold = 0.5;
  bool check = false, clone_before_split = false, no_augment = false;
  std::optional<int> level1_trial, level2_trial;

  auto* scrub = app.add_subcommand("scrub", "Scrub raw ad text and write one sentence per line");
  scrub->add_option("--in", in_path, "Raw text file")->required();
  scrub->add_option("--out", out_path, "Output text file")->required();

  auto* parse = app.add_subcommand("parse", "Parse an annotated corpus and print its record count");
  parse->add_option("--in", in_path, "Annotated corpus")->required();
  parse->add_flag("--check", check, "Validate only");
  parse->add_option("--out", out_path, "Write the corpus back in canonical form");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic annotated corpus");
  synth->add_option("--spec", spec_path, "Synthetic spec JSON")->required();
  synth->add_option("--seed", seed, "Random seed")->required();
  synth->add_option("--out", out_path, "Output corpus")->required();

  auto* embed = app.add_subcommand("embed", "Write sentence embeddings for a corpus");
  embed->add_option("--provider", provider, "hash | file")->required()->check(CLI::IsMember({"hash", "file"}));
  embed->add_option("--seed", seed, "Seed of the hash provider");
  embed->add_option("--table", table_path, "Embedding file for the file provider");
  embed->add_option("--dim", dim, "Vector length of the hash provider");
  embed->add_option("--in", in_path, "Annotated corpus")->required();
  embed->add_option("--out", out_path, "Output embedding file")->required();

  auto* train = app.add_subcommand("train", "Train the level-1 and level-2 model hierarchy");
  train->add_option("--corpus", corpus_path)->required();
  train->add_option("--embeddings", embeddings_path)->required();
  train->add_option("--level1-grid", level1_grid)->required();
  train->add_option("--level2-grid", level2_grid)->required();
  train->add_option("--level1-trial", level1_trial, "Trial id to use (default: first)");
  train->add_option("--level2-trial", level2_trial, "Trial id to use (default: first)");
  train->add_option("--seed", seed);
  train->add_option("--threshold", threshold)->check(CLI::Range(0.0, 1.0));
  train->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  train->add_option("--out", out_path, "Bundle directory")->required();

  auto add_cv_options = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", corpus_path)->required();
    cmd->add_option("--embeddings", embeddings_path)->required();
    cmd->add_option("--level", level)->check(CLI::IsMember({1, 2}));
    cmd->add_option("--grid", grid_path)->required();
    cmd->add_option("--k", k)->check(CLI::Range(2, 1000));
    cmd->add_option("--repeats", repeats)->check(CLI::Range(1, 1000));
    cmd->add_option("--seed", seed);
    cmd->add_flag("--clone-before-split", clone_before_split, "Clone positives before splitting into folds");
    cmd->add_flag("--no-augment", no_augment, "Disable cloning augmentation");
    cmd->add_option("--threshold", threshold)->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_path, "Result JSON")->required();
  };
  auto* cv = app.add_subcommand("cv", "Cross-validate a grid of trials on one class");
  add_cv_options(cv);
  cv->add_option("--class", class_name, "T1..T6")->required();
  auto* grid = app.add_subcommand("grid", "Cross-validate a grid of trials on every class");
  add_cv_options(grid);

  auto* predict = app.add_subcommand("predict", "Predict skill labels with a trained bundle");
  predict->add_option("--models", models_dir)->required();
  auto* text_opt = predict->add_option("--text", text, "A single sentence");
  auto* in_opt = predict->add_option("--in", in_path, "Annotated corpus whose sentences are classified");
  text_opt->excludes(in_opt);
  predict->add_option("--table", table_path, "Embedding file keyed by the corpus");
  predict->add_option("--out", out_path, "Prediction output (default: stdout)");

  auto* report = app.add_subcommand("report", "Render a result file as a markdown table");
  report->add_option("--in", in_path)->required();
  report->add_option("--out", out_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (scrub->parsed()) {
      detail::log_config(err, "scrub", {{"in", in_path}, {"out", out_path}});
      const auto raw = io::read_file(in_path);
      std::string result;
      std::size_t start = 0;
      while (start <= raw.size()) {
        auto end = raw.find('\n', start);
        if (end == std::string::npos) end = raw.size();
        for (const auto& sentence : split_sentences(scrub_text(std::string_view(raw).substr(start, end - start)))) {
          result += sentence + "\n";
        }
        start = end + 1;
      }
      io::write_file_atomic(out_path, result);
    } else if (parse->parsed()) {
      detail::log_config(err, "parse", {{"in", in_path}, {"check", check}, {"out", out_path}});
      const auto corpus = detail::load_corpus(in_path);
      out << corpus.records.size() << " records\n";
      if (!check && !out_path.empty()) io::write_file_atomic(out_path, write_corpus(corpus));
    } else if (synth->parsed()) {
      detail::log_config(err, "synth", {{"spec", spec_path}, {"seed", seed}, {"out", out_path}});
      const auto corpus = generate_synthetic_corpus(detail::read_synthetic_spec(spec_path, seed));
      io::write_file_atomic(out_path, write_corpus(corpus));
      out << corpus.records.size() << " records\n";
    } else if (embed->parsed()) {
      if (provider == "hash" && embed->count("--seed") == 0) throw UsageError("embed --provider hash needs --seed");
      if (provider == "file" && table_path.empty()) throw UsageError("embed --provider file needs --table");
      if (dim == 0) throw UsageError("--dim must be positive");
      detail::log_config(err, "embed", {{"provider", provider}, {"seed", seed}, {"table", table_path},
                                        {"dim", dim}, {"in", in_path}, {"out", out_path}});
      const auto corpus = detail::load_corpus(in_path);
      std::unique_ptr<EmbeddingProvider> source;
      if (provider == "hash") {
        source = std::make_unique<HashEmbedder>(dim, seed);
      } else {
        source = std::make_unique<TableEmbedder>(
            std::make_shared<const EmbeddingTable>(read_embedding_file(io::read_file(table_path))));
      }
      const auto table = embed_corpus(corpus, *source);
      io::write_file_atomic(out_path, write_embedding_file(table));
      out << table.entries.size() << " vectors\n";
    } else if (train->parsed()) {
      detail::log_config(err, "train", {{"corpus", corpus_path}, {"embeddings", embeddings_path},
                                        {"level1_grid", level1_grid}, {"level2_grid", level2_grid},
                                        {"level1_trial", level1_trial ? *level1_trial : -1},
                                        {"level2_trial", level2_trial ? *level2_trial : -1},
                                        {"seed", seed}, {"threshold", threshold}, {"jobs", jobs}, {"out", out_path}});
      const auto corpus = detail::load_corpus(corpus_path);
      const auto table = read_embedding_file(io::read_file(embeddings_path));
      const auto g1 = parse_grid(io::read_file(level1_grid));
      const auto g2 = parse_grid(io::read_file(level2_grid));
      auto t1 = detail::pick_trial(g1, level1_trial, "--level1-trial");
      auto t2 = detail::pick_trial(g2, level2_trial, "--level2-trial");
      t1.hyperparams.seed = seed;
      t2.hyperparams.seed = seed;
      const auto trained = train_hierarchy(corpus, table, detail::configs_for_all_classes(t1),
                                           detail::configs_for_all_classes(t2), {threshold, jobs});
      for (const auto& w : trained.warnings) err << "warning: " << w << "\n";
      save_hierarchy(trained.models, out_path);
      out << trained.models.level1.size() << " level-1 and " << trained.models.level2.size()
          << " level-2 models\n";
    } else if (cv->parsed() || grid->parsed()) {
      const std::string command = cv->parsed() ? "cv" : "grid";
      const AugmentMode mode = no_augment           ? AugmentMode::Off
                               : clone_before_split ? AugmentMode::BeforeSplit
                                                    : AugmentMode::AfterSplit;
      detail::log_config(err, command, {{"corpus", corpus_path}, {"embeddings", embeddings_path}, {"level", level},
                                        {"class", class_name}, {"grid", grid_path}, {"k", k}, {"repeats", repeats},
                                        {"seed", seed}, {"augment", std::string(to_string(mode))},
                                        {"clone_before_split", clone_before_split}, {"threshold", threshold},
                                        {"jobs", jobs}, {"out", out_path}});
      const auto corpus = detail::load_corpus(corpus_path);
      const auto table = read_embedding_file(io::read_file(embeddings_path));
      const auto trials = parse_grid(io::read_file(grid_path));
      std::vector<int> classes;
      if (cv->parsed()) {
        classes.push_back(parse_class_id(class_name));
      } else {
        for (int c = 1; c <= kClassCount; ++c) classes.push_back(c);
      }
      std::map<int, Dataset> datasets;
      for (int c : classes) {
        datasets.emplace(c, level == 1 ? build_level1_dataset(corpus, table, c) : build_level2_dataset(corpus, table, c));
      }
      const auto result = run_grid(datasets, trials, CvOptions{k, repeats, seed, mode, threshold, jobs});
      auto doc = grid_result_to_json(result);
      nlohmann::json grid_json = nlohmann::json::array();
      for (const auto& t : trials) grid_json.push_back(trial_to_json(t));
      doc["command"] = command;
      doc["level"] = level;
      doc["k"] = k;
      doc["repeats"] = repeats;
      doc["seed"] = seed;
      doc["augment"] = std::string(to_string(mode));
      doc["clone_before_split"] = clone_before_split;
      doc["threshold"] = threshold;
      doc["embedding_provider"] = table.provider_id;
      doc["grid"] = grid_json;
      doc["report"] = render_report(result.matrix);
      io::write_file_atomic(out_path, doc.dump(2) + "\n");
      for (const auto& cell : result.cells) {
        if (!cell.result) err << "warning: trial " << cell.trial << " T" << cell.class_index << ": " << cell.error << "\n";
      }
      out << render_report(result.matrix);
    } else if (predict->parsed()) {
      if (text.empty() && in_path.empty()) throw UsageError("predict needs --text or --in");
      detail::log_config(err, "predict", {{"models", models_dir}, {"text", text}, {"in", in_path},
                                          {"table", table_path}, {"out", out_path}});
      const auto models = load_hierarchy(models_dir);
      std::vector<SentenceRecord> sentences;
      if (!text.empty()) {
        sentences.push_back(SentenceRecord{"input", 1, scrub_text(text), {}});
      } else {
        sentences = detail::load_corpus(in_path).records;
      }
      std::unique_ptr<EmbeddingProvider> source;
      if (!table_path.empty()) {
        if (!text.empty()) throw UsageError("--table only applies to --in");
        source = std::make_unique<TableEmbedder>(
            std::make_shared<const EmbeddingTable>(read_embedding_file(io::read_file(table_path))));
      } else if (const auto hash_seed = detail::hash_seed_from_provider(models.provider_id)) {
        source = std::make_unique<HashEmbedder>(models.dim, *hash_seed);
      } else {
        throw Error(ErrorCode::MissingEmbedding, "models were trained on '" + models.provider_id +
                                                     "' embeddings; pass --in with --table");
      }
      if (source->dim() != models.dim) {
        throw Error(ErrorCode::DimensionMismatch, "embedding dim " + std::to_string(source->dim()) +
                                                      " differs from the models' " + std::to_string(models.dim));
      }
      std::string result;
      for (const auto& sentence : sentences) {
        const auto predicted = predict_sentence(models, source->embed(sentence));
        result += sentence.text + "\t" + format_labels(predicted.labels) + "\t" +
                  detail::format_probabilities(predicted) + "\n";
      }
      if (out_path.empty()) {
        out << result;
      } else {
        io::write_file_atomic(out_path, result);
      }
    } else if (report->parsed()) {
      detail::log_config(err, "report", {{"in", in_path}, {"out", out_path}});
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(io::read_file(in_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadFormat, in_path + ": " + e.what());
      }
      const auto rendered = render_report(result_matrix_from_json(doc));
      io::write_file_atomic(out_path, rendered);
      out << rendered;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace skillclf::cli
