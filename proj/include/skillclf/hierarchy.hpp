#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "skillclf/corpus.hpp"
#include "skillclf/embedding.hpp"
#include "skillclf/error.hpp"
#include "skillclf/io.hpp"
#include "skillclf/nn/model_io.hpp"
#include "skillclf/nn/trainer.hpp"
#include "skillclf/parallel.hpp"
#include "skillclf/taxonomy.hpp"

namespace skillclf {

/// Networks in the pipeline train and infer in single precision.
using ModelScalar = float;
using Net = nn::Mlp<ModelScalar>;
using FeatureMatrix = nn::Matrix<ModelScalar>;

/// Instances are columns. Level-1 sets have one target row; level-2 sets
/// have one row per subclass of `class_index`.
struct Dataset {
  int class_index = 1;
  FeatureMatrix inputs;
  FeatureMatrix targets;
  std::vector<RecordKey> keys;

  std::size_t size() const { return keys.size(); }
  int outputs() const { return static_cast<int>(targets.rows()); }
  bool is_binary() const { return targets.rows() == 1; }

  std::size_t positives() const {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < targets.cols(); ++i) count += targets(0, i) > 0.5f ? 1 : 0;
    return count;
  }

  /// Columns `indices` (repeats allowed) as a new dataset.
  Dataset gather(std::span<const std::size_t> indices) const {
    Dataset out{class_index, FeatureMatrix(inputs.rows(), static_cast<Eigen::Index>(indices.size())),
                FeatureMatrix(targets.rows(), static_cast<Eigen::Index>(indices.size())), {}};
    out.keys.reserve(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const auto src = static_cast<Eigen::Index>(indices[j]);
      out.inputs.col(static_cast<Eigen::Index>(j)) = inputs.col(src);
      out.targets.col(static_cast<Eigen::Index>(j)) = targets.col(src);
      out.keys.push_back(keys[indices[j]]);
    }
    return out;
  }
};

using BinaryDataset = Dataset;
using MultiLabelDataset = Dataset;

namespace detail {

inline void copy_embedding(const EmbeddingTable& table, const RecordKey& key, FeatureMatrix& inputs,
                           Eigen::Index column) {
  const auto it = table.entries.find(key);
  if (it == table.entries.end()) throw Error(ErrorCode::MissingEmbedding, "no embedding for " + key.str());
  if (it->second.size() != static_cast<std::size_t>(inputs.rows())) {
    throw Error(ErrorCode::DimensionMismatch, "embedding for " + key.str() + " has the wrong length");
  }
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    inputs(r, column) = static_cast<ModelScalar>(it->second[static_cast<std::size_t>(r)]);
  }
}

}  // namespace detail

/// One instance per sentence; target 1 iff the sentence carries class
/// `class_index` (bare or through any of its subclasses).
inline BinaryDataset build_level1_dataset(const Corpus& corpus, const EmbeddingTable& table, int class_index) {
  Taxonomy::esco().at(class_index);
  const auto n = static_cast<Eigen::Index>(corpus.records.size());
  BinaryDataset ds{class_index, FeatureMatrix(static_cast<Eigen::Index>(table.dim), n), FeatureMatrix(1, n), {}};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& record = corpus.records[static_cast<std::size_t>(i)];
    detail::copy_embedding(table, record.key(), ds.inputs, i);
    ds.targets(0, i) = derive_level1_labels(record).contains(class_index) ? 1.0f : 0.0f;
    ds.keys.push_back(record.key());
  }
  return ds;
}

/// Sentences with at least one T<x>.<y> label; target row y-1 is 1 for
/// every labeled subclass y. Bare T<x> labels alone do not qualify.
inline MultiLabelDataset build_level2_dataset(const Corpus& corpus, const EmbeddingTable& table, int class_index,
                                              const Taxonomy& taxonomy = Taxonomy::esco()) {
  const int outputs = taxonomy.subclass_count(class_index);
  std::vector<const SentenceRecord*> members;
  for (const auto& record : corpus.records) {
    for (const auto& label : record.labels) {
      if (label.class_index == class_index && label.subclass_index) {
        members.push_back(&record);
        break;
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(members.size());
  MultiLabelDataset ds{class_index, FeatureMatrix(static_cast<Eigen::Index>(table.dim), n),
                       FeatureMatrix::Zero(outputs, n), {}};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& record = *members[static_cast<std::size_t>(i)];
    detail::copy_embedding(table, record.key(), ds.inputs, i);
    for (const auto& label : record.labels) {
      if (label.class_index == class_index && label.subclass_index) ds.targets(*label.subclass_index - 1, i) = 1.0f;
    }
    ds.keys.push_back(record.key());
  }
  return ds;
}

/// r = max(1, round(n_neg / n_pos)), rounding halves away from zero.
inline std::size_t clone_factor(std::size_t positives, std::size_t negatives) {
  if (positives == 0) throw Error(ErrorCode::NoPositives, "cannot balance a set without positive instances");
  if (negatives == 0) throw Error(ErrorCode::NoNegatives, "cannot balance a set without negative instances");
  const auto r = std::lround(static_cast<double>(negatives) / static_cast<double>(positives));
  return static_cast<std::size_t>(std::max<long>(1, r));
}

/// Index plan for cloning over `subset` (indices into a binary target row):
/// the subset in order, followed by r - 1 further rounds over its positives.
inline std::vector<std::size_t> cloning_plan(const FeatureMatrix& targets, std::span<const std::size_t> subset) {
  std::vector<std::size_t> positives;
  for (auto i : subset) {
    if (targets(0, static_cast<Eigen::Index>(i)) > 0.5f) positives.push_back(i);
  }
  const auto r = clone_factor(positives.size(), subset.size() - positives.size());
  std::vector<std::size_t> plan(subset.begin(), subset.end());
  plan.reserve(subset.size() + positives.size() * (r - 1));
  for (std::size_t round = 1; round < r; ++round) plan.insert(plan.end(), positives.begin(), positives.end());
  return plan;
}

/// Replicates positive instances until both classes are about equally
/// represented. Negatives and the original order are untouched.
inline BinaryDataset augment_by_cloning(const BinaryDataset& dataset) {
  if (!dataset.is_binary()) throw Error(ErrorCode::InvalidArgument, "cloning applies to binary datasets only");
  std::vector<std::size_t> all(dataset.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto plan = cloning_plan(dataset.targets, all);
  return dataset.gather(plan);
}

// --- model hierarchy -------------------------------------------------------

/// Architecture (output width may be the "no" placeholder) + hyperparameters.
struct ModelConfig {
  nn::ArchitectureSpec architecture;
  nn::Hyperparams hyperparams;
};

struct TrainedModel {
  Net net;
  nn::Hyperparams hyperparams;
};

struct HierarchyModels {
  std::map<int, TrainedModel> level1;
  std::map<int, TrainedModel> level2;
  double decision_threshold = 0.5;
  std::string provider_id;
  std::size_t dim = kEmbeddingDim;
};

struct HierarchyTraining {
  HierarchyModels models;
  std::vector<std::string> warnings;
};

struct HierarchyOptions {
  double decision_threshold = 0.5;
  std::size_t jobs = 1;
};

namespace detail {

inline TrainedModel train_one(const Dataset& data, const ModelConfig& config, std::uint64_t seed) {
  auto spec = config.architecture;
  if (spec.has_placeholder()) spec = spec.with_outputs(data.outputs());
  if (spec.output_dim() != data.outputs()) {
    throw Error(ErrorCode::ArchitectureMismatch, "architecture has " + std::to_string(spec.output_dim()) +
                                                     " outputs, dataset needs " + std::to_string(data.outputs()));
  }
  if (spec.input_dim != data.inputs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "architecture input " + std::to_string(spec.input_dim) +
                                                  " does not match embedding dim " +
                                                  std::to_string(data.inputs.rows()));
  }
  auto hp = config.hyperparams;
  hp.seed = seed;
  TrainedModel model{nn::init_network<ModelScalar>(spec, derive_seed(seed, 0x1417)), hp};
  nn::train(model.net, data.inputs, data.targets, hp);
  return model;
}

}  // namespace detail

/// Trains the six level-1 models on cloned binary sets and a level-2 model
/// for every class with subclass-labeled sentences. Class x uses seed
/// derive_seed(config seed, x) at level 1 and derive_seed(config seed, 10 + x)
/// at level 2.
inline HierarchyTraining train_hierarchy(const Corpus& corpus, const EmbeddingTable& table,
                                         const std::map<int, ModelConfig>& level1,
                                         const std::map<int, ModelConfig>& level2,
                                         const HierarchyOptions& options = {}) {
  struct Job {
    int level;
    int class_index;
  };
  std::vector<Job> jobs;
  HierarchyTraining result;
  std::map<int, MultiLabelDataset> level2_data;
  for (int c = 1; c <= kClassCount; ++c) {
    if (!level1.contains(c)) throw Error(ErrorCode::InvalidArgument, "no level-1 configuration for T" + std::to_string(c));
    jobs.push_back({1, c});
  }
  for (int c = 1; c <= kClassCount; ++c) {
    if (!level2.contains(c)) throw Error(ErrorCode::InvalidArgument, "no level-2 configuration for T" + std::to_string(c));
    auto data = build_level2_dataset(corpus, table, c);
    if (data.size() == 0) {
      result.warnings.push_back("T" + std::to_string(c) + ": no subclass-labeled sentences, level-2 model skipped");
      continue;
    }
    level2_data.emplace(c, std::move(data));
    jobs.push_back({2, c});
  }

  std::vector<TrainedModel> trained(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    const auto [level, c] = jobs[i];
    try {
      if (level == 1) {
        const auto& config = level1.at(c);
        const auto data = augment_by_cloning(build_level1_dataset(corpus, table, c));
        trained[i] = detail::train_one(data, config, derive_seed(config.hyperparams.seed, static_cast<std::uint64_t>(c)));
      } else {
        const auto& config = level2.at(c);
        trained[i] = detail::train_one(level2_data.at(c), config,
                                       derive_seed(config.hyperparams.seed, static_cast<std::uint64_t>(10 + c)));
      }
    } catch (const Error& e) {
      e.rethrow_with_context("level " + std::to_string(level) + " class T" + std::to_string(c));
    }
  });

  auto& models = result.models;
  models.decision_threshold = options.decision_threshold;
  models.provider_id = table.provider_id;
  models.dim = table.dim;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& target = jobs[i].level == 1 ? models.level1 : models.level2;
    target.emplace(jobs[i].class_index, std::move(trained[i]));
  }
  return result;
}

struct ClassPrediction {
  double probability = 0.0;
  std::vector<double> subclass_probabilities;  // filled only when the gate opened
};

struct PredictedLabels {
  std::map<int, ClassPrediction> classes;
  std::set<SkillLabel> labels;
};

/// Runs all level-1 models; every class at or above the threshold consults
/// its level-2 model and reports the subclasses at or above the threshold,
/// or the bare class label when none qualifies.
inline PredictedLabels predict_sentence(const HierarchyModels& models, std::span<const double> vector) {
  if (vector.size() != models.dim) {
    throw Error(ErrorCode::DimensionMismatch, "vector has " + std::to_string(vector.size()) + " entries, models expect " +
                                                  std::to_string(models.dim));
  }
  std::vector<ModelScalar> x(vector.begin(), vector.end());
  const std::span<const ModelScalar> input(x);
  PredictedLabels out;
  for (const auto& [c, model] : models.level1) {
    ClassPrediction prediction;
    prediction.probability = static_cast<double>(nn::predict(model.net, input)(0));
    if (prediction.probability >= models.decision_threshold) {
      bool any_subclass = false;
      if (const auto it = models.level2.find(c); it != models.level2.end()) {
        const auto probs = nn::predict(it->second.net, input);
        for (Eigen::Index s = 0; s < probs.size(); ++s) {
          const double p = static_cast<double>(probs(s));
          prediction.subclass_probabilities.push_back(p);
          if (p >= models.decision_threshold) {
            out.labels.insert(SkillLabel{c, static_cast<int>(s) + 1});
            any_subclass = true;
          }
        }
      }
      if (!any_subclass) out.labels.insert(SkillLabel{c, std::nullopt});
    }
    out.classes.emplace(c, std::move(prediction));
  }
  return out;
}

// --- bundle directory ------------------------------------------------------
//
//   level1_T<x>.json, level2_T<x>.json   model files
//   manifest.json                        taxonomy, threshold, provider, dim

inline std::map<std::string, std::string> hierarchy_bundle_files(const HierarchyModels& models) {
  std::map<std::string, std::string> files;
  nlohmann::json taxonomy = nlohmann::json::array();
  for (const auto& cls : Taxonomy::esco().classes()) {
    taxonomy.push_back({{"class", "T" + std::to_string(cls.id)},
                        {"name", std::string(cls.name)},
                        {"subclasses", cls.subclass_count}});
  }
  nlohmann::json l1 = nlohmann::json::array();
  nlohmann::json l2 = nlohmann::json::array();
  for (const auto& [c, model] : models.level1) {
    const auto name = "level1_T" + std::to_string(c) + ".json";
    files[name] = nn::save_model(model.net, model.hyperparams, {{"level", 1}, {"class", "T" + std::to_string(c)}});
    l1.push_back(name);
  }
  for (const auto& [c, model] : models.level2) {
    const auto name = "level2_T" + std::to_string(c) + ".json";
    files[name] = nn::save_model(model.net, model.hyperparams, {{"level", 2}, {"class", "T" + std::to_string(c)}});
    l2.push_back(name);
  }
  const nlohmann::json manifest{{"taxonomy", taxonomy},
                                {"threshold", models.decision_threshold},
                                {"provider", models.provider_id},
                                {"dim", models.dim},
                                {"level1", l1},
                                {"level2", l2}};
  files["manifest.json"] = manifest.dump(2) + "\n";
  return files;
}

inline void save_hierarchy(const HierarchyModels& models, const std::filesystem::path& dir) {
  for (const auto& [name, content] : hierarchy_bundle_files(models)) io::write_file_atomic(dir / name, content);
}

inline HierarchyModels load_hierarchy(const std::filesystem::path& dir) {
  HierarchyModels models;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_file(dir / "manifest.json"));
    models.decision_threshold = manifest.at("threshold").get<double>();
    models.provider_id = manifest.at("provider").get<std::string>();
    models.dim = manifest.at("dim").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, "manifest.json: " + std::string(e.what()));
  }
  auto load_level = [&](const char* key, std::map<int, TrainedModel>& into, int level) {
    for (const auto& name_json : manifest.value(key, nlohmann::json::array())) {
      const auto name = name_json.get<std::string>();
      auto file = nn::load_model<ModelScalar>(io::read_file(dir / name));
      const int c = parse_class_id(file.metadata.value("class", std::string{}));
      if (file.net.input_dim() != static_cast<int>(models.dim)) {
        throw Error(ErrorCode::ArchitectureMismatch, name + " input width differs from the manifest dim");
      }
      const int expected = level == 1 ? 1 : Taxonomy::esco().subclass_count(c);
      if (file.net.output_dim() != expected) {
        throw Error(ErrorCode::ArchitectureMismatch, name + " must have " + std::to_string(expected) + " outputs");
      }
      into.emplace(c, TrainedModel{std::move(file.net), file.hyperparams});
    }
  };
  load_level("level1", models.level1, 1);
  load_level("level2", models.level2, 2);
  return models;
}

}  // namespace skillclf
