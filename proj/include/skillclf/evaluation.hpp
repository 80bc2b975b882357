#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skillclf/error.hpp"
#include "skillclf/hierarchy.hpp"
#include "skillclf/nn/architecture.hpp"
#include "skillclf/nn/trainer.hpp"
#include "skillclf/parallel.hpp"
#include "skillclf/random.hpp"
#include "skillclf/taxonomy.hpp"

namespace skillclf {

// --- folds -----------------------------------------------------------------

/// Shuffles 0..n-1 with Rng(derive_seed(seed, 0xf01d)) and cuts the
/// permutation at floor(f * n / k). Each fold is returned sorted.
inline std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2");
  if (n < k) {
    throw Error(ErrorCode::TooFewInstances, std::to_string(n) + " instances cannot fill " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0xf01d));
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    const auto begin = order.begin() + static_cast<std::ptrdiff_t>(f * n / k);
    const auto end = order.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / k);
    folds[f].assign(begin, end);
    std::sort(folds[f].begin(), folds[f].end());
  }
  return folds;
}

// --- metrics ---------------------------------------------------------------

/// Fraction of instances where (p >= threshold) agrees with the target.
inline double accuracy_binary(std::span<const double> probabilities, std::span<const int> targets, double threshold) {
  if (probabilities.size() != targets.size() || probabilities.empty()) {
    throw Error(ErrorCode::LengthMismatch, "probabilities and targets must have equal, non-zero length");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    correct += ((probabilities[i] >= threshold) == (targets[i] != 0)) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(probabilities.size());
}

/// Mean over instances of the fraction of correctly thresholded outputs.
inline double accuracy_multilabel(std::span<const std::vector<double>> probabilities,
                                  std::span<const std::vector<int>> targets, double threshold) {
  if (probabilities.size() != targets.size() || probabilities.empty()) {
    throw Error(ErrorCode::LengthMismatch, "prediction and target counts differ or are zero");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const auto& p = probabilities[i];
    const auto& y = targets[i];
    if (p.size() != y.size() || p.empty()) {
      throw Error(ErrorCode::LengthMismatch, "instance " + std::to_string(i) + " has mismatched output lengths");
    }
    std::size_t correct = 0;
    for (std::size_t j = 0; j < p.size(); ++j) correct += ((p[j] >= threshold) == (y[j] != 0)) ? 1 : 0;
    sum += static_cast<double>(correct) / static_cast<double>(p.size());
  }
  return sum / static_cast<double>(probabilities.size());
}

/// Same metric on column-per-instance matrices; equals accuracy_binary for
/// a single output row.
inline double accuracy_columns(const FeatureMatrix& probabilities, const FeatureMatrix& targets, double threshold) {
  if (probabilities.rows() != targets.rows() || probabilities.cols() != targets.cols() || probabilities.size() == 0) {
    throw Error(ErrorCode::LengthMismatch, "prediction and target shapes differ or are empty");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probabilities.cols(); ++i) {
    std::size_t correct = 0;
    for (Eigen::Index j = 0; j < probabilities.rows(); ++j) {
      const bool predicted = static_cast<double>(probabilities(j, i)) >= threshold;
      correct += (predicted == (targets(j, i) > 0.5f)) ? 1 : 0;
    }
    sum += static_cast<double>(correct) / static_cast<double>(probabilities.rows());
  }
  return sum / static_cast<double>(probabilities.cols());
}

/// a_m / a_e - 1.
inline double relative_difference(double multi_language, double english) {
  if (english == 0.0) throw Error(ErrorCode::DivisionByZero, "reference accuracy is zero");
  return multi_language / english - 1.0;
}

// --- trial configurations --------------------------------------------------

struct TrialConfig {
  int trial_id = 1;
  nn::ArchitectureSpec architecture;
  nn::Hyperparams hyperparams;
  std::string motivation;
};

/// Reads a JSON grid: [{"trial", "architecture", "epochs", "learning_rate",
/// "lambda", "optimizer", "batch_size"?, "motivation"}, ...].
inline std::vector<TrialConfig> parse_grid(std::string_view text) {
  std::vector<TrialConfig> grid;
  std::set<int> ids;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array() || doc.empty()) throw Error(ErrorCode::BadFormat, "grid must be a non-empty JSON array");
    for (const auto& item : doc) {
      TrialConfig trial;
      trial.trial_id = item.at("trial").get<int>();
      trial.architecture = nn::parse_architecture_template(item.at("architecture").get<std::string>());
      trial.hyperparams.epochs = item.at("epochs").get<int>();
      trial.hyperparams.learning_rate = item.at("learning_rate").get<double>();
      trial.hyperparams.l2 = item.value("lambda", 0.0);
      trial.hyperparams.optimizer = nn::parse_optimizer(item.at("optimizer").get<std::string>());
      trial.hyperparams.batch_size = item.value("batch_size", 32);
      trial.motivation = item.value("motivation", std::string{});
      trial.hyperparams.validate();
      if (trial.trial_id <= 0 || !ids.insert(trial.trial_id).second) {
        throw Error(ErrorCode::BadFormat, "trial ids must be positive and unique (" + std::to_string(trial.trial_id) + ")");
      }
      grid.push_back(std::move(trial));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("grid: ") + e.what());
  }
  return grid;
}

inline nlohmann::json trial_to_json(const TrialConfig& t) {
  return {{"trial", t.trial_id},
          {"architecture", nn::format_architecture(t.architecture)},
          {"epochs", t.hyperparams.epochs},
          {"learning_rate", t.hyperparams.learning_rate},
          {"lambda", t.hyperparams.l2},
          {"optimizer", std::string(nn::to_string(t.hyperparams.optimizer))},
          {"batch_size", t.hyperparams.batch_size},
          {"motivation", t.motivation}};
}

// --- cross-validation ------------------------------------------------------

enum class AugmentMode {
  Off,
  AfterSplit,   // clone positives of each training portion only
  BeforeSplit,  // clone the whole set, then split (clones can reach test folds)
};

struct CvOptions {
  std::size_t k = 5;
  std::size_t repeats = 5;
  std::uint64_t base_seed = 0;
  AugmentMode augment = AugmentMode::AfterSplit;
  double threshold = 0.5;
  std::size_t jobs = 1;
};

/// Indices into the source dataset; `train` may repeat positives (clones).
struct FoldPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Train/test index plans for every fold of one repeat. Cloning only applies
/// to binary targets.
inline std::vector<FoldPlan> plan_folds(const FeatureMatrix& targets, std::size_t k, std::uint64_t seed,
                                        AugmentMode mode) {
  const auto n = static_cast<std::size_t>(targets.cols());
  const bool binary = targets.rows() == 1;
  if (!binary) mode = AugmentMode::Off;

  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  if (mode == AugmentMode::BeforeSplit) pool = cloning_plan(targets, pool);

  const auto folds = kfold_split(pool.size(), k, seed);
  std::vector<FoldPlan> plans(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<char> in_test(pool.size(), 0);
    for (auto pos : folds[f]) {
      in_test[pos] = 1;
      plans[f].test.push_back(pool[pos]);
    }
    for (std::size_t pos = 0; pos < pool.size(); ++pos) {
      if (!in_test[pos]) plans[f].train.push_back(pool[pos]);
    }
    if (mode == AugmentMode::AfterSplit) plans[f].train = cloning_plan(targets, plans[f].train);
  }
  return plans;
}

struct CvResult {
  std::vector<std::vector<double>> accuracies;  // [repeat][fold]
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline CvResult summarize_cv(std::vector<std::vector<double>> accuracies) {
  CvResult result{std::move(accuracies), 0.0, INFINITY, -INFINITY};
  std::size_t count = 0;
  for (const auto& row : result.accuracies) {
    for (double a : row) {
      result.mean += a;
      result.min = std::min(result.min, a);
      result.max = std::max(result.max, a);
      ++count;
    }
  }
  if (count > 0) result.mean /= static_cast<double>(count);
  return result;
}

/// Concrete architecture for a dataset: "no" becomes the dataset's output count.
inline nn::ArchitectureSpec resolve_architecture(const nn::ArchitectureSpec& spec, const Dataset& data) {
  auto resolved = spec.has_placeholder() ? spec.with_outputs(data.outputs()) : spec;
  if (resolved.output_dim() != data.outputs()) {
    throw Error(ErrorCode::ArchitectureMismatch, "architecture has " + std::to_string(resolved.output_dim()) +
                                                     " outputs, class T" + std::to_string(data.class_index) +
                                                     " needs " + std::to_string(data.outputs()));
  }
  if (resolved.input_dim != data.inputs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "architecture input " + std::to_string(resolved.input_dim) +
                                                  " does not match feature dim " + std::to_string(data.inputs.rows()));
  }
  return resolved;
}

/// Trains on `plan.train` and returns accuracy on `plan.test`. The network
/// is initialized and shuffled from `seed`.
inline double run_fold(const Dataset& data, const nn::ArchitectureSpec& spec, nn::Hyperparams hp,
                       const FoldPlan& plan, std::uint64_t seed, double threshold) {
  const auto train_set = data.gather(plan.train);
  const auto test_set = data.gather(plan.test);
  hp.seed = seed;
  auto net = nn::init_network<ModelScalar>(spec, derive_seed(seed, 0x1417));
  nn::train(net, train_set.inputs, train_set.targets, hp);
  nn::ForwardCache<ModelScalar> cache;
  nn::forward_batch(net, test_set.inputs, cache);
  return accuracy_columns(cache.output(), test_set.targets, threshold);
}

namespace detail {

struct CvJob {
  std::size_t cell;
  std::size_t repeat;
  std::size_t fold;
};

/// Seed for repeat r is base_seed + r; fold f of that repeat trains from
/// derive_seed(base_seed + r, f).
inline void run_cv_jobs(std::span<const Dataset* const> datasets, std::span<const nn::ArchitectureSpec> specs,
                        std::span<const nn::Hyperparams> hps, const CvOptions& options,
                        std::vector<std::vector<std::vector<double>>>& accuracies,
                        std::vector<std::optional<Error>>& errors) {
  if (options.repeats < 1) throw Error(ErrorCode::InvalidArgument, "repeats must be at least 1");
  const std::size_t cells = datasets.size();
  accuracies.assign(cells, std::vector<std::vector<double>>(options.repeats, std::vector<double>(options.k, 0.0)));
  errors.assign(cells, std::nullopt);

  // plans[cell][repeat]
  std::vector<std::vector<std::vector<FoldPlan>>> plans(cells);
  std::vector<CvJob> jobs;
  for (std::size_t c = 0; c < cells; ++c) {
    try {
      if (datasets[c]->size() == 0) throw Error(ErrorCode::EmptyDataset, "no instances");
      for (std::size_t r = 0; r < options.repeats; ++r) {
        plans[c].push_back(plan_folds(datasets[c]->targets, options.k, options.base_seed + r, options.augment));
      }
      for (std::size_t r = 0; r < options.repeats; ++r) {
        for (std::size_t f = 0; f < options.k; ++f) jobs.push_back({c, r, f});
      }
    } catch (const Error& e) {
      errors[c] = e;
    }
  }

  std::vector<std::optional<Error>> job_errors(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    const auto& job = jobs[i];
    try {
      const std::uint64_t repeat_seed = options.base_seed + job.repeat;
      accuracies[job.cell][job.repeat][job.fold] =
          run_fold(*datasets[job.cell], specs[job.cell], hps[job.cell], plans[job.cell][job.repeat][job.fold],
                   derive_seed(repeat_seed, job.fold), options.threshold);
    } catch (const Error& e) {
      job_errors[i] = e.with_context("repeat " + std::to_string(job.repeat + 1) + " fold " +
                                     std::to_string(job.fold + 1));
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (job_errors[i] && !errors[jobs[i].cell]) errors[jobs[i].cell] = job_errors[i];
  }
}

}  // namespace detail

/// k-fold cross-validation repeated `options.repeats` times.
inline CvResult run_cv(const Dataset& data, const TrialConfig& config, const CvOptions& options) {
  const auto spec = resolve_architecture(config.architecture, data);
  config.hyperparams.validate();
  const Dataset* ptr = &data;
  std::vector<std::vector<std::vector<double>>> accuracies;
  std::vector<std::optional<Error>> errors;
  detail::run_cv_jobs(std::span<const Dataset* const>(&ptr, 1), std::span<const nn::ArchitectureSpec>(&spec, 1),
                      std::span<const nn::Hyperparams>(&config.hyperparams, 1), options, accuracies, errors);
  if (errors[0]) errors[0]->rethrow_with_context("trial " + std::to_string(config.trial_id));
  return summarize_cv(std::move(accuracies[0]));
}

// --- result matrix and report ----------------------------------------------

struct ColumnMarking {
  std::optional<int> best;
  std::set<int> near_best;
};

/// Trials x classes of mean accuracies in percent. Absent cells failed.
struct ResultMatrix {
  std::vector<int> trials;
  std::vector<int> classes;
  std::map<std::pair<int, int>, double> cells;  // (trial, class) -> percent

  std::optional<double> at(int trial, int class_index) const {
    const auto it = cells.find({trial, class_index});
    if (it == cells.end()) return std::nullopt;
    return it->second;
  }
};

inline constexpr long kNearBestHundredths = 20;  // 0.2 percentage points

/// Best = column maximum (lowest trial id among ties); near-best = every
/// other cell within 0.2 percentage points of it. Values are compared at
/// the 2-decimal precision they are reported with.
inline ColumnMarking mark_column(const ResultMatrix& matrix, int class_index) {
  ColumnMarking marking;
  std::optional<long> best_value;
  for (int trial : matrix.trials) {
    const auto v = matrix.at(trial, class_index);
    if (!v) continue;
    const long hundredths = std::lround(*v * 100.0);
    if (!best_value || hundredths > *best_value) {
      best_value = hundredths;
      marking.best = trial;
    }
  }
  if (!best_value) return marking;
  for (int trial : matrix.trials) {
    const auto v = matrix.at(trial, class_index);
    if (!v || trial == *marking.best) continue;
    if (*best_value - std::lround(*v * 100.0) <= kNearBestHundredths) marking.near_best.insert(trial);
  }
  return marking;
}

inline std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

/// Markdown table; best cells in **bold**, near-best in *italics*, failed
/// cells as an em dash.
inline std::string render_report(const ResultMatrix& matrix) {
  std::map<int, ColumnMarking> marks;
  for (int c : matrix.classes) marks[c] = mark_column(matrix, c);
  std::string out = "| Trial |";
  std::string rule = "|---:|";
  for (int c : matrix.classes) {
    out += " T" + std::to_string(c) + " |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  for (int trial : matrix.trials) {
    out += "| " + std::to_string(trial) + " |";
    for (int c : matrix.classes) {
      const auto v = matrix.at(trial, c);
      std::string cell = v ? format_percent(*v) : "\xE2\x80\x94";
      if (v && marks[c].best == trial) {
        cell = "**" + cell + "**";
      } else if (v && marks[c].near_best.contains(trial)) {
        cell = "*" + cell + "*";
      }
      out += " " + cell + " |";
    }
    out += "\n";
  }
  return out;
}

// --- grid ------------------------------------------------------------------

struct GridCell {
  int trial = 0;
  int class_index = 0;
  std::optional<CvResult> result;
  std::string error;
};

struct GridResult {
  ResultMatrix matrix;
  std::vector<GridCell> cells;  // trial-major, classes ascending
};

/// Cross-validates every (trial, class) pair. A failing cell is recorded
/// with its error and left out of the matrix.
inline GridResult run_grid(const std::map<int, Dataset>& datasets, const std::vector<TrialConfig>& grid,
                           const CvOptions& options) {
  if (grid.empty() || datasets.empty()) throw Error(ErrorCode::InvalidArgument, "grid and datasets must be non-empty");
  GridResult out;
  std::vector<const Dataset*> cell_data;
  std::vector<nn::ArchitectureSpec> specs;
  std::vector<nn::Hyperparams> hps;
  std::vector<std::optional<std::string>> setup_errors;
  for (const auto& trial : grid) {
    out.matrix.trials.push_back(trial.trial_id);
    for (const auto& [c, data] : datasets) {
      out.cells.push_back({trial.trial_id, c, std::nullopt, {}});
      cell_data.push_back(&data);
      hps.push_back(trial.hyperparams);
      try {
        specs.push_back(resolve_architecture(trial.architecture, data));
        setup_errors.emplace_back();
      } catch (const Error& e) {
        specs.push_back(trial.architecture);
        setup_errors.emplace_back(e.what());
      }
    }
  }
  for (const auto& [c, data] : datasets) out.matrix.classes.push_back(c);

  // Cells that failed during setup are run against nothing.
  std::vector<std::size_t> runnable;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    if (!setup_errors[i]) runnable.push_back(i);
  }
  std::vector<const Dataset*> run_data;
  std::vector<nn::ArchitectureSpec> run_specs;
  std::vector<nn::Hyperparams> run_hps;
  for (auto i : runnable) {
    run_data.push_back(cell_data[i]);
    run_specs.push_back(specs[i]);
    run_hps.push_back(hps[i]);
  }
  std::vector<std::vector<std::vector<double>>> accuracies;
  std::vector<std::optional<Error>> errors;
  detail::run_cv_jobs(run_data, run_specs, run_hps, options, accuracies, errors);

  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    if (setup_errors[i]) out.cells[i].error = *setup_errors[i];
  }
  for (std::size_t j = 0; j < runnable.size(); ++j) {
    auto& cell = out.cells[runnable[j]];
    if (errors[j]) {
      cell.error = errors[j]->what();
      continue;
    }
    cell.result = summarize_cv(std::move(accuracies[j]));
    out.matrix.cells[{cell.trial, cell.class_index}] = 100.0 * cell.result->mean;
  }
  return out;
}

// --- result files ----------------------------------------------------------

inline std::string_view to_string(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::Off: return "off";
    case AugmentMode::AfterSplit: return "after-split";
    case AugmentMode::BeforeSplit: return "before-split";
  }
  return "?";
}

inline nlohmann::json grid_result_to_json(const GridResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json j{{"trial", cell.trial}, {"class", "T" + std::to_string(cell.class_index)}};
    if (cell.result) {
      j["accuracies"] = cell.result->accuracies;
      j["mean"] = cell.result->mean;
      j["min"] = cell.result->min;
      j["max"] = cell.result->max;
    } else {
      j["error"] = cell.error;
    }
    cells.push_back(std::move(j));
  }
  return {{"trials", result.matrix.trials}, {"cells", std::move(cells)}};
}

/// Rebuilds the percentage matrix from a result file's "trials"/"cells".
inline ResultMatrix result_matrix_from_json(const nlohmann::json& doc) {
  ResultMatrix matrix;
  try {
    std::set<int> classes;
    matrix.trials = doc.at("trials").get<std::vector<int>>();
    for (const auto& cell : doc.at("cells")) {
      const int c = parse_class_id(cell.at("class").get<std::string>());
      classes.insert(c);
      if (cell.contains("mean")) matrix.cells[{cell.at("trial").get<int>(), c}] = 100.0 * cell.at("mean").get<double>();
    }
    matrix.classes.assign(classes.begin(), classes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("result file: ") + e.what());
  }
  return matrix;
}

}  // namespace skillclf
