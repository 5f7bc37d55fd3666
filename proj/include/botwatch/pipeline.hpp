#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "botwatch/behavior.hpp"
#include "botwatch/cdfa.hpp"
#include "botwatch/chain.hpp"
#include "botwatch/corpus.hpp"
#include "botwatch/learn.hpp"
#include "botwatch/temporal.hpp"
#include "botwatch/textbase.hpp"
#include "nlohmann/json.hpp"

namespace botwatch::pipeline {

// Feature-group tags accepted in configs and CLI flags.
inline constexpr const char* kGroupCdfa = "cdfa";
inline constexpr const char* kGroupSantia = "santia";
inline constexpr const char* kGroupChu = "chu";
inline constexpr const char* kGroupChain = "chain";
inline constexpr const char* kGroupBaselines = "baselines";

// Ordered column names per group (paper table order).
const std::vector<std::string>& cdfa_columns();
const std::vector<std::string>& santia_columns();
const std::vector<std::string>& chu_columns();
const std::vector<std::string>& chain_columns();
const std::vector<std::string>& baseline_columns();

// Columns for an ordered, deduplicated group list; throws on unknown names.
std::vector<std::string> columns_for_groups(
    const std::vector<std::string>& groups);

struct PipelineConfig {
  std::uint64_t seed = 0;
  int min_activity = 40;
  std::vector<std::string> groups = {kGroupCdfa, kGroupSantia, kGroupChu,
                                     kGroupChain};
  unsigned threads = 0;  // 0 = hardware concurrency

  cdfa::DpgmmParams dpgmm;
  behavior::InnovationParams innovation;
  temporal::TemporalParams temporal;
  chain::ChainParams chain;
  textbase::TextbaseParams textbase;

  nlohmann::ordered_json echo() const;
};

struct ExtractResult {
  learn::FeatureMatrix matrix;
  std::vector<std::string> account_names;  // row order (sorted by name)
  std::size_t levenshtein_sampled_out = 0;
  std::size_t skipped_response_times = 0;
};

// One row per labeled account, sorted by account name; columns follow
// config.groups. Unlabeled accounts are ignored. Deterministic for a fixed
// seed regardless of thread count.
ExtractResult extract_matrix(const corpus::LabeledCorpus& corpus,
                             const PipelineConfig& config);

// CSV with a header of feature names plus a final "label" column; values in
// shortest round-trip form so write→read→write is byte-stable.
void write_matrix_csv(const learn::FeatureMatrix& matrix,
                      const std::string& path);
learn::FeatureMatrix read_matrix_csv(const std::string& path);

struct EvalConfig {
  std::uint64_t seed = 0;
  // Column-set tokens: group names, "all" (the four paper groups),
  // "baseline_fwc" / "baseline_tfidf" / "baseline_levenshtein" /
  // "baselines", and "+"-joined unions such as "cdfa+santia+chu".
  std::vector<std::string> combos = {"cdfa",  "santia",           "chu",
                                     "chain", "cdfa+santia+chu", "all"};
  std::vector<learn::ModelSpec> specs;  // empty → default_model_specs(seed)
  int outer_folds = 5;
  int inner_folds = 5;

  nlohmann::ordered_json echo() const;
};

// Column indices into `columns` for a combo token; throws when the matrix
// lacks a required column.
std::vector<std::size_t> resolve_combo(const std::string& token,
                                       const std::vector<std::string>& columns);

// Nested-CV evaluation of every combo; returns the full report document
// ("schema": "botwatch-eval-report/1") with config echo, per-model metrics
// and importances, and a per-combo Dowdall ranking.
nlohmann::ordered_json run_eval(const learn::FeatureMatrix& matrix,
                                const EvalConfig& config);

// File-name slug for a feature column: lowercase, runs of non-alphanumerics
// collapsed to single underscores ("FF ratio" → "ff_ratio").
std::string column_slug(const std::string& column);

// One "value,label" CSV per matrix column, written into `directory` as
// <slug>.csv. Returns the file names in column order.
std::vector<std::string> write_histograms(const learn::FeatureMatrix& matrix,
                                          const std::string& directory);

}  // namespace botwatch::pipeline
