#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace botwatch::learn {

// Rows are accounts, labels are bot = 1 / human = 0.
struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_features() const { return columns.size(); }

  // Column-subset copy used for per-group evaluation runs.
  FeatureMatrix select(const std::vector<std::size_t>& column_indices) const;
};

struct MetricSet {
  double accuracy = 0.0;  // all four as percents
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Positive class is bot (1). Zero denominators yield zero scores.
MetricSet metrics(const std::vector<int>& predictions,
                  const std::vector<int>& labels);

// κ as a percent from a 2×2 contingency table (annotator A rows, B columns).
// Degenerate chance agreement of 1 yields 100 for perfect observed
// agreement and 0 otherwise.
double cohens_kappa(const std::array<std::array<std::int64_t, 2>, 2>& table);

// --- classifiers -----------------------------------------------------------

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const std::vector<std::vector<double>>& rows,
                   const std::vector<int>& labels) = 0;
  virtual int predict(const std::vector<double>& row) const = 0;
  // Normalized to sum 1 when any split contributed; all zeros otherwise.
  virtual std::vector<double> importances() const = 0;
};

// Kinds: decision_tree, random_forest_gini, random_forest_entropy, adaboost.
// Unknown kind → std::invalid_argument. Hyperparameters not in `params`
// fall back to per-kind defaults (max_depth 0 = unbounded, n_trees 100,
// n_rounds 50).
std::unique_ptr<Classifier> make_classifier(
    const std::string& kind, const std::map<std::string, double>& params,
    std::uint64_t seed);

// Extension hook: register an extra kind usable in ModelSpec.
using ClassifierFactory = std::unique_ptr<Classifier> (*)(
    const std::map<std::string, double>& params, std::uint64_t seed);
void register_classifier(const std::string& kind, ClassifierFactory factory);
std::vector<std::string> classifier_kinds();

struct ModelSpec {
  std::string kind;
  std::map<std::string, std::vector<double>> grid;  // non-empty values each
  std::uint64_t seed = 0;
};

// Grids covering the paper's model set; keys are ModelSpec kinds.
std::vector<ModelSpec> default_model_specs(std::uint64_t seed);

struct FitResult {
  std::vector<int> predictions;
  std::vector<double> importances;
};

// Fits spec.kind with the FIRST value of every grid entry and predicts the
// test rows.
FitResult fit_predict(const ModelSpec& spec, const FeatureMatrix& train,
                      const FeatureMatrix& test);

// Stratified fold ids in [0, k): per class, a seeded shuffle dealt
// round-robin. Throws when any class has fewer than k members.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k,
                                  std::uint64_t seed);

// Instrumentation for tests: every train/test row-index pair that nested_cv
// evaluates, outer and inner.
struct CvTrace {
  struct Split {
    std::string kind;
    int outer_fold = -1;
    int inner_fold = -1;  // -1 for the outer refit evaluation
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
  };
  std::vector<Split> splits;
};

struct ModelReport {
  std::string kind;
  MetricSet means;  // over the outer folds
  std::vector<double> importances;
  std::vector<std::map<std::string, double>> chosen_params;  // per outer fold
};

struct EvalReport {
  std::vector<std::string> columns;
  std::vector<ModelReport> models;
};

// Grid search by inner-fold mean F1 inside each outer training split,
// refit on the split, score the held-out fold; metrics are means over the
// outer folds and importances are averaged then renormalized.
EvalReport nested_cv(const FeatureMatrix& matrix,
                     const std::vector<ModelSpec>& specs, std::uint64_t seed,
                     int outer_folds = 5, int inner_folds = 5,
                     CvTrace* trace = nullptr);

struct DowdallEntry {
  std::size_t feature = 0;
  double points = 0.0;
  int rank = 0;
};

// Dowdall (reciprocal-rank Borda) fusion of per-model importance vectors;
// result ordered best first. Ties in points break by feature index.
std::vector<DowdallEntry> dowdall_rank(
    const std::vector<std::vector<double>>& importances);

}  // namespace botwatch::learn
