#include "botwatch/learn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "botwatch/util.hpp"

namespace botwatch::learn {
namespace {

FeatureMatrix take_rows(const FeatureMatrix& matrix,
                        const std::vector<std::size_t>& row_ids) {
  FeatureMatrix out;
  out.columns = matrix.columns;
  out.rows.reserve(row_ids.size());
  out.labels.reserve(row_ids.size());
  for (auto id : row_ids) {
    out.rows.push_back(matrix.rows[id]);
    out.labels.push_back(matrix.labels[id]);
  }
  return out;
}

// Cartesian product of the grid in key order, last key varying fastest;
// combo 0 is "first value of every parameter".
std::vector<std::map<std::string, double>> grid_combos(
    const std::map<std::string, std::vector<double>>& grid) {
  for (const auto& [name, values] : grid) {
    if (values.empty()) {
      throw std::invalid_argument("empty grid for parameter \"" + name + "\"");
    }
  }
  std::vector<std::map<std::string, double>> combos;
  combos.emplace_back();
  for (const auto& [name, values] : grid) {
    std::vector<std::map<std::string, double>> next;
    next.reserve(combos.size() * values.size());
    for (const auto& combo : combos) {
      for (double value : values) {
        auto extended = combo;
        extended[name] = value;
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }
  return combos;
}

}  // namespace

FeatureMatrix FeatureMatrix::select(
    const std::vector<std::size_t>& column_indices) const {
  FeatureMatrix out;
  out.labels = labels;
  out.columns.reserve(column_indices.size());
  for (auto c : column_indices) out.columns.push_back(columns[c]);
  out.rows.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<double> kept;
    kept.reserve(column_indices.size());
    for (auto c : column_indices) kept.push_back(row[c]);
    out.rows.push_back(std::move(kept));
  }
  return out;
}

MetricSet metrics(const std::vector<int>& predictions,
                  const std::vector<int>& labels) {
  if (predictions.size() != labels.size() || predictions.empty()) {
    throw std::invalid_argument("predictions and labels must align");
  }
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool predicted_bot = predictions[i] == 1;
    const bool is_bot = labels[i] == 1;
    tp += predicted_bot && is_bot;
    fp += predicted_bot && !is_bot;
    fn += !predicted_bot && is_bot;
    tn += !predicted_bot && !is_bot;
  }
  MetricSet m;
  const auto total = static_cast<double>(tp + fp + fn + tn);
  m.accuracy = 100.0 * static_cast<double>(tp + tn) / total;
  m.precision = tp + fp > 0
                    ? 100.0 * static_cast<double>(tp) /
                          static_cast<double>(tp + fp)
                    : 0.0;
  m.recall = tp + fn > 0 ? 100.0 * static_cast<double>(tp) /
                               static_cast<double>(tp + fn)
                         : 0.0;
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

double cohens_kappa(const std::array<std::array<std::int64_t, 2>, 2>& table) {
  const std::int64_t total =
      table[0][0] + table[0][1] + table[1][0] + table[1][1];
  if (total <= 0) throw std::invalid_argument("empty contingency table");
  const auto n = static_cast<double>(total);
  const double po =
      (static_cast<double>(table[0][0]) + static_cast<double>(table[1][1])) / n;
  const double row0 = static_cast<double>(table[0][0] + table[0][1]);
  const double row1 = static_cast<double>(table[1][0] + table[1][1]);
  const double col0 = static_cast<double>(table[0][0] + table[1][0]);
  const double col1 = static_cast<double>(table[0][1] + table[1][1]);
  const double pe = (row0 * col0 + row1 * col1) / (n * n);
  if (pe >= 1.0) return po >= 1.0 ? 100.0 : 0.0;
  return 100.0 * (po - pe) / (1.0 - pe);
}

FitResult fit_predict(const ModelSpec& spec, const FeatureMatrix& train,
                      const FeatureMatrix& test) {
  if (train.columns != test.columns) {
    throw std::invalid_argument("train/test column mismatch");
  }
  std::map<std::string, double> params;
  for (const auto& [name, values] : spec.grid) {
    if (values.empty()) {
      throw std::invalid_argument("empty grid for parameter \"" + name + "\"");
    }
    params[name] = values.front();
  }
  auto model = make_classifier(spec.kind, params, spec.seed);
  model->fit(train.rows, train.labels);
  FitResult result;
  result.predictions.reserve(test.rows.size());
  for (const auto& row : test.rows) {
    result.predictions.push_back(model->predict(row));
  }
  result.importances = model->importances();
  return result;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int k,
                                  std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[labels[i]].push_back(i);
  }
  for (const auto& [label, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(k)) {
      throw std::invalid_argument(
          "class " + std::to_string(label) + " has " +
          std::to_string(members.size()) + " rows; need at least " +
          std::to_string(k) + " for stratified folds");
    }
  }
  std::vector<int> folds(labels.size(), -1);
  Rng rng(mix_seed(seed, "stratified-folds"));
  for (auto& [label, members] : by_class) {
    (void)label;
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) {
      folds[members[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
  }
  return folds;
}

EvalReport nested_cv(const FeatureMatrix& matrix,
                     const std::vector<ModelSpec>& specs, std::uint64_t seed,
                     int outer_folds, int inner_folds, CvTrace* trace) {
  if (matrix.n_rows() < 10) {
    throw std::invalid_argument("need at least 10 rows for nested CV");
  }
  EvalReport report;
  report.columns = matrix.columns;
  if (specs.empty()) return report;

  const std::vector<int> outer =
      stratified_folds(matrix.labels, outer_folds, mix_seed(seed, "outer"));

  for (const auto& spec : specs) {
    ModelReport model_report;
    model_report.kind = spec.kind;
    const auto combos = grid_combos(spec.grid);

    MetricSet sums;
    std::vector<double> importance_sum(matrix.n_features(), 0.0);

    for (int f = 0; f < outer_folds; ++f) {
      std::vector<std::size_t> train_rows;
      std::vector<std::size_t> test_rows;
      for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        (outer[i] == f ? test_rows : train_rows).push_back(i);
      }
      const FeatureMatrix outer_train = take_rows(matrix, train_rows);
      const FeatureMatrix outer_test = take_rows(matrix, test_rows);

      // Same inner assignment for every combo: a fair comparison.
      const std::vector<int> inner = stratified_folds(
          outer_train.labels, inner_folds,
          mix_seed(mix_seed(seed, "inner"), static_cast<std::uint64_t>(f)));

      std::size_t best_combo = 0;
      double best_f1 = -1.0;
      for (std::size_t c = 0; c < combos.size(); ++c) {
        double f1_total = 0.0;
        for (int g = 0; g < inner_folds; ++g) {
          std::vector<std::size_t> fit_rows;
          std::vector<std::size_t> val_rows;
          for (std::size_t i = 0; i < outer_train.n_rows(); ++i) {
            (inner[i] == g ? val_rows : fit_rows).push_back(i);
          }
          const FeatureMatrix inner_train = take_rows(outer_train, fit_rows);
          const FeatureMatrix inner_val = take_rows(outer_train, val_rows);
          if (trace) {
            // Report inner rows in the ORIGINAL matrix's indexing.
            CvTrace::Split split;
            split.kind = spec.kind;
            split.outer_fold = f;
            split.inner_fold = g;
            for (auto r : fit_rows) split.train_rows.push_back(train_rows[r]);
            for (auto r : val_rows) split.test_rows.push_back(train_rows[r]);
            trace->splits.push_back(std::move(split));
          }
          auto model = make_classifier(
              spec.kind, combos[c],
              mix_seed(mix_seed(spec.seed, fnv1a64(spec.kind)),
                       static_cast<std::uint64_t>(f * 1000 + g)));
          model->fit(inner_train.rows, inner_train.labels);
          std::vector<int> predictions;
          predictions.reserve(inner_val.n_rows());
          for (const auto& row : inner_val.rows) {
            predictions.push_back(model->predict(row));
          }
          f1_total += metrics(predictions, inner_val.labels).f1;
        }
        const double mean_f1 = f1_total / static_cast<double>(inner_folds);
        if (mean_f1 > best_f1) {
          best_f1 = mean_f1;
          best_combo = c;
        }
      }

      if (trace) {
        CvTrace::Split split;
        split.kind = spec.kind;
        split.outer_fold = f;
        split.train_rows = train_rows;
        split.test_rows = test_rows;
        trace->splits.push_back(std::move(split));
      }
      auto model = make_classifier(
          spec.kind, combos[best_combo],
          mix_seed(mix_seed(spec.seed, fnv1a64(spec.kind)),
                   static_cast<std::uint64_t>(f)));
      model->fit(outer_train.rows, outer_train.labels);
      std::vector<int> predictions;
      predictions.reserve(outer_test.n_rows());
      for (const auto& row : outer_test.rows) {
        predictions.push_back(model->predict(row));
      }
      const MetricSet fold_metrics = metrics(predictions, outer_test.labels);
      sums.accuracy += fold_metrics.accuracy;
      sums.precision += fold_metrics.precision;
      sums.recall += fold_metrics.recall;
      sums.f1 += fold_metrics.f1;
      const std::vector<double> importance = model->importances();
      for (std::size_t i = 0; i < importance.size(); ++i) {
        importance_sum[i] += importance[i];
      }
      model_report.chosen_params.push_back(combos[best_combo]);
    }

    const auto k = static_cast<double>(outer_folds);
    model_report.means.accuracy = sums.accuracy / k;
    model_report.means.precision = sums.precision / k;
    model_report.means.recall = sums.recall / k;
    model_report.means.f1 = sums.f1 / k;
    double total = 0.0;
    for (double v : importance_sum) total += v;
    if (total > 0.0) {
      for (double& v : importance_sum) v /= total;
    }
    model_report.importances = std::move(importance_sum);
    report.models.push_back(std::move(model_report));
  }
  return report;
}

std::vector<DowdallEntry> dowdall_rank(
    const std::vector<std::vector<double>>& importances) {
  if (importances.empty()) return {};
  const std::size_t n_features = importances.front().size();
  for (const auto& model : importances) {
    if (model.size() != n_features) {
      throw std::invalid_argument("importance vectors differ in length");
    }
  }
  std::vector<double> points(n_features, 0.0);
  std::vector<std::size_t> order(n_features);
  for (const auto& model : importances) {
    for (std::size_t i = 0; i < n_features; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (model[a] != model[b]) return model[a] > model[b];
      return a < b;
    });
    for (std::size_t position = 0; position < n_features; ++position) {
      points[order[position]] += 1.0 / static_cast<double>(position + 1);
    }
  }
  std::vector<DowdallEntry> ranking(n_features);
  for (std::size_t i = 0; i < n_features; ++i) {
    ranking[i].feature = i;
    ranking[i].points = points[i];
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const DowdallEntry& a, const DowdallEntry& b) {
              if (a.points != b.points) return a.points > b.points;
              return a.feature < b.feature;
            });
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    ranking[i].rank = static_cast<int>(i + 1);
  }
  return ranking;
}

}  // namespace botwatch::learn
