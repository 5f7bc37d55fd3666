#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "botwatch/learn.hpp"
#include "botwatch/util.hpp"

namespace botwatch::learn {
namespace {

double impurity(std::int64_t n0, std::int64_t n1, bool use_entropy) {
  const std::int64_t n = n0 + n1;
  if (n == 0 || n0 == 0 || n1 == 0) return 0.0;
  const double p0 = static_cast<double>(n0) / static_cast<double>(n);
  const double p1 = static_cast<double>(n1) / static_cast<double>(n);
  if (use_entropy) return -(p0 * std::log2(p0) + p1 * std::log2(p1));
  return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;  // impurity decrease, weighted by node fraction
  bool found = false;
};

struct TreeConfig {
  int max_depth = 0;  // 0 = unbounded
  bool use_entropy = false;
  int features_per_split = 0;  // 0 = all
};

// Plain CART over binary labels. Thresholds are training values themselves
// (the split is {x < v} for some observed v), so the tree is purely
// order-based: strictly increasing per-column transforms leave every
// prediction unchanged.
class Cart {
 public:
  void fit(const std::vector<std::vector<double>>& rows,
           const std::vector<int>& labels,
           const std::vector<std::size_t>& row_ids, const TreeConfig& config,
           Rng* rng) {
    rows_ = &rows;
    labels_ = &labels;
    config_ = config;
    rng_ = rng;
    const std::size_t n_features = rows.empty() ? 0 : rows.front().size();
    importance_.assign(n_features, 0.0);
    nodes_.clear();
    total_rows_ = static_cast<double>(row_ids.size());
    std::vector<std::size_t> ids = row_ids;
    build(ids, 0);
    rows_ = nullptr;
    labels_ = nullptr;
    rng_ = nullptr;
  }

  int predict(const std::vector<double>& row) const {
    int at = 0;
    while (nodes_[at].feature >= 0) {
      const auto& node = nodes_[at];
      at = row[node.feature] < node.threshold ? node.left : node.right;
    }
    return nodes_[at].label;
  }

  // Unnormalized total impurity decrease per feature.
  const std::vector<double>& raw_importance() const { return importance_; }

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
  };

  int build(std::vector<std::size_t>& ids, int depth) {
    std::int64_t n1 = 0;
    for (auto id : ids) n1 += (*labels_)[id];
    const auto n = static_cast<std::int64_t>(ids.size());
    const std::int64_t n0 = n - n1;
    const int majority = n1 > n0 ? 1 : 0;

    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[node_id].label = majority;
    if (n0 == 0 || n1 == 0 || n < 2 ||
        (config_.max_depth > 0 && depth >= config_.max_depth)) {
      return node_id;
    }

    const SplitChoice split = best_split(ids, n0, n1);
    if (!split.found || split.decrease <= 0.0) return node_id;

    importance_[split.feature] +=
        (static_cast<double>(n) / total_rows_) * split.decrease;

    std::vector<std::size_t> left_ids;
    std::vector<std::size_t> right_ids;
    for (auto id : ids) {
      ((*rows_)[id][split.feature] < split.threshold ? left_ids : right_ids)
          .push_back(id);
    }
    ids.clear();
    ids.shrink_to_fit();

    nodes_[node_id].feature = split.feature;
    nodes_[node_id].threshold = split.threshold;
    const int left = build(left_ids, depth + 1);
    nodes_[node_id].left = left;
    const int right = build(right_ids, depth + 1);
    nodes_[node_id].right = right;
    return node_id;
  }

  SplitChoice best_split(const std::vector<std::size_t>& ids, std::int64_t n0,
                         std::int64_t n1) {
    const std::size_t n_features = importance_.size();
    std::vector<int> features;
    if (config_.features_per_split > 0 &&
        static_cast<std::size_t>(config_.features_per_split) < n_features) {
      // Partial Fisher-Yates for a distinct random subset.
      std::vector<int> pool(n_features);
      for (std::size_t f = 0; f < n_features; ++f) pool[f] = static_cast<int>(f);
      for (int k = 0; k < config_.features_per_split; ++k) {
        const std::size_t j = k + rng_->below(pool.size() - k);
        std::swap(pool[k], pool[j]);
        features.push_back(pool[k]);
      }
    } else {
      features.resize(n_features);
      for (std::size_t f = 0; f < n_features; ++f) {
        features[f] = static_cast<int>(f);
      }
    }

    const auto n = static_cast<std::int64_t>(ids.size());
    const double parent = impurity(n0, n1, config_.use_entropy);
    SplitChoice best;
    std::vector<std::pair<double, int>> order(ids.size());
    for (int feature : features) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        order[i] = {(*rows_)[ids[i]][feature], (*labels_)[ids[i]]};
      }
      std::sort(order.begin(), order.end());
      std::int64_t left0 = 0;
      std::int64_t left1 = 0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        left0 += order[i].second == 0;
        left1 += order[i].second == 1;
        if (order[i].first == order[i + 1].first) continue;
        const auto left_n = static_cast<std::int64_t>(i) + 1;
        const std::int64_t right_n = n - left_n;
        const double weighted =
            (static_cast<double>(left_n) / static_cast<double>(n)) *
                impurity(left0, left1, config_.use_entropy) +
            (static_cast<double>(right_n) / static_cast<double>(n)) *
                impurity(n0 - left0, n1 - left1, config_.use_entropy);
        const double decrease = parent - weighted;
        if (decrease > best.decrease ||
            (!best.found && decrease > 0.0)) {
          best.feature = feature;
          best.threshold = order[i + 1].first;
          best.decrease = decrease;
          best.found = true;
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>* rows_ = nullptr;
  const std::vector<int>* labels_ = nullptr;
  TreeConfig config_;
  Rng* rng_ = nullptr;
  double total_rows_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<double> importance_;
};

std::vector<double> normalized(std::vector<double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  if (total > 0.0) {
    for (double& v : values) v /= total;
  }
  return values;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  return ids;
}

double param_or(const std::map<std::string, double>& params,
                const std::string& name, double fallback) {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

class DecisionTreeClassifier final : public Classifier {
 public:
  DecisionTreeClassifier(const std::map<std::string, double>& params,
                         std::uint64_t seed, bool use_entropy) {
    config_.max_depth = static_cast<int>(param_or(params, "max_depth", 0));
    config_.use_entropy = use_entropy;
    (void)seed;  // the plain tree is deterministic on its own
  }

  void fit(const std::vector<std::vector<double>>& rows,
           const std::vector<int>& labels) override {
    tree_.fit(rows, labels, all_rows(rows.size()), config_, nullptr);
  }

  int predict(const std::vector<double>& row) const override {
    return tree_.predict(row);
  }

  std::vector<double> importances() const override {
    return normalized(tree_.raw_importance());
  }

 private:
  TreeConfig config_;
  Cart tree_;
};

class RandomForestClassifier final : public Classifier {
 public:
  RandomForestClassifier(const std::map<std::string, double>& params,
                         std::uint64_t seed, bool use_entropy)
      : seed_(seed) {
    n_trees_ = static_cast<int>(param_or(params, "n_trees", 100));
    if (n_trees_ < 1) throw std::invalid_argument("n_trees must be positive");
    config_.max_depth = static_cast<int>(param_or(params, "max_depth", 0));
    config_.use_entropy = use_entropy;
  }

  void fit(const std::vector<std::vector<double>>& rows,
           const std::vector<int>& labels) override {
    const std::size_t n = rows.size();
    const std::size_t n_features = rows.empty() ? 0 : rows.front().size();
    TreeConfig config = config_;
    config.features_per_split = std::max(
        1, static_cast<int>(std::sqrt(static_cast<double>(n_features))));

    trees_.assign(n_trees_, Cart{});
    for (int t = 0; t < n_trees_; ++t) {
      Rng rng(mix_seed(seed_, static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> sample(n);
      for (std::size_t i = 0; i < n; ++i) {
        sample[i] = static_cast<std::size_t>(rng.below(n));
      }
      trees_[t].fit(rows, labels, sample, config, &rng);
    }
    importance_.assign(n_features, 0.0);
    for (const auto& tree : trees_) {
      const std::vector<double> part = normalized(tree.raw_importance());
      for (std::size_t f = 0; f < n_features; ++f) importance_[f] += part[f];
    }
    importance_ = normalized(std::move(importance_));
  }

  int predict(const std::vector<double>& row) const override {
    int votes = 0;
    for (const auto& tree : trees_) votes += tree.predict(row);
    return 2 * votes > static_cast<int>(trees_.size()) ? 1 : 0;
  }

  std::vector<double> importances() const override { return importance_; }

 private:
  std::uint64_t seed_;
  int n_trees_ = 100;
  TreeConfig config_;
  std::vector<Cart> trees_;
  std::vector<double> importance_;
};

// SAMME over depth-1 stumps; with two classes this is classic discrete
// AdaBoost. Stumps pick the (feature, threshold) minimizing weighted error,
// with a constant predictor as the fallback candidate.
class AdaBoostClassifier final : public Classifier {
 public:
  AdaBoostClassifier(const std::map<std::string, double>& params,
                     std::uint64_t seed) {
    n_rounds_ = static_cast<int>(param_or(params, "n_rounds", 50));
    if (n_rounds_ < 1) throw std::invalid_argument("n_rounds must be positive");
    (void)seed;
  }

  void fit(const std::vector<std::vector<double>>& rows,
           const std::vector<int>& labels) override {
    stumps_.clear();
    const std::size_t n = rows.size();
    const std::size_t n_features = rows.empty() ? 0 : rows.front().size();
    importance_.assign(n_features, 0.0);
    std::int64_t n1 = 0;
    for (int label : labels) n1 += label;
    majority_ = 2 * n1 > static_cast<std::int64_t>(n) ? 1 : 0;

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    for (int round = 0; round < n_rounds_; ++round) {
      Stump stump = best_stump(rows, labels, weights);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (apply(stump, rows[i]) != labels[i]) err += weights[i];
      }
      if (err >= 0.5) break;  // no better than chance: boosting is done
      const double bounded = std::max(err, 1e-12);
      stump.alpha = std::log((1.0 - bounded) / bounded);
      stumps_.push_back(stump);
      if (stump.feature >= 0) importance_[stump.feature] += stump.alpha;
      if (err <= 0.0) break;  // perfect stump: further rounds are no-ops

      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (apply(stump, rows[i]) != labels[i]) {
          weights[i] *= std::exp(stump.alpha);
        }
        total += weights[i];
      }
      for (auto& w : weights) w /= total;
    }
    importance_ = normalized(std::move(importance_));
  }

  int predict(const std::vector<double>& row) const override {
    if (stumps_.empty()) return majority_;
    double score = 0.0;
    for (const auto& stump : stumps_) {
      score += apply(stump, row) == 1 ? stump.alpha : -stump.alpha;
    }
    return score > 0.0 ? 1 : 0;
  }

  std::vector<double> importances() const override { return importance_; }

 private:
  struct Stump {
    int feature = -1;  // -1: constant predictor (left label only)
    double threshold = 0.0;
    int left_label = 0;
    int right_label = 0;
    double alpha = 0.0;
  };

  static int apply(const Stump& stump, const std::vector<double>& row) {
    if (stump.feature < 0) return stump.left_label;
    return row[stump.feature] < stump.threshold ? stump.left_label
                                                : stump.right_label;
  }

  static Stump best_stump(const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels,
                          const std::vector<double>& weights) {
    const std::size_t n = rows.size();
    const std::size_t n_features = rows.empty() ? 0 : rows.front().size();
    double w1 = 0.0;
    double w_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w1 += labels[i] == 1 ? weights[i] : 0.0;
      w_total += weights[i];
    }
    const double w0 = w_total - w1;

    Stump best;  // constant majority-by-weight predictor as the baseline
    best.left_label = w1 > w0 ? 1 : 0;
    double best_err = std::min(w0, w1);

    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t f = 0; f < n_features; ++f) {
      for (std::size_t i = 0; i < n; ++i) order[i] = {rows[i][f], i};
      std::sort(order.begin(), order.end());
      double left0 = 0.0;
      double left1 = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t row = order[i].second;
        (labels[row] == 1 ? left1 : left0) += weights[row];
        if (order[i].first == order[i + 1].first) continue;
        // Each side predicts its weighted majority.
        const double right0 = w0 - left0;
        const double right1 = w1 - left1;
        const double err = std::min(left0, left1) + std::min(right0, right1);
        if (err < best_err) {
          best.feature = static_cast<int>(f);
          best.threshold = order[i + 1].first;
          best.left_label = left1 > left0 ? 1 : 0;
          best.right_label = right1 > right0 ? 1 : 0;
          best_err = err;
        }
      }
    }
    return best;
  }

  int n_rounds_ = 50;
  int majority_ = 0;
  std::vector<Stump> stumps_;
  std::vector<double> importance_;
};

std::unordered_map<std::string, ClassifierFactory>& extra_registry() {
  static std::unordered_map<std::string, ClassifierFactory> registry;
  return registry;
}

}  // namespace

std::unique_ptr<Classifier> make_classifier(
    const std::string& kind, const std::map<std::string, double>& params,
    std::uint64_t seed) {
  if (kind == "decision_tree") {
    return std::make_unique<DecisionTreeClassifier>(params, seed, false);
  }
  if (kind == "random_forest_gini") {
    return std::make_unique<RandomForestClassifier>(params, seed, false);
  }
  if (kind == "random_forest_entropy") {
    return std::make_unique<RandomForestClassifier>(params, seed, true);
  }
  if (kind == "adaboost") {
    return std::make_unique<AdaBoostClassifier>(params, seed);
  }
  auto it = extra_registry().find(kind);
  if (it != extra_registry().end()) return it->second(params, seed);
  throw std::invalid_argument("unknown classifier kind \"" + kind + "\"");
}

void register_classifier(const std::string& kind, ClassifierFactory factory) {
  extra_registry()[kind] = factory;
}

std::vector<std::string> classifier_kinds() {
  std::vector<std::string> kinds = {"decision_tree", "random_forest_gini",
                                    "random_forest_entropy", "adaboost"};
  for (const auto& [kind, factory] : extra_registry()) {
    (void)factory;
    kinds.push_back(kind);
  }
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

std::vector<ModelSpec> default_model_specs(std::uint64_t seed) {
  std::vector<ModelSpec> specs;
  specs.push_back({"decision_tree", {{"max_depth", {0, 8, 16}}}, seed});
  specs.push_back({"random_forest_gini",
                   {{"max_depth", {0, 8, 16}}, {"n_trees", {100, 200}}},
                   seed});
  specs.push_back({"random_forest_entropy",
                   {{"max_depth", {0, 8, 16}}, {"n_trees", {100, 200}}},
                   seed});
  specs.push_back({"adaboost", {{"n_rounds", {50, 100, 200}}}, seed});
  return specs;
}

}  // namespace botwatch::learn
