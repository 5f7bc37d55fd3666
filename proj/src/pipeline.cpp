#include "botwatch/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <stdexcept>

#include "botwatch/util.hpp"

namespace botwatch::pipeline {
namespace {

using nlohmann::ordered_json;

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(separator, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

const std::vector<std::string>& cdfa_columns() {
  static const std::vector<std::string> columns = {
      "Average of MAC-CDFA-T",      "Variance of MAC-CDFA-T",
      "Number of clusters in CDFA-T", "Average of MAC-CDFA-C",
      "Variance of MAC-CDFA-C",     "Number of clusters in CDFA-C",
      "Average of MAC-CDFA-R",      "Variance of MAC-CDFA-R",
      "Number of clusters in CDFA-R"};
  return columns;
}

const std::vector<std::string>& santia_columns() {
  static const std::vector<std::string> columns = {
      "Average Response Time", "Average Comment length", "Innovation Rate",
      "Maximum Daily Comments", "Number of Links", "Thread deviation"};
  return columns;
}

const std::vector<std::string>& chu_columns() {
  static const std::vector<std::string> columns = {
      "Entropy rate", "Hashtag ratio",           "Mention ratio",
      "URL ratio",    "FF ratio",                "The age of an account"};
  return columns;
}

const std::vector<std::string>& chain_columns() {
  static const std::vector<std::string> columns = {
      "Number of transfers",
      "Daily time entropy of transfer",
      "Transfer activation time",
      "Daily transfer",
      "In-degree of transfer",
      "Out-degree of transfer",
      "Entropy of the in-degree accounts",
      "Entropy of the out-degree accounts",
      "Steem-created account",
      "Average transfer per blog or reply",
      "Average transfer per blog",
      "Average transfer per reply"};
  return columns;
}

const std::vector<std::string>& baseline_columns() {
  static const std::vector<std::string> columns = {
      "baseline:Frequent word count", "baseline:TF-IDF mean",
      "baseline:TF-IDF max",          "baseline:Levenshtein title",
      "baseline:Levenshtein content", "baseline:Levenshtein reply"};
  return columns;
}

std::vector<std::string> columns_for_groups(
    const std::vector<std::string>& groups) {
  std::vector<std::string> columns;
  std::set<std::string> seen;
  for (const auto& group : groups) {
    if (seen.count(group)) continue;
    seen.insert(group);
    const std::vector<std::string>* add = nullptr;
    if (group == kGroupCdfa) {
      add = &cdfa_columns();
    } else if (group == kGroupSantia) {
      add = &santia_columns();
    } else if (group == kGroupChu) {
      add = &chu_columns();
    } else if (group == kGroupChain) {
      add = &chain_columns();
    } else if (group == kGroupBaselines) {
      add = &baseline_columns();
    } else {
      throw std::invalid_argument("unknown feature group \"" + group + "\"");
    }
    columns.insert(columns.end(), add->begin(), add->end());
  }
  return columns;
}

ordered_json PipelineConfig::echo() const {
  ordered_json echo;
  echo["seed"] = seed;
  echo["min_activity"] = min_activity;
  echo["groups"] = groups;
  echo["threads"] = threads;
  echo["dpgmm"] = {{"max_components", dpgmm.max_components},
                   {"alpha", dpgmm.alpha},
                   {"sweeps", dpgmm.sweeps}};
  echo["innovation"] = {{"shuffles", innovation.shuffles},
                        {"min_tokens", innovation.min_tokens},
                        {"alpha_max", innovation.alpha_max}};
  echo["temporal"] = {{"symbol_cap", temporal.symbol_cap},
                      {"max_order", temporal.max_order}};
  echo["chain"] = {{"faucet_account", chain.faucet_account}};
  echo["textbase"] = {{"lev_max_posts", textbase.lev_max_posts},
                      {"lev_max_replies", textbase.lev_max_replies},
                      {"lev_truncate_chars", textbase.lev_truncate_chars},
                      {"tfidf_min_count", textbase.tfidf_min_count}};
  return echo;
}

ExtractResult extract_matrix(const corpus::LabeledCorpus& corpus,
                             const PipelineConfig& config) {
  if (config.groups.empty()) {
    throw std::invalid_argument("no feature groups enabled");
  }
  ExtractResult result;
  result.matrix.columns = columns_for_groups(config.groups);

  std::vector<const corpus::AccountRecord*> accounts;
  for (const auto& account : corpus.accounts) {
    if (corpus.labels.count(account.name)) accounts.push_back(&account);
  }
  std::sort(accounts.begin(), accounts.end(),
            [](const corpus::AccountRecord* a, const corpus::AccountRecord* b) {
              return a->name < b->name;
            });

  std::set<std::string> groups(config.groups.begin(), config.groups.end());
  const bool want_cdfa = groups.count(kGroupCdfa) > 0;
  const bool want_santia = groups.count(kGroupSantia) > 0;
  const bool want_chu = groups.count(kGroupChu) > 0;
  const bool want_chain = groups.count(kGroupChain) > 0;
  const bool want_baselines = groups.count(kGroupBaselines) > 0;

  // Corpus-wide passes shared by the per-account extractors.
  std::unique_ptr<behavior::BehaviorContext> behavior_context;
  if (want_santia) {
    behavior_context = std::make_unique<behavior::BehaviorContext>(corpus);
  }
  std::unique_ptr<textbase::TfidfTable> tfidf;
  if (want_baselines) {
    tfidf = std::make_unique<textbase::TfidfTable>(corpus, config.textbase);
  }

  result.matrix.rows.assign(accounts.size(), {});
  result.matrix.labels.assign(accounts.size(), 0);
  result.account_names.resize(accounts.size());
  std::vector<std::size_t> sampled_out(accounts.size(), 0);
  std::vector<std::size_t> skipped_rt(accounts.size(), 0);

  parallel_for(accounts.size(), config.threads, [&](std::size_t i) {
    const corpus::AccountRecord& account = *accounts[i];
    const std::uint64_t account_seed =
        mix_seed(config.seed, fnv1a64(account.name));
    std::vector<double>& row = result.matrix.rows[i];
    row.reserve(result.matrix.columns.size());

    if (want_cdfa) {
      const cdfa::CdfaFeatures f =
          cdfa::cdfa_features(account, account_seed, config.dpgmm);
      for (const cdfa::MacSummary* source : {&f.title, &f.content, &f.reply}) {
        row.push_back(source->mean);
        row.push_back(source->variance);
        row.push_back(static_cast<double>(source->qualified_count));
      }
    }
    if (want_santia) {
      std::size_t skipped = 0;
      const auto times =
          behavior::response_times(*behavior_context, account, &skipped);
      skipped_rt[i] = skipped;
      double avg_rt = 0.0;
      if (!times.empty()) {
        double total = 0.0;
        for (auto t : times) total += static_cast<double>(t);
        avg_rt = total / static_cast<double>(times.size());
      }
      row.push_back(avg_rt);
      row.push_back(behavior::avg_comment_length(account));
      row.push_back(behavior::innovation_rate(account, account_seed,
                                              config.innovation));
      row.push_back(static_cast<double>(behavior::max_daily_comments(account)));
      row.push_back(static_cast<double>(behavior::link_count(account)));
      row.push_back(behavior::thread_deviation(*behavior_context, account));
    }
    if (want_chu) {
      const temporal::TemporalFeatures f = temporal::temporal_features(
          account, corpus.dataset_end, config.temporal);
      row.push_back(f.entropy_rate);
      row.push_back(f.hashtag_ratio);
      row.push_back(f.mention_ratio);
      row.push_back(f.url_ratio);
      row.push_back(f.ff_ratio);
      row.push_back(static_cast<double>(f.account_age));
    }
    if (want_chain) {
      const chain::ChainFeatures f = chain::chain_features(account, config.chain);
      row.push_back(static_cast<double>(f.n_transfers));
      row.push_back(f.daily_transfer_entropy);
      row.push_back(static_cast<double>(f.activation_time));
      row.push_back(f.daily_transfer);
      row.push_back(static_cast<double>(f.in_degree));
      row.push_back(static_cast<double>(f.out_degree));
      row.push_back(f.in_account_entropy);
      row.push_back(f.out_account_entropy);
      row.push_back(static_cast<double>(f.steem_created));
      row.push_back(f.transfers_per_blog_or_reply);
      row.push_back(f.transfers_per_blog);
      row.push_back(f.transfers_per_reply);
    }
    if (want_baselines) {
      row.push_back(static_cast<double>(textbase::frequent_word_count(account)));
      const auto [tfidf_mean, tfidf_max] = tfidf->summary(account.name);
      row.push_back(tfidf_mean);
      row.push_back(tfidf_max);
      const textbase::LevenshteinMeans lev =
          textbase::levenshtein_regularity(account, config.textbase);
      sampled_out[i] = lev.sampled_out ? 1 : 0;
      row.push_back(lev.title);
      row.push_back(lev.content);
      row.push_back(lev.reply);
    }

    result.matrix.labels[i] =
        corpus.labels.at(account.name) == corpus::Label::bot ? 1 : 0;
    result.account_names[i] = account.name;
  });

  for (auto v : sampled_out) result.levenshtein_sampled_out += v;
  for (auto v : skipped_rt) result.skipped_response_times += v;
  return result;
}

void write_matrix_csv(const learn::FeatureMatrix& matrix,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
    if (matrix.columns[c].find(',') != std::string::npos ||
        matrix.columns[c].find('\n') != std::string::npos) {
      throw std::invalid_argument("column name needs quoting: " +
                                  matrix.columns[c]);
    }
    out << matrix.columns[c] << ',';
  }
  out << "label\n";
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    for (double value : matrix.rows[r]) {
      out << format_double(value) << ',';
    }
    out << matrix.labels[r] << '\n';
  }
  if (!out) throw std::runtime_error("write error on " + path);
}

learn::FeatureMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  learn::FeatureMatrix matrix;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty matrix file");
  std::vector<std::string> header = split(line, ',');
  if (header.empty() || header.back() != "label") {
    throw std::runtime_error("matrix header must end with \"label\"");
  }
  header.pop_back();
  matrix.columns = std::move(header);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != matrix.columns.size() + 1) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected " +
                               std::to_string(matrix.columns.size() + 1) +
                               " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(matrix.columns.size());
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cells[c], &used));
        if (used != cells[c].size()) throw std::invalid_argument(cells[c]);
      } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad number \"" + cells[c] + "\"");
      }
    }
    const std::string& label = cells.back();
    if (label != "0" && label != "1") {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": label must be 0 or 1");
    }
    matrix.rows.push_back(std::move(row));
    matrix.labels.push_back(label == "1" ? 1 : 0);
  }
  return matrix;
}

ordered_json EvalConfig::echo() const {
  ordered_json echo;
  echo["seed"] = seed;
  echo["combos"] = combos;
  echo["outer_folds"] = outer_folds;
  echo["inner_folds"] = inner_folds;
  ordered_json model_list = ordered_json::array();
  const auto resolved =
      specs.empty() ? learn::default_model_specs(seed) : specs;
  for (const auto& spec : resolved) {
    ordered_json entry;
    entry["kind"] = spec.kind;
    entry["seed"] = spec.seed;
    ordered_json grid;
    for (const auto& [name, values] : spec.grid) grid[name] = values;
    entry["grid"] = grid;
    model_list.push_back(entry);
  }
  echo["models"] = model_list;
  return echo;
}

std::vector<std::size_t> resolve_combo(
    const std::string& token, const std::vector<std::string>& columns) {
  std::vector<std::string> wanted;
  auto add = [&wanted](const std::vector<std::string>& names) {
    wanted.insert(wanted.end(), names.begin(), names.end());
  };
  for (const auto& part : split(token, '+')) {
    if (part == kGroupCdfa) {
      add(cdfa_columns());
    } else if (part == kGroupSantia) {
      add(santia_columns());
    } else if (part == kGroupChu) {
      add(chu_columns());
    } else if (part == kGroupChain) {
      add(chain_columns());
    } else if (part == "all") {
      add(cdfa_columns());
      add(santia_columns());
      add(chu_columns());
      add(chain_columns());
    } else if (part == kGroupBaselines) {
      add(baseline_columns());
    } else if (part == "baseline_fwc") {
      wanted.push_back("baseline:Frequent word count");
    } else if (part == "baseline_tfidf") {
      wanted.push_back("baseline:TF-IDF mean");
      wanted.push_back("baseline:TF-IDF max");
    } else if (part == "baseline_levenshtein") {
      wanted.push_back("baseline:Levenshtein title");
      wanted.push_back("baseline:Levenshtein content");
      wanted.push_back("baseline:Levenshtein reply");
    } else {
      throw std::invalid_argument("unknown combo token \"" + part + "\"");
    }
  }
  std::vector<std::size_t> indices;
  std::set<std::string> seen;
  for (const auto& name : wanted) {
    if (seen.count(name)) continue;
    seen.insert(name);
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
      throw std::invalid_argument("combo \"" + token +
                                  "\" needs missing column \"" + name + "\"");
    }
    indices.push_back(static_cast<std::size_t>(it - columns.begin()));
  }
  return indices;
}

nlohmann::ordered_json run_eval(const learn::FeatureMatrix& matrix,
                                const EvalConfig& config) {
  if (config.combos.empty()) {
    throw std::invalid_argument("no combos requested");
  }
  const std::vector<learn::ModelSpec> specs =
      config.specs.empty() ? learn::default_model_specs(config.seed)
                           : config.specs;

  ordered_json report;
  report["schema"] = "botwatch-eval-report/1";
  report["config"] = config.echo();
  report["rows"] = matrix.n_rows();
  ordered_json combo_reports = ordered_json::array();

  for (const auto& token : config.combos) {
    const std::vector<std::size_t> indices =
        resolve_combo(token, matrix.columns);
    const learn::FeatureMatrix view = matrix.select(indices);
    const learn::EvalReport eval =
        learn::nested_cv(view, specs, config.seed, config.outer_folds,
                         config.inner_folds);

    ordered_json combo;
    combo["name"] = token;
    combo["columns"] = view.columns;
    ordered_json models = ordered_json::array();
    std::vector<std::vector<double>> importances;
    for (const auto& model : eval.models) {
      ordered_json entry;
      entry["kind"] = model.kind;
      entry["metrics"] = {{"accuracy", model.means.accuracy},
                          {"precision", model.means.precision},
                          {"recall", model.means.recall},
                          {"f1", model.means.f1}};
      ordered_json importance;
      for (std::size_t c = 0; c < view.columns.size(); ++c) {
        importance[view.columns[c]] = model.importances[c];
      }
      entry["importances"] = importance;
      ordered_json chosen = ordered_json::array();
      for (const auto& params : model.chosen_params) {
        ordered_json fold;
        for (const auto& [name, value] : params) fold[name] = value;
        chosen.push_back(fold);
      }
      entry["chosen_params"] = chosen;
      models.push_back(std::move(entry));
      importances.push_back(model.importances);
    }
    combo["models"] = models;

    ordered_json points;
    ordered_json ranks;
    for (const auto& entry : learn::dowdall_rank(importances)) {
      points[view.columns[entry.feature]] = entry.points;
      ranks[view.columns[entry.feature]] = entry.rank;
    }
    combo["dowdall_points"] = points;
    combo["ranks"] = ranks;
    combo_reports.push_back(std::move(combo));
  }
  report["combos"] = combo_reports;
  return report;
}

std::string column_slug(const std::string& column) {
  std::string slug;
  bool pending_separator = false;
  for (unsigned char c : column) {
    if (std::isalnum(c)) {
      if (pending_separator && !slug.empty()) slug += '_';
      pending_separator = false;
      slug += static_cast<char>(std::tolower(c));
    } else {
      pending_separator = true;
    }
  }
  return slug.empty() ? "column" : slug;
}

std::vector<std::string> write_histograms(const learn::FeatureMatrix& matrix,
                                          const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::string> files;
  std::set<std::string> used;
  for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
    std::string slug = column_slug(matrix.columns[c]);
    std::string name = slug + ".csv";
    int suffix = 2;
    while (used.count(name)) {
      name = slug + "_" + std::to_string(suffix++) + ".csv";
    }
    used.insert(name);

    const std::filesystem::path path =
        std::filesystem::path(directory) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open " + path.string() +
                               " for writing");
    }
    out << "value,label\n";
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
      out << format_double(matrix.rows[r][c]) << ',' << matrix.labels[r]
          << '\n';
    }
    if (!out) throw std::runtime_error("write error on " + path.string());
    files.push_back(name);
  }
  return files;
}

}  // namespace botwatch::pipeline
