// botwatch: posting-bot detection pipeline over blockchain social corpora.
//
// Subcommands: ingest, synth, features, train, evaluate, rank, report.
// Every subcommand exits 0 on success and nonzero with a diagnostic on
// stderr; all files are UTF-8.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "botwatch/corpus.hpp"
#include "botwatch/learn.hpp"
#include "botwatch/pipeline.hpp"
#include "botwatch/util.hpp"
#include "nlohmann/json.hpp"

namespace {

using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write error on " + path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

botwatch::corpus::LabeledCorpus load_corpus(const std::string& path,
                                            const std::string& dataset_end,
                                            int min_activity) {
  const std::int64_t end =
      dataset_end.empty() ? std::numeric_limits<std::int64_t>::max()
                          : botwatch::parse_iso8601_utc(dataset_end);
  botwatch::corpus::LabeledCorpus corpus = botwatch::corpus::ingest(path, end);
  if (dataset_end.empty()) {
    corpus.dataset_end = botwatch::corpus::latest_event_time(corpus);
  }
  return botwatch::corpus::filter_active(corpus, min_activity);
}

std::map<std::string, double> parse_params(
    const std::vector<std::string>& pairs) {
  std::map<std::string, double> params;
  for (const auto& pair : pairs) {
    const std::size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--param expects key=value, got \"" + pair +
                                  "\"");
    }
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    try {
      std::size_t used = 0;
      params[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("--param " + key +
                                  ": not a number: \"" + value + "\"");
    }
  }
  return params;
}

int run_ingest(const std::string& input, const std::string& dataset_end,
               int min_activity, const std::string& out) {
  botwatch::corpus::IngestStats stats;
  const std::int64_t end = botwatch::parse_iso8601_utc(dataset_end);
  botwatch::corpus::LabeledCorpus corpus =
      botwatch::corpus::ingest(input, end, &stats);
  const std::size_t before = corpus.accounts.size();
  corpus = botwatch::corpus::filter_active(corpus, min_activity);
  botwatch::corpus::export_corpus(corpus, out);
  std::cout << "ingested " << stats.lines << " lines: " << stats.accounts
            << " accounts, " << stats.comments << " comments, "
            << stats.transfers << " transfers, " << stats.labels
            << " labels\n"
            << "kept " << corpus.accounts.size() << " of " << before
            << " accounts with at least " << min_activity
            << " comments -> " << out << "\n";
  return 0;
}

int run_synth(int bots, int humans, std::uint64_t seed,
              const std::string& out) {
  botwatch::corpus::SynthSpec spec;
  spec.bots = bots;
  spec.humans = humans;
  const botwatch::corpus::LabeledCorpus corpus =
      botwatch::corpus::synthesize(spec, seed);
  botwatch::corpus::export_corpus(corpus, out);
  std::size_t comments = 0;
  std::size_t transfers = 0;
  for (const auto& account : corpus.accounts) {
    comments += account.comments.size();
    transfers += account.transfers_out.size();
  }
  std::cout << "synthesized " << bots << " bot and " << humans
            << " human accounts (" << comments << " comments, " << transfers
            << " transfers) -> " << out << "\n";
  return 0;
}

int run_features(const std::string& input, const std::string& out,
                 const std::string& dataset_end,
                 const botwatch::pipeline::PipelineConfig& config) {
  const botwatch::corpus::LabeledCorpus corpus =
      load_corpus(input, dataset_end, config.min_activity);
  const botwatch::pipeline::ExtractResult extracted =
      botwatch::pipeline::extract_matrix(corpus, config);
  if (extracted.matrix.n_rows() == 0) {
    throw std::runtime_error(
        "no labeled accounts left after the activity filter");
  }
  botwatch::pipeline::write_matrix_csv(extracted.matrix, out);

  ordered_json sidecar;
  sidecar["schema"] = "botwatch-features-sidecar/1";
  sidecar["config"] = config.echo();
  sidecar["dataset_end"] = botwatch::format_iso8601_utc(corpus.dataset_end);
  sidecar["accounts"] = extracted.matrix.n_rows();
  sidecar["columns"] = extracted.matrix.columns;
  sidecar["diagnostics"] = {
      {"levenshtein_sampled_out", extracted.levenshtein_sampled_out},
      {"skipped_response_times", extracted.skipped_response_times}};
  write_text(out + ".json", sidecar.dump(2) + "\n");

  std::cout << "extracted " << extracted.matrix.n_rows() << " rows x "
            << extracted.matrix.n_features() << " features -> " << out
            << " (+ sidecar " << out << ".json)\n";
  return 0;
}

int run_train(const std::string& matrix_path, const std::string& kind,
              const std::vector<std::string>& param_pairs, std::uint64_t seed,
              const std::string& out) {
  const botwatch::learn::FeatureMatrix matrix =
      botwatch::pipeline::read_matrix_csv(matrix_path);
  if (matrix.n_rows() == 0) throw std::runtime_error("feature matrix is empty");

  botwatch::learn::ModelSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  const std::map<std::string, double> params = parse_params(param_pairs);
  for (const auto& [key, value] : params) spec.grid[key] = {value};

  const botwatch::learn::FitResult fit =
      botwatch::learn::fit_predict(spec, matrix, matrix);
  const botwatch::learn::MetricSet set =
      botwatch::learn::metrics(fit.predictions, matrix.labels);

  ordered_json report;
  report["schema"] = "botwatch-train-report/1";
  report["kind"] = kind;
  report["seed"] = seed;
  ordered_json echo;
  for (const auto& [key, value] : params) echo[key] = value;
  report["params"] = echo;
  report["rows"] = matrix.n_rows();
  report["training_metrics"] = {{"accuracy", set.accuracy},
                                {"precision", set.precision},
                                {"recall", set.recall},
                                {"f1", set.f1}};
  ordered_json importances;
  for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
    importances[matrix.columns[c]] = fit.importances[c];
  }
  report["importances"] = importances;
  emit(out, report.dump(2) + "\n");
  if (!out.empty()) {
    std::cout << "trained " << kind << " on " << matrix.n_rows()
              << " rows -> " << out << "\n";
  }
  return 0;
}

int run_evaluate(const std::string& matrix_path,
                 const botwatch::pipeline::EvalConfig& config,
                 const std::string& out, const std::string& histograms) {
  const botwatch::learn::FeatureMatrix matrix =
      botwatch::pipeline::read_matrix_csv(matrix_path);
  ordered_json report = botwatch::pipeline::run_eval(matrix, config);
  if (!histograms.empty()) {
    const std::vector<std::string> files =
        botwatch::pipeline::write_histograms(matrix, histograms);
    report["histograms"] = {{"directory", histograms}, {"files", files}};
  }
  emit(out, report.dump(2) + "\n");
  if (!out.empty()) {
    std::cout << "evaluated " << config.combos.size() << " feature sets on "
              << matrix.n_rows() << " rows -> " << out << "\n";
  }
  return 0;
}

ordered_json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& error) {
    throw std::runtime_error(path + ": " + error.what());
  }
  return doc;
}

const ordered_json& find_combo(const ordered_json& report,
                               const std::string& name) {
  if (!report.contains("combos") || !report["combos"].is_array() ||
      report["combos"].empty()) {
    throw std::runtime_error("report has no combo sections");
  }
  if (name.empty()) return report["combos"].front();
  for (const auto& combo : report["combos"]) {
    if (combo.value("name", "") == name) return combo;
  }
  throw std::runtime_error("report has no combo named \"" + name + "\"");
}

int run_rank(const std::string& report_path, const std::string& combo_name,
             const std::string& out) {
  const ordered_json report = load_json(report_path);
  const ordered_json& combo = find_combo(report, combo_name);
  const std::vector<std::string> columns =
      combo.at("columns").get<std::vector<std::string>>();

  std::vector<std::vector<double>> importances;
  for (const auto& model : combo.at("models")) {
    std::vector<double> row;
    row.reserve(columns.size());
    for (const auto& column : columns) {
      row.push_back(model.at("importances").at(column).get<double>());
    }
    importances.push_back(std::move(row));
  }

  std::ostringstream csv;
  csv << "rank,feature,points\n";
  for (const auto& entry : botwatch::learn::dowdall_rank(importances)) {
    csv << entry.rank << ',' << columns[entry.feature] << ','
        << botwatch::format_double(entry.points) << '\n';
  }
  emit(out, csv.str());
  return 0;
}

int run_report(const std::string& report_path, const std::string& out,
               std::size_t top) {
  const ordered_json report = load_json(report_path);
  if (!report.contains("combos")) {
    throw std::runtime_error("not an evaluation report: missing \"combos\"");
  }
  std::ostringstream md;
  md << "# Evaluation report\n\n";
  md << "Rows: " << report.value("rows", 0) << "\n\n";
  for (const auto& combo : report["combos"]) {
    md << "## Feature set: " << combo.value("name", "?") << "\n\n";
    md << "| model | accuracy | precision | recall | F1 |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& model : combo.at("models")) {
      const auto& metrics = model.at("metrics");
      md << "| " << model.value("kind", "?");
      for (const char* key : {"accuracy", "precision", "recall", "f1"}) {
        std::ostringstream cell;
        cell.precision(2);
        cell << std::fixed << metrics.at(key).get<double>();
        md << " | " << cell.str();
      }
      md << " |\n";
    }
    md << "\nTop features (Dowdall):\n\n";
    std::size_t shown = 0;
    for (const auto& [feature, rank] : combo.at("ranks").items()) {
      if (shown++ >= top) break;
      md << rank.get<int>() << ". " << feature << "\n";
    }
    md << "\n";
  }
  emit(out, md.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posting-bot detection for blockchain social platforms"};
  app.require_subcommand(1);

  // --- ingest ---------------------------------------------------------------
  auto* ingest = app.add_subcommand(
      "ingest", "validate a raw JSONL corpus and write it in canonical form");
  std::string in_input;
  std::string in_end;
  int in_min_activity = 40;
  std::string in_out;
  ingest->add_option("--input", in_input, "raw corpus (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--dataset-end", in_end,
                     "observation-window end (ISO-8601 UTC)")
      ->required();
  ingest->add_option("--min-activity", in_min_activity,
                     "minimum comments per kept account");
  ingest->add_option("--out", in_out, "canonical corpus path")->required();

  // --- synth ----------------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "generate a labeled synthetic corpus for pipeline testing");
  int sy_bots = 10;
  int sy_humans = 20;
  std::uint64_t sy_seed = 0;
  std::string sy_out;
  synth->add_option("--bots", sy_bots, "number of bot accounts")->required();
  synth->add_option("--humans", sy_humans, "number of human accounts")
      ->required();
  synth->add_option("--seed", sy_seed, "generator seed");
  synth->add_option("--out", sy_out, "corpus path (JSONL)")->required();

  // --- features ---------------------------------------------------------------
  auto* features = app.add_subcommand(
      "features", "extract the per-account feature matrix from a corpus");
  std::string ft_input;
  std::string ft_out;
  std::string ft_end;
  bool ft_baselines = false;
  botwatch::pipeline::PipelineConfig ft_config;
  features->add_option("--input", ft_input, "ingested corpus (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  features->add_option("--out", ft_out, "feature matrix path (CSV)")
      ->required();
  features->add_option("--dataset-end", ft_end,
                       "observation-window end (default: latest event)");
  features->add_option("--seed", ft_config.seed, "extraction seed");
  features->add_option("--min-activity", ft_config.min_activity,
                       "minimum comments per kept account");
  features
      ->add_option("--groups", ft_config.groups,
                   "feature groups: cdfa, santia, chu, chain, baselines")
      ->delimiter(',');
  features->add_flag("--baselines", ft_baselines,
                     "add the text-baseline columns");
  features->add_option("--threads", ft_config.threads,
                       "worker threads (0 = all cores)");
  features->add_option("--dpgmm-components", ft_config.dpgmm.max_components,
                       "cluster-count cap");
  features->add_option("--dpgmm-alpha", ft_config.dpgmm.alpha,
                       "concentration parameter");
  features->add_option("--dpgmm-sweeps", ft_config.dpgmm.sweeps,
                       "Gibbs sweeps");
  features->add_option("--innovation-shuffles",
                       ft_config.innovation.shuffles,
                       "shuffles averaged for the innovation rate");
  features->add_option("--symbol-cap", ft_config.temporal.symbol_cap,
                       "largest interval symbol");
  features->add_option("--max-order", ft_config.temporal.max_order,
                       "largest entropy-rate pattern length");
  features->add_option("--faucet", ft_config.chain.faucet_account,
                       "platform faucet account name");
  features->add_option("--lev-max-posts", ft_config.textbase.lev_max_posts,
                       "edit-distance cap on blog count");
  features->add_option("--lev-max-replies",
                       ft_config.textbase.lev_max_replies,
                       "edit-distance cap on reply count");
  features->add_option("--lev-truncate-chars",
                       ft_config.textbase.lev_truncate_chars,
                       "characters kept per text for edit distance");
  features->add_option("--tfidf-min-count",
                       ft_config.textbase.tfidf_min_count,
                       "corpus occurrences needed for a TF-IDF weight");

  // --- train ------------------------------------------------------------------
  auto* train = app.add_subcommand(
      "train", "fit one model on a full matrix and report training metrics");
  std::string tr_matrix;
  std::string tr_kind = "random_forest_gini";
  std::vector<std::string> tr_params;
  std::uint64_t tr_seed = 0;
  std::string tr_out;
  train->add_option("--matrix", tr_matrix, "feature matrix (CSV)")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--model", tr_kind, "classifier kind");
  train->add_option("--param", tr_params,
                    "hyperparameter as key=value (repeatable)");
  train->add_option("--seed", tr_seed, "model seed");
  train->add_option("--out", tr_out, "report path (default: stdout)");

  // --- evaluate ---------------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "nested cross-validation over feature-set combinations");
  std::string ev_matrix;
  std::string ev_out;
  std::string ev_histograms;
  botwatch::pipeline::EvalConfig ev_config;
  evaluate->add_option("--matrix", ev_matrix, "feature matrix (CSV)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev_out, "report path (default: stdout)");
  evaluate->add_option("--seed", ev_config.seed, "cross-validation seed");
  evaluate
      ->add_option("--combos", ev_config.combos,
                   "feature sets to evaluate (group names, \"all\", or "
                   "\"+\"-joined unions)")
      ->delimiter(',');
  evaluate->add_option("--outer-folds", ev_config.outer_folds,
                       "outer fold count");
  evaluate->add_option("--inner-folds", ev_config.inner_folds,
                       "inner fold count");
  evaluate->add_option("--histograms", ev_histograms,
                       "directory for per-feature value,label files");

  // --- rank -------------------------------------------------------------------
  auto* rank = app.add_subcommand(
      "rank", "rank-fuse feature importances from an evaluation report");
  std::string rk_report;
  std::string rk_combo;
  std::string rk_out;
  rank->add_option("--report", rk_report, "evaluation report (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--combo", rk_combo,
                   "feature-set name (default: first in the report)");
  rank->add_option("--out", rk_out, "ranking path (default: stdout)");

  // --- report ---------------------------------------------------------------
  auto* report = app.add_subcommand(
      "report", "render an evaluation report as Markdown");
  std::string rp_report;
  std::string rp_out;
  std::size_t rp_top = 10;
  report->add_option("--report", rp_report, "evaluation report (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--top", rp_top, "features listed per feature set");
  report->add_option("--out", rp_out, "Markdown path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      return run_ingest(in_input, in_end, in_min_activity, in_out);
    }
    if (synth->parsed()) {
      return run_synth(sy_bots, sy_humans, sy_seed, sy_out);
    }
    if (features->parsed()) {
      if (ft_baselines &&
          std::find(ft_config.groups.begin(), ft_config.groups.end(),
                    botwatch::pipeline::kGroupBaselines) ==
              ft_config.groups.end()) {
        ft_config.groups.push_back(botwatch::pipeline::kGroupBaselines);
      }
      return run_features(ft_input, ft_out, ft_end, ft_config);
    }
    if (train->parsed()) {
      return run_train(tr_matrix, tr_kind, tr_params, tr_seed, tr_out);
    }
    if (evaluate->parsed()) {
      return run_evaluate(ev_matrix, ev_config, ev_out, ev_histograms);
    }
    if (rank->parsed()) {
      return run_rank(rk_report, rk_combo, rk_out);
    }
    if (report->parsed()) {
      return run_report(rp_report, rp_out, rp_top);
    }
  } catch (const std::exception& error) {
    std::cerr << "botwatch: error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
