#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "laxary/config.hpp"

using laxary::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"laxary: survey-aligned linguistic analysis pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::string> out_flag;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed_flag, "master seed (overrides config)");
  app.add_option("--out", out_flag, "output directory (overrides config)");

  // shared path and parameter overrides; subcommands inherit via fallthrough
  std::optional<std::string> corpus_flag, corpus_dir_flag, labels_flag, responses_flag, dict_flag,
      alphas_flag, calibration_file_flag;
  std::optional<int> min_tweets_flag, top_k_flag, min_df_flag, n_users_flag, weeks_flag;
  std::optional<double> min_english_flag, train_fraction_flag, noise_rate_flag;
  std::optional<bool> calibration_flag, with_baseline_flag, signal_only_flag;
  std::optional<std::string> alpha_mode_flag;
  bool explain = false;

  app.add_option("--corpus", corpus_flag, "line-delimited post records");
  app.add_option("--corpus-dir", corpus_dir_flag, "ingested week files");
  app.add_option("--labels", labels_flag, "ground-truth labels table");
  app.add_option("--responses", responses_flag, "per-question ground truth table");
  app.add_option("--dict", dict_flag, "dictionary path");
  app.add_option("--alphas", alphas_flag, "alpha score table");
  app.add_option("--calibration-file", calibration_file_flag, "calibration table");
  app.add_option("--min-tweets", min_tweets_flag, "eligibility: tweets in most recent week");
  app.add_option("--min-english", min_english_flag, "eligibility: English ratio");
  app.add_option("--top-k", top_k_flag, "mined stems per question");
  app.add_option("--min-df", min_df_flag, "minimum users per candidate stem");
  app.add_option("--calibration", calibration_flag, "use the isotonic calibration");
  app.add_option("--alpha-mode", alpha_mode_flag, "binary or raw");
  app.add_option("--train-fraction", train_fraction_flag, "train split fraction");
  app.add_option("--with-baseline", with_baseline_flag, "also run the baseline curve");
  app.add_option("--n-users", n_users_flag, "synthetic cohort size");
  app.add_option("--weeks", weeks_flag, "synthetic weeks of history per user");
  app.add_option("--noise-rate", noise_rate_flag, "chance a synthetic tweet is pure noise");
  app.add_option("--signal-only-latest-week", signal_only_flag,
                 "prior synthetic weeks carry no question signal");

  CLI::App* ingest = app.add_subcommand("ingest", "parse posts, filter users, write week files");
  CLI::App* build_dict = app.add_subcommand("build-dict", "build the linguistic dictionary");
  CLI::App* score = app.add_subcommand("score", "compute per-question alpha scores");
  CLI::App* fill = app.add_subcommand("fill", "fill surveys and classify intensity");
  fill->add_flag("--explain", explain, "emit per-user-week clinician reports");
  CLI::App* baseline = app.add_subcommand("baseline", "train and evaluate the blackbox baseline");
  CLI::App* eval_cmd = app.add_subcommand("eval", "end-to-end evaluation with curves");
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic cohort");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config;
    if (!config_path.empty()) config = laxary::cli::load_config_file(config_path);
    if (seed_flag) config.seed = *seed_flag;
    if (out_flag) config.out_dir = *out_flag;
    if (corpus_flag) config.corpus_path = *corpus_flag;
    if (corpus_dir_flag) config.corpus_dir = *corpus_dir_flag;
    if (labels_flag) config.labels_path = *labels_flag;
    if (responses_flag) config.responses_path = *responses_flag;
    if (dict_flag) config.dict_path = *dict_flag;
    if (alphas_flag) config.alphas_path = *alphas_flag;
    if (calibration_file_flag) config.calibration_path = *calibration_file_flag;
    if (min_tweets_flag) config.min_tweets = *min_tweets_flag;
    if (min_english_flag) config.min_english = *min_english_flag;
    if (top_k_flag) config.top_k = *top_k_flag;
    if (min_df_flag) config.min_df = *min_df_flag;
    if (calibration_flag) config.calibration = *calibration_flag;
    if (alpha_mode_flag) config.alpha_mode = *alpha_mode_flag;
    if (train_fraction_flag) config.train_fraction = *train_fraction_flag;
    if (with_baseline_flag) config.with_baseline = *with_baseline_flag;
    if (n_users_flag) config.n_users = *n_users_flag;
    if (weeks_flag) config.weeks = *weeks_flag;
    if (noise_rate_flag) config.noise_rate = *noise_rate_flag;
    if (signal_only_flag) config.signal_only_latest_week = *signal_only_flag;

    if (*ingest) return laxary::cli::cmd_ingest(config);
    if (*build_dict) return laxary::cli::cmd_build_dict(config);
    if (*score) return laxary::cli::cmd_score(config);
    if (*fill) return laxary::cli::cmd_fill(config, explain);
    if (*baseline) return laxary::cli::cmd_baseline(config);
    if (*eval_cmd) return laxary::cli::cmd_eval(config);
    if (*synth) return laxary::cli::cmd_synth(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
