#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace laxary::cli {

// Run configuration: a flat key-value text file ("key = value", '#'
// comments); command-line flags override file values.
struct RunConfig {
  // paths
  std::string corpus_path;      // line-delimited post records
  std::string corpus_dir;       // per-user-week text files from ingest
  std::string labels_path;
  std::string responses_path;
  std::string dict_path;
  std::string calibration_path;
  std::string alphas_path;
  std::string lexicon_path;     // optional override of the built-in lexicons
  std::string out_dir = "out";

  // corpus filters
  int min_tweets = 25;
  double min_english = 0.75;

  // dictionary builder
  int top_k = 5;
  int min_df = 5;

  // scoring
  std::string alpha_mode = "binary";
  bool calibration = true;
  int dospert_threshold = 28;
  int bsss_threshold = 13;
  int vias_threshold = 15;

  // baseline
  int char_order = 3;
  double smoothing_k = 0.1;
  double learning_rate = 0.1;
  double lr_decay = 0.0;
  int epochs = 300;
  double l2 = 1e-4;
  bool shuffle = true;

  // evaluation
  double train_fraction = 0.5;
  std::vector<double> fractions = {0.2, 0.4, 0.6, 0.8};
  std::vector<int> offsets = {0, 1, 2};
  bool with_baseline = true;

  // synthetic cohort
  int n_users = 200;
  int weeks = 1;
  std::vector<double> intensity_dist = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  double noise_rate = 0.30;
  int tweets_min = 45;
  int tweets_max = 75;
  bool signal_only_latest_week = false;

  std::uint64_t seed = 42;
};

RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace laxary::cli
