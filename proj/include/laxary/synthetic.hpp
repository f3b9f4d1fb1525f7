#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "laxary/corpus.hpp"

namespace laxary::eval {

// Planted-signal cohort generator for desk-scale experiments. Each generated
// user gets ground-truth survey answers realizing a sampled intensity level
// (totals land in bands safely over or under the thresholds) and a stream of
// first-person tweets whose question-specific signal words appear at rates
// that grow with the corresponding answer.
struct SyntheticCohortSpec {
  int n_users = 200;
  std::array<double, 4> intensity_distribution = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  double noise_rate = 0.30;  // chance a tweet carries no question signal
  int tweets_per_week_min = 45;
  int tweets_per_week_max = 75;
  int weeks = 1;
  bool signal_only_latest_week = false;  // prior weeks become pure noise
  std::uint64_t seed = 42;

  // signal pools indexed [tool][question-1]; must be disjoint from the noise
  // vocabulary
  std::vector<std::vector<std::vector<std::string>>> pools;
  std::vector<std::string> noise_vocabulary;
};

const std::vector<std::vector<std::vector<std::string>>>& default_signal_pools();
const std::vector<std::string>& default_noise_vocabulary();

// Deterministic given the spec (including seed). Validates the intensity
// distribution and pool/noise disjointness.
std::vector<corpus::CohortUser> generate_synthetic_cohort(const SyntheticCohortSpec& spec);

// All raw tweets of a cohort as the line-delimited ingestion format.
std::string cohort_to_jsonl(const std::vector<corpus::CohortUser>& users);

// Ground-truth artifacts.
std::string cohort_labels_csv(const std::vector<corpus::CohortUser>& users);
std::string cohort_responses_csv(const std::vector<corpus::CohortUser>& users);

// Parses the responses table back into per-user survey answers.
std::map<std::string, std::vector<surveys::SurveyResponse>> parse_responses_csv(
    const std::string& text);

// Parses the labels table: user_id -> (three totals, self_identified).
struct LabelRow {
  std::array<int, 3> totals = {0, 0, 0};
  bool self_identified = false;
};
std::map<std::string, LabelRow> parse_labels_csv(const std::string& text);

}  // namespace laxary::eval
