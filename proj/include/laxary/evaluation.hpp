#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laxary/corpus.hpp"
#include "laxary/surveys.hpp"

namespace laxary::eval {

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 42;
};

// Stratifies on the binary PTSD label derived from ground-truth responses.
// Both classes stay represented on both sides when counts permit; the result
// is deterministic given the seed. A class with fewer than 2 users throws.
std::pair<std::vector<corpus::CohortUser>, std::vector<corpus::CohortUser>> stratified_split(
    const std::vector<corpus::CohortUser>& users, const SplitSpec& spec);

// Ground-truth intensity of a user (requires survey_responses).
surveys::IntensityLabel truth_label(const corpus::CohortUser& user,
                                    const std::array<surveys::ToolDemographics, 3>& demos);

struct Prediction {
  std::string user_id;
  surveys::IntensityLabel label;
  std::vector<surveys::FilledSurvey> surveys;  // may be empty for binary-only baselines
};

struct EvalResult {
  double accuracy = 0.0;  // binary: level >= 1 vs 0
  double mse = 0.0;       // on intensity scores 0..3
  std::map<std::string, double> per_survey_accuracy;
  std::array<std::array<int, 4>, 4> confusion = {};  // [truth][predicted]
  std::size_t n = 0;
  std::string config_echo;

  std::string to_json() const;
};

// Compares predictions against users' ground-truth responses (aligned by
// user id). Throws on an empty test set.
EvalResult evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<corpus::CohortUser>& test_users,
                    const std::array<surveys::ToolDemographics, 3>& demos);

// train users, test users, week offset (0 = most recent) -> predictions
using Runner = std::function<std::vector<Prediction>(const std::vector<corpus::CohortUser>&,
                                                     const std::vector<corpus::CohortUser>&, int)>;

struct CurvePoint {
  double fraction = 0.0;
  EvalResult result;
};

// One split -> train -> evaluate per fraction, all under the same seed policy
// (the split seed derives from `seed` alone, so fraction 0.5 reproduces the
// single-split run).
std::vector<CurvePoint> learning_curve(const std::vector<corpus::CohortUser>& users,
                                       const std::vector<double>& fractions, std::uint64_t seed,
                                       const Runner& runner,
                                       const std::array<surveys::ToolDemographics, 3>& demos);

struct BacktestRow {
  int offset = 0;
  std::optional<EvalResult> result;  // absent when no test user has that week
};

std::vector<BacktestRow> weekly_backtest(const std::vector<corpus::CohortUser>& users,
                                         const std::vector<int>& offsets, const SplitSpec& spec,
                                         const Runner& runner,
                                         const std::array<surveys::ToolDemographics, 3>& demos);

std::string learning_curve_csv(const std::vector<CurvePoint>& points);
std::string weekly_csv(const std::vector<BacktestRow>& rows);

}  // namespace laxary::eval
