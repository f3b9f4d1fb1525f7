#pragma once

#include <map>
#include <string>
#include <vector>

#include "laxary/corpus.hpp"
#include "laxary/dictionary.hpp"
#include "laxary/surveys.hpp"

namespace laxary::scoring {

enum class AlphaMode { Binary, Raw };

AlphaMode alpha_mode_from_name(const std::string& name);
const char* alpha_mode_name(AlphaMode mode);

// Cronbach's alpha over an item-by-text observation matrix (rows = items,
// columns = texts): alpha = k/(k-1) * (1 - sum(item variances)/variance of
// column sums), population variances. Zero total variance is the defined
// degenerate case and returns 0. Fewer than 2 items or 2 texts throws.
// Binary mode requires {0,1} entries; raw mode nonnegative usage fractions.
double cronbach_alpha(const std::vector<std::vector<double>>& items, AlphaMode mode);

// Item-by-segment observations of one dimension over a week's first-person
// segments. binary[i][j] is 1 iff pattern i matches a token of segment j;
// raw[i][j] is matching-token count over segment token count. No
// first-person segments -> empty matrices (callers map that to score 0).
struct DimensionObservations {
  std::vector<std::string> segments;
  std::vector<std::vector<double>> binary;
  std::vector<std::vector<double>> raw;
  std::vector<int> pattern_hits;  // per pattern, segments matched
  int segments_hit = 0;           // segments matched by any pattern
};

DimensionObservations dimension_observations(const corpus::UserWeek& week,
                                             const dict::Dimension& dimension,
                                             const std::vector<dict::WordPattern>& pronouns);

struct AlphaScore {
  surveys::Tool tool{};
  int question_index = 0;
  double value = 0.0;      // clamped to [0, 1]
  double raw_alpha = 0.0;  // unclamped, kept for the report
  int segments_hit = 0;
  int total_segments = 0;
  bool degenerate = false;  // <2 patterns, <2 segments, or zero variance
};

// The 16 per-question scores for one user-week, canonical tool order.
struct AlphaScoreMatrix {
  std::vector<AlphaScore> entries;

  const AlphaScore& at(surveys::Tool tool, int question_index) const;
};

AlphaScoreMatrix alpha_score_matrix(const corpus::UserWeek& week,
                                    const dict::PtsdDictionary& dictionary,
                                    AlphaMode mode = AlphaMode::Binary);

// Monotone non-decreasing step map fitted per question; identity when empty.
struct StepMap {
  std::vector<double> knots;   // ascending alpha values
  std::vector<double> values;  // non-decreasing normalized answers

  double apply(double alpha) const;
  bool identity() const { return knots.empty(); }
};

struct Calibration {
  std::map<std::pair<int, int>, StepMap> maps;  // (tool, question) -> map

  double apply(surveys::Tool tool, int question_index, double alpha) const;
};

// answer_q = clamp(round(map_q(alpha_q) * per_question_max), 0, max);
// over_threshold is strict (total > threshold).
surveys::FilledSurvey fill_survey(const AlphaScoreMatrix& alpha,
                                  const surveys::ToolDemographics& demo,
                                  const Calibration& calibration = {});

std::vector<surveys::FilledSurvey> fill_all_surveys(
    const AlphaScoreMatrix& alpha, const std::array<surveys::ToolDemographics, 3>& demos,
    const Calibration& calibration = {});

// Fits one isotonic (pool-adjacent-violators) step map per question from
// (alpha, ground-truth answer) pairs; falls back to identity for a tool with
// fewer than 5 pairs.
Calibration calibrate(
    const std::vector<std::pair<AlphaScoreMatrix, std::vector<surveys::SurveyResponse>>>& train);

// Weighted isotonic regression (exposed for oracle tests): least-squares
// monotone non-decreasing fit of y over ascending x.
std::vector<double> isotonic_fit(const std::vector<double>& y, const std::vector<double>& w);

struct EvidenceExample {
  std::string word;  // rendered pattern
  std::vector<std::string> segments;
  int match_count = 0;
};

struct QuestionReport {
  surveys::Tool tool{};
  int question_index = 0;
  std::string label;
  double alpha = 0.0;
  double raw_alpha = 0.0;
  int answer = 0;
  bool no_evidence = false;  // "no first-person evidence"
  std::vector<EvidenceExample> evidence;
};

struct SurveyReportRow {
  surveys::Tool tool{};
  int total = 0;
  int threshold = 0;
  bool over = false;
};

struct WeekReport {
  std::string user_id;
  std::string week_start;
  surveys::IntensityLabel label;
  std::vector<SurveyReportRow> surveys;
  std::vector<QuestionReport> questions;

  std::string to_text() const;
  std::string to_json() const;  // one machine-readable record
};

// The explainability product: per question the filled answer, alpha score,
// matched dictionary words with example segments, and the threshold
// arithmetic behind the final label.
WeekReport explain_report(const corpus::UserWeek& week, const dict::PtsdDictionary& dictionary,
                          const AlphaScoreMatrix& alpha,
                          const std::vector<surveys::FilledSurvey>& filled,
                          const surveys::IntensityLabel& label);

}  // namespace laxary::scoring
