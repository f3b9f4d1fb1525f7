#pragma once

#include <array>
#include <string>
#include <vector>

namespace laxary::surveys {

// The three Dryhootch-chosen assessment tools, always in this order.
enum class Tool { Dospert = 0, Bsss = 1, Vias = 2 };

inline constexpr std::array<Tool, 3> kAllTools = {Tool::Dospert, Tool::Bsss, Tool::Vias};
inline constexpr int kTotalQuestions = 16;  // 5 + 6 + 5

const char* tool_name(Tool tool);
Tool tool_from_name(const std::string& name);  // throws on unknown name

// Per-tool scale demographics: question count, total points, risk threshold
// and the per-question answer ceiling (total_points / chosen_questions).
struct ToolDemographics {
  Tool tool;
  int chosen_questions;
  int total_points;
  int threshold;
  int per_question_max;

  bool operator==(const ToolDemographics&) const = default;
};

// Canonical table: DOSPERT (5, 35, 28, 7), BSSS (6, 18, 13, 3), VIAS (5, 25, 15, 5).
const ToolDemographics& demographics(Tool tool);
const std::array<ToolDemographics, 3>& demographics_table();

// Same table with overridden thresholds (the one knob configs may move).
std::array<ToolDemographics, 3> demographics_with_thresholds(int dospert, int bsss, int vias);

// A respondent's ground-truth answers for one tool. Answer 0 means the
// question was skipped; skipped questions count as 0 toward the total.
struct SurveyResponse {
  Tool tool{};
  std::vector<int> answers;

  int total() const;
  bool operator==(const SurveyResponse&) const = default;
};

// One survey estimated from text: per-question answers, their sum and the
// strict threshold flag (total > threshold; equality is not over).
struct FilledSurvey {
  Tool tool{};
  std::vector<int> answers;
  int total = 0;
  int threshold = 0;
  bool over_threshold = false;

  bool operator==(const FilledSurvey&) const = default;
};

enum class Level { NoPtsd = 0, Low = 1, Moderate = 2, High = 3 };

const char* level_name(Level level);

struct IntensityLabel {
  Level level = Level::NoPtsd;
  int surveys_over = 0;

  bool operator==(const IntensityLabel&) const = default;
};

// Dryhootch rule: intensity = number of surveys whose total exceeds its
// threshold (3 -> High, 2 -> Moderate, 1 -> Low, 0 -> NoPtsd).
// Requires exactly one filled survey per tool; throws otherwise.
IntensityLabel classify_intensity(const std::vector<FilledSurvey>& filled);

int intensity_score(const IntensityLabel& label);
Level level_from_score(int score);

// Ground-truth intensity of a full response set, using the given demographics.
IntensityLabel intensity_from_responses(const std::vector<SurveyResponse>& responses,
                                        const std::array<ToolDemographics, 3>& demos);

}  // namespace laxary::surveys
