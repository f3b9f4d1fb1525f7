#include "laxary/surveys.hpp"

#include <numeric>
#include <stdexcept>

namespace laxary::surveys {

namespace {

const std::array<ToolDemographics, 3> kTable = {{
    {Tool::Dospert, 5, 35, 28, 7},
    {Tool::Bsss, 6, 18, 13, 3},
    {Tool::Vias, 5, 25, 15, 5},
}};

}  // namespace

const char* tool_name(Tool tool) {
  switch (tool) {
    case Tool::Dospert: return "DOSPERT";
    case Tool::Bsss: return "BSSS";
    case Tool::Vias: return "VIAS";
  }
  return "?";
}

Tool tool_from_name(const std::string& name) {
  for (Tool t : kAllTools) {
    if (name == tool_name(t)) return t;
  }
  throw std::runtime_error("unknown tool name: " + name);
}

const ToolDemographics& demographics(Tool tool) {
  return kTable[static_cast<std::size_t>(tool)];
}

const std::array<ToolDemographics, 3>& demographics_table() { return kTable; }

std::array<ToolDemographics, 3> demographics_with_thresholds(int dospert, int bsss, int vias) {
  std::array<ToolDemographics, 3> table = kTable;
  table[0].threshold = dospert;
  table[1].threshold = bsss;
  table[2].threshold = vias;
  return table;
}

int SurveyResponse::total() const {
  return std::accumulate(answers.begin(), answers.end(), 0);
}

const char* level_name(Level level) {
  switch (level) {
    case Level::NoPtsd: return "NoPtsd";
    case Level::Low: return "Low";
    case Level::Moderate: return "Moderate";
    case Level::High: return "High";
  }
  return "?";
}

IntensityLabel classify_intensity(const std::vector<FilledSurvey>& filled) {
  std::array<int, 3> seen = {0, 0, 0};
  int over = 0;
  for (const FilledSurvey& s : filled) {
    seen[static_cast<std::size_t>(s.tool)] += 1;
    if (s.over_threshold) ++over;
  }
  for (Tool t : kAllTools) {
    if (seen[static_cast<std::size_t>(t)] != 1) {
      throw std::runtime_error(std::string("classify_intensity: need exactly one ") +
                               tool_name(t) + " survey");
    }
  }
  return IntensityLabel{level_from_score(over), over};
}

int intensity_score(const IntensityLabel& label) { return static_cast<int>(label.level); }

Level level_from_score(int score) {
  switch (score) {
    case 0: return Level::NoPtsd;
    case 1: return Level::Low;
    case 2: return Level::Moderate;
    case 3: return Level::High;
  }
  throw std::runtime_error("intensity score out of range");
}

IntensityLabel intensity_from_responses(const std::vector<SurveyResponse>& responses,
                                        const std::array<ToolDemographics, 3>& demos) {
  std::vector<FilledSurvey> filled;
  for (const SurveyResponse& r : responses) {
    const ToolDemographics& demo = demos[static_cast<std::size_t>(r.tool)];
    FilledSurvey f;
    f.tool = r.tool;
    f.answers = r.answers;
    f.total = r.total();
    f.threshold = demo.threshold;
    f.over_threshold = f.total > demo.threshold;
    filled.push_back(std::move(f));
  }
  return classify_intensity(filled);
}

}  // namespace laxary::surveys
