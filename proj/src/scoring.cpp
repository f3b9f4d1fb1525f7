#include "laxary/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "laxary/util.hpp"

namespace laxary::scoring {

using surveys::Tool;

AlphaMode alpha_mode_from_name(const std::string& name) {
  if (name == "binary") return AlphaMode::Binary;
  if (name == "raw") return AlphaMode::Raw;
  throw std::runtime_error("unknown alpha mode: " + name);
}

const char* alpha_mode_name(AlphaMode mode) {
  return mode == AlphaMode::Binary ? "binary" : "raw";
}

namespace {

double population_variance(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return var / static_cast<double>(values.size());
}

}  // namespace

double cronbach_alpha(const std::vector<std::vector<double>>& items, AlphaMode mode) {
  const std::size_t k = items.size();
  if (k < 2) throw std::invalid_argument("cronbach_alpha: need at least 2 items");
  const std::size_t n = items[0].size();
  if (n < 2) throw std::invalid_argument("cronbach_alpha: need at least 2 texts");
  for (const std::vector<double>& row : items) {
    if (row.size() != n) throw std::invalid_argument("cronbach_alpha: ragged matrix");
    for (double v : row) {
      if (mode == AlphaMode::Binary && v != 0.0 && v != 1.0) {
        throw std::invalid_argument("cronbach_alpha: binary mode requires {0,1} entries");
      }
      if (mode == AlphaMode::Raw && v < 0.0) {
        throw std::invalid_argument("cronbach_alpha: raw mode requires nonnegative entries");
      }
    }
  }

  double item_variance_sum = 0.0;
  for (const std::vector<double>& row : items) item_variance_sum += population_variance(row);

  std::vector<double> column_sums(n, 0.0);
  for (const std::vector<double>& row : items) {
    for (std::size_t j = 0; j < n; ++j) column_sums[j] += row[j];
  }
  double total_variance = population_variance(column_sums);
  if (total_variance == 0.0) return 0.0;

  return (static_cast<double>(k) / static_cast<double>(k - 1)) *
         (1.0 - item_variance_sum / total_variance);
}

DimensionObservations dimension_observations(const corpus::UserWeek& week,
                                             const dict::Dimension& dimension,
                                             const std::vector<dict::WordPattern>& pronouns) {
  DimensionObservations obs;
  obs.segments = dict::week_first_person_segments(week, pronouns);
  const std::size_t k = dimension.patterns.size();
  const std::size_t n = obs.segments.size();
  obs.binary.assign(k, std::vector<double>(n, 0.0));
  obs.raw.assign(k, std::vector<double>(n, 0.0));
  obs.pattern_hits.assign(k, 0);

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::string> tokens = corpus::dict_tokens(obs.segments[j]);
    if (tokens.empty()) continue;
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      int matches = 0;
      for (const std::string& token : tokens) {
        if (dict::match_pattern(dimension.patterns[i], token)) ++matches;
      }
      if (matches > 0) {
        obs.binary[i][j] = 1.0;
        obs.raw[i][j] = static_cast<double>(matches) / static_cast<double>(tokens.size());
        obs.pattern_hits[i] += 1;
        any = true;
      }
    }
    if (any) obs.segments_hit += 1;
  }
  return obs;
}

const AlphaScore& AlphaScoreMatrix::at(Tool tool, int question_index) const {
  for (const AlphaScore& e : entries) {
    if (e.tool == tool && e.question_index == question_index) return e;
  }
  throw std::runtime_error("alpha matrix missing entry");
}

AlphaScoreMatrix alpha_score_matrix(const corpus::UserWeek& week,
                                    const dict::PtsdDictionary& dictionary, AlphaMode mode) {
  AlphaScoreMatrix matrix;
  for (const dict::Dimension* dim : dictionary.all_dimensions()) {
    DimensionObservations obs = dimension_observations(week, *dim, dictionary.pronoun_filter);
    AlphaScore score;
    score.tool = dim->tool;
    score.question_index = dim->question_index;
    score.segments_hit = obs.segments_hit;
    score.total_segments = static_cast<int>(obs.segments.size());
    if (dim->patterns.size() < 2 || obs.segments.size() < 2) {
      score.degenerate = true;
    } else {
      double alpha = cronbach_alpha(mode == AlphaMode::Binary ? obs.binary : obs.raw, mode);
      score.raw_alpha = alpha;
      score.value = std::clamp(alpha, 0.0, 1.0);
      score.degenerate = alpha == 0.0 && score.segments_hit == 0;
    }
    matrix.entries.push_back(score);
  }
  return matrix;
}

double StepMap::apply(double alpha) const {
  if (knots.empty()) return alpha;  // identity
  // rightmost knot <= alpha; below the first knot use the first value
  std::size_t lo = 0;
  if (alpha < knots[0]) return values[0];
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i] <= alpha) lo = i;
  }
  return values[lo];
}

double Calibration::apply(Tool tool, int question_index, double alpha) const {
  auto it = maps.find({static_cast<int>(tool), question_index});
  if (it == maps.end()) return alpha;
  return it->second.apply(alpha);
}

surveys::FilledSurvey fill_survey(const AlphaScoreMatrix& alpha,
                                  const surveys::ToolDemographics& demo,
                                  const Calibration& calibration) {
  surveys::FilledSurvey filled;
  filled.tool = demo.tool;
  filled.threshold = demo.threshold;
  for (int q = 1; q <= demo.chosen_questions; ++q) {
    double a = alpha.at(demo.tool, q).value;
    double mapped = calibration.apply(demo.tool, q, a);
    long answer = std::lround(mapped * demo.per_question_max);
    answer = std::clamp(answer, 0L, static_cast<long>(demo.per_question_max));
    filled.answers.push_back(static_cast<int>(answer));
    filled.total += static_cast<int>(answer);
  }
  filled.over_threshold = filled.total > demo.threshold;
  return filled;
}

std::vector<surveys::FilledSurvey> fill_all_surveys(
    const AlphaScoreMatrix& alpha, const std::array<surveys::ToolDemographics, 3>& demos,
    const Calibration& calibration) {
  std::vector<surveys::FilledSurvey> out;
  for (const surveys::ToolDemographics& demo : demos) {
    out.push_back(fill_survey(alpha, demo, calibration));
  }
  return out;
}

std::vector<double> isotonic_fit(const std::vector<double>& y, const std::vector<double>& w) {
  // Pool-adjacent-violators, weighted least squares.
  struct Block {
    double sum;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i] * w[i], w[i], 1});
    while (blocks.size() >= 2) {
      Block& last = blocks[blocks.size() - 1];
      Block& prev = blocks[blocks.size() - 2];
      if (prev.sum / prev.weight <= last.sum / last.weight) break;
      prev.sum += last.sum;
      prev.weight += last.weight;
      prev.count += last.count;
      blocks.pop_back();
    }
  }
  std::vector<double> fitted;
  fitted.reserve(y.size());
  for (const Block& b : blocks) {
    double value = b.sum / b.weight;
    for (std::size_t i = 0; i < b.count; ++i) fitted.push_back(value);
  }
  return fitted;
}

Calibration calibrate(
    const std::vector<std::pair<AlphaScoreMatrix, std::vector<surveys::SurveyResponse>>>& train) {
  Calibration cal;
  for (Tool tool : surveys::kAllTools) {
    const surveys::ToolDemographics& demo = surveys::demographics(tool);

    std::size_t pairs = 0;
    for (const auto& [matrix, responses] : train) {
      for (const surveys::SurveyResponse& r : responses) {
        if (r.tool == tool) ++pairs;
      }
    }
    if (pairs < 5) continue;  // identity fallback for this tool

    for (int q = 1; q <= demo.chosen_questions; ++q) {
      std::vector<std::pair<double, double>> points;  // (alpha, normalized answer)
      for (const auto& [matrix, responses] : train) {
        for (const surveys::SurveyResponse& r : responses) {
          if (r.tool != tool) continue;
          double answer = r.answers[static_cast<std::size_t>(q - 1)];
          points.emplace_back(matrix.at(tool, q).value,
                              answer / static_cast<double>(demo.per_question_max));
        }
      }
      std::sort(points.begin(), points.end());

      // merge duplicate alphas before PAV
      std::vector<double> xs, ys, ws;
      for (const auto& [x, y] : points) {
        if (!xs.empty() && xs.back() == x) {
          ys.back() = (ys.back() * ws.back() + y) / (ws.back() + 1.0);
          ws.back() += 1.0;
        } else {
          xs.push_back(x);
          ys.push_back(y);
          ws.push_back(1.0);
        }
      }
      StepMap map;
      map.knots = xs;
      map.values = isotonic_fit(ys, ws);
      cal.maps[{static_cast<int>(tool), q}] = std::move(map);
    }
  }
  return cal;
}

WeekReport explain_report(const corpus::UserWeek& week, const dict::PtsdDictionary& dictionary,
                          const AlphaScoreMatrix& alpha,
                          const std::vector<surveys::FilledSurvey>& filled,
                          const surveys::IntensityLabel& label) {
  WeekReport report;
  report.user_id = week.user_id;
  report.week_start = util::format_date(week.week_start);
  report.label = label;
  for (const surveys::FilledSurvey& f : filled) {
    report.surveys.push_back({f.tool, f.total, f.threshold, f.over_threshold});
  }

  for (const dict::Dimension* dim : dictionary.all_dimensions()) {
    DimensionObservations obs = dimension_observations(week, *dim, dictionary.pronoun_filter);
    const AlphaScore& score = alpha.at(dim->tool, dim->question_index);

    QuestionReport q;
    q.tool = dim->tool;
    q.question_index = dim->question_index;
    q.label = dim->label;
    q.alpha = score.value;
    q.raw_alpha = score.raw_alpha;
    for (const surveys::FilledSurvey& f : filled) {
      if (f.tool == dim->tool) {
        q.answer = f.answers[static_cast<std::size_t>(dim->question_index - 1)];
      }
    }
    q.no_evidence = score.segments_hit == 0;

    // strongest matched words first (by segments matched, then stem)
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < dim->patterns.size(); ++i) {
      if (obs.pattern_hits[i] > 0) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (obs.pattern_hits[a] != obs.pattern_hits[b]) {
        return obs.pattern_hits[a] > obs.pattern_hits[b];
      }
      return dim->patterns[a].stem < dim->patterns[b].stem;
    });
    for (std::size_t i : order) {
      EvidenceExample example;
      example.word = dict::render_pattern(dim->patterns[i]);
      example.match_count = obs.pattern_hits[i];
      for (std::size_t j = 0; j < obs.segments.size() && example.segments.size() < 2; ++j) {
        if (obs.binary[i][j] > 0.0) example.segments.push_back(obs.segments[j]);
      }
      q.evidence.push_back(std::move(example));
    }
    report.questions.push_back(std::move(q));
  }
  return report;
}

std::string WeekReport::to_text() const {
  std::ostringstream out;
  out << "user " << user_id << " week " << week_start << "\n";
  out << "level: " << surveys::level_name(label.level) << " (" << label.surveys_over
      << "/3 surveys over threshold)\n";
  for (const SurveyReportRow& s : surveys) {
    out << "  " << surveys::tool_name(s.tool) << ": total " << s.total
        << (s.over ? " > " : " <= ") << "threshold " << s.threshold
        << (s.over ? " (over)" : " (not over)") << "\n";
  }
  for (const QuestionReport& q : questions) {
    out << "  " << surveys::tool_name(q.tool) << ":" << q.question_index << " '" << q.label
        << "'\n";
    out << "    answer " << q.answer << "  alpha " << util::format_double(q.alpha, 3) << " (raw "
        << util::format_double(q.raw_alpha, 3) << ")\n";
    if (q.no_evidence) {
      out << "    no first-person evidence\n";
      continue;
    }
    for (const EvidenceExample& e : q.evidence) {
      out << "    " << e.word << " [" << e.match_count << " segment"
          << (e.match_count == 1 ? "" : "s") << "]";
      for (const std::string& seg : e.segments) {
        out << " \"" << seg << "\"";
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string WeekReport::to_json() const {
  nlohmann::json j;
  j["user_id"] = user_id;
  j["week_start"] = week_start;
  j["level"] = intensity_score(label);
  j["surveys_over"] = label.surveys_over;
  j["surveys"] = nlohmann::json::array();
  for (const SurveyReportRow& s : surveys) {
    j["surveys"].push_back({{"tool", surveys::tool_name(s.tool)},
                            {"total", s.total},
                            {"threshold", s.threshold},
                            {"over", s.over}});
  }
  j["questions"] = nlohmann::json::array();
  for (const QuestionReport& q : questions) {
    nlohmann::json jq;
    jq["tool"] = surveys::tool_name(q.tool);
    jq["question_index"] = q.question_index;
    jq["label"] = q.label;
    jq["alpha"] = q.alpha;
    jq["raw_alpha"] = q.raw_alpha;
    jq["answer"] = q.answer;
    jq["no_evidence"] = q.no_evidence;
    jq["evidence"] = nlohmann::json::array();
    for (const EvidenceExample& e : q.evidence) {
      jq["evidence"].push_back(
          {{"word", e.word}, {"match_count", e.match_count}, {"segments", e.segments}});
    }
    j["questions"].push_back(std::move(jq));
  }
  return j.dump();
}

}  // namespace laxary::scoring
