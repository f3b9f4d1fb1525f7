#include "laxary/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "laxary/util.hpp"

namespace laxary::eval {

using corpus::CohortUser;
using surveys::IntensityLabel;

surveys::IntensityLabel truth_label(const CohortUser& user,
                                    const std::array<surveys::ToolDemographics, 3>& demos) {
  if (!user.survey_responses) {
    throw std::runtime_error("truth_label: user " + user.user_id + " has no survey responses");
  }
  return surveys::intensity_from_responses(*user.survey_responses, demos);
}

std::pair<std::vector<CohortUser>, std::vector<CohortUser>> stratified_split(
    const std::vector<CohortUser>& users, const SplitSpec& spec) {
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
    throw std::invalid_argument("stratified_split: train_fraction must be in (0,1)");
  }
  std::vector<std::size_t> positive, negative;
  for (std::size_t i = 0; i < users.size(); ++i) {
    IntensityLabel label = truth_label(users[i], surveys::demographics_table());
    (label.surveys_over > 0 ? positive : negative).push_back(i);
  }
  if (positive.size() < 2 || negative.size() < 2) {
    throw std::runtime_error("stratified_split: each class needs at least 2 users");
  }

  std::vector<CohortUser> train, test;
  auto take = [&](std::vector<std::size_t>& indices, const char* tag) {
    util::Rng rng(util::derive_seed(spec.seed, std::string("split:") + tag));
    rng.shuffle(indices);
    auto count = static_cast<std::size_t>(
        std::lround(spec.train_fraction * static_cast<double>(indices.size())));
    // keep both classes present on both sides
    count = std::clamp<std::size_t>(count, 1, indices.size() - 1);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      (i < count ? train : test).push_back(users[indices[i]]);
    }
  };
  take(positive, "pos");
  take(negative, "neg");
  return {std::move(train), std::move(test)};
}

EvalResult evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<CohortUser>& test_users,
                    const std::array<surveys::ToolDemographics, 3>& demos) {
  if (test_users.empty() || predictions.empty()) {
    throw std::runtime_error("evaluate: empty test set");
  }
  std::map<std::string, const CohortUser*> by_id;
  for (const CohortUser& u : test_users) by_id[u.user_id] = &u;

  EvalResult result;
  double squared_error = 0.0;
  std::size_t correct = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> survey_hits;  // tool -> (hits, total)

  for (const Prediction& pred : predictions) {
    auto it = by_id.find(pred.user_id);
    if (it == by_id.end()) {
      throw std::runtime_error("evaluate: prediction for unknown user " + pred.user_id);
    }
    const CohortUser& user = *it->second;
    IntensityLabel truth = truth_label(user, demos);

    int t_score = surveys::intensity_score(truth);
    int p_score = surveys::intensity_score(pred.label);
    result.confusion[static_cast<std::size_t>(t_score)][static_cast<std::size_t>(p_score)] += 1;
    if ((t_score >= 1) == (p_score >= 1)) ++correct;
    squared_error += static_cast<double>((t_score - p_score) * (t_score - p_score));

    for (const surveys::FilledSurvey& f : pred.surveys) {
      const surveys::ToolDemographics& demo = demos[static_cast<std::size_t>(f.tool)];
      bool truth_over = false;
      for (const surveys::SurveyResponse& r : *user.survey_responses) {
        if (r.tool == f.tool) truth_over = r.total() > demo.threshold;
      }
      auto& [hits, total] = survey_hits[surveys::tool_name(f.tool)];
      if (f.over_threshold == truth_over) ++hits;
      ++total;
    }
    ++result.n;
  }

  result.accuracy = static_cast<double>(correct) / static_cast<double>(result.n);
  result.mse = squared_error / static_cast<double>(result.n);
  for (const auto& [tool, counts] : survey_hits) {
    result.per_survey_accuracy[tool] =
        static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return result;
}

std::string EvalResult::to_json() const {
  nlohmann::json j;
  j["accuracy"] = accuracy;
  j["mse"] = mse;
  j["n"] = n;
  j["per_survey_accuracy"] = per_survey_accuracy;
  j["confusion"] = confusion;
  j["config"] = config_echo;
  return j.dump(2) + "\n";
}

std::vector<CurvePoint> learning_curve(const std::vector<CohortUser>& users,
                                       const std::vector<double>& fractions, std::uint64_t seed,
                                       const Runner& runner,
                                       const std::array<surveys::ToolDemographics, 3>& demos) {
  std::vector<CurvePoint> points;
  for (double fraction : fractions) {
    if (fraction <= 0.0 || fraction >= 1.0) {
      throw std::invalid_argument("learning_curve: fractions must be in (0,1)");
    }
    auto [train, test] = stratified_split(users, SplitSpec{fraction, seed});
    EvalResult result = evaluate(runner(train, test, 0), test, demos);
    result.config_echo = "fraction=" + util::format_double(fraction, 2);
    points.push_back({fraction, std::move(result)});
  }
  return points;
}

std::vector<BacktestRow> weekly_backtest(const std::vector<CohortUser>& users,
                                         const std::vector<int>& offsets, const SplitSpec& spec,
                                         const Runner& runner,
                                         const std::array<surveys::ToolDemographics, 3>& demos) {
  auto [train, test] = stratified_split(users, spec);
  std::vector<BacktestRow> rows;
  for (int offset : offsets) {
    std::vector<CohortUser> available;
    for (const CohortUser& u : test) {
      if (u.week_at_offset(offset)) available.push_back(u);
    }
    BacktestRow row;
    row.offset = offset;
    if (!available.empty()) {
      EvalResult result = evaluate(runner(train, available, offset), available, demos);
      result.config_echo = "offset=" + std::to_string(offset);
      row.result = std::move(result);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string learning_curve_csv(const std::vector<CurvePoint>& points) {
  std::string out = "fraction,accuracy,mse\n";
  for (const CurvePoint& p : points) {
    out += util::format_double(p.fraction, 2) + "," + util::format_double(p.result.accuracy, 6) +
           "," + util::format_double(p.result.mse, 6) + "\n";
  }
  return out;
}

std::string weekly_csv(const std::vector<BacktestRow>& rows) {
  std::string out = "offset,accuracy\n";
  for (const BacktestRow& row : rows) {
    out += std::to_string(row.offset) + ",";
    if (row.result) out += util::format_double(row.result->accuracy, 6);
    out += "\n";
  }
  return out;
}

}  // namespace laxary::eval
