#include "laxary/pipeline.hpp"

#include <stdexcept>

namespace laxary::pipeline {

using corpus::CohortUser;
using corpus::UserWeek;

LaxaryModel train_laxary(const std::vector<CohortUser>& train, const LaxaryParams& params) {
  LaxaryModel model;
  model.dictionary = dict::build_dictionary(train, params.builder);
  if (params.use_calibration) {
    std::vector<std::pair<scoring::AlphaScoreMatrix, std::vector<surveys::SurveyResponse>>> pairs;
    for (const CohortUser& user : train) {
      const UserWeek* week = user.most_recent_week();
      if (!week || !user.survey_responses) continue;
      pairs.emplace_back(scoring::alpha_score_matrix(*week, model.dictionary, params.mode),
                         *user.survey_responses);
    }
    model.calibration = scoring::calibrate(pairs);
  }
  return model;
}

eval::Prediction predict_user(const LaxaryModel& model, const CohortUser& user,
                              const LaxaryParams& params, int week_offset) {
  const UserWeek* week = user.week_at_offset(week_offset);
  UserWeek empty;
  empty.user_id = user.user_id;
  if (!week) week = &empty;

  scoring::AlphaScoreMatrix alpha = scoring::alpha_score_matrix(*week, model.dictionary, params.mode);
  std::vector<surveys::FilledSurvey> filled =
      scoring::fill_all_surveys(alpha, params.demos, model.calibration);
  eval::Prediction prediction;
  prediction.user_id = user.user_id;
  prediction.label = surveys::classify_intensity(filled);
  prediction.surveys = std::move(filled);
  return prediction;
}

eval::Runner laxary_runner(const LaxaryParams& params) {
  return [params](const std::vector<CohortUser>& train, const std::vector<CohortUser>& test,
                  int offset) {
    LaxaryModel model = train_laxary(train, params);
    std::vector<eval::Prediction> predictions;
    for (const CohortUser& user : test) {
      predictions.push_back(predict_user(model, user, params, offset));
    }
    return predictions;
  };
}

namespace {

bool binary_truth(const CohortUser& user, const std::array<surveys::ToolDemographics, 3>& demos) {
  return eval::truth_label(user, demos).surveys_over > 0;
}

std::vector<std::string> week_texts(const CohortUser& user, int offset) {
  const UserWeek* week = user.week_at_offset(offset);
  if (!week) return {};
  return week->texts(corpus::View::All);
}

}  // namespace

std::vector<double> coppersmith_features(const CoppersmithModel& model,
                                         const std::vector<std::string>& texts) {
  std::vector<double> features(static_cast<std::size_t>(baseline::kCategoryCount) + 2, 0.0);
  if (texts.empty()) return features;
  std::vector<double> proportions = baseline::category_proportions(texts, model.lexicons);
  for (std::size_t i = 0; i < proportions.size(); ++i) features[i] = proportions[i];

  double ulm_positive = 0.0, clm_positive = 0.0;
  for (const std::string& text : texts) {
    if (baseline::classify_positive(model.ulm, text)) ulm_positive += 1.0;
    if (baseline::classify_positive(model.clm, text)) clm_positive += 1.0;
  }
  features[proportions.size()] = ulm_positive / static_cast<double>(texts.size());
  features[proportions.size() + 1] = clm_positive / static_cast<double>(texts.size());
  return features;
}

CoppersmithModel train_coppersmith(const std::vector<CohortUser>& train,
                                   const CoppersmithParams& params) {
  std::vector<std::string> positive_texts, negative_texts;
  for (const CohortUser& user : train) {
    std::vector<std::string>& sink =
        binary_truth(user, params.demos) ? positive_texts : negative_texts;
    for (std::string& text : week_texts(user, 0)) sink.push_back(std::move(text));
  }
  if (positive_texts.empty() || negative_texts.empty()) {
    throw std::runtime_error("train_coppersmith: need texts from both classes");
  }

  CoppersmithModel model;
  model.lexicons = baseline::default_lexicons();
  model.ulm = baseline::LmPair(
      baseline::train_lm(positive_texts, baseline::LmKind::UnigramWord, 1, params.smoothing_k),
      baseline::train_lm(negative_texts, baseline::LmKind::UnigramWord, 1, params.smoothing_k));
  model.clm = baseline::LmPair(
      baseline::train_lm(positive_texts, baseline::LmKind::CharNgram, params.char_order,
                         params.smoothing_k),
      baseline::train_lm(negative_texts, baseline::LmKind::CharNgram, params.char_order,
                         params.smoothing_k));

  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  for (const CohortUser& user : train) {
    features.push_back(coppersmith_features(model, week_texts(user, 0)));
    labels.push_back(binary_truth(user, params.demos) ? 1 : 0);
  }
  model.ranking = baseline::rank_features(features, labels);
  model.classifier = baseline::train_loglinear(features, labels, params.sgd);
  return model;
}

eval::Prediction predict_user_coppersmith(const CoppersmithModel& model, const CohortUser& user,
                                          int week_offset) {
  std::vector<double> features = coppersmith_features(model, week_texts(user, week_offset));
  bool positive = model.classifier.predict(features);
  eval::Prediction prediction;
  prediction.user_id = user.user_id;
  // the baseline is binary; intensity collapses to Low-vs-none
  prediction.label = {positive ? surveys::Level::Low : surveys::Level::NoPtsd, positive ? 1 : 0};
  return prediction;
}

eval::Runner coppersmith_runner(const CoppersmithParams& params) {
  return [params](const std::vector<CohortUser>& train, const std::vector<CohortUser>& test,
                  int offset) {
    CoppersmithModel model = train_coppersmith(train, params);
    std::vector<eval::Prediction> predictions;
    for (const CohortUser& user : test) {
      predictions.push_back(predict_user_coppersmith(model, user, offset));
    }
    return predictions;
  };
}

}  // namespace laxary::pipeline
