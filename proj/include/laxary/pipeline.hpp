#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "laxary/baseline.hpp"
#include "laxary/corpus.hpp"
#include "laxary/dictionary.hpp"
#include "laxary/evaluation.hpp"
#include "laxary/scoring.hpp"

namespace laxary::pipeline {

// Survey-filling pipeline: build dictionary -> alpha-score -> calibrate ->
// fill -> classify.
struct LaxaryParams {
  dict::BuilderParams builder;
  scoring::AlphaMode mode = scoring::AlphaMode::Binary;
  bool use_calibration = true;
  std::array<surveys::ToolDemographics, 3> demos = surveys::demographics_table();
};

struct LaxaryModel {
  dict::PtsdDictionary dictionary;
  scoring::Calibration calibration;
};

LaxaryModel train_laxary(const std::vector<corpus::CohortUser>& train,
                         const LaxaryParams& params);

eval::Prediction predict_user(const LaxaryModel& model, const corpus::CohortUser& user,
                              const LaxaryParams& params, int week_offset = 0);

eval::Runner laxary_runner(const LaxaryParams& params);

// Blackbox comparison model: positive/negative unigram and character n-gram
// language model pairs plus the nine category proportions, fed as an
// 11-feature vector to a loglinear classifier.
struct CoppersmithParams {
  int char_order = 3;
  double smoothing_k = 0.1;
  baseline::SgdConfig sgd;
  std::array<surveys::ToolDemographics, 3> demos = surveys::demographics_table();
};

struct CoppersmithModel {
  baseline::LmPair ulm;
  baseline::LmPair clm;
  std::vector<baseline::CategoryLexicon> lexicons;
  baseline::LoglinearModel classifier;
  std::vector<baseline::FeatureRank> ranking;
};

// 9 lexicon proportions + ULM and CLM positive-tweet proportions.
std::vector<double> coppersmith_features(const CoppersmithModel& model,
                                         const std::vector<std::string>& texts);

CoppersmithModel train_coppersmith(const std::vector<corpus::CohortUser>& train,
                                   const CoppersmithParams& params);

eval::Prediction predict_user_coppersmith(const CoppersmithModel& model,
                                          const corpus::CohortUser& user, int week_offset = 0);

eval::Runner coppersmith_runner(const CoppersmithParams& params);

}  // namespace laxary::pipeline
