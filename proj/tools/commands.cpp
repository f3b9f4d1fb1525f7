#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "laxary/baseline.hpp"
#include "laxary/corpus.hpp"
#include "laxary/dictionary.hpp"
#include "laxary/evaluation.hpp"
#include "laxary/pipeline.hpp"
#include "laxary/scoring.hpp"
#include "laxary/synthetic.hpp"
#include "laxary/util.hpp"

namespace fs = std::filesystem;

namespace laxary::cli {

namespace {

using corpus::CohortUser;
using corpus::UserWeek;
using surveys::Tool;

// --- path wiring -----------------------------------------------------------

void fill_default_paths(RunConfig& config) {
  auto join = [&](const char* name) { return (fs::path(config.out_dir) / name).string(); };
  if (config.corpus_path.empty()) config.corpus_path = join("corpus.jsonl");
  if (config.corpus_dir.empty()) config.corpus_dir = join("corpus");
  if (config.labels_path.empty()) config.labels_path = join("labels.csv");
  if (config.responses_path.empty()) config.responses_path = join("responses.csv");
  if (config.dict_path.empty()) config.dict_path = join("dict.txt");
  if (config.calibration_path.empty()) config.calibration_path = join("calibration.csv");
  if (config.alphas_path.empty()) config.alphas_path = join("alphas.csv");
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path, const std::string& producer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::string hint = producer.empty() ? "" : "; run `laxary " + producer + "` first";
    throw std::runtime_error("missing " + path.string() + hint);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out;
}

std::array<surveys::ToolDemographics, 3> demos_from_config(const RunConfig& config) {
  return surveys::demographics_with_thresholds(config.dospert_threshold, config.bsss_threshold,
                                               config.vias_threshold);
}

pipeline::LaxaryParams laxary_params(const RunConfig& config) {
  pipeline::LaxaryParams params;
  params.builder.top_k = config.top_k;
  params.builder.min_df = config.min_df;
  params.mode = scoring::alpha_mode_from_name(config.alpha_mode);
  params.use_calibration = config.calibration;
  params.demos = demos_from_config(config);
  return params;
}

pipeline::CoppersmithParams coppersmith_params(const RunConfig& config) {
  pipeline::CoppersmithParams params;
  params.char_order = config.char_order;
  params.smoothing_k = config.smoothing_k;
  params.sgd.learning_rate = config.learning_rate;
  params.sgd.lr_decay = config.lr_decay;
  params.sgd.epochs = config.epochs;
  params.sgd.l2 = config.l2;
  params.sgd.shuffle = config.shuffle;
  params.sgd.seed = util::derive_seed(config.seed, "sgd");
  params.demos = demos_from_config(config);
  return params;
}

std::string config_echo(const RunConfig& config) {
  return "seed=" + std::to_string(config.seed) + " top_k=" + std::to_string(config.top_k) +
         " min_df=" + std::to_string(config.min_df) +
         " calibration=" + (config.calibration ? "on" : "off") +
         " alpha_mode=" + config.alpha_mode +
         " train_fraction=" + util::format_double(config.train_fraction, 2);
}

// --- corpus directory round trip -------------------------------------------

std::string week_file_name(std::int64_t week_start, const char* view) {
  return util::format_date(week_start) + "_" + view + ".txt";
}

void write_week_views(const fs::path& user_dir, const UserWeek& week) {
  std::string all, work, nonwork;
  for (std::size_t i = 0; i < week.normalized_texts.size(); ++i) {
    const std::string& line = week.normalized_texts[i];
    all += line + "\n";
    if (week.work_related[i]) {
      work += line + "\n";
    } else {
      nonwork += line + "\n";
    }
  }
  write_file(user_dir / week_file_name(week.week_start, "all"), all);
  write_file(user_dir / week_file_name(week.week_start, "work"), work);
  write_file(user_dir / week_file_name(week.week_start, "nonwork"), nonwork);
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<CohortUser> read_corpus_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("missing corpus directory " + dir.string() +
                             "; run `laxary ingest` first");
  }
  std::map<std::string, CohortUser> users;
  std::vector<fs::path> user_dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) user_dirs.push_back(entry.path());
  }
  std::sort(user_dirs.begin(), user_dirs.end());

  for (const fs::path& user_dir : user_dirs) {
    CohortUser user;
    user.user_id = user_dir.filename().string();
    std::map<std::int64_t, UserWeek> weeks;
    for (const auto& entry : fs::directory_iterator(user_dir)) {
      std::string name = entry.path().filename().string();
      const std::string suffix = "_all.txt";
      if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix) {
        continue;
      }
      std::string date = name.substr(0, name.size() - suffix.size());
      UserWeek week;
      week.user_id = user.user_id;
      week.week_start = util::parse_date(date);
      week.normalized_texts = read_lines(entry.path());

      std::multiset<std::string> work_lines;
      fs::path work_path = user_dir / (date + "_work.txt");
      if (fs::exists(work_path)) {
        for (std::string& line : read_lines(work_path)) work_lines.insert(std::move(line));
      }
      for (const std::string& line : week.normalized_texts) {
        auto it = work_lines.find(line);
        if (it != work_lines.end()) {
          week.work_related.push_back(true);
          work_lines.erase(it);
        } else {
          week.work_related.push_back(false);
        }
      }
      weeks[week.week_start] = std::move(week);
    }
    for (auto& [start, week] : weeks) user.weeks.push_back(std::move(week));
    if (!user.weeks.empty()) users[user.user_id] = std::move(user);
  }

  std::vector<CohortUser> out;
  for (auto& [id, user] : users) out.push_back(std::move(user));
  return out;
}

// Attaches ground truth; keeps only users that have all three responses.
std::vector<CohortUser> attach_responses(std::vector<CohortUser> users,
                                         const RunConfig& config) {
  auto responses = eval::parse_responses_csv(read_file(config.responses_path, "synth"));
  std::vector<CohortUser> out;
  for (CohortUser& user : users) {
    auto it = responses.find(user.user_id);
    if (it == responses.end() || it->second.size() != 3) continue;
    user.survey_responses = it->second;
    out.push_back(std::move(user));
  }
  if (fs::exists(config.labels_path)) {
    auto labels = eval::parse_labels_csv(read_file(config.labels_path, "synth"));
    for (CohortUser& user : out) {
      auto it = labels.find(user.user_id);
      if (it != labels.end()) user.self_identified_ptsd = it->second.self_identified;
    }
  }
  return out;
}

// Fallback when only totals are known: spread each total over the questions.
std::vector<surveys::SurveyResponse> responses_from_totals(const std::array<int, 3>& totals) {
  std::vector<surveys::SurveyResponse> responses;
  for (Tool tool : surveys::kAllTools) {
    const surveys::ToolDemographics& demo = surveys::demographics(tool);
    surveys::SurveyResponse r;
    r.tool = tool;
    int remaining = totals[static_cast<std::size_t>(tool)];
    for (int q = 0; q < demo.chosen_questions; ++q) {
      int a = std::min(remaining, demo.per_question_max);
      r.answers.push_back(a);
      remaining -= a;
    }
    responses.push_back(std::move(r));
  }
  return responses;
}

std::vector<CohortUser> attach_labels_as_truth(std::vector<CohortUser> users,
                                               const RunConfig& config) {
  auto labels = eval::parse_labels_csv(read_file(config.labels_path, "synth"));
  std::vector<CohortUser> out;
  for (CohortUser& user : users) {
    auto it = labels.find(user.user_id);
    if (it == labels.end()) continue;
    user.survey_responses = responses_from_totals(it->second.totals);
    user.self_identified_ptsd = it->second.self_identified;
    out.push_back(std::move(user));
  }
  return out;
}

// --- calibration and alpha tables ------------------------------------------

std::string calibration_csv(const scoring::Calibration& calibration) {
  std::string out = "tool,question,alpha,value\n";
  for (const auto& [key, map] : calibration.maps) {
    for (std::size_t i = 0; i < map.knots.size(); ++i) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g\n",
                    surveys::tool_name(static_cast<Tool>(key.first)), key.second, map.knots[i],
                    map.values[i]);
      out += buf;
    }
  }
  return out;
}

scoring::Calibration parse_calibration_csv(const std::string& text) {
  scoring::Calibration calibration;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (util::trim(line).empty()) continue;
    std::istringstream row(line);
    std::string tool_str, question_str, alpha_str, value_str;
    std::getline(row, tool_str, ',');
    std::getline(row, question_str, ',');
    std::getline(row, alpha_str, ',');
    std::getline(row, value_str, ',');
    Tool tool = surveys::tool_from_name(tool_str);
    scoring::StepMap& map = calibration.maps[{static_cast<int>(tool), std::stoi(question_str)}];
    map.knots.push_back(std::stod(alpha_str));
    map.values.push_back(std::stod(value_str));
  }
  return calibration;
}

std::string alphas_csv_header() {
  return "user_id,week_start,tool,question,alpha,raw_alpha,segments_hit,total_segments\n";
}

std::string alphas_csv_rows(const std::string& user_id, std::int64_t week_start,
                            const scoring::AlphaScoreMatrix& matrix) {
  std::string out;
  for (const scoring::AlphaScore& e : matrix.entries) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%d,%.17g,%.17g,%d,%d\n", user_id.c_str(),
                  util::format_date(week_start).c_str(), surveys::tool_name(e.tool),
                  e.question_index, e.value, e.raw_alpha, e.segments_hit, e.total_segments);
    out += buf;
  }
  return out;
}

struct AlphaTable {
  // (user, week date) -> matrix
  std::map<std::pair<std::string, std::string>, scoring::AlphaScoreMatrix> entries;
};

AlphaTable parse_alphas_csv(const std::string& text) {
  AlphaTable table;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (util::trim(line).empty()) continue;
    std::istringstream row(line);
    std::string user, date, tool_str, question, alpha, raw, hits, segments;
    std::getline(row, user, ',');
    std::getline(row, date, ',');
    std::getline(row, tool_str, ',');
    std::getline(row, question, ',');
    std::getline(row, alpha, ',');
    std::getline(row, raw, ',');
    std::getline(row, hits, ',');
    std::getline(row, segments, ',');
    scoring::AlphaScore score;
    score.tool = surveys::tool_from_name(tool_str);
    score.question_index = std::stoi(question);
    score.value = std::stod(alpha);
    score.raw_alpha = std::stod(raw);
    score.segments_hit = std::stoi(hits);
    score.total_segments = std::stoi(segments);
    table.entries[{user, date}].entries.push_back(score);
  }
  for (const auto& [key, matrix] : table.entries) {
    if (matrix.entries.size() != surveys::kTotalQuestions) {
      throw std::runtime_error("alpha table for " + key.first + "/" + key.second +
                               " does not have 16 entries");
    }
  }
  return table;
}

}  // namespace

// --- commands ---------------------------------------------------------------

int cmd_ingest(RunConfig config) {
  fill_default_paths(config);
  std::ifstream in(config.corpus_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open corpus file: " << config.corpus_path << "\n";
    return 1;
  }
  corpus::ParseResult parsed = corpus::parse_post_stream(in);

  std::map<std::string, std::vector<corpus::Tweet>> by_user;
  for (corpus::Tweet& tweet : parsed.tweets) by_user[tweet.user_id].push_back(std::move(tweet));

  std::vector<CohortUser> users;
  for (auto& [user_id, tweets] : by_user) {
    CohortUser user;
    user.user_id = user_id;
    user.weeks = corpus::bucket_weekly(tweets);
    users.push_back(std::move(user));
  }

  corpus::EligibilityCounts counts;
  std::vector<CohortUser> kept =
      corpus::filter_eligible_users(users, config.min_tweets, config.min_english, &counts);

  for (const CohortUser& user : kept) {
    fs::path user_dir = fs::path(config.corpus_dir) / sanitize_id(user.user_id);
    for (const UserWeek& week : user.weeks) write_week_views(user_dir, week);
  }

  std::string rejects;
  for (const corpus::RejectEntry& r : parsed.rejects) {
    rejects += "line " + std::to_string(r.line_number) + ": " + r.reason + "\n";
  }
  write_file(fs::path(config.out_dir) / "rejects.txt", rejects);

  std::string selfid = "user_id,tweet_id,matched\n";
  for (const CohortUser& user : users) {
    std::vector<corpus::Tweet> all_tweets;
    for (const UserWeek& week : user.weeks) {
      all_tweets.insert(all_tweets.end(), week.raw_tweets.begin(), week.raw_tweets.end());
    }
    for (const corpus::SelfIdMatch& m : corpus::find_self_identification(all_tweets)) {
      selfid += user.user_id + "," + m.tweet.id + ",\"" + m.matched + "\"\n";
    }
  }
  write_file(fs::path(config.out_dir) / "selfid_report.csv", selfid);

  std::cout << "tweets parsed: " << parsed.tweets.size() << "\n";
  std::cout << "rejects: " << parsed.rejects.size() << "\n";
  std::cout << "users kept: " << counts.kept << "\n";
  std::cout << "dropped: " << counts.dropped_min_tweets << " (min_tweets)\n";
  std::cout << "dropped: " << counts.dropped_min_english << " (min_english)\n";
  return 0;
}

int cmd_build_dict(RunConfig config) {
  fill_default_paths(config);
  std::vector<CohortUser> users = attach_responses(read_corpus_dir(config.corpus_dir), config);
  if (users.empty()) {
    std::cerr << "no users with complete survey responses; check " << config.responses_path
              << "\n";
    return 1;
  }

  pipeline::LaxaryParams params = laxary_params(config);
  pipeline::LaxaryModel model = pipeline::train_laxary(users, params);
  write_file(config.dict_path, dict::serialize_dictionary(model.dictionary));

  std::size_t pattern_count = 0;
  for (const dict::Dimension* d : model.dictionary.all_dimensions()) {
    pattern_count += d->patterns.size();
  }
  std::cout << "dictionary built from " << users.size() << " users\n";
  std::cout << "dimensions: 16, patterns: " << pattern_count << "\n";
  std::cout << "wrote " << config.dict_path << "\n";

  if (config.calibration) {
    write_file(config.calibration_path, calibration_csv(model.calibration));
    std::cout << "wrote " << config.calibration_path << "\n";
  }
  return 0;
}

int cmd_score(RunConfig config) {
  fill_default_paths(config);
  std::vector<CohortUser> users = read_corpus_dir(config.corpus_dir);
  dict::PtsdDictionary dictionary =
      dict::parse_dictionary(read_file(config.dict_path, "build-dict"));
  scoring::AlphaMode mode = scoring::alpha_mode_from_name(config.alpha_mode);

  std::string csv = alphas_csv_header();
  std::size_t week_count = 0;
  for (const CohortUser& user : users) {
    for (const UserWeek& week : user.weeks) {
      csv += alphas_csv_rows(user.user_id, week.week_start,
                             scoring::alpha_score_matrix(week, dictionary, mode));
      ++week_count;
    }
  }
  write_file(config.alphas_path, csv);
  std::cout << "scored " << week_count << " user-weeks (" << users.size() << " users)\n";
  std::cout << "wrote " << config.alphas_path << "\n";
  return 0;
}

int cmd_fill(RunConfig config, bool explain) {
  fill_default_paths(config);
  AlphaTable table = parse_alphas_csv(read_file(config.alphas_path, "score"));
  std::array<surveys::ToolDemographics, 3> demos = demos_from_config(config);

  scoring::Calibration calibration;
  if (config.calibration && fs::exists(config.calibration_path)) {
    calibration = parse_calibration_csv(read_file(config.calibration_path, "build-dict"));
  }

  std::string filled_csv = "user_id,week_start,tool,total,threshold,over\n";
  std::string intensity_csv = "user_id,week_start,level,surveys_over\n";
  std::string explain_jsonl;

  dict::PtsdDictionary dictionary;
  std::map<std::string, CohortUser> users_by_id;
  if (explain) {
    dictionary = dict::parse_dictionary(read_file(config.dict_path, "build-dict"));
    for (CohortUser& user : read_corpus_dir(config.corpus_dir)) {
      users_by_id[user.user_id] = std::move(user);
    }
  }

  std::size_t reports = 0;
  for (const auto& [key, matrix] : table.entries) {
    const auto& [user_id, date] = key;
    std::vector<surveys::FilledSurvey> filled =
        scoring::fill_all_surveys(matrix, demos, calibration);
    surveys::IntensityLabel label = surveys::classify_intensity(filled);

    for (const surveys::FilledSurvey& f : filled) {
      filled_csv += user_id + "," + date + "," + surveys::tool_name(f.tool) + "," +
                    std::to_string(f.total) + "," + std::to_string(f.threshold) + "," +
                    (f.over_threshold ? "1" : "0") + "\n";
    }
    intensity_csv += user_id + "," + date + "," + std::to_string(surveys::intensity_score(label)) +
                     "," + std::to_string(label.surveys_over) + "\n";

    if (explain) {
      auto user_it = users_by_id.find(user_id);
      if (user_it != users_by_id.end()) {
        for (const UserWeek& week : user_it->second.weeks) {
          if (util::format_date(week.week_start) != date) continue;
          scoring::WeekReport report =
              scoring::explain_report(week, dictionary, matrix, filled, label);
          write_file(fs::path(config.out_dir) / "reports" / (user_id + "_" + date + ".txt"),
                     report.to_text());
          explain_jsonl += report.to_json() + "\n";
          ++reports;
        }
      }
    }
  }

  write_file(fs::path(config.out_dir) / "filled.csv", filled_csv);
  write_file(fs::path(config.out_dir) / "intensity.csv", intensity_csv);
  std::cout << "filled " << table.entries.size() << " user-weeks\n";
  if (explain) {
    write_file(fs::path(config.out_dir) / "explain.jsonl", explain_jsonl);
    std::cout << "explanation reports: " << reports << "\n";
  }
  return 0;
}

int cmd_baseline(RunConfig config) {
  fill_default_paths(config);
  std::vector<CohortUser> users = read_corpus_dir(config.corpus_dir);
  if (fs::exists(config.responses_path)) {
    users = attach_responses(std::move(users), config);
  } else {
    users = attach_labels_as_truth(std::move(users), config);
  }
  if (users.empty()) {
    std::cerr << "no labeled users; check " << config.labels_path << "\n";
    return 1;
  }

  pipeline::CoppersmithParams params = coppersmith_params(config);
  eval::SplitSpec split_spec{config.train_fraction, config.seed};
  auto [train, test] = eval::stratified_split(users, split_spec);

  pipeline::CoppersmithModel model = pipeline::train_coppersmith(train, params);
  std::vector<eval::Prediction> predictions;
  for (const CohortUser& user : test) {
    predictions.push_back(pipeline::predict_user_coppersmith(model, user));
  }
  eval::EvalResult result = eval::evaluate(predictions, test, params.demos);
  result.config_echo = config_echo(config);
  write_file(fs::path(config.out_dir) / "baseline_eval.json", result.to_json());

  // models, reloadable bit-exactly
  write_file(fs::path(config.out_dir) / "models" / "ulm_pos.lm", model.ulm.positive.dump());
  write_file(fs::path(config.out_dir) / "models" / "ulm_neg.lm", model.ulm.negative.dump());
  write_file(fs::path(config.out_dir) / "models" / "clm_pos.lm", model.clm.positive.dump());
  write_file(fs::path(config.out_dir) / "models" / "clm_neg.lm", model.clm.negative.dump());

  std::vector<std::string> feature_names = baseline::category_names();
  feature_names.push_back("ulm-positive");
  feature_names.push_back("clm-positive");
  std::string ranking_csv = "rank,feature,score\n";
  for (std::size_t i = 0; i < model.ranking.size(); ++i) {
    const baseline::FeatureRank& r = model.ranking[i];
    ranking_csv += std::to_string(i + 1) + "," + feature_names[r.index] + "," +
                   (std::isinf(r.score) ? "inf" : util::format_double(r.score, 6)) + "\n";
  }
  write_file(fs::path(config.out_dir) / "feature_ranking.csv", ranking_csv);

  // nine-category group comparison, PTSD vs control
  std::vector<std::vector<std::string>> ptsd_texts, control_texts;
  for (const CohortUser& user : users) {
    std::vector<std::string> texts;
    if (const UserWeek* week = user.most_recent_week()) {
      texts = week->texts(corpus::View::All);
    }
    if (texts.empty()) continue;
    bool positive = eval::truth_label(user, params.demos).surveys_over > 0;
    (positive ? ptsd_texts : control_texts).push_back(std::move(texts));
  }
  std::string comparison_csv = "category,mean_ptsd,mean_control,u,p_value,significant\n";
  if (!ptsd_texts.empty() && !control_texts.empty()) {
    for (const baseline::GroupComparisonRow& row :
         baseline::group_comparison(ptsd_texts, control_texts, model.lexicons)) {
      comparison_csv += row.category + "," + util::format_double(row.mean_a, 6) + "," +
                        util::format_double(row.mean_b, 6) + "," +
                        util::format_double(row.u_statistic, 1) + "," +
                        util::format_double(row.p_value, 6) + "," +
                        (row.significant ? "1" : "0") + "\n";
    }
  }
  write_file(fs::path(config.out_dir) / "group_comparison.csv", comparison_csv);

  std::cout << "baseline accuracy: " << util::format_double(result.accuracy, 4) << " on "
            << result.n << " test users\n";
  std::cout << "wrote baseline_eval.json, feature_ranking.csv, group_comparison.csv, models/\n";
  return 0;
}

int cmd_eval(RunConfig config) {
  fill_default_paths(config);
  std::vector<CohortUser> users = attach_responses(read_corpus_dir(config.corpus_dir), config);
  if (users.empty()) {
    std::cerr << "no users with complete survey responses; check " << config.responses_path
              << "\n";
    return 1;
  }

  pipeline::LaxaryParams params = laxary_params(config);
  eval::Runner runner = pipeline::laxary_runner(params);
  eval::SplitSpec split_spec{config.train_fraction, config.seed};

  auto [train, test] = eval::stratified_split(users, split_spec);
  eval::EvalResult result = eval::evaluate(runner(train, test, 0), test, params.demos);
  result.config_echo = config_echo(config);
  write_file(fs::path(config.out_dir) / "eval.json", result.to_json());
  std::cout << "accuracy: " << util::format_double(result.accuracy, 4)
            << "  mse: " << util::format_double(result.mse, 4) << "  (" << result.n
            << " test users)\n";

  std::vector<eval::CurvePoint> curve =
      eval::learning_curve(users, config.fractions, config.seed, runner, params.demos);
  write_file(fs::path(config.out_dir) / "learning_curve.csv", eval::learning_curve_csv(curve));

  if (config.with_baseline) {
    eval::Runner baseline_runner = pipeline::coppersmith_runner(coppersmith_params(config));
    std::vector<eval::CurvePoint> baseline_curve =
        eval::learning_curve(users, config.fractions, config.seed, baseline_runner, params.demos);
    std::string csv = "fraction,accuracy\n";
    for (const eval::CurvePoint& p : baseline_curve) {
      csv += util::format_double(p.fraction, 2) + "," +
             util::format_double(p.result.accuracy, 6) + "\n";
    }
    write_file(fs::path(config.out_dir) / "baseline_curve.csv", csv);
  }

  std::vector<eval::BacktestRow> backtest =
      eval::weekly_backtest(users, config.offsets, split_spec, runner, params.demos);
  write_file(fs::path(config.out_dir) / "weekly.csv", eval::weekly_csv(backtest));

  std::cout << "wrote eval.json, learning_curve.csv, weekly.csv"
            << (config.with_baseline ? ", baseline_curve.csv" : "") << "\n";
  return 0;
}

int cmd_synth(RunConfig config) {
  fill_default_paths(config);
  eval::SyntheticCohortSpec spec;
  spec.n_users = config.n_users;
  spec.weeks = config.weeks;
  if (config.intensity_dist.size() != 4) {
    std::cerr << "intensity_dist needs exactly 4 probabilities\n";
    return 1;
  }
  for (std::size_t i = 0; i < 4; ++i) spec.intensity_distribution[i] = config.intensity_dist[i];
  spec.noise_rate = config.noise_rate;
  spec.tweets_per_week_min = config.tweets_min;
  spec.tweets_per_week_max = config.tweets_max;
  spec.signal_only_latest_week = config.signal_only_latest_week;
  spec.seed = util::derive_seed(config.seed, "synth");

  std::vector<CohortUser> users = eval::generate_synthetic_cohort(spec);
  write_file(config.corpus_path, eval::cohort_to_jsonl(users));
  write_file(config.labels_path, eval::cohort_labels_csv(users));
  write_file(config.responses_path, eval::cohort_responses_csv(users));

  std::array<int, 4> by_level = {0, 0, 0, 0};
  for (const CohortUser& user : users) {
    surveys::IntensityLabel label = eval::truth_label(user, surveys::demographics_table());
    by_level[static_cast<std::size_t>(surveys::intensity_score(label))] += 1;
  }
  std::cout << "generated " << users.size() << " users (levels " << by_level[0] << "/"
            << by_level[1] << "/" << by_level[2] << "/" << by_level[3] << ")\n";
  std::cout << "wrote " << config.corpus_path << ", " << config.labels_path << ", "
            << config.responses_path << "\n";
  return 0;
}

}  // namespace laxary::cli
