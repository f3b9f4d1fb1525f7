#include "laxary/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "laxary/util.hpp"

namespace laxary::eval {

using corpus::CohortUser;
using corpus::Tweet;
using surveys::Tool;
using util::Rng;

const std::vector<std::vector<std::vector<std::string>>>& default_signal_pools() {
  static const std::vector<std::vector<std::vector<std::string>>> pools = {
      // DOSPERT
      {
          {"bets", "wagers", "casino", "jackpot", "racetrack"},
          {"wasted", "hungover", "whiskey", "blackout", "tequila"},
          {"defiant", "confronted", "backtalk", "shouted", "insubordinate"},
          {"hookup", "flings", "strangers", "reckless", "unsafe"},
          {"unattended", "errands", "latchkey", "unsupervised", "babysitter"},
      },
      // BSSS
      {
          {"isolated", "cutoff", "distant", "withdrawn"},
          {"helpless", "unsupported", "stranded", "forsaken"},
          {"skipped", "avoided", "cancelled", "declined"},
          {"bickering", "snapped", "quarrel", "lashed"},
          {"secrets", "hiding", "bottled", "concealed"},
          {"misunderstood", "unheard", "dismissed", "invisible"},
      },
      // VIAS
      {
          {"bored", "uninterested", "quit", "listless"},
          {"hopeless", "pointless", "doomed", "bleak"},
          {"lied", "dishonest", "faked", "cheated"},
          {"unfinished", "procrastinated", "stalled", "halfway"},
          {"ungrateful", "bitter", "resentful", "hollow"},
      },
  };
  return pools;
}

const std::vector<std::string>& default_noise_vocabulary() {
  static const std::vector<std::string> noise = {
      "coffee",   "morning",  "sunshine", "traffic",  "lunch",    "weekend",  "playlist",
      "garden",   "recipe",   "soccer",   "marathon", "library",  "museum",   "puppy",
      "kitten",   "hiking",   "pizza",    "tacos",    "breakfast", "commute", "meeting",
      "laundry",  "groceries", "sunset",  "beach",    "camping",  "fishing",  "novel",
      "podcast",  "episode",  "season",   "concert",  "tickets",  "birthday", "holiday",
      "weather",  "snowfall", "rainstorm", "cycling", "painting", "guitar",   "piano",
      "chess",    "puzzle",   "baking",   "cookies",  "smoothie", "yoga",     "sketching",
      "gardening"};
  return noise;
}

namespace {

// Monday 2026-01-05, the cohort's most recent week.
std::int64_t anchor_week_start() { return util::days_from_civil(2026, 1, 5) * 86400; }

void validate_spec(const SyntheticCohortSpec& spec) {
  double sum = 0.0;
  for (double p : spec.intensity_distribution) {
    if (p < 0.0) throw std::invalid_argument("synthetic cohort: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("synthetic cohort: intensity distribution must sum to 1");
  }
  if (spec.n_users <= 0) throw std::invalid_argument("synthetic cohort: n_users must be > 0");
  if (spec.weeks <= 0) throw std::invalid_argument("synthetic cohort: weeks must be > 0");
  if (spec.tweets_per_week_min < 1 || spec.tweets_per_week_max < spec.tweets_per_week_min) {
    throw std::invalid_argument("synthetic cohort: bad tweets-per-week range");
  }

  std::set<std::string> noise(spec.noise_vocabulary.begin(), spec.noise_vocabulary.end());
  for (const auto& tool_pools : spec.pools) {
    for (const auto& pool : tool_pools) {
      if (pool.empty()) throw std::invalid_argument("synthetic cohort: empty signal pool");
      for (const std::string& word : pool) {
        if (noise.count(word)) {
          throw std::invalid_argument("synthetic cohort: pool word '" + word +
                                      "' also in noise vocabulary");
        }
      }
    }
  }
}

int sample_intensity(Rng& rng, const std::array<double, 4>& distribution) {
  double u = rng.uniform();
  double acc = 0.0;
  for (int level = 0; level < 4; ++level) {
    acc += distribution[static_cast<std::size_t>(level)];
    if (u < acc) return level;
  }
  return 3;
}

// Target totals land in bands with a clear margin to the threshold so the
// planted signal is learnable at desk scale.
int sample_total(Rng& rng, const surveys::ToolDemographics& demo, bool over) {
  const double points = demo.total_points;
  if (over) {
    int lo = std::max(demo.threshold + 1, static_cast<int>(std::ceil(0.85 * points)));
    return static_cast<int>(rng.uniform_int(lo, demo.total_points));
  }
  int lo = std::max(1, static_cast<int>(std::lround(0.08 * points)));
  int hi = std::min(demo.threshold, static_cast<int>(std::floor(0.45 * points)));
  return static_cast<int>(rng.uniform_int(lo, std::max(lo, hi)));
}

// Even base plus randomly placed remainder, so a tool's questions share a
// similar answer level.
std::vector<int> distribute_total(Rng& rng, int target, int questions, int per_question_max) {
  std::vector<int> answers(static_cast<std::size_t>(questions), target / questions);
  int sum = (target / questions) * questions;
  while (sum < target) {
    std::vector<std::size_t> open;
    for (std::size_t q = 0; q < answers.size(); ++q) {
      if (answers[q] < per_question_max) open.push_back(q);
    }
    if (open.empty()) break;
    answers[open[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))]] += 1;
    ++sum;
  }
  return answers;
}

const std::vector<std::string>& fp_starters() {
  static const std::vector<std::string> v = {"i", "i'm", "my"};
  return v;
}

const std::vector<std::string>& other_starters() {
  static const std::vector<std::string> v = {"the", "they", "that"};
  return v;
}

const std::vector<std::string>& glue_words() {
  static const std::vector<std::string> v = {"was", "been", "so", "really", "all", "again"};
  return v;
}

std::string finish_tweet(Rng& rng, std::vector<std::string> tokens) {
  if (rng.bernoulli(0.04)) tokens.push_back("@buddy");
  std::string text;
  for (const std::string& t : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += t;
  }
  double punct = rng.uniform();
  if (punct < 0.25) {
    text.push_back('.');
  } else if (punct < 0.30) {
    text.push_back('!');
  }
  if (rng.bernoulli(0.02)) text += " https://t.co/x1y2z3";
  return text;
}

}  // namespace

std::vector<CohortUser> generate_synthetic_cohort(const SyntheticCohortSpec& raw_spec) {
  SyntheticCohortSpec spec = raw_spec;
  if (spec.pools.empty()) spec.pools = default_signal_pools();
  if (spec.noise_vocabulary.empty()) spec.noise_vocabulary = default_noise_vocabulary();
  validate_spec(spec);

  int id_width = 1;
  for (int v = spec.n_users - 1; v >= 10; v /= 10) ++id_width;

  std::vector<CohortUser> users;
  users.reserve(static_cast<std::size_t>(spec.n_users));

  for (int u = 0; u < spec.n_users; ++u) {
    Rng rng(util::derive_seed(spec.seed, "user:" + std::to_string(u)));

    std::string digits = std::to_string(u);
    std::string user_id = "u" + std::string(static_cast<std::size_t>(id_width) - digits.size(), '0') + digits;

    CohortUser user;
    user.user_id = user_id;
    user.is_veteran = true;

    const int intensity = sample_intensity(rng, spec.intensity_distribution);

    // which tools go over threshold
    std::vector<int> tool_order = {0, 1, 2};
    rng.shuffle(tool_order);
    std::array<bool, 3> over = {false, false, false};
    for (int i = 0; i < intensity; ++i) over[static_cast<std::size_t>(tool_order[i])] = true;

    std::vector<surveys::SurveyResponse> responses;
    std::array<std::vector<int>, 3> answers;
    for (Tool tool : surveys::kAllTools) {
      const surveys::ToolDemographics& demo = surveys::demographics(tool);
      int target = sample_total(rng, demo, over[static_cast<std::size_t>(tool)]);
      answers[static_cast<std::size_t>(tool)] =
          distribute_total(rng, target, demo.chosen_questions, demo.per_question_max);
      surveys::SurveyResponse response;
      response.tool = tool;
      response.answers = answers[static_cast<std::size_t>(tool)];
      responses.push_back(std::move(response));
    }
    user.survey_responses = std::move(responses);
    user.self_identified_ptsd = rng.bernoulli(intensity >= 1 ? 0.85 : 0.05);

    // question weights for signal tweets: answer-proportional plus a floor
    std::vector<std::pair<Tool, int>> question_keys;
    std::vector<double> weights;
    for (Tool tool : surveys::kAllTools) {
      const surveys::ToolDemographics& demo = surveys::demographics(tool);
      for (int q = 1; q <= demo.chosen_questions; ++q) {
        double t = static_cast<double>(answers[static_cast<std::size_t>(tool)][static_cast<std::size_t>(q - 1)]) /
                   static_cast<double>(demo.per_question_max);
        question_keys.emplace_back(tool, q);
        weights.push_back(0.02 + t * t);
      }
    }
    double weight_sum = 0.0;
    for (double w : weights) weight_sum += w;

    std::vector<Tweet> tweets;
    int sequence = 0;
    for (int w = 0; w < spec.weeks; ++w) {
      std::int64_t week_start =
          anchor_week_start() - static_cast<std::int64_t>(spec.weeks - 1 - w) * 7 * 86400;
      bool signal_week = !spec.signal_only_latest_week || w == spec.weeks - 1;
      int n_tweets =
          static_cast<int>(rng.uniform_int(spec.tweets_per_week_min, spec.tweets_per_week_max));

      for (int i = 0; i < n_tweets; ++i) {
        std::vector<std::string> tokens;
        bool noise_tweet = !signal_week || rng.bernoulli(spec.noise_rate);
        if (noise_tweet) {
          bool first_person = rng.bernoulli(0.5);
          tokens.push_back(first_person ? rng.pick(fp_starters()) : rng.pick(other_starters()));
          tokens.push_back(rng.pick(glue_words()));
          int n_words = static_cast<int>(rng.uniform_int(4, 7));
          for (int k = 0; k < n_words; ++k) tokens.push_back(rng.pick(spec.noise_vocabulary));
        } else {
          // pick a question proportional to its answer
          double pick = rng.uniform() * weight_sum;
          std::size_t chosen = 0;
          double acc = 0.0;
          for (std::size_t qi = 0; qi < weights.size(); ++qi) {
            acc += weights[qi];
            if (pick < acc) {
              chosen = qi;
              break;
            }
          }
          auto [tool, q] = question_keys[chosen];
          const surveys::ToolDemographics& demo = surveys::demographics(tool);
          double t = static_cast<double>(answers[static_cast<std::size_t>(tool)][static_cast<std::size_t>(q - 1)]) /
                     static_cast<double>(demo.per_question_max);
          const std::vector<std::string>& pool =
              spec.pools[static_cast<std::size_t>(tool)][static_cast<std::size_t>(q - 1)];

          tokens.push_back(rng.pick(fp_starters()));
          tokens.push_back(rng.pick(glue_words()));
          // co-occurrence density tracks the answer: low answers yield lone
          // signal words, high answers yield dense co-mentions
          std::vector<std::string> body;
          for (const std::string& word : pool) {
            if (rng.bernoulli(t)) body.push_back(word);
          }
          if (body.empty()) body.push_back(rng.pick(pool));
          int n_noise = static_cast<int>(rng.uniform_int(2, 4));
          for (int k = 0; k < n_noise; ++k) body.push_back(rng.pick(spec.noise_vocabulary));
          rng.shuffle(body);
          for (std::string& word : body) tokens.push_back(std::move(word));
        }

        Tweet tweet;
        tweet.id = user_id + "-" + std::to_string(sequence++);
        tweet.user_id = user_id;
        tweet.timestamp = week_start + rng.uniform_int(0, 7 * 86400 - 1);
        tweet.text = finish_tweet(rng, std::move(tokens));
        tweet.is_english = true;
        tweets.push_back(std::move(tweet));
      }

      if (w == spec.weeks - 1 && user.self_identified_ptsd) {
        Tweet tweet;
        tweet.id = user_id + "-" + std::to_string(sequence++);
        tweet.user_id = user_id;
        tweet.timestamp = week_start + rng.uniform_int(0, 7 * 86400 - 1);
        tweet.text = "i was diagnosed with ptsd by the va last spring";
        tweet.is_english = true;
        tweets.push_back(std::move(tweet));
      }
    }

    user.weeks = corpus::bucket_weekly(tweets);
    users.push_back(std::move(user));
  }
  return users;
}

std::string cohort_to_jsonl(const std::vector<CohortUser>& users) {
  std::string out;
  for (const CohortUser& user : users) {
    for (const corpus::UserWeek& week : user.weeks) {
      for (const Tweet& tweet : week.raw_tweets) {
        nlohmann::json j;
        j["id"] = tweet.id;
        j["user_id"] = tweet.user_id;
        j["timestamp"] = tweet.timestamp;
        j["text"] = tweet.text;
        j["lang"] = tweet.is_english ? "en" : "und";
        out += j.dump() + "\n";
      }
    }
  }
  return out;
}

std::string cohort_labels_csv(const std::vector<CohortUser>& users) {
  std::string out = "user_id,dospert_total,bsss_total,vias_total,self_identified\n";
  for (const CohortUser& user : users) {
    std::array<int, 3> totals = {0, 0, 0};
    if (user.survey_responses) {
      for (const surveys::SurveyResponse& r : *user.survey_responses) {
        totals[static_cast<std::size_t>(r.tool)] = r.total();
      }
    }
    out += user.user_id + "," + std::to_string(totals[0]) + "," + std::to_string(totals[1]) +
           "," + std::to_string(totals[2]) + "," + (user.self_identified_ptsd ? "1" : "0") + "\n";
  }
  return out;
}

std::string cohort_responses_csv(const std::vector<CohortUser>& users) {
  std::string out = "user_id,tool,q1,q2,q3,q4,q5,q6\n";
  for (const CohortUser& user : users) {
    if (!user.survey_responses) continue;
    for (const surveys::SurveyResponse& r : *user.survey_responses) {
      out += user.user_id + "," + surveys::tool_name(r.tool);
      for (int q = 0; q < 6; ++q) {
        out += ",";
        if (q < static_cast<int>(r.answers.size())) {
          out += std::to_string(r.answers[static_cast<std::size_t>(q)]);
        }
      }
      out += "\n";
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

std::map<std::string, std::vector<surveys::SurveyResponse>> parse_responses_csv(
    const std::string& text) {
  std::map<std::string, std::vector<surveys::SurveyResponse>> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (util::trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() < 3) throw std::runtime_error("bad responses row: " + line);
    surveys::SurveyResponse response;
    response.tool = surveys::tool_from_name(fields[1]);
    const surveys::ToolDemographics& demo = surveys::demographics(response.tool);
    for (int q = 0; q < demo.chosen_questions; ++q) {
      std::size_t idx = static_cast<std::size_t>(2 + q);
      if (idx >= fields.size() || util::trim(fields[idx]).empty()) {
        throw std::runtime_error("missing answer in responses row: " + line);
      }
      response.answers.push_back(std::stoi(fields[idx]));
    }
    out[fields[0]].push_back(std::move(response));
  }
  return out;
}

std::map<std::string, LabelRow> parse_labels_csv(const std::string& text) {
  std::map<std::string, LabelRow> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (util::trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() < 5) throw std::runtime_error("bad labels row: " + line);
    LabelRow row;
    row.totals = {std::stoi(fields[1]), std::stoi(fields[2]), std::stoi(fields[3])};
    row.self_identified = fields[4] == "1";
    out[fields[0]] = row;
  }
  return out;
}

}  // namespace laxary::eval
