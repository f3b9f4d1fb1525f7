#include "laxary/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "laxary/util.hpp"

namespace laxary::corpus {

using util::split_ws;

std::vector<std::string> UserWeek::texts(View view) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < normalized_texts.size(); ++i) {
    bool work = i < work_related.size() && work_related[i];
    if (view == View::All || (view == View::Work && work) ||
        (view == View::NonWork && !work)) {
      out.push_back(normalized_texts[i]);
    }
  }
  return out;
}

double UserWeek::english_ratio() const {
  if (raw_tweets.empty()) return 0.0;
  std::size_t english = 0;
  for (const Tweet& t : raw_tweets) {
    if (t.is_english) ++english;
  }
  return static_cast<double>(english) / static_cast<double>(raw_tweets.size());
}

const UserWeek* CohortUser::most_recent_week() const {
  const UserWeek* best = nullptr;
  for (const UserWeek& w : weeks) {
    if (!best || w.week_start > best->week_start) best = &w;
  }
  return best;
}

const UserWeek* CohortUser::week_at_offset(int offset) const {
  const UserWeek* latest = most_recent_week();
  if (!latest) return nullptr;
  std::int64_t target = latest->week_start - static_cast<std::int64_t>(offset) * 7 * 86400;
  for (const UserWeek& w : weeks) {
    if (w.week_start == target) return &w;
  }
  return nullptr;
}

namespace {

const std::unordered_set<std::string>& common_english_words() {
  // The 50 most common English words; basis for the stop-word-ratio heuristic.
  static const std::unordered_set<std::string> words = {
      "the", "be",   "to",   "of",  "and",  "a",    "in",   "that", "have", "i",
      "it",  "for",  "not",  "on",  "with", "he",   "as",   "you",  "do",   "at",
      "this", "but", "his",  "by",  "from", "they", "we",   "say",  "her",  "she",
      "or",  "an",   "will", "my",  "one",  "all",  "would", "there", "their", "what",
      "so",  "up",   "out",  "if",  "about", "who", "get",  "which", "go",  "me"};
  return words;
}

bool is_url_token(const std::string& token) {
  return util::starts_with_ci(token, "http://") || util::starts_with_ci(token, "https://") ||
         util::starts_with_ci(token, "www.");
}

std::string strip_edge_punct(const std::string& token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && std::ispunct(static_cast<unsigned char>(token[b]))) ++b;
  while (e > b && std::ispunct(static_cast<unsigned char>(token[e - 1]))) --e;
  return token.substr(b, e - b);
}

}  // namespace

bool default_language_id(const std::string& text) {
  std::vector<std::string> tokens = split_ws(util::to_lower(text));
  if (tokens.empty()) return false;
  std::size_t hits = 0;
  for (const std::string& t : tokens) {
    std::string clean = strip_edge_punct(t);
    if (common_english_words().count(clean)) ++hits;
  }
  // >= 2 common words per 10 tokens
  return hits * 5 >= tokens.size();
}

ParseResult parse_post_stream(std::istream& in, const LanguageId& lang_id) {
  ParseResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (util::trim(line).empty()) continue;

    auto reject = [&](const std::string& reason) {
      result.rejects.push_back({line_number, reason, line.substr(0, 80)});
    };

    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      reject("not a JSON object");
      continue;
    }
    if (!record.contains("id") || !record["id"].is_string() ||
        record["id"].get<std::string>().empty()) {
      reject("missing or empty id");
      continue;
    }
    if (!record.contains("user_id") || !record["user_id"].is_string() ||
        record["user_id"].get<std::string>().empty()) {
      reject("missing or empty user_id");
      continue;
    }
    if (!record.contains("timestamp") || !record["timestamp"].is_number_integer() ||
        record["timestamp"].get<std::int64_t>() < 0) {
      reject("missing or negative timestamp");
      continue;
    }
    if (!record.contains("text") || !record["text"].is_string()) {
      reject("missing text");
      continue;
    }

    Tweet tweet;
    tweet.id = record["id"].get<std::string>();
    tweet.user_id = record["user_id"].get<std::string>();
    tweet.timestamp = record["timestamp"].get<std::int64_t>();
    tweet.text = record["text"].get<std::string>();
    if (record.contains("lang") && record["lang"].is_string()) {
      tweet.is_english = record["lang"].get<std::string>() == "en";
    } else {
      tweet.is_english = lang_id ? lang_id(tweet.text) : false;
    }
    result.tweets.push_back(std::move(tweet));
  }
  return result;
}

std::vector<CohortUser> filter_eligible_users(const std::vector<CohortUser>& users,
                                              int min_tweets, double min_english,
                                              EligibilityCounts* counts) {
  std::vector<CohortUser> kept;
  EligibilityCounts local;
  for (const CohortUser& user : users) {
    const UserWeek* week = user.most_recent_week();
    if (!week || static_cast<int>(week->raw_tweets.size()) < min_tweets) {
      ++local.dropped_min_tweets;
      continue;
    }
    if (week->english_ratio() < min_english) {
      ++local.dropped_min_english;
      continue;
    }
    ++local.kept;
    kept.push_back(user);
  }
  if (counts) *counts = local;
  return kept;
}

std::optional<std::string> preprocess_text(const std::string& text) {
  std::vector<std::string> tokens = split_ws(text);
  for (const std::string& t : tokens) {
    if (is_url_token(t)) return std::nullopt;
  }
  std::string out;
  for (const std::string& t : tokens) {
    std::string piece;
    if (t == "USER") {
      piece = t;  // keeps preprocessing idempotent
    } else if (t.size() > 1 && t[0] == '@') {
      piece = "USER";
    } else {
      piece = util::to_lower(t);
    }
    if (!out.empty()) out.push_back(' ');
    out += piece;
  }
  return out;
}

std::vector<std::string> raw_tokens(const std::string& normalized) {
  return split_ws(normalized);
}

std::vector<std::string> dict_tokens(const std::string& normalized) {
  std::vector<std::string> out;
  for (const std::string& t : split_ws(normalized)) {
    std::string clean = strip_edge_punct(t);
    if (!clean.empty()) out.push_back(std::move(clean));
  }
  return out;
}

bool classify_work_related(const std::string& normalized) {
  for (const std::string& t : dict_tokens(normalized)) {
    std::string lower = util::to_lower(t);
    if (lower.rfind("work", 0) == 0 || lower.rfind("job", 0) == 0) return true;
  }
  return false;
}

std::int64_t week_start_of(std::int64_t timestamp) {
  std::int64_t day = timestamp / 86400;
  // 1970-01-01 was a Thursday; Monday-based weekday.
  std::int64_t weekday = (day + 3) % 7;
  return (day - weekday) * 86400;
}

std::vector<UserWeek> bucket_weekly(const std::vector<Tweet>& tweets) {
  for (const Tweet& t : tweets) {
    if (t.user_id != tweets.front().user_id) {
      throw std::runtime_error("bucket_weekly: tweets must share user_id");
    }
  }
  std::map<std::int64_t, UserWeek> weeks;
  for (const Tweet& t : tweets) {
    std::int64_t start = week_start_of(t.timestamp);
    UserWeek& week = weeks[start];
    if (week.raw_tweets.empty()) {
      week.user_id = t.user_id;
      week.week_start = start;
    }
    week.raw_tweets.push_back(t);
  }
  std::vector<UserWeek> out;
  out.reserve(weeks.size());
  for (auto& [start, week] : weeks) {
    std::stable_sort(week.raw_tweets.begin(), week.raw_tweets.end(),
                     [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });
    for (const Tweet& t : week.raw_tweets) {
      std::optional<std::string> normalized = preprocess_text(t.text);
      if (!normalized) continue;
      week.normalized_texts.push_back(*normalized);
      week.work_related.push_back(classify_work_related(*normalized));
    }
    out.push_back(std::move(week));
  }
  return out;
}

const std::vector<std::string>& default_self_id_patterns() {
  static const std::vector<std::string> patterns = {
      R"(diagnosed( \S+){0,3} with[^.!?]*p\.?t\.?s\.?d)",
      R"(\bi have ptsd\b)",
      R"(post[- ]?traumatic stress)",
  };
  return patterns;
}

std::vector<SelfIdMatch> find_self_identification(const std::vector<Tweet>& tweets,
                                                  const std::vector<std::string>& patterns) {
  std::vector<std::regex> compiled;
  for (const std::string& p : patterns) {
    try {
      compiled.emplace_back(p, std::regex::icase);
    } catch (const std::regex_error& e) {
      throw std::runtime_error("invalid self-identification pattern '" + p + "': " + e.what());
    }
  }
  std::vector<SelfIdMatch> matches;
  for (const Tweet& t : tweets) {
    for (const std::regex& rx : compiled) {
      std::smatch m;
      if (std::regex_search(t.text, m, rx)) {
        matches.push_back({t, m.str(0), static_cast<std::size_t>(m.position(0))});
        break;  // one report per tweet
      }
    }
  }
  return matches;
}

}  // namespace laxary::corpus
