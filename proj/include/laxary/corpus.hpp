#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "laxary/surveys.hpp"

namespace laxary::corpus {

struct Tweet {
  std::string id;
  std::string user_id;
  std::int64_t timestamp = 0;  // UTC seconds
  std::string text;            // verbatim until preprocessing
  bool is_english = false;

  bool operator==(const Tweet&) const = default;
};

// Which of the three per-week text views to read.
enum class View { All, Work, NonWork };

// One user's week of posts (ISO week, Monday start, UTC). normalized_texts
// holds the post-exclusion preprocessed texts in timestamp order;
// work_related is parallel to it.
struct UserWeek {
  std::string user_id;
  std::int64_t week_start = 0;  // epoch seconds of Monday 00:00 UTC
  std::vector<Tweet> raw_tweets;
  std::vector<std::string> normalized_texts;
  std::vector<bool> work_related;

  std::vector<std::string> texts(View view) const;
  double english_ratio() const;
};

struct CohortUser {
  std::string user_id;
  bool is_veteran = true;
  bool self_identified_ptsd = false;
  std::optional<std::vector<surveys::SurveyResponse>> survey_responses;
  std::vector<UserWeek> weeks;  // ascending by week_start

  const UserWeek* most_recent_week() const;
  // Week at `offset` calendar weeks before the most recent one, or null.
  const UserWeek* week_at_offset(int offset) const;
};

struct RejectEntry {
  std::size_t line_number = 0;  // 1-based
  std::string reason;
  std::string snippet;
};

struct ParseResult {
  std::vector<Tweet> tweets;
  std::vector<RejectEntry> rejects;
};

// Pluggable language identification; receives the raw tweet text.
using LanguageId = std::function<bool(const std::string&)>;

// Stop-word-ratio heuristic: English iff at least 2 of the 50 most common
// English words per 10 tokens.
bool default_language_id(const std::string& text);

// Parses UTF-8 line-delimited JSON records with keys id, user_id, timestamp,
// text and optional lang. Malformed lines go to the rejects report; the
// stream is never aborted. is_english comes from `lang` when present,
// otherwise from the hook.
ParseResult parse_post_stream(std::istream& in, const LanguageId& lang_id = default_language_id);

// Keeps users whose most recent week has at least min_tweets tweets and an
// English ratio of at least min_english. Optionally reports drop reasons.
struct EligibilityCounts {
  std::size_t kept = 0;
  std::size_t dropped_min_tweets = 0;
  std::size_t dropped_min_english = 0;
};

std::vector<CohortUser> filter_eligible_users(const std::vector<CohortUser>& users,
                                              int min_tweets = 25, double min_english = 0.75,
                                              EligibilityCounts* counts = nullptr);

// URL tweets are excluded entirely (token with an http://, https:// or www.
// prefix). Otherwise: lowercase, each @handle becomes the single token USER,
// whitespace runs collapse to one space, ends trimmed. Idempotent.
std::optional<std::string> preprocess_text(const std::string& text);

// Whitespace tokenization. The dictionary view strips leading/trailing
// punctuation per token (keeping apostrophes and inner hyphens) and drops
// tokens that strip to nothing; the raw view is the plain whitespace split.
std::vector<std::string> raw_tokens(const std::string& normalized);
std::vector<std::string> dict_tokens(const std::string& normalized);

// True iff some token starts with "work" or "job" (case-insensitive).
bool classify_work_related(const std::string& normalized);

// Partitions one user's tweets into ISO weeks; fills the normalized text
// views. Tweets must share user_id.
std::vector<UserWeek> bucket_weekly(const std::vector<Tweet>& tweets);

std::int64_t week_start_of(std::int64_t timestamp);

struct SelfIdMatch {
  Tweet tweet;
  std::string matched;
  std::size_t position = 0;
};

// Built-in diagnosis-statement patterns ("diagnosed ... with ... ptsd",
// "i have ptsd", "post-traumatic stress").
const std::vector<std::string>& default_self_id_patterns();

// Scans raw tweet text against the given regex patterns (case-insensitive).
// Invalid patterns raise a configuration error before any scan.
std::vector<SelfIdMatch> find_self_identification(
    const std::vector<Tweet>& tweets,
    const std::vector<std::string>& patterns = default_self_id_patterns());

}  // namespace laxary::corpus
