#include "laxary/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "laxary/util.hpp"

namespace laxary::dict {

using surveys::Tool;
using util::to_lower;
using util::trim;

std::string render_pattern(const WordPattern& p) {
  return p.wildcard ? p.stem + "*" : p.stem;
}

const Dimension& PtsdDictionary::dimension(Tool tool, int question_index) const {
  const Category& cat = categories[static_cast<std::size_t>(tool)];
  for (const Dimension& d : cat.dimensions) {
    if (d.question_index == question_index) return d;
  }
  throw std::runtime_error(std::string("no such dimension: ") + surveys::tool_name(tool) + ":" +
                           std::to_string(question_index));
}

std::vector<const Dimension*> PtsdDictionary::all_dimensions() const {
  std::vector<const Dimension*> out;
  for (const Category& cat : categories) {
    for (const Dimension& d : cat.dimensions) out.push_back(&d);
  }
  return out;
}

std::vector<WordPattern> default_pronoun_filter() {
  return {{"i", false},    {"i'd", false}, {"i'll", false}, {"i'm", false}, {"i've", false},
          {"me", false},   {"mine", false}, {"my", false},  {"myself", false}};
}

const std::vector<std::string>& question_labels(Tool tool) {
  static const std::vector<std::string> dospert = {
      "Betting a day's income at the horse races",
      "Drinking heavily at a social function",
      "Disagreeing with an authority figure on a major issue",
      "Engaging in unprotected sex",
      "Leaving your young children alone at home while running an errand",
  };
  static const std::vector<std::string> bsss = {
      "Feeling isolated from family and friends",
      "Having no one to rely on when things go wrong",
      "Avoiding social gatherings and group events",
      "Arguing with people who try to help",
      "Keeping problems secret instead of sharing them",
      "Feeling that nobody understands my situation",
  };
  static const std::vector<std::string> vias = {
      "Losing interest in hobbies and activities",
      "Feeling hopeless about the future",
      "Struggling to stay honest with people close to me",
      "Giving up on tasks before finishing them",
      "Feeling no gratitude for anything lately",
  };
  switch (tool) {
    case Tool::Dospert: return dospert;
    case Tool::Bsss: return bsss;
    case Tool::Vias: return vias;
  }
  return dospert;
}

DictionaryError::DictionaryError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_number(line) {}

namespace {

constexpr const char* kMagicPrefix = "# ptsd-dict v";

const std::unordered_set<std::string>& stop_words() {
  // Closed-class words excluded from candidate stems.
  static const std::unordered_set<std::string> words = {
      "a",    "an",    "and",  "are",  "as",    "at",    "be",    "been",  "but",  "by",
      "can",  "could", "did",  "do",   "does",  "for",   "from",  "had",   "has",  "have",
      "he",   "her",   "hers", "him",  "his",   "how",   "if",    "in",    "into", "is",
      "it",   "its",   "just", "no",   "not",   "of",    "on",    "or",    "our",  "out",
      "she",  "so",    "than", "that", "the",   "their", "them",  "then",  "there", "they",
      "this", "to",    "too",  "up",   "us",    "was",   "we",    "were",  "what", "when",
      "where", "which", "who", "whom", "why",   "will",  "with",  "would", "you",  "your",
      "am",   "been",  "being", "while", "about", "after", "before", "because", "over",
      "under", "again", "very", "some", "any",   "each",  "all",   "both",  "few",  "more",
      "most", "other", "such", "only", "own",   "same",  "now",   "here",  "also", "one",
      "having", "doing", "going", "things", "thing", "anything", "something", "everything",
      "nothing", "someone", "anyone", "everyone", "instead", "lately"};
  return words;
}

std::string stem_word(const std::string& word) {
  static const std::vector<std::string> suffixes = {"'s", "ing", "es", "ed", "ly", "s"};
  for (const std::string& suffix : suffixes) {
    if (word.size() > suffix.size() + 2 && word.ends_with(suffix)) {
      return word.substr(0, word.size() - suffix.size());
    }
  }
  return word;
}

void validate_stem(std::size_t line, const std::string& stem) {
  if (stem.empty()) throw DictionaryError(line, "empty pattern");
  for (char c : stem) {
    if (c == '*') throw DictionaryError(line, "'*' only allowed as the final character");
    if (std::isspace(static_cast<unsigned char>(c)))
      throw DictionaryError(line, "whitespace inside pattern");
  }
}

void sort_unique_patterns(std::size_t line, std::vector<WordPattern>& patterns) {
  std::sort(patterns.begin(), patterns.end());
  for (std::size_t i = 1; i < patterns.size(); ++i) {
    if (patterns[i].stem == patterns[i - 1].stem) {
      throw DictionaryError(line, "duplicate stem '" + patterns[i].stem + "'");
    }
  }
}

}  // namespace

PtsdDictionary parse_dictionary(const std::string& text) {
  PtsdDictionary dict;
  for (Tool t : surveys::kAllTools) {
    dict.categories[static_cast<std::size_t>(t)].tool = t;
  }

  // (tool, index) -> (dimension, header line); separate pronoun bucket.
  std::map<std::pair<int, int>, std::pair<Dimension, std::size_t>> sections;
  std::vector<WordPattern> pronouns;
  bool in_pronouns = false;
  Dimension* current = nullptr;
  bool saw_magic = false;

  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      if (!saw_magic && stripped.rfind(kMagicPrefix, 0) == 0) {
        dict.version = trim(stripped.substr(std::string(kMagicPrefix).size()));
        saw_magic = true;
      }
      continue;
    }
    if (stripped == "[PRONOUNS]") {
      in_pronouns = true;
      current = nullptr;
      continue;
    }
    if (stripped[0] == '[') {
      std::size_t close = stripped.find(']');
      if (close == std::string::npos) throw DictionaryError(line_number, "unterminated '['");
      std::string header = stripped.substr(1, close - 1);
      std::size_t colon = header.find(':');
      if (colon == std::string::npos)
        throw DictionaryError(line_number, "expected [TOOL:index] header");
      std::string tool_str = header.substr(0, colon);
      Tool tool;
      try {
        tool = surveys::tool_from_name(tool_str);
      } catch (const std::exception&) {
        throw DictionaryError(line_number, "unknown tool name '" + tool_str + "'");
      }
      int index = 0;
      try {
        index = std::stoi(header.substr(colon + 1));
      } catch (const std::exception&) {
        throw DictionaryError(line_number, "bad question index in header");
      }
      const int count = surveys::demographics(tool).chosen_questions;
      if (index < 1 || index > count) {
        throw DictionaryError(line_number, std::string("question index out of range for ") +
                                               surveys::tool_name(tool));
      }
      auto key = std::make_pair(static_cast<int>(tool), index);
      if (sections.count(key)) {
        throw DictionaryError(line_number, "duplicate section " + header);
      }
      Dimension dim;
      dim.tool = tool;
      dim.question_index = index;
      dim.label = trim(stripped.substr(close + 1));
      auto [it, ok] = sections.emplace(key, std::make_pair(std::move(dim), line_number));
      (void)ok;
      current = &it->second.first;
      in_pronouns = false;
      continue;
    }

    // pattern line
    WordPattern pattern;
    std::string body = stripped;
    if (body.back() == '*') {
      pattern.wildcard = true;
      body.pop_back();
    }
    pattern.stem = to_lower(body);
    validate_stem(line_number, pattern.stem);
    if (in_pronouns) {
      pronouns.push_back(std::move(pattern));
    } else if (current) {
      for (const WordPattern& existing : current->patterns) {
        if (existing.stem == pattern.stem) {
          throw DictionaryError(line_number, "duplicate stem '" + pattern.stem + "'");
        }
      }
      current->patterns.push_back(std::move(pattern));
    } else {
      throw DictionaryError(line_number, "pattern outside any section");
    }
  }

  if (pronouns.empty()) throw DictionaryError(line_number, "missing or empty [PRONOUNS] section");
  sort_unique_patterns(line_number, pronouns);
  dict.pronoun_filter = std::move(pronouns);

  for (Tool tool : surveys::kAllTools) {
    const int expected = surveys::demographics(tool).chosen_questions;
    Category& cat = dict.categories[static_cast<std::size_t>(tool)];
    for (int q = 1; q <= expected; ++q) {
      auto it = sections.find({static_cast<int>(tool), q});
      if (it == sections.end()) {
        throw DictionaryError(line_number, std::string("dimension count mismatch: ") +
                                               surveys::tool_name(tool) + " is missing question " +
                                               std::to_string(q) + " (expects " +
                                               std::to_string(expected) + ")");
      }
      Dimension dim = std::move(it->second.first);
      if (dim.patterns.empty()) {
        throw DictionaryError(it->second.second,
                              "empty dimension " + std::string(surveys::tool_name(tool)) + ":" +
                                  std::to_string(q));
      }
      std::sort(dim.patterns.begin(), dim.patterns.end());
      cat.dimensions.push_back(std::move(dim));
    }
  }
  return dict;
}

std::string serialize_dictionary(const PtsdDictionary& dictionary) {
  std::string out;
  out += kMagicPrefix + dictionary.version + "\n";
  out += "[PRONOUNS]\n";
  std::vector<WordPattern> pronouns = dictionary.pronoun_filter;
  std::sort(pronouns.begin(), pronouns.end());
  for (const WordPattern& p : pronouns) out += render_pattern(p) + "\n";
  for (const Category& cat : dictionary.categories) {
    out += "# category " + std::string(surveys::tool_name(cat.tool)) + " (" +
           std::to_string(cat.dimensions.size()) + " dimensions)\n";
    for (const Dimension& dim : cat.dimensions) {
      out += "[" + std::string(surveys::tool_name(cat.tool)) + ":" +
             std::to_string(dim.question_index) + "] " + dim.label + "\n";
      std::vector<WordPattern> patterns = dim.patterns;
      std::sort(patterns.begin(), patterns.end());
      for (const WordPattern& p : patterns) out += render_pattern(p) + "\n";
    }
  }
  return out;
}

bool match_pattern(const WordPattern& pattern, const std::string& token) {
  if (pattern.wildcard) return token.rfind(pattern.stem, 0) == 0;
  return token == pattern.stem;
}

bool pattern_in_text(const WordPattern& pattern, const std::string& text) {
  for (const std::string& token : corpus::dict_tokens(text)) {
    if (match_pattern(pattern, token)) return true;
  }
  return false;
}

std::vector<std::string> first_person_segments(const std::string& text,
                                               const std::vector<WordPattern>& pronouns) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string segment = trim(text.substr(start, end - start));
    if (!segment.empty()) {
      for (const std::string& token : corpus::dict_tokens(segment)) {
        for (const WordPattern& p : pronouns) {
          if (match_pattern(p, token)) {
            out.push_back(segment);
            return;
          }
        }
      }
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

std::vector<std::string> week_first_person_segments(const corpus::UserWeek& week,
                                                    const std::vector<WordPattern>& pronouns) {
  std::vector<std::string> out;
  for (const std::string& text : week.normalized_texts) {
    for (std::string& segment : first_person_segments(text, pronouns)) {
      out.push_back(std::move(segment));
    }
  }
  return out;
}

std::vector<WordPattern> seed_patterns(const std::string& label) {
  std::vector<WordPattern> seeds;
  std::set<std::string> seen;
  for (const std::string& token : corpus::dict_tokens(to_lower(label))) {
    if (stop_words().count(token)) continue;
    std::string stem = stem_word(token);
    if (stem.size() < 3) continue;
    if (seen.insert(stem).second) seeds.push_back({stem, true});
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

namespace {

struct QuestionKey {
  Tool tool;
  int index;  // 1-based
};

// Pearson correlation between two binary vectors (population moments).
// Returns 0 when either side is constant.
double binary_correlation(const std::vector<char>& x, const std::vector<char>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace

PtsdDictionary build_dictionary(const std::vector<corpus::CohortUser>& train,
                                const BuilderParams& params) {
  const std::vector<WordPattern> pronouns = default_pronoun_filter();

  // Per-user token presence over first-person segments of the most recent week.
  std::vector<std::set<std::string>> user_tokens;
  std::vector<const corpus::CohortUser*> users;
  for (const corpus::CohortUser& user : train) {
    if (!user.survey_responses || user.survey_responses->size() != 3) {
      throw std::runtime_error("build_dictionary: user " + user.user_id +
                               " lacks the three survey responses");
    }
    const corpus::UserWeek* week = user.most_recent_week();
    if (!week) throw std::runtime_error("build_dictionary: user " + user.user_id + " has no weeks");
    std::set<std::string> tokens;
    for (const std::string& segment : week_first_person_segments(*week, pronouns)) {
      for (const std::string& token : corpus::dict_tokens(segment)) {
        if (stop_words().count(token)) continue;
        bool is_pronoun = false;
        for (const WordPattern& p : pronouns) {
          if (match_pattern(p, token)) {
            is_pronoun = true;
            break;
          }
        }
        if (!is_pronoun) tokens.insert(token);
      }
    }
    user_tokens.push_back(std::move(tokens));
    users.push_back(&user);
  }

  {
    int positive = 0, negative = 0;
    for (const corpus::CohortUser* user : users) {
      surveys::IntensityLabel label =
          surveys::intensity_from_responses(*user->survey_responses, surveys::demographics_table());
      (label.surveys_over > 0 ? positive : negative) += 1;
    }
    if (positive < 2 || negative < 2) {
      throw std::runtime_error("build_dictionary: need at least 2 training users per class");
    }
  }

  // Candidate pool with document frequencies.
  std::map<std::string, int> document_frequency;
  for (const std::set<std::string>& tokens : user_tokens) {
    for (const std::string& token : tokens) document_frequency[token] += 1;
  }

  PtsdDictionary dict;
  dict.version = params.version;
  dict.pronoun_filter = pronouns;
  for (Tool tool : surveys::kAllTools) {
    Category& cat = dict.categories[static_cast<std::size_t>(tool)];
    cat.tool = tool;
    const surveys::ToolDemographics& demo = surveys::demographics(tool);
    const std::vector<std::string>& labels = question_labels(tool);
    for (int q = 1; q <= demo.chosen_questions; ++q) {
      Dimension dim;
      dim.tool = tool;
      dim.question_index = q;
      dim.label = labels[static_cast<std::size_t>(q - 1)];
      dim.patterns = seed_patterns(dim.label);

      // Dichotomize this question's answers at the scale midpoint.
      std::vector<char> high(users.size(), 0);
      bool constant = true;
      for (std::size_t u = 0; u < users.size(); ++u) {
        int answer = 0;
        for (const surveys::SurveyResponse& r : *users[u]->survey_responses) {
          if (r.tool == tool) answer = r.answers[static_cast<std::size_t>(q - 1)];
        }
        high[u] = 2 * answer > demo.per_question_max ? 1 : 0;
        if (u > 0 && high[u] != high[0]) constant = false;
      }

      if (!constant) {
        std::vector<std::pair<double, std::string>> ranked;  // (-|r|, stem)
        for (const auto& [token, df] : document_frequency) {
          if (df < params.min_df) continue;
          std::vector<char> presence(users.size(), 0);
          for (std::size_t u = 0; u < users.size(); ++u) {
            presence[u] = user_tokens[u].count(token) ? 1 : 0;
          }
          double r = binary_correlation(presence, high);
          if (std::abs(r) > 0.0) ranked.emplace_back(-std::abs(r), token);
        }
        std::sort(ranked.begin(), ranked.end());
        int taken = 0;
        for (const auto& [neg_abs_r, token] : ranked) {
          if (taken >= params.top_k) break;
          bool duplicate = false;
          for (const WordPattern& existing : dim.patterns) {
            if (existing.stem == token) {
              duplicate = true;
              break;
            }
          }
          if (duplicate) continue;
          dim.patterns.push_back({token, false});
          ++taken;
        }
      }

      if (dim.patterns.empty()) {
        throw std::runtime_error(std::string("build_dictionary: empty dimension for ") +
                                 surveys::tool_name(tool) + ":" + std::to_string(q) +
                                 " (consider lowering min_df)");
      }
      std::sort(dim.patterns.begin(), dim.patterns.end());
      cat.dimensions.push_back(std::move(dim));
    }
  }
  return dict;
}

}  // namespace laxary::dict
