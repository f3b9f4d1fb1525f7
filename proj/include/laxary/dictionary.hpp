#pragma once

#include <array>
#include <string>
#include <vector>

#include "laxary/corpus.hpp"
#include "laxary/surveys.hpp"

namespace laxary::dict {

// One dictionary entry: a literal token or, with wildcard, a prefix (rendered
// with a trailing '*'). Stems are lowercase and contain no whitespace or '*'.
struct WordPattern {
  std::string stem;
  bool wildcard = false;

  bool operator==(const WordPattern&) const = default;
  bool operator<(const WordPattern& other) const {
    return stem != other.stem ? stem < other.stem : wildcard < other.wildcard;
  }
};

std::string render_pattern(const WordPattern& p);

// The word set attached to one survey question. question_index is 1-based.
struct Dimension {
  surveys::Tool tool{};
  int question_index = 0;
  std::string label;
  std::vector<WordPattern> patterns;  // sorted by stem, stems unique

  bool operator==(const Dimension&) const = default;
};

struct Category {
  surveys::Tool tool{};
  std::vector<Dimension> dimensions;  // exactly 5 / 6 / 5 per Table demographics

  bool operator==(const Category&) const = default;
};

struct PtsdDictionary {
  std::array<Category, 3> categories;       // DOSPERT, BSSS, VIAS order
  std::vector<WordPattern> pronoun_filter;  // first-person singular
  std::string version = "1";

  const Dimension& dimension(surveys::Tool tool, int question_index) const;
  std::vector<const Dimension*> all_dimensions() const;  // the 16, canonical order

  bool operator==(const PtsdDictionary&) const = default;
};

// Default first-person-singular pronoun filter: i, me, my, mine, myself,
// i'm, i've, i'll, i'd.
std::vector<WordPattern> default_pronoun_filter();

// Built-in question labels; DOSPERT's five come from the published scale
// sample, the others are the shipped editable defaults.
const std::vector<std::string>& question_labels(surveys::Tool tool);

struct DictionaryError : std::runtime_error {
  DictionaryError(std::size_t line, const std::string& message);
  std::size_t line_number;
};

// File grammar: '#' comments (the first '# ptsd-dict v<...>' line carries the
// version), a [PRONOUNS] section, and one [TOOL:index] label section per
// question with one pattern per line. Errors carry line numbers.
PtsdDictionary parse_dictionary(const std::string& text);

// Canonical form: version comment, pronouns, categories in tool order with a
// divider comment each, stems sorted. parse(serialize(d)) == d, and output is
// byte-deterministic.
std::string serialize_dictionary(const PtsdDictionary& dictionary);

// Wildcard patterns prefix-match; literals require equality. Token must be
// lowercase.
bool match_pattern(const WordPattern& pattern, const std::string& token);

// True iff any dictionary-view token of `text` matches `pattern`.
bool pattern_in_text(const WordPattern& pattern, const std::string& text);

// Splits normalized text into sentence segments (on . ! ?) and keeps those
// with at least one token matching the pronoun filter.
std::vector<std::string> first_person_segments(const std::string& text,
                                               const std::vector<WordPattern>& pronouns);

// All first-person segments of one week, in tweet order.
std::vector<std::string> week_first_person_segments(const corpus::UserWeek& week,
                                                    const std::vector<WordPattern>& pronouns);

struct BuilderParams {
  int top_k = 5;      // mined stems per question
  int min_df = 5;     // minimum users a candidate stem must appear for
  std::string version = "1";
};

// Builds the dictionary from labeled training users: seeds each dimension
// with wildcarded content-word stems of its question text, then adds the
// top-k candidate tokens ranked by |point-biserial correlation| between
// token presence in the user's first-person segments and the answer being at
// or above the question midpoint. Ties break lexicographically; the result is
// deterministic. Users must carry all three survey responses.
PtsdDictionary build_dictionary(const std::vector<corpus::CohortUser>& train,
                                const BuilderParams& params = {});

// Wildcard seed stems for one question label (exposed for tests).
std::vector<WordPattern> seed_patterns(const std::string& label);

}  // namespace laxary::dict
