#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "laxary/dictionary.hpp"

namespace laxary::baseline {

enum class LmKind { UnigramWord, CharNgram };

LmKind lm_kind_from_name(const std::string& name);
const char* lm_kind_name(LmKind kind);

// Word unigram or character n-gram model with add-k smoothing applied at
// query time. Char models pad with begin/end sentinels. Unseen symbols all
// map to a single UNK type so that probabilities over the (closed)
// vocabulary sum to 1 exactly.
class LanguageModel {
 public:
  LanguageModel() = default;
  LanguageModel(LmKind kind, int order, double smoothing_k);

  void add_text(const std::string& normalized);

  LmKind kind() const { return kind_; }
  int order() const { return order_; }
  double smoothing_k() const { return smoothing_k_; }
  // observed symbols plus the UNK slot
  std::size_t vocab_size() const { return symbols_.size() + 1; }
  const std::set<std::string>& symbols() const { return symbols_; }

  double prob(const std::string& context, const std::string& symbol) const;
  double log_prob_text(const std::string& normalized) const;

  std::string dump() const;                       // versioned sorted count table
  static LanguageModel load(const std::string&);  // bit-exact reload

  bool operator==(const LanguageModel&) const = default;

 private:
  LmKind kind_ = LmKind::UnigramWord;
  int order_ = 1;
  double smoothing_k_ = 0.1;
  std::map<std::string, std::map<std::string, std::int64_t>> counts_;
  std::map<std::string, std::int64_t> context_totals_;
  std::set<std::string> symbols_;
};

// corpus must be nonempty; char order must be in [1, 5]
LanguageModel train_lm(const std::vector<std::string>& corpus, LmKind kind, int order,
                       double smoothing_k);

// positive/negative models of the same kind and order
struct LmPair {
  LanguageModel positive;
  LanguageModel negative;

  LmPair() = default;
  LmPair(LanguageModel pos, LanguageModel neg);
};

// alpha-ratio lm+(t)/lm-(t), computed in log space; positive class iff > 1.
double score_ratio(const LmPair& pair, const std::string& text);
double log_score_ratio(const LmPair& pair, const std::string& text);
bool classify_positive(const LmPair& pair, const std::string& text);

// argmax of log-probability (minimal cross entropy); ties -> lowest index.
std::size_t classify_multiclass(const std::vector<LanguageModel>& models,
                                const std::string& text);

// The nine examined word categories, fixed order.
inline constexpr int kCategoryCount = 9;
const std::vector<std::string>& category_names();

struct CategoryLexicon {
  std::string name;
  std::vector<dict::WordPattern> patterns;
};

// Small open word lists shipped with the artifact (editable via lexicon files).
const std::vector<CategoryLexicon>& default_lexicons();

// Lexicon files reuse the dictionary grammar with [LEXICON:<name>] sections.
std::vector<CategoryLexicon> parse_lexicons(const std::string& text);
std::string serialize_lexicons(const std::vector<CategoryLexicon>& lexicons);

// Per category: fraction of texts containing at least one matching token.
// Throws on an empty text list.
std::vector<double> category_proportions(const std::vector<std::string>& texts,
                                         const std::vector<CategoryLexicon>& lexicons);

struct LoglinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double decision(const std::vector<double>& x) const;
  double predict_proba(const std::vector<double>& x) const;
  bool predict(const std::vector<double>& x) const { return predict_proba(x) > 0.5; }
};

struct SgdConfig {
  double learning_rate = 0.1;
  double lr_decay = 0.0;  // lr_e = learning_rate / (1 + lr_decay * epoch)
  int epochs = 300;
  double l2 = 1e-4;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

// Mean logistic loss plus (l2/2)*||w||^2, with its analytic gradient.
double loglinear_loss(const LoglinearModel& model, const std::vector<std::vector<double>>& x,
                      const std::vector<int>& y, double l2);
void loglinear_gradient(const LoglinearModel& model, const std::vector<std::vector<double>>& x,
                        const std::vector<int>& y, double l2, std::vector<double>& grad_w,
                        double& grad_b);

struct TrainTrace {
  std::vector<double> epoch_loss;  // full-batch loss after each epoch
};

// Binary logistic regression trained by seeded SGD; deterministic given the
// config. Requires both classes present.
LoglinearModel train_loglinear(const std::vector<std::vector<double>>& features,
                               const std::vector<int>& labels, const SgdConfig& config = {},
                               TrainTrace* trace = nullptr);

struct FeatureRank {
  std::size_t index = 0;
  double score = 0.0;  // Fisher ratio; +inf when within-class variance is 0
};

// Between-class over pooled within-class variance per feature, descending;
// ties break by index. Requires >= 2 examples per class.
std::vector<FeatureRank> rank_features(const std::vector<std::vector<double>>& features,
                                       const std::vector<int>& labels);

struct GroupComparisonRow {
  std::string category;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double u_statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;  // two-sided, 0.05
};

// Mann-Whitney U comparison of per-user category proportions between two
// groups of users (each user = their list of normalized texts).
std::vector<GroupComparisonRow> group_comparison(
    const std::vector<std::vector<std::string>>& group_a,
    const std::vector<std::vector<std::string>>& group_b,
    const std::vector<CategoryLexicon>& lexicons);

// Two-sided Mann-Whitney U p-value (normal approximation with tie and
// continuity corrections). Exposed for tests.
double mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b,
                      double* u_statistic = nullptr);

}  // namespace laxary::baseline
