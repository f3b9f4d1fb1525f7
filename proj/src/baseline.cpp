#include "laxary/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "laxary/util.hpp"

namespace laxary::baseline {

namespace {

constexpr char kBegin = '\x02';
constexpr char kEnd = '\x03';

std::string escape_field(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\t') {
      out += "\\t";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\x%02X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string unescape_field(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    ++i;
    if (i >= s.size()) throw std::runtime_error("bad escape in model dump");
    char c = s[i];
    if (c == '\\') {
      out += '\\';
    } else if (c == 't') {
      out += '\t';
    } else if (c == 'n') {
      out += '\n';
    } else if (c == 'x') {
      if (i + 2 >= s.size()) throw std::runtime_error("bad \\x escape in model dump");
      out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      throw std::runtime_error("bad escape in model dump");
    }
  }
  return out;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

LmKind lm_kind_from_name(const std::string& name) {
  if (name == "unigram-word") return LmKind::UnigramWord;
  if (name == "char-ngram") return LmKind::CharNgram;
  throw std::runtime_error("unknown language model kind: " + name);
}

const char* lm_kind_name(LmKind kind) {
  return kind == LmKind::UnigramWord ? "unigram-word" : "char-ngram";
}

LanguageModel::LanguageModel(LmKind kind, int order, double smoothing_k)
    : kind_(kind), order_(kind == LmKind::UnigramWord ? 1 : order), smoothing_k_(smoothing_k) {
  if (kind == LmKind::CharNgram && (order < 1 || order > 5)) {
    throw std::invalid_argument("char n-gram order must be in [1, 5]");
  }
  if (smoothing_k < 0.0) throw std::invalid_argument("smoothing constant must be >= 0");
}

void LanguageModel::add_text(const std::string& normalized) {
  if (kind_ == LmKind::UnigramWord) {
    for (const std::string& token : corpus::raw_tokens(normalized)) {
      counts_[""][token] += 1;
      context_totals_[""] += 1;
      symbols_.insert(token);
    }
    return;
  }
  std::string padded(static_cast<std::size_t>(order_ - 1), kBegin);
  padded += normalized;
  padded += kEnd;
  for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < padded.size(); ++i) {
    std::string context = padded.substr(i - static_cast<std::size_t>(order_ - 1),
                                        static_cast<std::size_t>(order_ - 1));
    std::string symbol(1, padded[i]);
    counts_[context][symbol] += 1;
    context_totals_[context] += 1;
    symbols_.insert(symbol);
  }
}

double LanguageModel::prob(const std::string& context, const std::string& symbol) const {
  std::int64_t c = 0;
  if (auto it = counts_.find(context); it != counts_.end()) {
    if (auto jt = it->second.find(symbol); jt != it->second.end()) c = jt->second;
  }
  std::int64_t n = 0;
  if (auto it = context_totals_.find(context); it != context_totals_.end()) n = it->second;
  double denominator =
      static_cast<double>(n) + smoothing_k_ * static_cast<double>(vocab_size());
  if (denominator == 0.0) return 0.0;
  return (static_cast<double>(c) + smoothing_k_) / denominator;
}

double LanguageModel::log_prob_text(const std::string& normalized) const {
  double log_p = 0.0;
  if (kind_ == LmKind::UnigramWord) {
    for (const std::string& token : corpus::raw_tokens(normalized)) {
      log_p += std::log(prob("", token));
    }
    return log_p;
  }
  std::string padded(static_cast<std::size_t>(order_ - 1), kBegin);
  padded += normalized;
  padded += kEnd;
  for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < padded.size(); ++i) {
    std::string context = padded.substr(i - static_cast<std::size_t>(order_ - 1),
                                        static_cast<std::size_t>(order_ - 1));
    log_p += std::log(prob(context, std::string(1, padded[i])));
  }
  return log_p;
}

std::string LanguageModel::dump() const {
  std::string out = "laxary-lm v1\n";
  out += std::string("kind ") + lm_kind_name(kind_) + "\n";
  out += "order " + std::to_string(order_) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "smoothing %.17g\n", smoothing_k_);
  out += buf;
  out += "counts\n";
  for (const auto& [context, row] : counts_) {
    for (const auto& [symbol, count] : row) {
      out += escape_field(context) + "\t" + escape_field(symbol) + "\t" + std::to_string(count) +
             "\n";
    }
  }
  return out;
}

LanguageModel LanguageModel::load(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "laxary-lm v1") {
    throw std::runtime_error("bad model dump header");
  }
  LmKind kind = LmKind::UnigramWord;
  int order = 1;
  double k = 0.0;
  while (std::getline(in, line) && line != "counts") {
    std::size_t space = line.find(' ');
    if (space == std::string::npos) throw std::runtime_error("bad model dump field: " + line);
    std::string key = line.substr(0, space);
    std::string value = line.substr(space + 1);
    if (key == "kind") {
      kind = lm_kind_from_name(value);
    } else if (key == "order") {
      order = std::stoi(value);
    } else if (key == "smoothing") {
      k = std::stod(value);
    } else {
      throw std::runtime_error("unknown model dump field: " + key);
    }
  }
  LanguageModel model(kind, order, k);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw std::runtime_error("bad model dump count line");
    }
    std::string context = unescape_field(line.substr(0, t1));
    std::string symbol = unescape_field(line.substr(t1 + 1, t2 - t1 - 1));
    std::int64_t count = std::stoll(line.substr(t2 + 1));
    model.counts_[context][symbol] = count;
    model.context_totals_[context] += count;
    model.symbols_.insert(symbol);
  }
  return model;
}

LanguageModel train_lm(const std::vector<std::string>& corpus, LmKind kind, int order,
                       double smoothing_k) {
  if (corpus.empty()) throw std::invalid_argument("train_lm: empty corpus");
  LanguageModel model(kind, order, smoothing_k);
  for (const std::string& text : corpus) model.add_text(text);
  return model;
}

LmPair::LmPair(LanguageModel pos, LanguageModel neg)
    : positive(std::move(pos)), negative(std::move(neg)) {
  if (positive.kind() != negative.kind() || positive.order() != negative.order()) {
    throw std::invalid_argument("LmPair: models must share kind and order");
  }
}

double log_score_ratio(const LmPair& pair, const std::string& text) {
  return pair.positive.log_prob_text(text) - pair.negative.log_prob_text(text);
}

double score_ratio(const LmPair& pair, const std::string& text) {
  return std::exp(log_score_ratio(pair, text));
}

bool classify_positive(const LmPair& pair, const std::string& text) {
  return log_score_ratio(pair, text) > 0.0;
}

std::size_t classify_multiclass(const std::vector<LanguageModel>& models,
                                const std::string& text) {
  if (models.size() < 2) throw std::invalid_argument("classify_multiclass: need >= 2 models");
  for (const LanguageModel& m : models) {
    if (m.kind() != models[0].kind() || m.order() != models[0].order()) {
      throw std::invalid_argument("classify_multiclass: models must share kind and order");
    }
  }
  std::size_t best = 0;
  double best_log_p = models[0].log_prob_text(text);
  for (std::size_t i = 1; i < models.size(); ++i) {
    double log_p = models[i].log_prob_text(text);
    if (log_p > best_log_p) {
      best = i;
      best_log_p = log_p;
    }
  }
  return best;
}

const std::vector<std::string>& category_names() {
  static const std::vector<std::string> names = {"pronoun-1st", "pronoun-2nd", "pronoun-3rd",
                                                 "swear",       "anger",       "posemo",
                                                 "negemo",      "death",       "anxiety"};
  return names;
}

namespace {

CategoryLexicon make_lexicon(const std::string& name, const std::vector<std::string>& entries) {
  CategoryLexicon lexicon;
  lexicon.name = name;
  for (std::string entry : entries) {
    dict::WordPattern p;
    if (!entry.empty() && entry.back() == '*') {
      p.wildcard = true;
      entry.pop_back();
    }
    p.stem = entry;
    lexicon.patterns.push_back(std::move(p));
  }
  std::sort(lexicon.patterns.begin(), lexicon.patterns.end());
  return lexicon;
}

}  // namespace

const std::vector<CategoryLexicon>& default_lexicons() {
  static const std::vector<CategoryLexicon> lexicons = {
      make_lexicon("pronoun-1st", {"i", "me", "my", "mine", "myself", "we", "us", "our", "ours",
                                   "i'm", "i've", "i'll", "i'd"}),
      make_lexicon("pronoun-2nd", {"you", "your", "yours", "yourself", "yourselves", "you're",
                                   "you've", "you'll", "you'd", "u"}),
      make_lexicon("pronoun-3rd", {"he", "she", "it", "they", "him", "her", "them", "his", "hers",
                                   "its", "their", "theirs", "himself", "herself", "themselves",
                                   "he's", "she's"}),
      make_lexicon("swear", {"damn*", "hell", "shit*", "fuck*", "crap*", "bitch*", "bastard*",
                             "piss*", "ass"}),
      make_lexicon("anger", {"hate*", "hating", "angry", "anger*", "mad", "madder", "rage*",
                             "furious*", "annoy*", "pissed", "irritat*", "resent*", "hostil*",
                             "outrag*", "fuming"}),
      make_lexicon("posemo", {"happy", "happi*", "love*", "loving", "nice*", "sweet*", "good",
                              "great*", "awesome", "wonderful*", "glad", "joy*", "excit*",
                              "amaz*", "beautiful*", "fun", "hope*", "proud*", "thank*"}),
      make_lexicon("negemo", {"sad*", "hurt*", "ugly", "nasty", "awful*", "bad", "worse", "worst",
                              "terribl*", "horribl*", "miser*", "cry", "crying", "cried", "lonel*",
                              "depress*", "gloom*", "grim*", "pain*"}),
      make_lexicon("death", {"death*", "dead*", "die", "dies", "died", "dying", "kill*",
                             "suicid*", "funeral*", "grave*", "grief*", "mourn*", "coffin*",
                             "bury", "buried", "burial*"}),
      make_lexicon("anxiety", {"anxi*", "worr*", "nervous*", "afraid", "scare*", "scary", "fear*",
                               "panic*", "tense", "tension", "stress*", "dread*", "uneasy",
                               "restless*", "terrified", "terrify*", "trembl*", "ptsd"}),
  };
  return lexicons;
}

std::vector<CategoryLexicon> parse_lexicons(const std::string& text) {
  std::vector<CategoryLexicon> lexicons;
  CategoryLexicon* current = nullptr;

  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = util::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped[0] == '[') {
      std::size_t close = stripped.find(']');
      if (close == std::string::npos) {
        throw dict::DictionaryError(line_number, "unterminated '['");
      }
      std::string header = stripped.substr(1, close - 1);
      if (header.rfind("LEXICON:", 0) != 0) {
        throw dict::DictionaryError(line_number, "expected [LEXICON:<name>] header");
      }
      std::string name = header.substr(8);
      bool known = false;
      for (const std::string& n : category_names()) {
        if (n == name) known = true;
      }
      if (!known) throw dict::DictionaryError(line_number, "unknown lexicon name '" + name + "'");
      for (const CategoryLexicon& l : lexicons) {
        if (l.name == name) {
          throw dict::DictionaryError(line_number, "duplicate lexicon '" + name + "'");
        }
      }
      lexicons.push_back({name, {}});
      current = &lexicons.back();
      continue;
    }
    if (!current) throw dict::DictionaryError(line_number, "pattern outside any section");
    dict::WordPattern p;
    std::string body = stripped;
    if (body.back() == '*') {
      p.wildcard = true;
      body.pop_back();
    }
    p.stem = util::to_lower(body);
    if (p.stem.empty()) throw dict::DictionaryError(line_number, "empty pattern");
    current->patterns.push_back(std::move(p));
  }

  if (lexicons.size() != category_names().size()) {
    throw std::runtime_error("lexicon file must define all " +
                             std::to_string(category_names().size()) + " categories");
  }
  for (CategoryLexicon& l : lexicons) {
    if (l.patterns.empty()) throw std::runtime_error("lexicon '" + l.name + "' is empty");
    std::sort(l.patterns.begin(), l.patterns.end());
  }
  // canonical order
  std::vector<CategoryLexicon> ordered;
  for (const std::string& name : category_names()) {
    for (CategoryLexicon& l : lexicons) {
      if (l.name == name) ordered.push_back(std::move(l));
    }
  }
  return ordered;
}

std::string serialize_lexicons(const std::vector<CategoryLexicon>& lexicons) {
  std::string out;
  for (const CategoryLexicon& l : lexicons) {
    out += "[LEXICON:" + l.name + "]\n";
    for (const dict::WordPattern& p : l.patterns) out += dict::render_pattern(p) + "\n";
  }
  return out;
}

std::vector<double> category_proportions(const std::vector<std::string>& texts,
                                         const std::vector<CategoryLexicon>& lexicons) {
  if (texts.empty()) throw std::invalid_argument("category_proportions: no texts");
  std::vector<double> proportions(lexicons.size(), 0.0);
  for (const std::string& text : texts) {
    std::vector<std::string> tokens = corpus::dict_tokens(text);
    for (std::size_t c = 0; c < lexicons.size(); ++c) {
      bool hit = false;
      for (const dict::WordPattern& p : lexicons[c].patterns) {
        for (const std::string& token : tokens) {
          if (dict::match_pattern(p, token)) {
            hit = true;
            break;
          }
        }
        if (hit) break;
      }
      if (hit) proportions[c] += 1.0;
    }
  }
  for (double& p : proportions) p /= static_cast<double>(texts.size());
  return proportions;
}

double LoglinearModel::decision(const std::vector<double>& x) const {
  double z = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * x[i];
  return z;
}

double LoglinearModel::predict_proba(const std::vector<double>& x) const {
  return sigmoid(decision(x));
}

double loglinear_loss(const LoglinearModel& model, const std::vector<std::vector<double>>& x,
                      const std::vector<int>& y, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = model.decision(x[i]);
    // max(z,0) - y*z + log(1 + exp(-|z|))
    loss += std::max(z, 0.0) - y[i] * z + std::log1p(std::exp(-std::abs(z)));
  }
  loss /= static_cast<double>(x.size());
  double reg = 0.0;
  for (double w : model.weights) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

void loglinear_gradient(const LoglinearModel& model, const std::vector<std::vector<double>>& x,
                        const std::vector<int>& y, double l2, std::vector<double>& grad_w,
                        double& grad_b) {
  grad_w.assign(model.weights.size(), 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double g = sigmoid(model.decision(x[i])) - y[i];
    for (std::size_t j = 0; j < grad_w.size(); ++j) grad_w[j] += g * x[i][j];
    grad_b += g;
  }
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t j = 0; j < grad_w.size(); ++j) {
    grad_w[j] = grad_w[j] * inv_n + l2 * model.weights[j];
  }
  grad_b *= inv_n;
}

LoglinearModel train_loglinear(const std::vector<std::vector<double>>& features,
                               const std::vector<int>& labels, const SgdConfig& config,
                               TrainTrace* trace) {
  if (features.size() < 2) throw std::invalid_argument("train_loglinear: need >= 2 examples");
  if (features.size() != labels.size()) {
    throw std::invalid_argument("train_loglinear: features/labels size mismatch");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) (y ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("train_loglinear: both classes must be present");
  }

  LoglinearModel model;
  model.weights.assign(features[0].size(), 0.0);

  std::vector<std::size_t> order(features.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double lr = config.learning_rate / (1.0 + config.lr_decay * epoch);
    if (config.shuffle) {
      util::Rng rng(util::derive_seed(config.seed, "epoch:" + std::to_string(epoch)));
      rng.shuffle(order);
    }
    for (std::size_t idx : order) {
      const std::vector<double>& x = features[idx];
      double g = sigmoid(model.decision(x)) - labels[idx];
      for (std::size_t j = 0; j < model.weights.size(); ++j) {
        model.weights[j] -= lr * (g * x[j] + config.l2 * model.weights[j]);
      }
      model.bias -= lr * g;
    }
    if (trace) trace->epoch_loss.push_back(loglinear_loss(model, features, labels, config.l2));
  }
  return model;
}

std::vector<FeatureRank> rank_features(const std::vector<std::vector<double>>& features,
                                       const std::vector<int>& labels) {
  std::size_t n_pos = 0, n_neg = 0;
  for (int y : labels) (y ? n_pos : n_neg) += 1;
  if (n_pos < 2 || n_neg < 2) {
    throw std::invalid_argument("rank_features: need >= 2 examples per class");
  }
  const std::size_t n = features.size();
  const std::size_t d = features[0].size();

  std::vector<FeatureRank> ranks(d);
  for (std::size_t j = 0; j < d; ++j) {
    double mean_pos = 0.0, mean_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) (labels[i] ? mean_pos : mean_neg) += features[i][j];
    mean_pos /= static_cast<double>(n_pos);
    mean_neg /= static_cast<double>(n_neg);
    double mean_all = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_all += features[i][j];
    mean_all /= static_cast<double>(n);

    double var_pos = 0.0, var_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = labels[i] ? mean_pos : mean_neg;
      double diff = features[i][j] - m;
      (labels[i] ? var_pos : var_neg) += diff * diff;
    }
    var_pos /= static_cast<double>(n_pos);
    var_neg /= static_cast<double>(n_neg);

    double w_pos = static_cast<double>(n_pos) / static_cast<double>(n);
    double w_neg = static_cast<double>(n_neg) / static_cast<double>(n);
    double between = w_pos * (mean_pos - mean_all) * (mean_pos - mean_all) +
                     w_neg * (mean_neg - mean_all) * (mean_neg - mean_all);
    double within = w_pos * var_pos + w_neg * var_neg;

    ranks[j].index = j;
    if (within > 0.0) {
      ranks[j].score = between / within;
    } else {
      ranks[j].score = between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
  }
  std::stable_sort(ranks.begin(), ranks.end(), [](const FeatureRank& a, const FeatureRank& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  return ranks;
}

double mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b,
                      double* u_statistic) {
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  std::vector<std::pair<double, int>> pooled;  // (value, group)
  pooled.reserve(n1 + n2);
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  const std::size_t n = pooled.size();
  std::vector<double> ranks(n, 0.0);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[k] = avg_rank;
    double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  double r1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (pooled[k].second == 0) r1 += ranks[k];
  }
  double u1 = r1 - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
  if (u_statistic) *u_statistic = u1;

  double mean_u = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
  double nn = static_cast<double>(n);
  double variance = (static_cast<double>(n1) * static_cast<double>(n2) / 12.0) *
                    ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (variance <= 0.0) return 1.0;

  double diff = u1 - mean_u;
  if (diff > 0.5) {
    diff -= 0.5;  // continuity correction
  } else if (diff < -0.5) {
    diff += 0.5;
  } else {
    diff = 0.0;
  }
  double z = diff / std::sqrt(variance);
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

std::vector<GroupComparisonRow> group_comparison(
    const std::vector<std::vector<std::string>>& group_a,
    const std::vector<std::vector<std::string>>& group_b,
    const std::vector<CategoryLexicon>& lexicons) {
  if (group_a.empty() || group_b.empty()) {
    throw std::invalid_argument("group_comparison: both groups must be nonempty");
  }
  std::vector<std::vector<double>> props_a, props_b;
  for (const std::vector<std::string>& texts : group_a) {
    props_a.push_back(category_proportions(texts, lexicons));
  }
  for (const std::vector<std::string>& texts : group_b) {
    props_b.push_back(category_proportions(texts, lexicons));
  }

  std::vector<GroupComparisonRow> rows;
  for (std::size_t c = 0; c < lexicons.size(); ++c) {
    GroupComparisonRow row;
    row.category = lexicons[c].name;
    std::vector<double> a, b;
    for (const std::vector<double>& p : props_a) a.push_back(p[c]);
    for (const std::vector<double>& p : props_b) b.push_back(p[c]);
    for (double v : a) row.mean_a += v;
    for (double v : b) row.mean_b += v;
    row.mean_a /= static_cast<double>(a.size());
    row.mean_b /= static_cast<double>(b.size());
    row.p_value = mann_whitney_p(a, b, &row.u_statistic);
    row.significant = row.p_value < 0.05;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace laxary::baseline
