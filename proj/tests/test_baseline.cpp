#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "laxary/baseline.hpp"
#include "laxary/util.hpp"

using namespace laxary;
using baseline::LanguageModel;
using baseline::LmKind;
using baseline::LmPair;

namespace {

std::vector<std::string> words_corpus(const std::vector<std::string>& words, int repeats,
                                      util::Rng& rng) {
  std::vector<std::string> texts;
  for (int i = 0; i < repeats; ++i) {
    std::string t;
    int len = static_cast<int>(rng.uniform_int(3, 8));
    for (int w = 0; w < len; ++w) {
      if (!t.empty()) t.push_back(' ');
      t += rng.pick(words);
    }
    texts.push_back(t);
  }
  return texts;
}

}  // namespace

TEST_CASE("train_lm: char bigram probability from the count table") {
  LanguageModel model = baseline::train_lm({"ab"}, LmKind::CharNgram, 2, 1.0);
  // padded to ^ab$: contexts ^, a, b; P(b|a) = (1+1)/(1+V)
  double v = static_cast<double>(model.vocab_size());
  CHECK(model.prob("a", "b") == doctest::Approx((1.0 + 1.0) / (1.0 + v)));
}

TEST_CASE("train_lm: unsmoothed unigram frequencies") {
  LanguageModel model = baseline::train_lm({"a a b"}, LmKind::UnigramWord, 1, 0.0);
  CHECK(model.prob("", "a") == doctest::Approx(2.0 / 3.0));
  CHECK(model.prob("", "b") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("train_lm: probabilities over the vocabulary sum to 1") {
  util::Rng rng(5);
  std::vector<std::string> corpus =
      words_corpus({"alpha", "beta", "gamma", "delta"}, 20, rng);
  for (double k : {0.1, 1.0}) {
    LanguageModel unigram = baseline::train_lm(corpus, LmKind::UnigramWord, 1, k);
    double total = 0.0;
    for (const std::string& symbol : unigram.symbols()) total += unigram.prob("", symbol);
    total += unigram.prob("", "<never-seen>");  // the UNK slot
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    LanguageModel chars = baseline::train_lm(corpus, LmKind::CharNgram, 3, k);
    double char_total = 0.0;
    for (const std::string& symbol : chars.symbols()) char_total += chars.prob("al", symbol);
    char_total += chars.prob("al", "\x01");
    CHECK(char_total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("train_lm: preconditions") {
  CHECK_THROWS(baseline::train_lm({}, LmKind::UnigramWord, 1, 0.1));
  CHECK_THROWS(baseline::train_lm({"x"}, LmKind::CharNgram, 0, 0.1));
  CHECK_THROWS(baseline::train_lm({"x"}, LmKind::CharNgram, 6, 0.1));
}

TEST_CASE("model dump reloads bit-exactly") {
  util::Rng rng(9);
  std::vector<std::string> corpus = words_corpus({"red", "blue", "green"}, 15, rng);
  for (LmKind kind : {LmKind::UnigramWord, LmKind::CharNgram}) {
    LanguageModel model = baseline::train_lm(corpus, kind, 3, 0.1);
    std::string dump = model.dump();
    LanguageModel reloaded = LanguageModel::load(dump);
    CHECK(reloaded == model);
    CHECK(reloaded.dump() == dump);
  }
}

TEST_CASE("score_ratio: identical models give exactly 1") {
  util::Rng rng(2);
  std::vector<std::string> corpus = words_corpus({"one", "two", "three"}, 10, rng);
  LanguageModel model = baseline::train_lm(corpus, LmKind::UnigramWord, 1, 0.1);
  LmPair pair(model, model);
  for (const std::string& text : corpus) {
    CHECK(baseline::score_ratio(pair, text) == 1.0);
  }
}

TEST_CASE("score_ratio: disjoint vocabularies force the inequality") {
  util::Rng rng(3);
  std::vector<std::string> pos_corpus = words_corpus({"storm", "thunder", "rain"}, 25, rng);
  std::vector<std::string> neg_corpus = words_corpus({"sun", "breeze", "meadow"}, 25, rng);
  LmPair pair(baseline::train_lm(pos_corpus, LmKind::UnigramWord, 1, 0.1),
              baseline::train_lm(neg_corpus, LmKind::UnigramWord, 1, 0.1));
  CHECK(baseline::score_ratio(pair, "storm rain thunder") > 1.0);
  CHECK(baseline::score_ratio(pair, "sun breeze meadow") < 1.0);
}

TEST_CASE("score_ratio: threshold of 1 divides the classes") {
  // a ratio just above 1 classifies positive
  util::Rng rng(4);
  std::vector<std::string> pos_corpus = words_corpus({"a", "b"}, 20, rng);
  std::vector<std::string> neg_corpus = words_corpus({"a", "c"}, 20, rng);
  LmPair pair(baseline::train_lm(pos_corpus, LmKind::UnigramWord, 1, 0.5),
              baseline::train_lm(neg_corpus, LmKind::UnigramWord, 1, 0.5));
  double ratio = baseline::score_ratio(pair, "b");
  CHECK(ratio > 1.0);
  CHECK(baseline::classify_positive(pair, "b"));
  CHECK((baseline::score_ratio(pair, "c") > 1.0) == baseline::classify_positive(pair, "c"));
}

TEST_CASE("score_ratio: log-space equivalence on long texts") {
  util::Rng rng(6);
  std::vector<std::string> pos_corpus = words_corpus({"x", "y", "z"}, 30, rng);
  std::vector<std::string> neg_corpus = words_corpus({"x", "q", "r"}, 30, rng);
  LmPair pair(baseline::train_lm(pos_corpus, LmKind::CharNgram, 3, 0.1),
              baseline::train_lm(neg_corpus, LmKind::CharNgram, 3, 0.1));
  std::string long_text;
  while (long_text.size() < 10000) long_text += "x y z q r ";
  double log_ratio = baseline::log_score_ratio(pair, long_text);
  CHECK(std::isfinite(log_ratio));
  CHECK((baseline::score_ratio(pair, long_text) > 1.0) == (log_ratio > 0.0));
}

TEST_CASE("classify_multiclass: own-corpus model wins") {
  util::Rng rng(7);
  std::vector<std::string> c0 = words_corpus({"ant", "bee"}, 20, rng);
  std::vector<std::string> c1 = words_corpus({"cat", "dog"}, 20, rng);
  std::vector<LanguageModel> models = {
      baseline::train_lm(c0, LmKind::UnigramWord, 1, 0.1),
      baseline::train_lm(c1, LmKind::UnigramWord, 1, 0.1),
  };
  CHECK(baseline::classify_multiclass(models, "cat dog cat") == 1);
  CHECK(baseline::classify_multiclass(models, "ant bee ant") == 0);
}

TEST_CASE("classify_multiclass: identical models tie-break to index 0") {
  LanguageModel model = baseline::train_lm({"a b c"}, LmKind::UnigramWord, 1, 0.1);
  CHECK(baseline::classify_multiclass({model, model, model}, "a b") == 0);
}

TEST_CASE("classify_multiclass: three disjoint corpora") {
  util::Rng rng(8);
  std::vector<LanguageModel> models;
  std::vector<std::vector<std::string>> vocabularies = {
      {"ga", "gb"}, {"ha", "hb"}, {"ka", "kb"}};
  for (const auto& vocab : vocabularies) {
    models.push_back(
        baseline::train_lm(words_corpus(vocab, 20, rng), LmKind::UnigramWord, 1, 0.1));
  }
  CHECK(baseline::classify_multiclass(models, "ka kb ka") == 2);
}

TEST_CASE("classify_multiclass: agrees with score_ratio thresholding for 2 models") {
  util::Rng rng(13);
  std::vector<std::string> pos_corpus = words_corpus({"win", "joy"}, 15, rng);
  std::vector<std::string> neg_corpus = words_corpus({"loss", "woe"}, 15, rng);
  LanguageModel pos = baseline::train_lm(pos_corpus, LmKind::UnigramWord, 1, 0.1);
  LanguageModel neg = baseline::train_lm(neg_corpus, LmKind::UnigramWord, 1, 0.1);
  LmPair pair(pos, neg);
  for (const std::string& text : {"win joy", "loss woe", "win woe", "joy joy loss"}) {
    bool ratio_positive = baseline::score_ratio(pair, text) > 1.0;
    bool multiclass_positive = baseline::classify_multiclass({pos, neg}, text) == 0;
    // ties go to index 0; score_ratio ties are not positive
    if (baseline::log_score_ratio(pair, text) != 0.0) {
      CHECK(ratio_positive == multiclass_positive);
    }
  }
}

TEST_CASE("category_proportions: hand-counted fixture") {
  std::vector<double> proportions =
      baseline::category_proportions({"i am sad", "hello"}, baseline::default_lexicons());
  REQUIRE(proportions.size() == 9);
  // negemo contains sad*, pronoun-1st contains i
  CHECK(proportions[6] == doctest::Approx(0.5));
  CHECK(proportions[0] == doctest::Approx(0.5));
  // anger: nothing matches
  CHECK(proportions[4] == 0.0);
}

TEST_CASE("category_proportions: every text with 'i' makes pronoun-1st 1.0") {
  std::vector<double> proportions = baseline::category_proportions(
      {"i run", "i walk", "i rest"}, baseline::default_lexicons());
  CHECK(proportions[0] == doctest::Approx(1.0));
}

TEST_CASE("category_proportions: invariant under whole-set duplication") {
  std::vector<std::string> texts = {"i am sad", "you are kind", "they hate rain"};
  std::vector<std::string> doubled = texts;
  doubled.insert(doubled.end(), texts.begin(), texts.end());
  std::vector<double> a = baseline::category_proportions(texts, baseline::default_lexicons());
  std::vector<double> b = baseline::category_proportions(doubled, baseline::default_lexicons());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));
}

TEST_CASE("category_proportions: zero texts is an error") {
  CHECK_THROWS(baseline::category_proportions({}, baseline::default_lexicons()));
}

TEST_CASE("lexicon file: round trip and validation") {
  std::string text = baseline::serialize_lexicons(baseline::default_lexicons());
  std::vector<baseline::CategoryLexicon> parsed = baseline::parse_lexicons(text);
  REQUIRE(parsed.size() == 9);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].name == baseline::default_lexicons()[i].name);
    CHECK(parsed[i].patterns == baseline::default_lexicons()[i].patterns);
  }
  CHECK_THROWS(baseline::parse_lexicons("[LEXICON:anger]\nmad\n"));  // missing categories
  CHECK_THROWS(baseline::parse_lexicons("[LEXICON:nonsense]\nmad\n"));
}

TEST_CASE("train_loglinear: separable fixture reaches training accuracy 1") {
  std::vector<std::vector<double>> x = {{0.0, 0.1}, {0.1, 0.0}, {0.9, 1.0}, {1.0, 0.9},
                                        {0.1, 0.2}, {0.8, 0.9}};
  std::vector<int> y = {0, 0, 1, 1, 0, 1};
  baseline::LoglinearModel model = baseline::train_loglinear(x, y, {});
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(model.predict(x[i]) == (y[i] == 1));
  }
}

TEST_CASE("train_loglinear: loss non-increasing over epochs on the fixture") {
  std::vector<std::vector<double>> x = {{0.0, 0.1}, {0.1, 0.0}, {0.9, 1.0}, {1.0, 0.9}};
  std::vector<int> y = {0, 0, 1, 1};
  baseline::TrainTrace trace;
  baseline::train_loglinear(x, y, {}, &trace);
  REQUIRE(!trace.epoch_loss.empty());
  for (std::size_t e = 1; e < trace.epoch_loss.size(); ++e) {
    CHECK(trace.epoch_loss[e] <= trace.epoch_loss[e - 1] + 1e-12);
  }
}

TEST_CASE("train_loglinear: duplicated dataset keeps the boundary direction") {
  std::vector<std::vector<double>> x = {{0.2, 0.3}, {0.1, 0.2}, {0.8, 0.7}, {0.9, 0.6}};
  std::vector<int> y = {0, 0, 1, 1};
  std::vector<std::vector<double>> x2 = x;
  x2.insert(x2.end(), x.begin(), x.end());
  std::vector<int> y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());

  baseline::SgdConfig config;
  config.learning_rate = 0.5;
  config.lr_decay = 0.05;
  config.epochs = 30000;
  config.l2 = 0.05;
  config.seed = 11;
  baseline::LoglinearModel a = baseline::train_loglinear(x, y, config);
  baseline::LoglinearModel b = baseline::train_loglinear(x2, y2, config);

  auto normalize = [](std::vector<double> w) {
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : w) v /= norm;
    return w;
  };
  std::vector<double> wa = normalize(a.weights);
  std::vector<double> wb = normalize(b.weights);
  for (std::size_t i = 0; i < wa.size(); ++i) {
    CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-6));
  }
}

TEST_CASE("train_loglinear: gradient matches central finite differences") {
  util::Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::size_t d = static_cast<std::size_t>(rng.uniform_int(2, 5));
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(4, 12));
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : x[i]) v = rng.uniform() * 2.0 - 1.0;
      y[i] = rng.bernoulli(0.5) ? 1 : 0;
    }
    baseline::LoglinearModel point;
    point.weights.resize(d);
    for (double& w : point.weights) w = rng.uniform() - 0.5;
    point.bias = rng.uniform() - 0.5;
    const double l2 = 0.01;

    std::vector<double> grad_w;
    double grad_b = 0.0;
    baseline::loglinear_gradient(point, x, y, l2, grad_w, grad_b);

    const double h = 1e-6;
    for (std::size_t j = 0; j < d; ++j) {
      baseline::LoglinearModel plus = point, minus = point;
      plus.weights[j] += h;
      minus.weights[j] -= h;
      double fd = (baseline::loglinear_loss(plus, x, y, l2) -
                   baseline::loglinear_loss(minus, x, y, l2)) /
                  (2.0 * h);
      CHECK(grad_w[j] == doctest::Approx(fd).epsilon(1e-5));
    }
    baseline::LoglinearModel plus = point, minus = point;
    plus.bias += h;
    minus.bias -= h;
    double fd_b = (baseline::loglinear_loss(plus, x, y, l2) -
                   baseline::loglinear_loss(minus, x, y, l2)) /
                  (2.0 * h);
    CHECK(grad_b == doctest::Approx(fd_b).epsilon(1e-5));
  }
}

TEST_CASE("train_loglinear: single-class input is an error") {
  std::vector<std::vector<double>> x = {{0.1}, {0.2}};
  CHECK_THROWS(baseline::train_loglinear(x, {1, 1}, {}));
  CHECK_THROWS(baseline::train_loglinear({{0.1}}, {1}, {}));
}

TEST_CASE("rank_features: degenerate and dominant features") {
  // f0 identical across classes; f1 disjoint ranges; f2 noisy
  std::vector<std::vector<double>> x = {
      {1.0, 0.1, 0.4}, {1.0, 0.2, 0.9}, {1.0, 0.9, 0.3}, {1.0, 0.8, 0.8}};
  std::vector<int> y = {0, 0, 1, 1};
  std::vector<baseline::FeatureRank> ranks = baseline::rank_features(x, y);
  REQUIRE(ranks.size() == 3);
  CHECK(ranks[0].index == 1);
  CHECK(ranks.back().index == 0);
  CHECK(ranks.back().score == 0.0);
}

TEST_CASE("rank_features: zero within-class variance ranks first with a sentinel") {
  std::vector<std::vector<double>> x = {{0.0, 0.3}, {0.0, 0.1}, {1.0, 0.4}, {1.0, 0.2}};
  std::vector<int> y = {0, 0, 1, 1};
  std::vector<baseline::FeatureRank> ranks = baseline::rank_features(x, y);
  CHECK(ranks[0].index == 0);
  CHECK(std::isinf(ranks[0].score));
}

TEST_CASE("rank_features: exact Fisher ratios on a hand-computed fixture") {
  // class 0: f0 in {0, 2}; class 1: f0 in {4, 6}
  // means 1 and 5, overall 3; between = .5*(1-3)^2+.5*(5-3)^2 = 4
  // within: var{0,2} = 1, var{4,6} = 1 -> pooled 1  => ratio 4
  std::vector<std::vector<double>> x = {{0.0}, {2.0}, {4.0}, {6.0}};
  std::vector<int> y = {0, 0, 1, 1};
  std::vector<baseline::FeatureRank> ranks = baseline::rank_features(x, y);
  CHECK(ranks[0].score == doctest::Approx(4.0));
}

TEST_CASE("rank_features: ordering invariant under per-feature affine rescale") {
  util::Rng rng(33);
  std::vector<std::vector<double>> x(20, std::vector<double>(4));
  std::vector<int> y(20);
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = i < 10 ? 0 : 1;
    for (std::size_t j = 0; j < 4; ++j) {
      x[i][j] = rng.uniform() + (y[i] == 1 ? 0.3 * static_cast<double>(j) : 0.0);
    }
  }
  std::vector<baseline::FeatureRank> base = baseline::rank_features(x, y);
  std::vector<std::vector<double>> scaled = x;
  const double scales[4] = {3.0, 0.2, 10.0, 1.7};
  const double shifts[4] = {-1.0, 5.0, 0.0, 2.2};
  for (auto& row : scaled) {
    for (std::size_t j = 0; j < 4; ++j) row[j] = row[j] * scales[j] + shifts[j];
  }
  std::vector<baseline::FeatureRank> rescaled = baseline::rank_features(scaled, y);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].index == rescaled[i].index);
    CHECK(base[i].score == doctest::Approx(rescaled[i].score));
  }
}

TEST_CASE("group_comparison: identical groups flag nothing") {
  std::vector<std::vector<std::string>> group = {
      {"i am sad", "you rock"}, {"they hate it", "i worry"}, {"nice day", "i am fine"}};
  std::vector<baseline::GroupComparisonRow> rows =
      baseline::group_comparison(group, group, baseline::default_lexicons());
  REQUIRE(rows.size() == 9);
  for (const baseline::GroupComparisonRow& row : rows) {
    CHECK_FALSE(row.significant);
  }
}

TEST_CASE("group_comparison: planted second-person difference is flagged") {
  std::vector<std::vector<std::string>> group_a, group_b;
  for (int i = 0; i < 8; ++i) {
    group_a.push_back({"you are great", "you said so", "thank you friend"});
    group_b.push_back({"the day was long", "rain fell hard", "coffee helps"});
  }
  std::vector<baseline::GroupComparisonRow> rows =
      baseline::group_comparison(group_a, group_b, baseline::default_lexicons());
  REQUIRE(rows.size() == 9);
  bool flagged = false;
  for (const baseline::GroupComparisonRow& row : rows) {
    if (row.category == "pronoun-2nd") {
      flagged = row.significant;
      CHECK(row.mean_a == doctest::Approx(1.0));
      CHECK(row.mean_b == doctest::Approx(0.0));
    }
  }
  CHECK(flagged);
}

TEST_CASE("mann_whitney_p: symmetric and degenerate cases") {
  std::vector<double> same = {0.5, 0.5, 0.5};
  CHECK(baseline::mann_whitney_p(same, same) == doctest::Approx(1.0));
  std::vector<double> a = {1, 2, 3, 4, 5};
  std::vector<double> b = {6, 7, 8, 9, 10};
  double p_ab = baseline::mann_whitney_p(a, b);
  double p_ba = baseline::mann_whitney_p(b, a);
  CHECK(p_ab == doctest::Approx(p_ba));
  CHECK(p_ab < 0.05);
}
