// Acceptance suite: every check below is an exit criterion for the artifact.
// Prints one PASS/FAIL line per criterion; exit code is the failure count.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "laxary/baseline.hpp"
#include "laxary/config.hpp"
#include "laxary/corpus.hpp"
#include "laxary/dictionary.hpp"
#include "laxary/evaluation.hpp"
#include "laxary/pipeline.hpp"
#include "laxary/scoring.hpp"
#include "laxary/surveys.hpp"
#include "laxary/synthetic.hpp"
#include "laxary/util.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace laxary;

namespace {

struct Check {
  std::string detail;
  bool ok = true;

  void require(bool condition, const std::string& message) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += message;
    }
  }
  void note(const std::string& message) {
    if (!detail.empty()) detail += "; ";
    detail += message;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

void criterion_cronbach_oracle(Check& check) {
  auto start = std::chrono::steady_clock::now();
  util::Rng rng(20260810);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t k = static_cast<std::size_t>(rng.uniform_int(2, 8));
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(5, 50));
    std::vector<std::vector<double>> items(k, std::vector<double>(n));
    for (auto& row : items) {
      for (double& v : row) v = rng.bernoulli(0.35) ? 1.0 : 0.0;
    }
    double expected = oracles::cronbach(items);
    double actual = scoring::cronbach_alpha(items, scoring::AlphaMode::Binary);
    worst = std::max(worst, std::abs(actual - expected));
  }
  double elapsed = seconds_since(start);
  check.require(worst < 1e-9, "max |diff| " + std::to_string(worst));
  check.require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s");
  check.note("100 matrices, max |diff| " + std::to_string(worst));
}

void criterion_intensity_truth_table(Check& check) {
  // thresholds come from a parsed config and must match Table values verbatim
  cli::RunConfig config = cli::parse_config_text(
      "dospert_threshold = 28\nbsss_threshold = 13\nvias_threshold = 15\n");
  check.require(config.dospert_threshold == 28, "dospert threshold from config != 28");
  check.require(config.bsss_threshold == 13, "bsss threshold from config != 13");
  check.require(config.vias_threshold == 15, "vias threshold from config != 15");
  std::array<surveys::ToolDemographics, 3> demos = surveys::demographics_with_thresholds(
      config.dospert_threshold, config.bsss_threshold, config.vias_threshold);
  check.require(demos == surveys::demographics_table(), "config demos differ from the table");

  const surveys::Level expected[4] = {surveys::Level::NoPtsd, surveys::Level::Low,
                                      surveys::Level::Moderate, surveys::Level::High};
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<surveys::FilledSurvey> filled;
    int over_count = 0;
    for (surveys::Tool tool : surveys::kAllTools) {
      const surveys::ToolDemographics& demo = demos[static_cast<std::size_t>(tool)];
      bool over = mask & (1 << static_cast<int>(tool));
      surveys::FilledSurvey f;
      f.tool = tool;
      f.threshold = demo.threshold;
      f.total = over ? demo.threshold + 1 : demo.threshold;  // equality is not over
      f.over_threshold = f.total > demo.threshold;
      filled.push_back(f);
      if (over) ++over_count;
    }
    surveys::IntensityLabel label = surveys::classify_intensity(filled);
    check.require(label.surveys_over == over_count, "surveys_over mismatch");
    check.require(label.level == expected[over_count],
                  "level mismatch at mask " + std::to_string(mask));
    check.require(surveys::intensity_score(label) == over_count, "score mismatch");
  }
  check.note("8/8 combinations, thresholds 28/13/15");
}

const char* kDictionaryFixture =
    "# ptsd-dict v2\n"
    "[PRONOUNS]\n"
    "i\ni'd\ni'll\ni'm\ni've\nme\nmine\nmy\nmyself\n"
    "# category DOSPERT (5 dimensions)\n"
    "[DOSPERT:1] Betting a day's income at the horse races\n"
    "bet*\ncasino\ngambl*\nracetrack\nwager*\n"
    "[DOSPERT:2] Drinking heavily at a social function\n"
    "blackout\ndrink*\nhungover\nliquor\nwasted\n"
    "[DOSPERT:3] Disagreeing with an authority figure on a major issue\n"
    "argu*\nauthorit*\ndefi*\ndisagre*\n"
    "[DOSPERT:4] Engaging in unprotected sex\n"
    "fling*\nhookup*\nreckless\nunprotected\n"
    "[DOSPERT:5] Leaving your young children alone at home while running an errand\n"
    "babysit*\nerrand*\nunattended\nunsupervised\n"
    "# category BSSS (6 dimensions)\n"
    "[BSSS:1] Feeling isolated from family and friends\n"
    "alone\ncutoff\nisolat*\nwithdrawn\n"
    "[BSSS:2] Having no one to rely on when things go wrong\n"
    "abandon*\nhelpless\nstranded\nunsupported\n"
    "[BSSS:3] Avoiding social gatherings and group events\n"
    "avoid*\ncancel*\ndeclin*\nskip*\n"
    "[BSSS:4] Arguing with people who try to help\n"
    "bicker*\nlash*\nquarrel*\nsnapped\n"
    "[BSSS:5] Keeping problems secret instead of sharing them\n"
    "bottled\nconceal*\nhiding\nsecret*\n"
    "[BSSS:6] Feeling that nobody understands my situation\n"
    "dismissed\nignored\nmisunderstood\nunheard\n"
    "# category VIAS (5 dimensions)\n"
    "[VIAS:1] Losing interest in hobbies and activities\n"
    "bored\nlistless\nquit\nuninterested\n"
    "[VIAS:2] Feeling hopeless about the future\n"
    "bleak\ndoom*\nhopeless*\npointless\n"
    "[VIAS:3] Struggling to stay honest with people close to me\n"
    "cheat*\ndishonest*\nfake*\nlied\n"
    "[VIAS:4] Giving up on tasks before finishing them\n"
    "halfway\nprocrastinat*\nstall*\nunfinished\n"
    "[VIAS:5] Feeling no gratitude for anything lately\n"
    "bitter*\nempty\nresent*\nungrateful\n";

void criterion_dictionary_round_trip(Check& check) {
  dict::PtsdDictionary parsed = dict::parse_dictionary(kDictionaryFixture);
  check.require(parsed.all_dimensions().size() == 16, "fixture is not 16 dimensions");
  check.require(parsed.version == "2", "version not recovered from the fixture");

  std::string serialized = dict::serialize_dictionary(parsed);
  check.require(serialized == kDictionaryFixture, "serialize(parse(fixture)) not byte-identical");

  dict::PtsdDictionary reparsed = dict::parse_dictionary(serialized);
  check.require(reparsed == parsed, "parse(serialize(d)) != d");
  check.note("16 dimensions, wildcards and comments, byte-identical");
}

void criterion_end_to_end(Check& check) {
  auto start = std::chrono::steady_clock::now();
  eval::SyntheticCohortSpec spec;
  spec.n_users = 200;
  spec.seed = 42;
  std::vector<corpus::CohortUser> users = eval::generate_synthetic_cohort(spec);

  auto [train, test] = eval::stratified_split(users, {0.5, 42});
  pipeline::LaxaryParams params;  // defaults
  pipeline::LaxaryModel model = pipeline::train_laxary(train, params);
  std::vector<eval::Prediction> predictions;
  for (const corpus::CohortUser& user : test) {
    predictions.push_back(pipeline::predict_user(model, user, params));
  }
  eval::EvalResult result = eval::evaluate(predictions, test, params.demos);
  double elapsed = seconds_since(start);

  check.require(result.accuracy >= 0.85,
                "accuracy " + util::format_double(result.accuracy, 4) + " < 0.85");
  check.require(result.mse <= 0.6, "mse " + util::format_double(result.mse, 4) + " > 0.6");
  check.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + "s");
  check.note("200 users, accuracy " + util::format_double(result.accuracy, 4) + ", mse " +
             util::format_double(result.mse, 4) + ", " + util::format_double(elapsed, 1) + "s");
}

void criterion_baseline_separation(Check& check) {
  util::Rng rng(314);
  const std::vector<std::string> pos_vocab = {"ember", "ashes", "soot", "flame", "charred"};
  const std::vector<std::string> neg_vocab = {"brook", "moss", "fern", "pebble", "dew"};
  auto sample_texts = [&rng](const std::vector<std::string>& vocab, int count) {
    std::vector<std::string> texts;
    for (int i = 0; i < count; ++i) {
      std::string t;
      int len = static_cast<int>(rng.uniform_int(4, 9));
      for (int w = 0; w < len; ++w) {
        if (!t.empty()) t.push_back(' ');
        t += vocab[static_cast<std::size_t>(rng.uniform_int(0, 4))];
      }
      texts.push_back(t);
    }
    return texts;
  };
  std::vector<std::string> pos_train = sample_texts(pos_vocab, 40);
  std::vector<std::string> neg_train = sample_texts(neg_vocab, 40);
  std::vector<std::string> pos_test = sample_texts(pos_vocab, 50);
  std::vector<std::string> neg_test = sample_texts(neg_vocab, 50);

  for (baseline::LmKind kind : {baseline::LmKind::UnigramWord, baseline::LmKind::CharNgram}) {
    baseline::LmPair pair(baseline::train_lm(pos_train, kind, 3, 0.1),
                          baseline::train_lm(neg_train, kind, 3, 0.1));
    int correct = 0;
    for (const std::string& t : pos_test) {
      if (baseline::classify_positive(pair, t)) ++correct;
    }
    for (const std::string& t : neg_test) {
      if (!baseline::classify_positive(pair, t)) ++correct;
    }
    double accuracy = correct / 100.0;
    check.require(accuracy >= 0.95, std::string(baseline::lm_kind_name(kind)) + " accuracy " +
                                        util::format_double(accuracy, 3) + " < 0.95");
    check.note(std::string(baseline::lm_kind_name(kind)) + " accuracy " +
               util::format_double(accuracy, 2));

    // identical-model control
    baseline::LmPair control(pair.positive, pair.positive);
    for (const std::string& t : pos_test) {
      if (baseline::score_ratio(control, t) != 1.0) {
        check.require(false, "identical-model ratio != 1");
        break;
      }
    }
  }
}

void criterion_laxary_vs_baseline(Check& check) {
  const std::vector<double> fractions = {0.2, 0.4, 0.6, 0.8};
  std::map<double, double> laxary_sum, baseline_sum;
  double laxary_total = 0.0, baseline_total = 0.0;
  const int n_seeds = 5;

  for (int s = 0; s < n_seeds; ++s) {
    std::uint64_t seed = 100 + static_cast<std::uint64_t>(s);
    eval::SyntheticCohortSpec spec;
    spec.n_users = 200;
    spec.seed = seed;
    std::vector<corpus::CohortUser> users = eval::generate_synthetic_cohort(spec);

    std::vector<eval::CurvePoint> laxary = eval::learning_curve(
        users, fractions, seed, pipeline::laxary_runner({}), surveys::demographics_table());
    std::vector<eval::CurvePoint> copper = eval::learning_curve(
        users, fractions, seed, pipeline::coppersmith_runner({}), surveys::demographics_table());
    for (std::size_t i = 0; i < fractions.size(); ++i) {
      laxary_sum[fractions[i]] += laxary[i].result.accuracy;
      baseline_sum[fractions[i]] += copper[i].result.accuracy;
      laxary_total += laxary[i].result.accuracy;
      baseline_total += copper[i].result.accuracy;
    }
  }

  std::cout << "    fraction  laxary  baseline (mean accuracy over " << n_seeds << " seeds)\n";
  for (double f : fractions) {
    std::cout << "    " << util::format_double(f, 2) << "      "
              << util::format_double(laxary_sum[f] / n_seeds, 4) << "  "
              << util::format_double(baseline_sum[f] / n_seeds, 4) << "\n";
  }
  double laxary_mean = laxary_total / (n_seeds * fractions.size());
  double baseline_mean = baseline_total / (n_seeds * fractions.size());
  check.require(laxary_mean >= baseline_mean,
                "mean laxary " + util::format_double(laxary_mean, 4) + " < mean baseline " +
                    util::format_double(baseline_mean, 4));
  check.note("mean laxary " + util::format_double(laxary_mean, 4) + " vs baseline " +
             util::format_double(baseline_mean, 4));
}

void criterion_gradient_check(Check& check) {
  util::Rng rng(2718);
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    std::size_t d = static_cast<std::size_t>(rng.uniform_int(2, 8));
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(5, 20));
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : x[i]) v = rng.uniform() * 2.0 - 1.0;
      y[i] = rng.bernoulli(0.5) ? 1 : 0;
    }
    baseline::LoglinearModel at;
    at.weights.resize(d);
    for (double& w : at.weights) w = rng.uniform() * 2.0 - 1.0;
    at.bias = rng.uniform() - 0.5;
    const double l2 = 0.02;

    std::vector<double> grad_w;
    double grad_b = 0.0;
    baseline::loglinear_gradient(at, x, y, l2, grad_w, grad_b);

    const double h = 1e-6;
    auto relative_error = [](double a, double b) {
      double scale = std::max({std::abs(a), std::abs(b), 1e-8});
      return std::abs(a - b) / scale;
    };
    for (std::size_t j = 0; j < d; ++j) {
      baseline::LoglinearModel plus = at, minus = at;
      plus.weights[j] += h;
      minus.weights[j] -= h;
      double fd = (baseline::loglinear_loss(plus, x, y, l2) -
                   baseline::loglinear_loss(minus, x, y, l2)) /
                  (2.0 * h);
      worst = std::max(worst, relative_error(grad_w[j], fd));
    }
    baseline::LoglinearModel plus = at, minus = at;
    plus.bias += h;
    minus.bias -= h;
    double fd_b =
        (baseline::loglinear_loss(plus, x, y, l2) - baseline::loglinear_loss(minus, x, y, l2)) /
        (2.0 * h);
    worst = std::max(worst, relative_error(grad_b, fd_b));
  }
  check.require(worst < 1e-5, "max relative error " + std::to_string(worst));
  check.note("20 points, max relative error " + std::to_string(worst));
}

int run_command(const std::string& command) {
  int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

void criterion_determinism(Check& check, const std::string& cli) {
  fs::path base = fs::temp_directory_path() / "laxary_acceptance_det";
  fs::remove_all(base);
  for (const char* run : {"run_a", "run_b"}) {
    fs::path cwd = base / run;
    fs::create_directories(cwd);
    std::string prefix = "cd " + cwd.string() + " && " + cli + " ";
    std::string suffix = " --out out --seed 777 > /dev/null 2>&1";
    bool ok = run_command(prefix + "synth --n-users 40" + suffix) == 0 &&
              run_command(prefix + "ingest" + suffix) == 0 &&
              run_command(prefix + "build-dict" + suffix) == 0 &&
              run_command(prefix + "score" + suffix) == 0 &&
              run_command(prefix + "fill --explain" + suffix) == 0 &&
              run_command(prefix + "baseline" + suffix) == 0 &&
              run_command(prefix + "eval" + suffix) == 0;
    check.require(ok, std::string("pipeline run failed in ") + run);
    if (!ok) return;
  }

  auto snapshot = [](const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::stringstream buffer;
      buffer << in.rdbuf();
      files[fs::relative(entry.path(), root).string()] = buffer.str();
    }
    return files;
  };
  std::map<std::string, std::string> a = snapshot(base / "run_a");
  std::map<std::string, std::string> b = snapshot(base / "run_b");
  check.require(a.size() == b.size() && !a.empty(), "artifact sets differ in size");
  std::size_t mismatched = 0;
  for (const auto& [name, content] : a) {
    auto it = b.find(name);
    if (it == b.end() || it->second != content) {
      ++mismatched;
      check.require(false, "artifact differs: " + name);
      if (mismatched > 3) break;
    }
  }
  check.note(std::to_string(a.size()) + " artifacts byte-identical");
  fs::remove_all(base);
}

void criterion_weekly_backtest(Check& check) {
  eval::SyntheticCohortSpec spec;
  spec.n_users = 120;
  spec.weeks = 2;
  spec.signal_only_latest_week = true;
  spec.seed = 99;
  std::vector<corpus::CohortUser> users = eval::generate_synthetic_cohort(spec);
  std::vector<eval::BacktestRow> rows =
      eval::weekly_backtest(users, {0, 1}, {0.5, 99}, pipeline::laxary_runner({}),
                            surveys::demographics_table());
  check.require(rows.size() == 2 && rows[0].result && rows[1].result, "missing backtest rows");
  if (rows[0].result && rows[1].result) {
    double at0 = rows[0].result->accuracy;
    double at1 = rows[1].result->accuracy;
    check.require(at0 >= 0.85, "offset-0 accuracy " + util::format_double(at0, 4) + " < 0.85");
    check.require(at1 <= 0.65, "offset-1 accuracy " + util::format_double(at1, 4) + " > 0.65");
    check.note("offset 0: " + util::format_double(at0, 4) + ", offset 1: " +
               util::format_double(at1, 4));
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : LAXARY_CLI_PATH;

  struct Criterion {
    std::string name;
    std::function<void(Check&)> fn;
  };
  std::vector<Criterion> criteria = {
      {"Cronbach-alpha oracle equivalence (100 matrices, 1e-9, <5s)", criterion_cronbach_oracle},
      {"intensity truth table (8 combinations, thresholds 28/13/15 from config)",
       criterion_intensity_truth_table},
      {"dictionary format round-trip (identity + byte-identity)",
       criterion_dictionary_round_trip},
      {"end-to-end synthetic cohort (200 users, accuracy >= 0.85, mse <= 0.6, <60s)",
       criterion_end_to_end},
      {"baseline LM separation (disjoint vocabularies >= 0.95, identical-model ratio 1)",
       criterion_baseline_separation},
      {"laxary >= baseline across 5 seeds at fractions 0.2/0.4/0.6/0.8",
       criterion_laxary_vs_baseline},
      {"loglinear gradient vs central differences (rel err < 1e-5, 20 points)",
       criterion_gradient_check},
      {"determinism: two seeded pipeline runs byte-identical",
       [&cli](Check& check) { criterion_determinism(check, cli); }},
      {"weekly backtest sanity (offset 0 >= 0.85, offset 1 <= 0.65)",
       criterion_weekly_backtest},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      criteria[i].fn(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": "
              << criteria[i].name;
    if (!check.detail.empty()) std::cout << "  -- " << check.detail;
    std::cout << "\n";
    if (!check.ok) ++failures;
  }
  return failures;
}
