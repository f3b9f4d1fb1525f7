#include "laxary/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "laxary/util.hpp"

namespace laxary::cli {

namespace {

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string t = util::trim(item);
    if (!t.empty()) out.push_back(std::stod(t));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string t = util::trim(item);
    if (!t.empty()) out.push_back(std::stoi(t));
  }
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "off" || value == "0" || value == "no") return false;
  throw std::runtime_error("bad boolean value: " + value);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, RunConfig config) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = util::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_number) +
                               ": expected key = value");
    }
    std::string key = util::trim(stripped.substr(0, eq));
    std::string value = util::trim(stripped.substr(eq + 1));

    try {
      if (key == "corpus") config.corpus_path = value;
      else if (key == "corpus_dir") config.corpus_dir = value;
      else if (key == "labels") config.labels_path = value;
      else if (key == "responses") config.responses_path = value;
      else if (key == "dict") config.dict_path = value;
      else if (key == "calibration_file") config.calibration_path = value;
      else if (key == "alphas") config.alphas_path = value;
      else if (key == "lexicons") config.lexicon_path = value;
      else if (key == "out") config.out_dir = value;
      else if (key == "min_tweets") config.min_tweets = std::stoi(value);
      else if (key == "min_english") config.min_english = std::stod(value);
      else if (key == "top_k") config.top_k = std::stoi(value);
      else if (key == "min_df") config.min_df = std::stoi(value);
      else if (key == "alpha_mode") config.alpha_mode = value;
      else if (key == "calibration") config.calibration = parse_bool(value);
      else if (key == "dospert_threshold") config.dospert_threshold = std::stoi(value);
      else if (key == "bsss_threshold") config.bsss_threshold = std::stoi(value);
      else if (key == "vias_threshold") config.vias_threshold = std::stoi(value);
      else if (key == "char_order") config.char_order = std::stoi(value);
      else if (key == "smoothing_k") config.smoothing_k = std::stod(value);
      else if (key == "learning_rate") config.learning_rate = std::stod(value);
      else if (key == "lr_decay") config.lr_decay = std::stod(value);
      else if (key == "epochs") config.epochs = std::stoi(value);
      else if (key == "l2") config.l2 = std::stod(value);
      else if (key == "shuffle") config.shuffle = parse_bool(value);
      else if (key == "train_fraction") config.train_fraction = std::stod(value);
      else if (key == "fractions") config.fractions = parse_double_list(value);
      else if (key == "offsets") config.offsets = parse_int_list(value);
      else if (key == "with_baseline") config.with_baseline = parse_bool(value);
      else if (key == "n_users") config.n_users = std::stoi(value);
      else if (key == "weeks") config.weeks = std::stoi(value);
      else if (key == "intensity_dist") config.intensity_dist = parse_double_list(value);
      else if (key == "noise_rate") config.noise_rate = std::stod(value);
      else if (key == "tweets_min") config.tweets_min = std::stoi(value);
      else if (key == "tweets_max") config.tweets_max = std::stoi(value);
      else if (key == "signal_only_latest_week") config.signal_only_latest_week = parse_bool(value);
      else if (key == "seed") config.seed = std::stoull(value);
      else throw std::runtime_error("unknown key '" + key + "'");
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(line_number) + ": bad value for '" +
                               key + "': " + e.what());
    }
  }
  return config;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

}  // namespace laxary::cli
