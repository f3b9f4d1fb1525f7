#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return LAXARY_CLI_PATH; }

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const fs::path& cwd = fs::current_path()) {
  static int counter = 0;
  fs::path log = fs::temp_directory_path() / ("laxary_cli_log_" + std::to_string(counter++));
  std::string command = "cd " + cwd.string() + " && " + std::string(cli_path()) + " " + args +
                        " > " + log.string() + " 2>&1";
  int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(log);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  fs::remove(log);
  return result;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("laxary_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// one user with `n` tweets in one week, Monday 2026-01-05
std::string jsonl_user(const std::string& user, int n, std::int64_t base = 1767571200) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    out += "{\"id\":\"" + user + "-" + std::to_string(i) + "\",\"user_id\":\"" + user +
           "\",\"timestamp\":" + std::to_string(base + i * 600) +
           ",\"text\":\"i had a fine day number " + std::to_string(i) +
           "\",\"lang\":\"en\"}\n";
  }
  return out;
}

}  // namespace

TEST_CASE("ingest: valid fixture exits 0 and prints filter counts") {
  fs::path dir = fresh_dir("ingest_ok");
  write_file(dir / "corpus.jsonl", jsonl_user("alice", 30) + jsonl_user("bob", 26));
  RunResult result = run_cli("ingest --out " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("users kept: 2") != std::string::npos);
  CHECK(result.output.find("dropped: 0 (min_tweets)") != std::string::npos);
  CHECK(fs::exists(dir / "corpus" / "alice" / "2026-01-05_all.txt"));
  CHECK(fs::exists(dir / "corpus" / "alice" / "2026-01-05_work.txt"));
  CHECK(fs::exists(dir / "corpus" / "alice" / "2026-01-05_nonwork.txt"));
  CHECK(fs::exists(dir / "rejects.txt"));
}

TEST_CASE("ingest: missing input file exits nonzero") {
  fs::path dir = fresh_dir("ingest_missing");
  RunResult result = run_cli("ingest --out " + dir.string() + " --corpus " +
                             (dir / "nope.jsonl").string());
  CHECK(result.exit_code != 0);
}

TEST_CASE("ingest: 24-tweet user is dropped and reported") {
  fs::path dir = fresh_dir("ingest_drop");
  write_file(dir / "corpus.jsonl", jsonl_user("short", 24) + jsonl_user("alice", 30));
  RunResult result = run_cli("ingest --out " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("dropped: 1 (min_tweets)") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "corpus" / "short"));
}

TEST_CASE("full pipeline: smoke test writes eval.json with an accuracy field") {
  fs::path dir = fresh_dir("pipeline");
  std::string out = " --out " + dir.string() + " --seed 11";
  CHECK(run_cli("synth --n-users 40" + out).exit_code == 0);
  CHECK(run_cli("ingest" + out).exit_code == 0);
  CHECK(run_cli("build-dict" + out).exit_code == 0);
  CHECK(run_cli("score" + out).exit_code == 0);
  CHECK(run_cli("fill" + out).exit_code == 0);
  CHECK(run_cli("eval --with-baseline false" + out).exit_code == 0);
  std::string eval_json = read_file(dir / "eval.json");
  CHECK(eval_json.find("\"accuracy\"") != std::string::npos);
  CHECK(fs::exists(dir / "learning_curve.csv"));
  CHECK(fs::exists(dir / "weekly.csv"));
  CHECK(fs::exists(dir / "intensity.csv"));
}

TEST_CASE("fill --explain emits one report per user-week") {
  fs::path dir = fresh_dir("explain");
  std::string out = " --out " + dir.string() + " --seed 12";
  REQUIRE(run_cli("synth --n-users 16" + out).exit_code == 0);
  REQUIRE(run_cli("ingest" + out).exit_code == 0);
  REQUIRE(run_cli("build-dict" + out).exit_code == 0);
  REQUIRE(run_cli("score" + out).exit_code == 0);
  RunResult result = run_cli("fill --explain" + out);
  CHECK(result.exit_code == 0);

  std::size_t user_weeks = 0;
  for (const auto& user_dir : fs::directory_iterator(dir / "corpus")) {
    if (!user_dir.is_directory()) continue;
    for (const auto& f : fs::directory_iterator(user_dir)) {
      std::string name = f.path().filename().string();
      if (name.find("_all.txt") != std::string::npos) ++user_weeks;
    }
  }
  std::size_t reports = 0;
  for (const auto& f : fs::directory_iterator(dir / "reports")) {
    (void)f;
    ++reports;
  }
  CHECK(reports == user_weeks);
  CHECK(fs::exists(dir / "explain.jsonl"));
}

TEST_CASE("missing upstream artifact names the producing command") {
  fs::path dir = fresh_dir("upstream");
  RunResult result = run_cli("score --out " + dir.string());
  CHECK(result.exit_code != 0);
  CHECK(result.output.find("ingest") != std::string::npos);
}

TEST_CASE("config file values are applied and flags override") {
  fs::path dir = fresh_dir("config");
  write_file(dir / "corpus.jsonl", jsonl_user("alice", 30) + jsonl_user("short", 24));
  write_file(dir / "run.conf", "out = " + dir.string() + "\nmin_tweets = 20\n");
  RunResult lenient = run_cli("ingest --config " + (dir / "run.conf").string());
  CHECK(lenient.exit_code == 0);
  CHECK(lenient.output.find("users kept: 2") != std::string::npos);

  fs::remove_all(dir / "corpus");
  RunResult strict =
      run_cli("ingest --config " + (dir / "run.conf").string() + " --min-tweets 25");
  CHECK(strict.exit_code == 0);
  CHECK(strict.output.find("users kept: 1") != std::string::npos);
}

TEST_CASE("baseline command writes its artifacts") {
  fs::path dir = fresh_dir("baseline_cmd");
  std::string out = " --out " + dir.string() + " --seed 13";
  REQUIRE(run_cli("synth --n-users 30" + out).exit_code == 0);
  REQUIRE(run_cli("ingest" + out).exit_code == 0);
  RunResult result = run_cli("baseline" + out);
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(dir / "baseline_eval.json"));
  CHECK(fs::exists(dir / "group_comparison.csv"));
  CHECK(fs::exists(dir / "feature_ranking.csv"));
  CHECK(fs::exists(dir / "models" / "ulm_pos.lm"));
  std::string comparison = read_file(dir / "group_comparison.csv");
  // header + 9 categories
  CHECK(std::count(comparison.begin(), comparison.end(), '\n') == 10);
}

TEST_CASE("reruns with the same seed are byte-identical") {
  fs::path dir_a = fresh_dir("rerun_a");
  fs::path dir_b = fresh_dir("rerun_b");
  for (const fs::path& dir : {dir_a, dir_b}) {
    std::string out = " --out out --seed 21";
    REQUIRE(run_cli("synth --n-users 24" + out, dir).exit_code == 0);
    REQUIRE(run_cli("ingest" + out, dir).exit_code == 0);
    REQUIRE(run_cli("build-dict" + out, dir).exit_code == 0);
    REQUIRE(run_cli("score" + out, dir).exit_code == 0);
    REQUIRE(run_cli("fill" + out, dir).exit_code == 0);
  }
  std::map<std::string, std::string> a_files, b_files;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (entry.is_regular_file()) {
      a_files[fs::relative(entry.path(), dir_a).string()] = read_file(entry.path());
    }
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir_b)) {
    if (entry.is_regular_file()) {
      b_files[fs::relative(entry.path(), dir_b).string()] = read_file(entry.path());
    }
  }
  REQUIRE(a_files.size() == b_files.size());
  for (const auto& [name, content] : a_files) {
    REQUIRE(b_files.count(name));
    CHECK_MESSAGE(content == b_files[name], "artifact differs: ", name);
  }
}
