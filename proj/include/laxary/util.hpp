#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace laxary::util {

// Deterministic splitmix64 stream. Used everywhere randomness is needed so
// that outputs are reproducible across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], inclusive both ends.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Expands a master seed into independent per-stage seeds keyed by a tag.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

// String helpers shared by the parsing and normalization paths.
std::vector<std::string> split_ws(std::string_view text);
std::string to_lower(std::string_view text);
std::string trim(std::string_view text);
bool starts_with_ci(std::string_view text, std::string_view prefix);

// UTC civil-date arithmetic (proleptic Gregorian, no time zones).
std::int64_t days_from_civil(int y, int m, int d);
void civil_from_days(std::int64_t z, int& y, int& m, int& d);
std::string format_date(std::int64_t epoch_seconds);       // "YYYY-MM-DD"
std::int64_t parse_date(const std::string& iso_date);       // inverse, midnight UTC

// Fixed-precision float formatting for deterministic text artifacts.
std::string format_double(double v, int precision = 6);

}  // namespace laxary::util
