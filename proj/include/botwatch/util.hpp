#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace botwatch {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// --- time ---------------------------------------------------------------
// Timestamps are integer seconds since the Unix epoch, UTC. Calendar
// conversions use the proleptic Gregorian civil-date algorithms so no
// timezone database is involved.

std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// Day index of a timestamp (floor division, so pre-epoch times work too).
std::int64_t utc_day(std::int64_t timestamp);

// Accepts "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds
// (truncated) and a "Z" / "+00:00" / "-00:00" suffix. A space may replace
// the 'T'. Throws std::invalid_argument on anything else, including
// non-UTC offsets.
std::int64_t parse_iso8601_utc(std::string_view text);
std::string format_iso8601_utc(std::int64_t timestamp);

// --- hashing / seeding ----------------------------------------------------
// std::hash is not stable across implementations; seeds that feed feature
// extraction must be, so everything routes through FNV-1a and splitmix64.

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64(std::uint64_t state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt);

// --- deterministic sampling -----------------------------------------------
// mt19937_64 is fully specified by the standard; the std:: distributions are
// not, so the draws here are hand-rolled to keep generated corpora and
// cluster assignments bit-stable across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit();

  // Uniform integer in [0, n), unbiased. n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  // Box-Muller; always consumes exactly two draws (no cached spare).
  double normal(double mean, double stddev);
  double lognormal(double log_mean, double log_stddev);
  double exponential(double rate);

  // Knuth's product method; fine for the small rates used here.
  int poisson(double lambda);

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

  // Random permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// --- formatting -------------------------------------------------------------

// Shortest decimal form that round-trips the exact double. Used everywhere a
// value lands in a file so reruns stay byte-identical.
std::string format_double(double value);

// Code-point count of a UTF-8 string (continuation bytes are skipped;
// malformed bytes count as one character each).
std::size_t utf8_length(std::string_view text);

// Longest prefix of at most max_chars code points, never splitting a
// multi-byte sequence.
std::string_view utf8_truncate(std::string_view text, std::size_t max_chars);

// --- parallelism -------------------------------------------------------------

// Runs fn(i) for i in [0, n). threads == 0 uses hardware_concurrency.
// Work is chunked by index so results written to slot i are deterministic
// regardless of thread count.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace botwatch
