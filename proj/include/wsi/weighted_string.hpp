#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wsi {

// Letters are alphabet ranks. Positions are 1-based throughout the library.
using Letter = std::uint8_t;
using Text = std::vector<Letter>;
using Pos = std::int32_t;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Log-space slack used for every validity comparison.
inline constexpr double kCmpEps = 1e-9;
// Accepted deviation of a row sum from 1.
inline constexpr double kSumEps = 1e-6;
inline constexpr std::size_t kMaxSigma = 255;

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> letters);

    std::size_t size() const { return letters_.size(); }
    std::optional<Letter> rank(std::string_view symbol) const;
    const std::string& symbol(Letter rank) const { return letters_.at(rank); }
    const std::vector<std::string>& letters() const { return letters_; }

    // True when every symbol is one byte long, so text can be read char by char.
    bool single_char() const { return single_char_; }

    // Patterns are either runs of single-byte symbols or whitespace separated
    // tokens. Returns nullopt if some token is not a letter of the alphabet.
    std::optional<Text> encode(std::string_view text) const;
    std::string decode(std::span<const Letter> text) const;

    bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }

private:
    std::vector<std::string> letters_;
    std::unordered_map<std::string, Letter> index_;
    bool single_char_ = true;
};

class Threshold {
public:
    explicit Threshold(double z);

    double z() const { return z_; }
    double inv() const { return 1.0 / z_; }
    double log_inv() const { return log_inv_; }
    std::size_t floor_z() const { return floor_z_; }
    // floor(log2 z): the Hamming bound between any solid factor and the heavy string.
    int max_mismatches() const { return max_mismatches_; }

    // A log-probability passes the threshold, with kCmpEps slack.
    bool accepts(double log_prob) const { return log_prob >= log_inv_ - kCmpEps; }
    // floor(prob * z) with the same slack: count_of(lp) >= 1 iff accepts(lp).
    std::size_t count_of(double log_prob) const;

private:
    double z_;
    double log_inv_;
    std::size_t floor_z_;
    int max_mismatches_;
};

class WeightedString {
public:
    WeightedString() = default;
    // probs is row-major, n rows of sigma entries. Throws std::invalid_argument
    // when a row is not a distribution.
    WeightedString(Alphabet alphabet, std::vector<double> probs);

    Pos length() const { return n_; }
    std::size_t sigma() const { return alphabet_.size(); }
    const Alphabet& alphabet() const { return alphabet_; }

    double prob(Pos i, Letter a) const { return probs_[row(i) + a]; }
    double log_prob(Pos i, Letter a) const { return logs_[row(i) + a]; }
    std::span<const double> row_probs(Pos i) const {
        return {probs_.data() + row(i), sigma()};
    }
    const std::vector<double>& raw_probs() const { return probs_; }

    // X^r: position i maps to n + 1 - i.
    WeightedString reversed() const;

private:
    std::size_t row(Pos i) const { return static_cast<std::size_t>(i - 1) * sigma(); }

    Alphabet alphabet_;
    Pos n_ = 0;
    std::vector<double> probs_;
    std::vector<double> logs_;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { header, alphabet, duplicate_letter, non_numeric, row_count, row_sum, range };
    ParseError(Kind kind, std::size_t line, const std::string& what);
    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

// Reads the .wstr text format: "n sigma", then sigma letters, then n rows of
// sigma probabilities. Lines starting with '#' are skipped.
WeightedString parse_weighted_string(std::istream& in);
WeightedString parse_weighted_string(std::string_view text);
void write_weighted_string(std::ostream& out, const WeightedString& x);

// Sum of log p_{i+t-1}(P[t]); kNegInf when some factor is zero. Empty P gives 0.
double occurrence_probability(const WeightedString& x, std::span<const Letter> pattern, Pos i);
bool is_valid(const WeightedString& x, std::span<const Letter> pattern, Pos i, const Threshold& t);

// Exhaustive scan of every start position. This is the ground truth the
// indexes are tested against, so it stays deliberately simple.
std::vector<Pos> brute_force_occurrences(const WeightedString& x, std::span<const Letter> pattern,
                                         const Threshold& t);

struct Mismatch {
    Pos pos;
    Letter letter;
    bool operator==(const Mismatch&) const = default;
};

class HeavyContext {
public:
    HeavyContext() = default;
    // Heavy letter = most probable letter, ties to the lowest rank.
    explicit HeavyContext(const WeightedString& x);

    Pos length() const { return static_cast<Pos>(heavy_.size()); }
    Letter heavy(Pos i) const { return heavy_[static_cast<std::size_t>(i - 1)]; }
    const Text& heavy_string() const { return heavy_; }
    // pp_log[i] = sum_{t<=i} log p_t(H[t]); pp_log[0] = 0.
    double pp_log(Pos i) const { return pp_log_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& pp_log_array() const { return pp_log_; }
    double heavy_log(Pos i) const { return pp_log(i) - pp_log(i - 1); }
    // Log-probability of H[i..j]; 0 for an empty range.
    double range_log(Pos i, Pos j) const { return j < i ? 0.0 : pp_log(j) - pp_log(i - 1); }

    // Rebuilds from stored heavy letters and their log-probabilities.
    static HeavyContext from_parts(Text heavy, const std::vector<double>& heavy_logs);

private:
    Text heavy_;
    std::vector<double> pp_log_;
};

std::vector<Mismatch> heavy_mismatches(const HeavyContext& h, std::span<const Letter> u, Pos i);

}  // namespace wsi
