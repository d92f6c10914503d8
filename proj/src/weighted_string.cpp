#include "wsi/weighted_string.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace wsi {

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) {
        throw std::invalid_argument("alphabet must not be empty");
    }
    if (letters_.size() > kMaxSigma) {
        throw std::invalid_argument("alphabet larger than 255 letters");
    }
    for (std::size_t r = 0; r < letters_.size(); ++r) {
        const auto& s = letters_[r];
        if (s.empty()) {
            throw std::invalid_argument("empty alphabet symbol");
        }
        if (!index_.emplace(s, static_cast<Letter>(r)).second) {
            throw std::invalid_argument("duplicate alphabet letter '" + s + "'");
        }
        single_char_ = single_char_ && s.size() == 1;
    }
}

std::optional<Letter> Alphabet::rank(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<Text> Alphabet::encode(std::string_view text) const {
    Text out;
    const bool has_space = std::any_of(text.begin(), text.end(),
                                       [](unsigned char c) { return std::isspace(c) != 0; });
    if (single_char_ && !has_space) {
        out.reserve(text.size());
        for (char c : text) {
            auto r = rank(std::string_view(&c, 1));
            if (!r) {
                return std::nullopt;
            }
            out.push_back(*r);
        }
        return out;
    }
    std::istringstream ss{std::string(text)};
    std::string tok;
    while (ss >> tok) {
        auto r = rank(tok);
        if (!r) {
            return std::nullopt;
        }
        out.push_back(*r);
    }
    return out;
}

std::string Alphabet::decode(std::span<const Letter> text) const {
    std::string out;
    for (std::size_t t = 0; t < text.size(); ++t) {
        if (!single_char_ && t > 0) {
            out.push_back(' ');
        }
        out += letters_.at(text[t]);
    }
    return out;
}

Threshold::Threshold(double z) : z_(z) {
    if (!(z >= 1.0) || !std::isfinite(z)) {
        throw std::invalid_argument("z must be a finite real >= 1");
    }
    log_inv_ = -std::log(z);
    floor_z_ = static_cast<std::size_t>(std::floor(z));
    max_mismatches_ = static_cast<int>(std::floor(std::log2(z) + 1e-12));
}

std::size_t Threshold::count_of(double log_prob) const {
    if (log_prob == kNegInf) {
        return 0;
    }
    const double v = std::exp(log_prob - log_inv_ + kCmpEps);
    return std::min(static_cast<std::size_t>(std::floor(v)), floor_z_);
}

WeightedString::WeightedString(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
    const std::size_t sigma = alphabet_.size();
    if (sigma == 0 || probs_.size() % sigma != 0) {
        throw std::invalid_argument("probability matrix does not match alphabet size");
    }
    n_ = static_cast<Pos>(probs_.size() / sigma);
    logs_.resize(probs_.size());
    for (Pos i = 1; i <= n_; ++i) {
        double sum = 0.0;
        for (std::size_t a = 0; a < sigma; ++a) {
            const double p = probs_[row(i) + a];
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument("probability outside [0,1] at position " +
                                            std::to_string(i));
            }
            sum += p;
            logs_[row(i) + a] = p > 0.0 ? std::log(p) : kNegInf;
        }
        if (std::fabs(sum - 1.0) > kSumEps) {
            throw std::invalid_argument("row " + std::to_string(i) + " sums to " +
                                        std::to_string(sum));
        }
    }
}

WeightedString WeightedString::reversed() const {
    std::vector<double> rev(probs_.size());
    const std::size_t sigma = alphabet_.size();
    for (Pos i = 1; i <= n_; ++i) {
        std::copy_n(probs_.begin() + static_cast<std::ptrdiff_t>(row(i)), sigma,
                    rev.begin() + static_cast<std::ptrdiff_t>(row(n_ + 1 - i)));
    }
    return WeightedString(alphabet_, std::move(rev));
}

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // Next non-comment, non-blank line.
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') {
                continue;
            }
            return true;
        }
        return false;
    }
};

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

bool parse_double(const std::string& tok, double& out) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

bool parse_count(const std::string& tok, long long& out) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

}  // namespace

WeightedString parse_weighted_string(std::istream& in) {
    using K = ParseError::Kind;
    LineReader reader{in};
    std::string line;
    if (!reader.next(line)) {
        throw ParseError(K::header, reader.line_no, "missing header line 'n sigma'");
    }
    auto head = split_ws(line);
    long long n = 0;
    long long sigma = 0;
    if (head.size() != 2 || !parse_count(head[0], n) || !parse_count(head[1], sigma) || n < 1 ||
        sigma < 1 || sigma > static_cast<long long>(kMaxSigma)) {
        throw ParseError(K::header, reader.line_no, "malformed header, expected 'n sigma'");
    }
    if (!reader.next(line)) {
        throw ParseError(K::alphabet, reader.line_no, "missing alphabet line");
    }
    auto letters = split_ws(line);
    if (letters.size() != static_cast<std::size_t>(sigma)) {
        throw ParseError(K::alphabet, reader.line_no,
                         "expected " + std::to_string(sigma) + " letters");
    }
    {
        auto sorted = letters;
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end()) {
            throw ParseError(K::duplicate_letter, reader.line_no,
                             "duplicate alphabet letter '" + *dup + "'");
        }
    }
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(n * sigma));
    for (long long i = 1; i <= n; ++i) {
        if (!reader.next(line)) {
            throw ParseError(K::row_count, reader.line_no,
                             "expected " + std::to_string(n) + " probability rows, got " +
                                 std::to_string(i - 1));
        }
        auto toks = split_ws(line);
        if (toks.size() != static_cast<std::size_t>(sigma)) {
            throw ParseError(K::row_count, reader.line_no,
                             "expected " + std::to_string(sigma) + " probabilities");
        }
        double sum = 0.0;
        for (const auto& tok : toks) {
            double v = 0.0;
            if (!parse_double(tok, v)) {
                throw ParseError(K::non_numeric, reader.line_no, "non-numeric entry '" + tok + "'");
            }
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ParseError(K::range, reader.line_no, "probability outside [0,1]: " + tok);
            }
            sum += v;
            probs.push_back(v);
        }
        if (std::fabs(sum - 1.0) > kSumEps) {
            throw ParseError(K::row_sum, reader.line_no,
                             "row sums to " + std::to_string(sum) + ", not 1");
        }
    }
    if (reader.next(line)) {
        throw ParseError(K::row_count, reader.line_no, "trailing data after the last row");
    }
    return WeightedString(Alphabet(std::move(letters)), std::move(probs));
}

WeightedString parse_weighted_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_weighted_string(in);
}

void write_weighted_string(std::ostream& out, const WeightedString& x) {
    out << x.length() << ' ' << x.sigma() << '\n';
    const auto& letters = x.alphabet().letters();
    for (std::size_t a = 0; a < letters.size(); ++a) {
        out << (a ? " " : "") << letters[a];
    }
    out << '\n';
    char buf[32];
    for (Pos i = 1; i <= x.length(); ++i) {
        auto row = x.row_probs(i);
        for (std::size_t a = 0; a < row.size(); ++a) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, row[a]);
            out << (a ? " " : "") << std::string_view(buf, static_cast<std::size_t>(p - buf));
        }
        out << '\n';
    }
}

double occurrence_probability(const WeightedString& x, std::span<const Letter> pattern, Pos i) {
    const auto m = static_cast<Pos>(pattern.size());
    if (i < 1 || i + m - 1 > x.length() || (m == 0 && i > x.length() + 1)) {
        throw std::out_of_range("start position " + std::to_string(i) + " out of range");
    }
    double lp = 0.0;
    for (Pos t = 0; t < m; ++t) {
        if (pattern[static_cast<std::size_t>(t)] >= x.sigma()) {
            throw std::invalid_argument("letter not in alphabet");
        }
        lp += x.log_prob(i + t, pattern[static_cast<std::size_t>(t)]);
    }
    return lp;
}

bool is_valid(const WeightedString& x, std::span<const Letter> pattern, Pos i, const Threshold& t) {
    return t.accepts(occurrence_probability(x, pattern, i));
}

std::vector<Pos> brute_force_occurrences(const WeightedString& x, std::span<const Letter> pattern,
                                         const Threshold& t) {
    std::vector<Pos> out;
    const auto m = static_cast<Pos>(pattern.size());
    if (m > x.length()) {
        return out;
    }
    for (Pos i = 1; i + m - 1 <= x.length(); ++i) {
        if (is_valid(x, pattern, i, t)) {
            out.push_back(i);
        }
    }
    return out;
}

HeavyContext::HeavyContext(const WeightedString& x) {
    const Pos n = x.length();
    heavy_.resize(static_cast<std::size_t>(n));
    pp_log_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (Pos i = 1; i <= n; ++i) {
        Letter best = 0;
        for (Letter a = 1; a < x.sigma(); ++a) {
            if (x.prob(i, a) > x.prob(i, best)) {
                best = a;
            }
        }
        heavy_[static_cast<std::size_t>(i - 1)] = best;
        pp_log_[static_cast<std::size_t>(i)] = pp_log_[static_cast<std::size_t>(i - 1)] +
                                               x.log_prob(i, best);
    }
}

HeavyContext HeavyContext::from_parts(Text heavy, const std::vector<double>& heavy_logs) {
    if (heavy.size() != heavy_logs.size()) {
        throw std::invalid_argument("heavy string and log table differ in length");
    }
    HeavyContext h;
    h.heavy_ = std::move(heavy);
    h.pp_log_.assign(h.heavy_.size() + 1, 0.0);
    for (std::size_t i = 0; i < heavy_logs.size(); ++i) {
        h.pp_log_[i + 1] = h.pp_log_[i] + heavy_logs[i];
    }
    return h;
}

std::vector<Mismatch> heavy_mismatches(const HeavyContext& h, std::span<const Letter> u, Pos i) {
    const auto m = static_cast<Pos>(u.size());
    if (i < 1 || i + m - 1 > h.length()) {
        throw std::out_of_range("fragment outside the heavy string");
    }
    std::vector<Mismatch> out;
    for (Pos t = 0; t < m; ++t) {
        const Letter c = u[static_cast<std::size_t>(t)];
        if (c != h.heavy(i + t)) {
            out.push_back({i + t, c});
        }
    }
    return out;
}

}  // namespace wsi
