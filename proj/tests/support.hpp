#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wsi/weighted_string.hpp"

namespace wsi::testing {

inline WeightedString example1() {
    return WeightedString(Alphabet({"A", "B"}), {1.0, 0.0, 0.5, 0.5, 0.75, 0.25, 0.8, 0.2,
                                                 0.5, 0.5, 0.25, 0.75});
}

inline Text txt(const WeightedString& x, const std::string& s) {
    return *x.alphabet().encode(s);
}

inline Alphabet letters(std::size_t sigma) {
    std::vector<std::string> out;
    for (std::size_t a = 0; a < sigma; ++a) {
        out.push_back(std::string(1, static_cast<char>('A' + a)));
    }
    return Alphabet(out);
}

// Rows mix a dominant letter, a few runner-ups and zeros, with dyadic values
// now and then so exact-boundary products show up.
inline WeightedString random_weighted(std::mt19937_64& rng, Pos n, std::size_t sigma) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> probs;
    for (Pos i = 0; i < n; ++i) {
        std::vector<double> row(sigma, 0.0);
        const double kind = u(rng);
        if (kind < 0.35) {
            row[rng() % sigma] = 1.0;
        } else if (kind < 0.55) {
            const std::size_t a = rng() % sigma;
            const std::size_t b = (a + 1 + rng() % (sigma - 1)) % sigma;
            static const double dyadic[] = {0.5, 0.75, 0.25, 0.875};
            const double p = dyadic[rng() % 4];
            row[a] = p;
            row[b] = 1.0 - p;
        } else {
            double sum = 0;
            for (auto& v : row) {
                v = u(rng) < 0.3 ? 0.0 : u(rng) * u(rng);
                sum += v;
            }
            if (sum == 0) {
                row[0] = sum = 1.0;
            }
            double acc = 0;
            for (std::size_t a = 0; a + 1 < sigma; ++a) {
                row[a] /= sum;
                acc += row[a];
            }
            row[sigma - 1] = std::max(0.0, 1.0 - acc);
        }
        probs.insert(probs.end(), row.begin(), row.end());
    }
    return WeightedString(letters(sigma), probs);
}

// Linear-space product, kept apart from the library's log-space arithmetic.
inline double linear_probability(const WeightedString& x, const Text& p, Pos i) {
    double prod = 1.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        prod *= x.row_probs(i + static_cast<Pos>(t))[p[t]];
    }
    return prod;
}

inline std::size_t oracle_count(const WeightedString& x, const Text& p, Pos i, double z) {
    const double v = linear_probability(x, p, i) * z;
    return static_cast<std::size_t>(std::floor(v * (1 + 1e-9)));
}

inline bool oracle_valid(const WeightedString& x, const Text& p, Pos i, double z) {
    return linear_probability(x, p, i) * z >= 1 - 1e-9;
}

inline std::vector<Pos> oracle_occurrences(const WeightedString& x, const Text& p, double z) {
    std::vector<Pos> out;
    for (Pos i = 1; i + static_cast<Pos>(p.size()) - 1 <= x.length(); ++i) {
        if (oracle_valid(x, p, i, z)) {
            out.push_back(i);
        }
    }
    return out;
}

// Letters drawn from the rows at a random start: mostly solid for small m.
inline Text sample_pattern(std::mt19937_64& rng, const WeightedString& x, Pos m) {
    const Pos start = 1 + static_cast<Pos>(rng() % static_cast<std::uint64_t>(x.length() - m + 1));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Text out;
    for (Pos t = 0; t < m; ++t) {
        auto row = x.row_probs(start + t);
        double r = u(rng);
        std::size_t a = 0;
        while (a + 1 < row.size() && r >= row[a]) {
            r -= row[a];
            ++a;
        }
        out.push_back(static_cast<Letter>(a));
    }
    return out;
}

inline Text uniform_pattern(std::mt19937_64& rng, std::size_t sigma, Pos m) {
    Text out;
    for (Pos t = 0; t < m; ++t) {
        out.push_back(static_cast<Letter>(rng() % sigma));
    }
    return out;
}

// All strings over [0, sigma) of length m, in lexicographic order.
inline std::vector<Text> all_strings(std::size_t sigma, std::size_t m) {
    std::vector<Text> out{Text{}};
    for (std::size_t d = 0; d < m; ++d) {
        std::vector<Text> next;
        for (const Text& t : out) {
            for (std::size_t a = 0; a < sigma; ++a) {
                Text u = t;
                u.push_back(static_cast<Letter>(a));
                next.push_back(u);
            }
        }
        out.swap(next);
    }
    return out;
}

}  // namespace wsi::testing
