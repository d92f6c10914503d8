#include "wsi/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace wsi {

namespace {

Alphabet gen_alphabet(GenKind kind, std::size_t sigma) {
    std::vector<std::string> letters;
    if (kind == GenKind::snp_like && sigma == 4) {
        letters = {"A", "C", "G", "T"};
    } else if (sigma <= 26) {
        for (std::size_t a = 0; a < sigma; ++a) {
            letters.emplace_back(1, static_cast<char>('A' + a));
        }
    } else {
        for (std::size_t a = 0; a < sigma; ++a) {
            letters.push_back("L" + std::to_string(a));
        }
    }
    return Alphabet(letters);
}

// Rows are normalized so the last entry absorbs rounding.
void normalize(std::vector<double>& row) {
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    double acc = 0;
    for (std::size_t a = 0; a + 1 < row.size(); ++a) {
        row[a] /= sum;
        acc += row[a];
    }
    row.back() = std::max(0.0, 1.0 - acc);
}

}  // namespace

std::optional<GenKind> parse_gen_kind(std::string_view name) {
    if (name == "uniform") {
        return GenKind::uniform;
    }
    if (name == "snp-like") {
        return GenKind::snp_like;
    }
    if (name == "rssi-like") {
        return GenKind::rssi_like;
    }
    return std::nullopt;
}

std::string gen_kind_name(GenKind kind) {
    switch (kind) {
        case GenKind::uniform:
            return "uniform";
        case GenKind::snp_like:
            return "snp-like";
        case GenKind::rssi_like:
            return "rssi-like";
    }
    return "unknown";
}

WeightedString generate(const GenConfig& c) {
    if (c.n < 1) {
        throw std::invalid_argument("n must be positive");
    }
    if (c.sigma < 2 || c.sigma > kMaxSigma) {
        throw std::invalid_argument("sigma must be in [2, 255]");
    }
    if (!(c.delta >= 0 && c.delta <= 100)) {
        throw std::invalid_argument("delta must be in [0, 100]");
    }
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto n = static_cast<std::size_t>(c.n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto uncertain = static_cast<std::size_t>(std::llround(static_cast<double>(n) * c.delta / 100.0));
    std::vector<bool> is_uncertain(n, false);
    for (std::size_t t = 0; t < uncertain; ++t) {
        is_uncertain[order[t]] = true;
    }

    std::vector<double> probs;
    probs.reserve(n * c.sigma);
    double level = static_cast<double>(c.sigma - 1) / 2;
    std::normal_distribution<double> step(0.0, 0.6);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(c.sigma, 0.0);
        std::size_t main = 0;
        if (c.kind == GenKind::rssi_like) {
            level = std::clamp(level + step(rng), 0.0, static_cast<double>(c.sigma - 1));
            main = static_cast<std::size_t>(std::lround(level));
        } else {
            main = static_cast<std::size_t>(rng() % c.sigma);
        }
        if (!is_uncertain[i]) {
            row[main] = 1.0;
        } else if (c.kind == GenKind::uniform) {
            for (auto& v : row) {
                v = 0.05 + u(rng);
            }
            normalize(row);
        } else if (c.kind == GenKind::snp_like) {
            const std::size_t minor = (main + 1 + rng() % (c.sigma - 1)) % c.sigma;
            const double major = 0.5 + 0.49 * u(rng);
            row[main] = major;
            row[minor] = 1.0 - major;
        } else {
            // Discretized bell around the current level; at least two levels.
            const double width = 0.4 + u(rng);
            for (std::size_t a = 0; a < c.sigma; ++a) {
                const double d = (static_cast<double>(a) - level) / width;
                row[a] = std::exp(-0.5 * d * d);
            }
            for (auto& v : row) {
                if (v < 1e-3) {
                    v = 0;
                }
            }
            const std::size_t next = main + 1 < c.sigma ? main + 1 : main - 1;
            row[next] = std::max(row[next], 0.05);
            normalize(row);
        }
        probs.insert(probs.end(), row.begin(), row.end());
    }
    return WeightedString(gen_alphabet(c.kind, c.sigma), std::move(probs));
}

}  // namespace wsi
