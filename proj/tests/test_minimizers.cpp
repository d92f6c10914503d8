#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wsi/estimation.hpp"
#include "wsi/minimizers.hpp"

using namespace wsi;

namespace {

Text random_text(std::mt19937_64& rng, std::size_t len, std::size_t sigma) {
    Text t(len);
    for (auto& c : t) {
        c = static_cast<Letter>(rng() % sigma);
    }
    return t;
}

// Independent window minimizer: compare k-mers as strings, or by key when the
// order is fingerprint based.
Pos naive_minimizer(const MinimizerScheme& s, const Text& w) {
    const auto k = static_cast<std::size_t>(s.k());
    Pos best = 1;
    for (std::size_t t = 1; t + k <= w.size(); ++t) {
        std::span<const Letter> cur(w.data() + t, k);
        std::span<const Letter> old(w.data() + best - 1, k);
        bool smaller;
        if (s.order() == KmerOrder::lexicographic) {
            smaller = std::lexicographical_compare(cur.begin(), cur.end(), old.begin(), old.end());
        } else {
            smaller = s.key(cur) < s.key(old);
        }
        if (smaller) {
            best = static_cast<Pos>(t + 1);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("lexicographic minimizers of ABAABB") {
    MinimizerScheme s(4, 2, KmerOrder::lexicographic, kDefaultSeed, 2);
    Text abaabb = {0, 1, 0, 0, 1, 1};
    CHECK(minimizer_set_plain(s, abaabb) == std::vector<Pos>{3});
    CHECK(window_minimizer(s, Text{0, 0, 0, 0}) == 1);
    CHECK(minimizer_set_plain(s, Text{0, 1, 0}).empty());
    CHECK_THROWS_AS(window_minimizer(s, Text{0, 1}), std::invalid_argument);
}

TEST_CASE("pattern minimizer") {
    MinimizerScheme s(4, 2, KmerOrder::lexicographic, kDefaultSeed, 2);
    CHECK(leftmost_pattern_minimizer(s, Text{0, 0, 0, 0}) == 1);
    CHECK(leftmost_pattern_minimizer(s, Text{1, 0, 0, 1}) == 2);
    CHECK(leftmost_pattern_minimizer(s, Text{1, 0, 1, 0, 0}) == 2);
    CHECK_THROWS_AS(leftmost_pattern_minimizer(s, Text{1, 0}), std::invalid_argument);
}

TEST_CASE("default k") {
    CHECK(MinimizerScheme::default_k(32, 4) == 5);
    CHECK(MinimizerScheme::default_k(4, 2) == 4);
    CHECK(MinimizerScheme::default_k(3, 2) == 3);
    CHECK(MinimizerScheme::default_k(1024, 2) == 12);
    CHECK(MinimizerScheme::default_k(16, 1) == 2);
}

TEST_CASE("scheme validation") {
    CHECK_THROWS_AS(MinimizerScheme(4, 5, KmerOrder::lexicographic, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(MinimizerScheme(100, 40, KmerOrder::lexicographic, 1, 4),
                    std::invalid_argument);
}

TEST_CASE("window minimizers match a naive selection under both orders") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t sigma = 2 + rng() % 4;
        const Pos ell = 3 + static_cast<Pos>(rng() % 12);
        const Pos k = 1 + static_cast<Pos>(rng() % static_cast<std::uint64_t>(ell));
        const auto order = rep % 2 ? KmerOrder::fingerprint : KmerOrder::lexicographic;
        MinimizerScheme s(ell, k, order, rng(), sigma);
        Text w = random_text(rng, static_cast<std::size_t>(ell), sigma);
        CHECK(window_minimizer(s, w) == naive_minimizer(s, w));
    }
}

TEST_CASE("fingerprint order depends on the seed") {
    std::mt19937_64 rng(8);
    Text text = random_text(rng, 400, 4);
    MinimizerScheme a(16, 5, KmerOrder::fingerprint, 1, 4);
    MinimizerScheme b(16, 5, KmerOrder::fingerprint, 2, 4);
    CHECK(minimizer_set_plain(a, text) != minimizer_set_plain(b, text));
    CHECK(minimizer_set_plain(a, text) == minimizer_set_plain(a, text));
}

TEST_CASE("density is roughly 2 / (ell - k + 2) on random text") {
    std::mt19937_64 rng(9);
    Text text = random_text(rng, 20000, 4);
    const Pos ell = 32;
    MinimizerScheme s(ell, MinimizerScheme::default_k(ell, 4), KmerOrder::fingerprint, 3, 4);
    const double density =
        static_cast<double>(minimizer_set_plain(s, text).size()) / static_cast<double>(text.size());
    const double expect = 2.0 / (ell - s.k() + 2);
    CHECK(density > 0.7 * expect);
    CHECK(density < 1.3 * expect);
}

TEST_CASE("family minimizers equal per-string recomputation") {
    std::mt19937_64 rng(10);
    for (int rep = 0; rep < 20; ++rep) {
        WeightedString x = wsi::testing::random_weighted(rng, 30, 2);
        EstimationFamily f = build_estimation(x, Threshold(4 + rep % 5));
        MinimizerScheme s(4, 2, rep % 2 ? KmerOrder::fingerprint : KmerOrder::lexicographic, 4, 2);
        std::vector<MinimizerLabel> expect;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const Text& str = f.string(j);
            for (Pos i = 1; i + 3 <= 30; ++i) {
                if (f.property(j)[static_cast<std::size_t>(i - 1)] < i + 3) {
                    continue;
                }
                Text w(str.begin() + (i - 1), str.begin() + (i + 3));
                expect.push_back({i + naive_minimizer(s, w) - 1, static_cast<Pos>(j + 1)});
            }
        }
        std::sort(expect.begin(), expect.end());
        expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
        CHECK(minimizer_set_family(s, f) == expect);
    }
}

TEST_CASE("sliding heap tracks the front window") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t sigma = 2 + rng() % 3;
        const Pos ell = 4 + static_cast<Pos>(rng() % 8);
        const Pos k = 1 + static_cast<Pos>(rng() % static_cast<std::uint64_t>(ell));
        const bool reversed = rep % 3 == 0;
        MinimizerScheme s(ell, k, rep % 2 ? KmerOrder::fingerprint : KmerOrder::lexicographic,
                          rng(), sigma);
        SlidingKmerHeap heap(s, 64, reversed);
        Text front;  // front[0] is the first letter
        for (int op = 0; op < 300; ++op) {
            if (front.size() < 60 && (front.empty() || rng() % 3 != 0)) {
                const auto a = static_cast<Letter>(rng() % sigma);
                heap.prepend(a);
                front.insert(front.begin(), a);
            } else {
                heap.pop_front();
                front.erase(front.begin());
            }
            if (static_cast<Pos>(front.size()) < k) {
                CHECK_THROWS_AS(heap.current_min(), std::logic_error);
                continue;
            }
            const auto window = std::min<std::size_t>(front.size(), static_cast<std::size_t>(ell));
            Pos best = 1;
            KmerKey best_key{};
            for (std::size_t t = 0; t + static_cast<std::size_t>(k) <= window; ++t) {
                std::span<const Letter> km(front.data() + t, static_cast<std::size_t>(k));
                KmerKey key = reversed ? s.key_reversed(km) : s.key(km);
                const bool take = t == 0 || key < best_key || (reversed && key == best_key);
                if (take) {
                    best_key = key;
                    best = static_cast<Pos>(t + 1);
                }
            }
            auto got = heap.current_min();
            CHECK(got.offset == best);
            CHECK(got.key == best_key);
        }
    }
}
