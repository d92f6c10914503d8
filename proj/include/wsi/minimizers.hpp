#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wsi/weighted_string.hpp"

namespace wsi {

class EstimationFamily;

enum class KmerOrder : std::uint8_t { lexicographic = 0, fingerprint = 1 };

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eed2024ULL;

// Total order key of a k-mer. Fingerprint order compares the mixed Karp-Rabin
// value first; the packed lexicographic value breaks collisions.
struct KmerKey {
    std::uint64_t primary = 0;
    std::uint64_t lex = 0;
    auto operator<=>(const KmerKey&) const = default;
};

// An (ell, k)-minimizer scheme: f(W) is the 1-based offset of the leftmost
// smallest k-mer of a length-ell window W.
class MinimizerScheme {
public:
    MinimizerScheme(Pos ell, Pos k, KmerOrder order, std::uint64_t seed, std::size_t sigma);

    // ceil(log_sigma ell) + 2, capped at ell.
    static Pos default_k(Pos ell, std::size_t sigma);

    Pos ell() const { return ell_; }
    Pos k() const { return k_; }
    KmerOrder order() const { return order_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t sigma() const { return sigma_; }

    KmerKey key(std::span<const Letter> kmer) const;
    // Key of reverse(kmer); used when walking a reversed text.
    KmerKey key_reversed(std::span<const Letter> kmer) const;

    bool operator==(const MinimizerScheme& o) const {
        return ell_ == o.ell_ && k_ == o.k_ && order_ == o.order_ && seed_ == o.seed_ &&
               sigma_ == o.sigma_;
    }

private:
    Pos ell_;
    Pos k_;
    KmerOrder order_;
    std::uint64_t seed_;
    std::size_t sigma_;
    std::uint64_t base_;
};

Pos window_minimizer(const MinimizerScheme& scheme, std::span<const Letter> window);

// Selected positions (1-based, ascending) of a plain string; empty when |S| < ell.
std::vector<Pos> minimizer_set_plain(const MinimizerScheme& scheme, std::span<const Letter> s);

struct MinimizerLabel {
    Pos pos;
    Pos string_index;  // 1-based slot of the estimation
    auto operator<=>(const MinimizerLabel&) const = default;
};

// Minimizers of every property-respecting window of every S_j, sorted.
std::vector<MinimizerLabel> minimizer_set_family(const MinimizerScheme& scheme,
                                                 const EstimationFamily& family);

// f(P[1..ell]); throws std::invalid_argument for |P| < ell.
Pos leftmost_pattern_minimizer(const MinimizerScheme& scheme, std::span<const Letter> pattern);

// Window minimizer over the front of a string that grows and shrinks at its
// front, as the current string does during the depth-first construction.
// k-mers live in a min segment tree indexed by their distance from the back
// of the string, so both operations are O(log capacity).
class SlidingKmerHeap {
public:
    // With reversed = true, keys are taken on reversed k-mers and ties go to
    // the rightmost k-mer: the window is read as the reverse of a forward window.
    SlidingKmerHeap(const MinimizerScheme& scheme, std::size_t capacity, bool reversed = false);

    void prepend(Letter a);
    void pop_front();
    std::size_t size() const { return letters_.size(); }

    struct Minimum {
        KmerKey key;
        Pos offset;  // 1-based offset of the k-mer start within the front window
    };
    // Minimum over the k-mers inside the front window of length min(ell, size).
    // Throws std::logic_error when fewer than k letters are present.
    Minimum current_min() const;

private:
    struct Slot {
        KmerKey key;
        std::int64_t bottom = -1;  // -1 marks an empty slot
    };
    bool better(const Slot& a, const Slot& b) const;
    void update(std::size_t index, const Slot& value);
    Slot query(std::size_t lo, std::size_t hi) const;

    const MinimizerScheme* scheme_;
    bool reversed_;
    std::size_t leaves_ = 1;
    std::vector<Slot> tree_;
    Text letters_;  // back of the string first
};

}  // namespace wsi
