#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsi/weighted_string.hpp"

namespace wsi {

// A string stored relative to the heavy string: H[start .. start+length-1]
// with the letters listed in diffs substituted. Diff positions are absolute,
// ascending, and lie inside the interval.
struct HeavyHandle {
    Pos start = 1;
    Pos length = 0;
    std::vector<Mismatch> diffs;

    bool operator==(const HeavyHandle&) const = default;
};

Letter letter_at(const HeavyContext& h, const HeavyHandle& s, Pos offset);
Text decode(const HeavyContext& h, const HeavyHandle& s);
HeavyHandle encode(const HeavyContext& h, std::span<const Letter> u, Pos start);

// Longest common extension on the heavy string, by Karp-Rabin prefix hashes
// and binary search.
class HeavyLce {
public:
    HeavyLce() = default;
    explicit HeavyLce(const Text& heavy);

    // Largest e <= limit with H[i..i+e-1] = H[j..j+e-1].
    Pos lce(Pos i, Pos j, Pos limit) const;

private:
    std::uint64_t hash(Pos i, Pos len) const;

    std::vector<std::uint64_t> prefix_;
    std::vector<std::uint64_t> power_;
};

Pos heavy_lcp(const HeavyContext& h, const HeavyLce& lce, const HeavyHandle& a,
              const HeavyHandle& b);

// Lexicographic order with a proper prefix first.
int heavy_compare(const HeavyContext& h, const HeavyLce& lce, const HeavyHandle& a,
                  const HeavyHandle& b);

}  // namespace wsi
