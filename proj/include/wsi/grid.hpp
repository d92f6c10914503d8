#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <vector>

#include "wsi/factor_tree.hpp"

namespace wsi {

struct GridPoint {
    std::int32_t x = 0;  // forward leaf rank
    std::int32_t y = 0;  // backward leaf rank
    Pos anchor = 0;      // input coordinates

    bool operator==(const GridPoint&) const = default;
    auto operator<=>(const GridPoint&) const = default;
};

// Plain bit vector with rank support and select by binary search over the
// rank samples.
class RankBitVector {
public:
    RankBitVector() = default;
    explicit RankBitVector(const std::vector<bool>& bits);

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    std::size_t rank1(std::size_t i) const;  // ones in [0, i)
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }
    std::size_t select1(std::size_t r) const;  // position of the (r+1)-th one
    std::size_t select0(std::size_t r) const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> before_;  // ones before each word
};

// Wavelet matrix over a sequence of small non-negative integers.
class WaveletMatrix {
public:
    WaveletMatrix() = default;
    explicit WaveletMatrix(const std::vector<std::uint32_t>& values);

    std::size_t size() const { return size_; }
    // Sequence positions i in [lo, hi) with value in [vlo, vhi), unordered.
    void report(std::size_t lo, std::size_t hi, std::uint32_t vlo, std::uint32_t vhi,
                std::vector<std::size_t>& out) const;

private:
    void descend(int level, std::size_t lo, std::size_t hi, std::uint32_t prefix,
                 std::uint32_t vlo, std::uint32_t vhi, std::vector<std::size_t>& out) const;
    std::size_t trace_up(int level, std::size_t pos) const;

    std::size_t size_ = 0;
    int levels_ = 0;
    std::vector<RankBitVector> bits_;
    std::vector<std::size_t> zeros_;
};

class Grid {
public:
    static constexpr std::size_t kScanThreshold = 1024;

    Grid() = default;
    // Points are sorted by (x, y); duplicates are rejected.
    explicit Grid(std::vector<GridPoint> points, std::size_t scan_threshold = kScanThreshold);

    const std::vector<GridPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool uses_wavelet() const { return wavelet_.size() > 0; }

    // Points with x in xr and y in yr (half-open), ascending by (x, y).
    std::vector<GridPoint> range_report(LeafRange xr, LeafRange yr) const;
    std::vector<GridPoint> scan(LeafRange xr, LeafRange yr) const;

    bool operator==(const Grid& o) const { return points_ == o.points_; }

private:
    std::vector<GridPoint> points_;
    WaveletMatrix wavelet_;
};

// Joins forward and backward leaves that share an anchor and pass the
// predicate. Backward leaf anchors are converted with n + 1 - p.
using JoinPredicate = std::function<bool(const HeavyHandle& fwd, const HeavyHandle& bwd)>;
Grid build_grid(const MinimizerFactorTree& fwd, const MinimizerFactorTree& bwd, Pos n,
                const JoinPredicate& joinable);

void write_grid(std::ostream& out, const Grid& g);
Grid read_grid(std::istream& in, std::size_t x_limit, std::size_t y_limit);

}  // namespace wsi
