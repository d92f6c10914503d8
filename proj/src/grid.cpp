#include "wsi/grid.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

#include "wsi/binary_io.hpp"

namespace wsi {

RankBitVector::RankBitVector(const std::vector<bool>& bits) : size_(bits.size()) {
    words_.assign((size_ + 63) / 64 + 1, 0);
    for (std::size_t i = 0; i < size_; ++i) {
        if (bits[i]) {
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        }
    }
    before_.assign(words_.size() + 1, 0);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        before_[w + 1] = before_[w] + static_cast<std::uint32_t>(std::popcount(words_[w]));
    }
}

std::size_t RankBitVector::rank1(std::size_t i) const {
    const std::size_t w = i >> 6;
    const std::size_t r = i & 63;
    std::size_t out = before_[w];
    if (r) {
        out += static_cast<std::size_t>(std::popcount(words_[w] & ((std::uint64_t{1} << r) - 1)));
    }
    return out;
}

std::size_t RankBitVector::select1(std::size_t r) const {
    // Last word whose preceding count is <= r.
    auto it = std::upper_bound(before_.begin(), before_.end(), static_cast<std::uint32_t>(r));
    std::size_t w = static_cast<std::size_t>(it - before_.begin()) - 1;
    std::size_t left = r - before_[w];
    std::uint64_t word = words_[w];
    for (std::size_t b = 0; b < 64; ++b) {
        if ((word >> b) & 1) {
            if (left == 0) {
                return (w << 6) + b;
            }
            --left;
        }
    }
    throw std::out_of_range("select1 beyond the last one");
}

std::size_t RankBitVector::select0(std::size_t r) const {
    std::size_t lo = 0;
    std::size_t hi = size_;
    // Smallest i with rank0(i + 1) > r.
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (rank0(mid + 1) > r) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (lo >= size_) {
        throw std::out_of_range("select0 beyond the last zero");
    }
    return lo;
}

WaveletMatrix::WaveletMatrix(const std::vector<std::uint32_t>& values) : size_(values.size()) {
    std::uint32_t top = 0;
    for (auto v : values) {
        top = std::max(top, v);
    }
    levels_ = std::max(1, static_cast<int>(std::bit_width(top)));
    std::vector<std::uint32_t> cur = values;
    for (int l = 0; l < levels_; ++l) {
        const int shift = levels_ - 1 - l;
        std::vector<bool> bits(size_);
        std::vector<std::uint32_t> zeros;
        std::vector<std::uint32_t> ones;
        for (std::size_t i = 0; i < size_; ++i) {
            const bool b = (cur[i] >> shift) & 1;
            bits[i] = b;
            (b ? ones : zeros).push_back(cur[i]);
        }
        bits_.emplace_back(bits);
        zeros_.push_back(zeros.size());
        cur = std::move(zeros);
        cur.insert(cur.end(), ones.begin(), ones.end());
    }
}

void WaveletMatrix::report(std::size_t lo, std::size_t hi, std::uint32_t vlo, std::uint32_t vhi,
                           std::vector<std::size_t>& out) const {
    if (lo >= hi || vlo >= vhi) {
        return;
    }
    descend(0, lo, hi, 0, vlo, vhi, out);
}

void WaveletMatrix::descend(int level, std::size_t lo, std::size_t hi, std::uint32_t prefix,
                            std::uint32_t vlo, std::uint32_t vhi,
                            std::vector<std::size_t>& out) const {
    if (lo >= hi) {
        return;
    }
    const int rest = levels_ - level;
    const std::uint64_t first = static_cast<std::uint64_t>(prefix) << rest;
    const std::uint64_t last = first + (std::uint64_t{1} << rest);
    if (last <= vlo || first >= vhi) {
        return;
    }
    if (level == levels_) {
        for (std::size_t p = lo; p < hi; ++p) {
            out.push_back(trace_up(level, p));
        }
        return;
    }
    const RankBitVector& b = bits_[static_cast<std::size_t>(level)];
    const std::size_t z = zeros_[static_cast<std::size_t>(level)];
    descend(level + 1, b.rank0(lo), b.rank0(hi), prefix << 1, vlo, vhi, out);
    descend(level + 1, z + b.rank1(lo), z + b.rank1(hi), (prefix << 1) | 1, vlo, vhi, out);
}

std::size_t WaveletMatrix::trace_up(int level, std::size_t pos) const {
    for (int l = level - 1; l >= 0; --l) {
        const RankBitVector& b = bits_[static_cast<std::size_t>(l)];
        const std::size_t z = zeros_[static_cast<std::size_t>(l)];
        pos = pos < z ? b.select0(pos) : b.select1(pos - z);
    }
    return pos;
}

Grid::Grid(std::vector<GridPoint> points, std::size_t scan_threshold) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
        throw std::logic_error("duplicate grid point");
    }
    if (points_.size() >= scan_threshold && !points_.empty()) {
        std::vector<std::uint32_t> ys;
        ys.reserve(points_.size());
        for (const GridPoint& p : points_) {
            ys.push_back(static_cast<std::uint32_t>(p.y));
        }
        wavelet_ = WaveletMatrix(ys);
    }
}

std::vector<GridPoint> Grid::scan(LeafRange xr, LeafRange yr) const {
    std::vector<GridPoint> out;
    for (const GridPoint& p : points_) {
        if (p.x >= xr.first && p.x < xr.second && p.y >= yr.first && p.y < yr.second) {
            out.push_back(p);
        }
    }
    return out;
}

std::vector<GridPoint> Grid::range_report(LeafRange xr, LeafRange yr) const {
    if (xr.first >= xr.second || yr.first >= yr.second) {
        return {};
    }
    if (!uses_wavelet()) {
        return scan(xr, yr);
    }
    auto by_x = [](const GridPoint& p, std::int32_t x) { return p.x < x; };
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(points_.begin(), points_.end(), xr.first, by_x) - points_.begin());
    const auto hi = static_cast<std::size_t>(
        std::lower_bound(points_.begin(), points_.end(), xr.second, by_x) - points_.begin());
    std::vector<std::size_t> hits;
    wavelet_.report(lo, hi, static_cast<std::uint32_t>(std::max(yr.first, 0)),
                    static_cast<std::uint32_t>(std::max(yr.second, 0)), hits);
    std::sort(hits.begin(), hits.end());
    std::vector<GridPoint> out;
    out.reserve(hits.size());
    for (std::size_t i : hits) {
        out.push_back(points_[i]);
    }
    return out;
}

Grid build_grid(const MinimizerFactorTree& fwd, const MinimizerFactorTree& bwd, Pos n,
                const JoinPredicate& joinable) {
    std::map<Pos, std::vector<std::int32_t>> back_by_anchor;
    for (std::size_t r = 0; r < bwd.leaf_count(); ++r) {
        back_by_anchor[n + 1 - bwd.leaves()[r].start].push_back(static_cast<std::int32_t>(r));
    }
    std::vector<GridPoint> points;
    for (std::size_t r = 0; r < fwd.leaf_count(); ++r) {
        const HeavyHandle& f = fwd.leaves()[r];
        auto it = back_by_anchor.find(f.start);
        if (it == back_by_anchor.end()) {
            continue;
        }
        for (std::int32_t y : it->second) {
            if (joinable(f, bwd.leaves()[static_cast<std::size_t>(y)])) {
                points.push_back({static_cast<std::int32_t>(r), y, f.start});
            }
        }
    }
    return Grid(std::move(points));
}

void write_grid(std::ostream& out, const Grid& g) {
    io::put<std::uint64_t>(out, g.size());
    for (const GridPoint& p : g.points()) {
        io::put<std::int32_t>(out, p.x);
        io::put<std::int32_t>(out, p.y);
        io::put<std::int32_t>(out, p.anchor);
    }
}

Grid read_grid(std::istream& in, std::size_t x_limit, std::size_t y_limit) {
    const auto count = io::get_count(in, static_cast<std::uint64_t>(x_limit) * y_limit);
    std::vector<GridPoint> points(count);
    for (auto& p : points) {
        p.x = io::get<std::int32_t>(in);
        p.y = io::get<std::int32_t>(in);
        p.anchor = io::get<std::int32_t>(in);
        if (p.x < 0 || p.y < 0 || static_cast<std::size_t>(p.x) >= x_limit ||
            static_cast<std::size_t>(p.y) >= y_limit) {
            throw io::FormatError("grid point outside the leaf ranges");
        }
    }
    return Grid(std::move(points));
}

}  // namespace wsi
