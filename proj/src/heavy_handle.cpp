#include "wsi/heavy_handle.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsi {

namespace {

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
constexpr std::uint64_t kBase = 1000003;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t s = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
    return s >= kMod ? s - kMod : s;
}

}  // namespace

Letter letter_at(const HeavyContext& h, const HeavyHandle& s, Pos offset) {
    const Pos pos = s.start + offset;
    auto it = std::lower_bound(s.diffs.begin(), s.diffs.end(), pos,
                               [](const Mismatch& m, Pos p) { return m.pos < p; });
    if (it != s.diffs.end() && it->pos == pos) {
        return it->letter;
    }
    return h.heavy(pos);
}

Text decode(const HeavyContext& h, const HeavyHandle& s) {
    Text out(h.heavy_string().begin() + (s.start - 1),
             h.heavy_string().begin() + (s.start - 1 + s.length));
    for (const Mismatch& m : s.diffs) {
        out[static_cast<std::size_t>(m.pos - s.start)] = m.letter;
    }
    return out;
}

HeavyHandle encode(const HeavyContext& h, std::span<const Letter> u, Pos start) {
    HeavyHandle out{start, static_cast<Pos>(u.size()), heavy_mismatches(h, u, start)};
    return out;
}

HeavyLce::HeavyLce(const Text& heavy) {
    prefix_.assign(heavy.size() + 1, 0);
    power_.assign(heavy.size() + 1, 1);
    for (std::size_t i = 0; i < heavy.size(); ++i) {
        std::uint64_t v = mulmod(prefix_[i], kBase) + heavy[i] + 1;
        prefix_[i + 1] = v >= kMod ? v - kMod : v;
        power_[i + 1] = mulmod(power_[i], kBase);
    }
}

std::uint64_t HeavyLce::hash(Pos i, Pos len) const {
    const auto lo = static_cast<std::size_t>(i - 1);
    const auto hi = lo + static_cast<std::size_t>(len);
    const std::uint64_t sub = mulmod(prefix_[lo], power_[static_cast<std::size_t>(len)]);
    return prefix_[hi] >= sub ? prefix_[hi] - sub : prefix_[hi] + kMod - sub;
}

Pos HeavyLce::lce(Pos i, Pos j, Pos limit) const {
    if (i == j || limit <= 0) {
        return std::max<Pos>(limit, 0);
    }
    Pos lo = 0;
    Pos hi = limit;
    while (lo < hi) {
        const Pos mid = lo + (hi - lo + 1) / 2;
        if (hash(i, mid) == hash(j, mid)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

Pos heavy_lcp(const HeavyContext& h, const HeavyLce& lce, const HeavyHandle& a,
              const HeavyHandle& b) {
    const Pos limit = std::min(a.length, b.length);
    std::size_t ia = 0;
    std::size_t ib = 0;
    Pos o = 0;
    while (o < limit) {
        const Pos na = ia < a.diffs.size() ? a.diffs[ia].pos - a.start : limit;
        const Pos nb = ib < b.diffs.size() ? b.diffs[ib].pos - b.start : limit;
        const Pos next = std::min({na, nb, limit});
        if (o < next) {
            const Pos e = lce.lce(a.start + o, b.start + o, next - o);
            if (e < next - o) {
                return o + e;
            }
            o = next;
            continue;
        }
        const Letter la = na == o ? a.diffs[ia++].letter : h.heavy(a.start + o);
        const Letter lb = nb == o ? b.diffs[ib++].letter : h.heavy(b.start + o);
        if (la != lb) {
            return o;
        }
        ++o;
    }
    return limit;
}

int heavy_compare(const HeavyContext& h, const HeavyLce& lce, const HeavyHandle& a,
                  const HeavyHandle& b) {
    const Pos l = heavy_lcp(h, lce, a, b);
    if (l == a.length || l == b.length) {
        return (a.length > b.length) - (a.length < b.length);
    }
    const Letter la = letter_at(h, a, l);
    const Letter lb = letter_at(h, b, l);
    return la < lb ? -1 : 1;
}

}  // namespace wsi
