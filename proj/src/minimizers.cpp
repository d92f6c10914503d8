#include "wsi/minimizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wsi/estimation.hpp"

namespace wsi {

namespace {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t s = lo + hi;
    return s >= kMersenne61 ? s - kMersenne61 : s;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

MinimizerScheme::MinimizerScheme(Pos ell, Pos k, KmerOrder order, std::uint64_t seed,
                                 std::size_t sigma)
    : ell_(ell), k_(k), order_(order), seed_(seed), sigma_(sigma) {
    if (ell < 1 || k < 1 || k > ell) {
        throw std::invalid_argument("minimizer scheme needs 1 <= k <= ell");
    }
    if (sigma < 1) {
        throw std::invalid_argument("alphabet size must be positive");
    }
    // The packed lexicographic value must fit 64 bits.
    if (static_cast<double>(k) * std::log2(static_cast<double>(std::max<std::size_t>(sigma, 2))) >
        64.0) {
        throw std::invalid_argument("k too large: sigma^k exceeds 64 bits");
    }
    base_ = (splitmix64(seed) % (kMersenne61 - 512)) + 257;
}

Pos MinimizerScheme::default_k(Pos ell, std::size_t sigma) {
    Pos c = 0;
    if (sigma >= 2) {
        long double power = 1;
        while (power < ell) {
            power *= static_cast<long double>(sigma);
            ++c;
        }
    }
    return std::min<Pos>(ell, c + 2);
}

KmerKey MinimizerScheme::key(std::span<const Letter> kmer) const {
    KmerKey out;
    std::uint64_t h = 0;
    for (Letter c : kmer) {
        out.lex = out.lex * sigma_ + c;
        h = mulmod61(h, base_) + c + 1;
        if (h >= kMersenne61) {
            h -= kMersenne61;
        }
    }
    out.primary = order_ == KmerOrder::fingerprint ? splitmix64(h ^ seed_) : 0;
    return out;
}

KmerKey MinimizerScheme::key_reversed(std::span<const Letter> kmer) const {
    Text rev(kmer.rbegin(), kmer.rend());
    return key(rev);
}

Pos window_minimizer(const MinimizerScheme& scheme, std::span<const Letter> window) {
    if (static_cast<Pos>(window.size()) != scheme.ell()) {
        throw std::invalid_argument("window length " + std::to_string(window.size()) +
                                    " differs from ell");
    }
    const auto k = static_cast<std::size_t>(scheme.k());
    Pos best = 1;
    KmerKey best_key = scheme.key(window.subspan(0, k));
    for (std::size_t t = 1; t + k <= window.size(); ++t) {
        KmerKey key = scheme.key(window.subspan(t, k));
        if (key < best_key) {
            best_key = key;
            best = static_cast<Pos>(t + 1);
        }
    }
    return best;
}

std::vector<Pos> minimizer_set_plain(const MinimizerScheme& scheme, std::span<const Letter> s) {
    std::vector<Pos> out;
    const auto ell = static_cast<std::size_t>(scheme.ell());
    for (std::size_t i = 0; i + ell <= s.size(); ++i) {
        out.push_back(static_cast<Pos>(i) + window_minimizer(scheme, s.subspan(i, ell)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<MinimizerLabel> minimizer_set_family(const MinimizerScheme& scheme,
                                                 const EstimationFamily& family) {
    std::vector<MinimizerLabel> out;
    const Pos ell = scheme.ell();
    for (std::size_t j = 0; j < family.size(); ++j) {
        const Text& s = family.string(j);
        const auto& pi = family.property(j);
        for (Pos i = 1; i + ell - 1 <= family.length(); ++i) {
            if (i + ell - 1 > pi[static_cast<std::size_t>(i - 1)]) {
                continue;
            }
            std::span<const Letter> w(s.data() + (i - 1), static_cast<std::size_t>(ell));
            out.push_back({i + window_minimizer(scheme, w) - 1, static_cast<Pos>(j + 1)});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Pos leftmost_pattern_minimizer(const MinimizerScheme& scheme, std::span<const Letter> pattern) {
    if (static_cast<Pos>(pattern.size()) < scheme.ell()) {
        throw std::invalid_argument("pattern shorter than ell");
    }
    return window_minimizer(scheme, pattern.first(static_cast<std::size_t>(scheme.ell())));
}

SlidingKmerHeap::SlidingKmerHeap(const MinimizerScheme& scheme, std::size_t capacity,
                                 bool reversed)
    : scheme_(&scheme), reversed_(reversed) {
    while (leaves_ < std::max<std::size_t>(capacity, 1)) {
        leaves_ <<= 1;
    }
    tree_.assign(2 * leaves_, Slot{});
    letters_.reserve(capacity);
}

bool SlidingKmerHeap::better(const Slot& a, const Slot& b) const {
    if (a.bottom < 0) {
        return false;
    }
    if (b.bottom < 0) {
        return true;
    }
    if (a.key != b.key) {
        return a.key < b.key;
    }
    // Leftmost in front order is the largest bottom index; reversed reading
    // prefers the opposite end.
    return reversed_ ? a.bottom < b.bottom : a.bottom > b.bottom;
}

void SlidingKmerHeap::update(std::size_t index, const Slot& value) {
    std::size_t node = index + leaves_;
    tree_[node] = value;
    for (node >>= 1; node >= 1; node >>= 1) {
        const Slot& l = tree_[2 * node];
        const Slot& r = tree_[2 * node + 1];
        tree_[node] = better(r, l) ? r : l;
    }
}

SlidingKmerHeap::Slot SlidingKmerHeap::query(std::size_t lo, std::size_t hi) const {
    Slot best;
    for (lo += leaves_, hi += leaves_ + 1; lo < hi; lo >>= 1, hi >>= 1) {
        if (lo & 1) {
            if (better(tree_[lo], best)) best = tree_[lo];
            ++lo;
        }
        if (hi & 1) {
            --hi;
            if (better(tree_[hi], best)) best = tree_[hi];
        }
    }
    return best;
}

void SlidingKmerHeap::prepend(Letter a) {
    if (letters_.size() >= leaves_) {
        throw std::length_error("sliding k-mer heap capacity exceeded");
    }
    letters_.push_back(a);
    const auto k = static_cast<std::size_t>(scheme_->k());
    const std::size_t len = letters_.size();
    if (len < k) {
        return;
    }
    // Front k-mer in front order is letters_[len-1], ..., letters_[len-k].
    Text kmer(k);
    for (std::size_t t = 0; t < k; ++t) {
        kmer[t] = letters_[len - 1 - t];
    }
    Slot s;
    s.key = reversed_ ? scheme_->key_reversed(kmer) : scheme_->key(kmer);
    s.bottom = static_cast<std::int64_t>(len - k);
    update(len - k, s);
}

void SlidingKmerHeap::pop_front() {
    if (letters_.empty()) {
        throw std::logic_error("pop_front on empty string");
    }
    const auto k = static_cast<std::size_t>(scheme_->k());
    const std::size_t len = letters_.size();
    if (len >= k) {
        update(len - k, Slot{});
    }
    letters_.pop_back();
}

SlidingKmerHeap::Minimum SlidingKmerHeap::current_min() const {
    const auto k = static_cast<std::size_t>(scheme_->k());
    const std::size_t len = letters_.size();
    if (len < k) {
        throw std::logic_error("window shorter than k");
    }
    const std::size_t window = std::min(len, static_cast<std::size_t>(scheme_->ell()));
    const Slot best = query(len - window, len - k);
    // Front offset of a k-mer whose lowest bottom index is b: len - k - b + 1.
    const auto offset = static_cast<Pos>(static_cast<std::int64_t>(len - k) - best.bottom + 1);
    return {best.key, offset};
}

}  // namespace wsi
