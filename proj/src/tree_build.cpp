#include "wsi/tree_build.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

namespace wsi {

Orientation Orientation::make(const WeightedString& input, Direction d) {
    Orientation o;
    o.direction = d;
    o.x = d == Direction::forward ? input : input.reversed();
    o.h = HeavyContext(o.x);
    o.lce = HeavyLce(o.h.heavy_string());
    return o;
}

namespace {

using DiffSet = std::vector<Mismatch>;

bool diffs_less(const DiffSet& a, const DiffSet& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](const Mismatch& x, const Mismatch& y) {
            return x.pos != y.pos ? x.pos < y.pos : x.letter < y.letter;
        });
}

struct MarkLess {
    bool operator()(const Mark& a, const Mark& b) const {
        return a.start != b.start ? a.start < b.start : diffs_less(a.diffs, b.diffs);
    }
};

struct DiffSetLess {
    bool operator()(const DiffSet& a, const DiffSet& b) const { return diffs_less(a, b); }
};

Mark make_mark(Pos anchor, Pos n, const DiffSet& ascending) {
    Mark m;
    m.start = anchor;
    m.length = n - anchor + 1;
    for (const Mismatch& d : ascending) {
        if (d.pos >= anchor) {
            m.diffs.push_back(d);
        }
    }
    return m;
}

// Anchor of a window starting at i, given the window minimizer offset.
// Backward windows are read in input order, so the k-mer start there is the
// far end of the reversed k-mer.
Pos anchor_of(Direction d, Pos i, Pos ell, Pos mu) {
    return d == Direction::forward ? i + mu - 1 : i + ell - mu;
}

}  // namespace

HeavyHandle trim_mark(const Orientation& o, const Threshold& t, const Mark& mark) {
    const Pos n = o.x.length();
    const Pos a = mark.start;
    const Pos last = mark.diffs.empty() ? a - 1 : mark.diffs.back().pos;
    double lp = o.h.range_log(a, last);
    for (const Mismatch& d : mark.diffs) {
        lp += o.x.log_prob(d.pos, d.letter) - o.h.heavy_log(d.pos);
    }
    Pos lo = last;
    Pos hi = n;
    while (lo < hi) {
        const Pos mid = lo + (hi - lo + 1) / 2;
        if (t.accepts(lp + o.h.range_log(last + 1, mid))) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if (lo < a) {
        throw std::logic_error("sampled string is not solid at its anchor");
    }
    return HeavyHandle{a, lo - a + 1, mark.diffs};
}

ExtendedTree build_extended_tree(const Orientation& o, const Threshold& t,
                                 const MinimizerScheme& scheme) {
    const Pos n = o.x.length();
    const Pos ell = scheme.ell();
    const Pos k = scheme.k();
    const auto sigma = static_cast<int>(o.x.sigma());
    const bool backward = o.direction == Direction::backward;

    ExtendedTree ext;
    ext.direction = o.direction;
    std::set<Mark, MarkLess> marks;
    SlidingKmerHeap heap(scheme, static_cast<std::size_t>(n) + 1, backward);

    struct Frame {
        Pos i;
        double p;  // log probability of the current string up to its last diff
        std::size_t diff_count;
        bool heavy;  // no diffs: the node lies on the heavy path
        int next_letter;
    };
    // Diffs of the current string, rightmost first, matching the order in
    // which the traversal meets them.
    std::vector<Mismatch> diffs;
    std::vector<Frame> path;
    path.push_back({n + 1, 0.0, 0, true, 0});
    ext.stats.nodes_created = 1;
    ext.stats.peak_live_path_nodes = 1;

    auto visit = [&](const Frame& f) {
        if (f.i + ell - 1 > n) {
            return;
        }
        const Pos wend = f.i + ell - 1;
        bool solid;
        if (f.heavy) {
            solid = t.accepts(o.h.range_log(f.i, wend));
        } else {
            const Pos last = diffs.front().pos;
            solid = last >= wend || t.accepts(f.p + o.h.range_log(last + 1, wend));
        }
        if (!solid) {
            return;
        }
        const Pos offset = heap.current_min().offset;
        const Pos anchor = backward ? f.i + offset + k - 2 : f.i + offset - 1;
        Mark m;
        m.start = anchor;
        m.length = n - anchor + 1;
        for (std::size_t d = 0; d < diffs.size() && diffs[d].pos >= anchor; ++d) {
            m.diffs.push_back(diffs[d]);
        }
        std::reverse(m.diffs.begin(), m.diffs.end());
        marks.insert(std::move(m));
    };

    while (!path.empty()) {
        Frame& f = path.back();
        if (f.i == 1 || f.next_letter == sigma) {
            if (f.i <= n) {
                heap.pop_front();
            }
            path.pop_back();
            if (!path.empty()) {
                diffs.resize(path.back().diff_count);
            }
            continue;
        }
        const auto a = static_cast<Letter>(f.next_letter++);
        const Pos pos = f.i - 1;
        const double la = o.x.log_prob(pos, a);
        if (la == kNegInf) {
            continue;
        }
        const bool is_heavy = a == o.h.heavy(pos);
        const bool child_heavy = f.heavy && is_heavy;
        double p = 0.0;
        if (!child_heavy) {
            p = (f.heavy ? 0.0 : f.p) + la;
            if (!t.accepts(p)) {
                continue;
            }
        }
        if (!is_heavy) {
            diffs.push_back({pos, a});
        }
        heap.prepend(a);
        path.push_back({pos, p, diffs.size(), child_heavy, 0});
        ++ext.stats.nodes_created;
        ext.stats.peak_live_path_nodes = std::max(ext.stats.peak_live_path_nodes, path.size());
        visit(path.back());
    }

    ext.marks.assign(marks.begin(), marks.end());
    ext.stats.marks = ext.marks.size();
    return ext;
}

MinimizerFactorTree reverse_and_compact(const ExtendedTree& ext, const Orientation& o,
                                        const Threshold& t) {
    std::vector<HeavyHandle> leaves;
    leaves.reserve(ext.marks.size());
    for (const Mark& m : ext.marks) {
        leaves.push_back(trim_mark(o, t, m));
    }
    std::sort(leaves.begin(), leaves.end(), [&](const HeavyHandle& a, const HeavyHandle& b) {
        return canonical_less(o.h, o.lce, a, b);
    });
    std::vector<Pos> lcp(leaves.size(), 0);
    for (std::size_t t2 = 1; t2 < leaves.size(); ++t2) {
        lcp[t2] = heavy_lcp(o.h, o.lce, leaves[t2 - 1], leaves[t2]);
    }
    RawTrie raw = compact_sorted_walk(leaves, lcp);
    return finalize_tree(ext.direction, std::move(leaves), raw);
}

MinimizerFactorTree build_tree_space_efficient(const Orientation& o, const Threshold& t,
                                               const MinimizerScheme& scheme,
                                               TreeBuildStats* stats) {
    ExtendedTree ext = build_extended_tree(o, t, scheme);
    if (stats) {
        *stats = ext.stats;
    }
    return reverse_and_compact(ext, o, t);
}

namespace {

// Distinct diff sets of the solid strings at each start of o, read off the
// family, always including the empty set of the heavy path.
std::vector<std::set<DiffSet, DiffSetLess>> family_nodes(const Orientation& o,
                                                         const EstimationFamily& family) {
    const Pos n = o.x.length();
    std::vector<std::set<DiffSet, DiffSetLess>> out(static_cast<std::size_t>(n) + 1);
    const bool backward = o.direction == Direction::backward;
    for (Pos i = 1; i <= n; ++i) {
        auto& sets = out[static_cast<std::size_t>(i)];
        sets.insert(DiffSet{});
        for (std::size_t j = 0; j < family.size(); ++j) {
            const Text& s = family.string(j);
            // Solid strings of S_j starting at i in this orientation.
            Pos end;
            if (backward) {
                const Pos b = n + 1 - i;
                end = n + 1 - family.context_start(j, b);
            } else {
                end = family.property(j)[static_cast<std::size_t>(i - 1)];
            }
            DiffSet d;
            for (Pos q = i; q <= end; ++q) {
                const Letter c = s[static_cast<std::size_t>((backward ? n + 1 - q : q) - 1)];
                if (c != o.h.heavy(q)) {
                    d.push_back({q, c});
                    sets.insert(d);
                }
            }
        }
    }
    return out;
}

std::optional<Mark> naive_mark(const Orientation& o, const Threshold& t,
                               const MinimizerScheme& scheme, Pos i, const DiffSet& d) {
    const Pos n = o.x.length();
    const Pos ell = scheme.ell();
    if (i + ell - 1 > n) {
        return std::nullopt;
    }
    Text window(static_cast<std::size_t>(ell));
    double lp = 0.0;
    std::size_t next = 0;
    for (Pos q = i; q < i + ell; ++q) {
        Letter c = o.h.heavy(q);
        if (next < d.size() && d[next].pos == q) {
            c = d[next++].letter;
        }
        window[static_cast<std::size_t>(q - i)] = c;
        lp += o.x.log_prob(q, c);
    }
    if (!t.accepts(lp)) {
        return std::nullopt;
    }
    if (o.direction == Direction::backward) {
        std::reverse(window.begin(), window.end());
    }
    const Pos anchor = anchor_of(o.direction, i, ell, window_minimizer(scheme, window));
    return make_mark(anchor, n, d);
}

MinimizerFactorTree naive_tree(const Orientation& o, const Threshold& t,
                               const MinimizerScheme& scheme, const EstimationFamily& family,
                               TreeBuildStats& stats) {
    std::set<Mark, MarkLess> marks;
    const auto nodes = family_nodes(o, family);
    for (Pos i = 1; i < static_cast<Pos>(nodes.size()); ++i) {
        for (const DiffSet& d : nodes[static_cast<std::size_t>(i)]) {
            if (auto m = naive_mark(o, t, scheme, i, d)) {
                marks.insert(std::move(*m));
            }
        }
    }
    stats.marks += marks.size();

    std::vector<HeavyHandle> trimmed;
    std::vector<Text> text;
    for (const Mark& m : marks) {
        trimmed.push_back(trim_mark(o, t, m));
        text.push_back(decode(o.h, trimmed.back()));
    }
    std::vector<std::size_t> order(trimmed.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Text& u = text[a];
        const Text& v = text[b];
        const std::size_t len = std::min(u.size(), v.size());
        for (std::size_t c = 0; c < len; ++c) {
            if (u[c] != v[c]) {
                return u[c] < v[c];
            }
        }
        if (u.size() != v.size()) {
            return u.size() < v.size();
        }
        return trimmed[a].start < trimmed[b].start;
    });
    std::vector<HeavyHandle> leaves;
    std::vector<Pos> lcp;
    for (std::size_t r = 0; r < order.size(); ++r) {
        leaves.push_back(trimmed[order[r]]);
        Pos l = 0;
        if (r > 0) {
            const Text& a = text[order[r - 1]];
            const Text& b = text[order[r]];
            while (static_cast<std::size_t>(l) < std::min(a.size(), b.size()) &&
                   a[static_cast<std::size_t>(l)] == b[static_cast<std::size_t>(l)]) {
                ++l;
            }
        }
        lcp.push_back(l);
    }
    RawTrie raw = compact_sorted_stack(leaves, lcp);
    return finalize_tree(o.direction, std::move(leaves), raw);
}

}  // namespace

TreePair build_trees_naive(const WeightedString& x, const EstimationFamily& family,
                           const MinimizerScheme& scheme) {
    const Threshold& t = family.threshold();
    TreePair out;
    out.stats.family_letters = family.size() * static_cast<std::size_t>(family.length());
    const Orientation fwd = Orientation::make(x, Direction::forward);
    const Orientation bwd = Orientation::make(x, Direction::backward);
    out.forward = naive_tree(fwd, t, scheme, family, out.stats);
    out.backward = naive_tree(bwd, t, scheme, family, out.stats);
    return out;
}

std::size_t count_extended_nodes_naive(const WeightedString& x, const EstimationFamily& family) {
    const Orientation fwd = Orientation::make(x, Direction::forward);
    std::size_t total = 1;
    for (const auto& sets : family_nodes(fwd, family)) {
        total += sets.size();
    }
    // Slot 0 is unused and holds no sets.
    return total;
}

}  // namespace wsi
