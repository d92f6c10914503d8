#include "wsi/query.hpp"

#include <algorithm>
#include <set>

namespace wsi {

namespace {

bool unknown_letters(const Index& index, std::span<const Letter> p) {
    return std::any_of(p.begin(), p.end(),
                       [&](Letter c) { return c >= index.alphabet().size(); });
}

void check_length(const Index& index, std::span<const Letter> p) {
    if (static_cast<Pos>(p.size()) < index.scheme().ell()) {
        throw QueryError("pattern of length " + std::to_string(p.size()) +
                         " is shorter than ell = " + std::to_string(index.scheme().ell()));
    }
}

Verdict verify_with_records(const Index& index, std::span<const Letter> p, Pos start, Pos anchor) {
    const HeavyContext& h = index.heavy(Direction::forward);
    const auto m = static_cast<Pos>(p.size());
    const auto rec = index.records(anchor);
    double lp = h.range_log(start, start + m - 1);
    int mismatches = 0;
    for (Pos t = 0; t < m; ++t) {
        const Pos pos = start + t;
        const Letter c = p[static_cast<std::size_t>(t)];
        if (c == h.heavy(pos)) {
            continue;
        }
        if (++mismatches > index.threshold().max_mismatches()) {
            return {false, kNegInf, false};
        }
        auto it = std::lower_bound(rec.begin(), rec.end(), std::pair{pos, c},
                                   [](const RecordEntry& e, std::pair<Pos, Letter> key) {
                                       return e.pos != key.first ? e.pos < key.first
                                                                 : e.letter < key.second;
                                   });
        if (it == rec.end() || it->pos != pos || it->letter != c) {
            // Every valid occurrence sampled at this anchor has all its
            // mismatches recorded there.
            return {false, kNegInf, false};
        }
        lp += it->log_prob - h.heavy_log(pos);
    }
    return {index.threshold().accepts(lp), lp, true};
}

Verdict verify_at(const Index& index, std::span<const Letter> p, Pos start, Pos anchor,
                  VerifySource source) {
    const auto m = static_cast<Pos>(p.size());
    if (start < 1 || start + m - 1 > index.length()) {
        return {false, kNegInf, false};
    }
    if (source == VerifySource::automatic) {
        source = index.has_x() ? VerifySource::retained_x : VerifySource::records;
    }
    if (source == VerifySource::retained_x) {
        if (!index.has_x()) {
            throw std::logic_error("index was built without X");
        }
        const double lp = occurrence_probability(index.x(), p, start);
        return {index.threshold().accepts(lp), lp, true};
    }
    return verify_with_records(index, p, start, anchor);
}

// Anchors hit in the tree of the longer half around the minimizer.
std::vector<Pos> tree_anchors(const Index& index, std::span<const Letter> p, Pos mu, bool use_array) {
    const auto m = static_cast<Pos>(p.size());
    const bool forward = m - mu + 1 >= mu;
    const Direction d = forward ? Direction::forward : Direction::backward;
    Text half;
    if (forward) {
        half.assign(p.begin() + (mu - 1), p.end());
    } else {
        half.assign(p.begin(), p.begin() + mu);
        std::reverse(half.begin(), half.end());
    }
    const LeafRange r = use_array ? index.array(d).interval(index.heavy(d), half)
                                  : spell(index.tree(d), index.heavy(d), half);
    std::vector<Pos> out;
    const auto& leaves = index.tree(d).leaves();
    for (auto t = r.first; t < r.second; ++t) {
        const Pos s = leaves[static_cast<std::size_t>(t)].start;
        out.push_back(forward ? s : index.length() + 1 - s);
    }
    return out;
}

QueryResult finish(const Index& index, std::span<const Letter> p, Pos mu,
                   const std::vector<Pos>& anchors, VerifySource source) {
    QueryResult res;
    std::set<Pos> starts;
    for (Pos a : anchors) {
        starts.insert(a - mu + 1);
    }
    for (Pos s : starts) {
        Verdict v = verify_at(index, p, s, s + mu - 1, source);
        res.examined.push_back({s, v});
        if (v.valid) {
            res.positions.push_back(s);
        }
    }
    res.stats.candidates = anchors.size();
    res.stats.verified = starts.size();
    res.stats.rejected = starts.size() - res.positions.size();
    return res;
}

using Runner = QueryResult (*)(const Index&, std::span<const Letter>, Pos, VerifySource);

QueryResult run(const Index& index, std::span<const Letter> p, VerifySource source, Runner body) {
    check_length(index, p);
    if (unknown_letters(index, p)) {
        QueryResult res;
        res.stats.unknown_letter = true;
        return res;
    }
    const Pos mu = leftmost_pattern_minimizer(index.scheme(), p);
    return body(index, p, mu, source);
}

QueryResult grid_body(const Index& index, std::span<const Letter> p, Pos mu, VerifySource source) {
    Text right(p.begin() + (mu - 1), p.end());
    Text left(p.begin(), p.begin() + mu);
    std::reverse(left.begin(), left.end());
    const LeafRange xr = spell(index.tree(Direction::forward), index.heavy(Direction::forward), right);
    const LeafRange yr = spell(index.tree(Direction::backward), index.heavy(Direction::backward), left);
    std::vector<Pos> anchors;
    for (const GridPoint& g : index.grid().range_report(xr, yr)) {
        anchors.push_back(g.anchor);
    }
    QueryResult res = finish(index, p, mu, anchors, source);
    res.stats.points = anchors.size();
    return res;
}

QueryResult verify_body(const Index& index, std::span<const Letter> p, Pos mu, VerifySource source) {
    return finish(index, p, mu, tree_anchors(index, p, mu, false), source);
}

QueryResult array_body(const Index& index, std::span<const Letter> p, Pos mu, VerifySource source) {
    return finish(index, p, mu, tree_anchors(index, p, mu, true), source);
}

}  // namespace

Verdict verify_candidate(const Index& index, std::span<const Letter> pattern, Pos start,
                         VerifySource source) {
    check_length(index, pattern);
    if (unknown_letters(index, pattern)) {
        return {false, kNegInf, true};
    }
    const Pos mu = leftmost_pattern_minimizer(index.scheme(), pattern);
    return verify_at(index, pattern, start, start + mu - 1, source);
}

QueryResult query_grid(const Index& index, std::span<const Letter> pattern, VerifySource source) {
    if (!index.has_grid()) {
        throw QueryError("index was built without a grid");
    }
    return run(index, pattern, source, grid_body);
}

QueryResult query_verify(const Index& index, std::span<const Letter> pattern, VerifySource source) {
    return run(index, pattern, source, verify_body);
}

QueryResult query_array(const Index& index, std::span<const Letter> pattern, VerifySource source) {
    return run(index, pattern, source, array_body);
}

QueryResult query(const Index& index, std::span<const Letter> pattern, QueryMode mode,
                  VerifySource source) {
    switch (mode) {
        case QueryMode::grid:
            return query_grid(index, pattern, source);
        case QueryMode::verify:
            return query_verify(index, pattern, source);
        case QueryMode::array:
            return query_array(index, pattern, source);
    }
    throw std::logic_error("unknown query mode");
}

QueryResult query(const Index& index, std::string_view pattern, QueryMode mode,
                  VerifySource source) {
    const auto encoded = index.alphabet().encode(pattern);
    if (!encoded) {
        QueryResult res;
        res.stats.unknown_letter = true;
        return res;
    }
    return query(index, std::span<const Letter>(*encoded), mode, source);
}

}  // namespace wsi
