// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "wsi/generate.hpp"
#include "wsi/query.hpp"

using namespace wsi;
using wsi::testing::example1;
using wsi::testing::txt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

// Counters shared by every build in the run.
struct BuildWatch {
    std::size_t builds = 0;
    std::size_t live_violations = 0;
    double worst_live_ratio = 0;
    std::size_t diff_lists = 0;
    std::size_t diff_violations = 0;

    void observe(const Index& idx, const BuildReport& rep) {
        ++builds;
        const auto n = static_cast<double>(idx.length());
        for (const TreeBuildStats* s : {&rep.forward, &rep.backward}) {
            if (s->peak_live_path_nodes > static_cast<std::size_t>(idx.length()) + 1) {
                ++live_violations;
            }
            worst_live_ratio = std::max(worst_live_ratio,
                                        static_cast<double>(s->peak_live_path_nodes) / (n + 1));
        }
        const auto bound = static_cast<std::size_t>(idx.threshold().max_mismatches());
        for (Direction d : {Direction::forward, Direction::backward}) {
            for (const HeavyHandle& leaf : idx.tree(d).leaves()) {
                ++diff_lists;
                diff_violations += leaf.diffs.size() > bound;
            }
            for (const TreeNode& v : idx.tree(d).nodes()) {
                ++diff_lists;
                diff_violations += v.edge_diffs.size() > bound;
            }
        }
    }
};

BuildWatch watch;

Index watched_build(const WeightedString& x, const BuildConfig& c) {
    BuildReport rep;
    Index idx = Index::build(x, c, &rep);
    if (c.path == BuildPath::space_efficient) {
        watch.observe(idx, rep);
    }
    return idx;
}

BuildConfig example_config() {
    BuildConfig c;
    c.z = 4;
    c.ell = 3;
    c.k = 2;
    c.order = KmerOrder::lexicographic;
    return c;
}

std::string fmt(const char* f, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome ac1() {
    Outcome o;
    WeightedString x = example1();
    const double aba = std::exp(occurrence_probability(x, txt(x, "ABA"), 3));
    if (std::abs(aba - 3.0 / 40) > 1e-12) {
        o.fail("P(ABA at 3) = " + fmt("%.15g", aba));
    }
    Threshold t(4);
    if (!is_valid(x, txt(x, "AAAA"), 1, t) || is_valid(x, txt(x, "AABB"), 1, t) ||
        is_valid(x, txt(x, "ABAB"), 1, t)) {
        o.fail("validity verdicts for AAAA/AABB/ABAB");
    }
    if (count(build_estimation(x, t), txt(x, "AB"), 1) != 2) {
        o.fail("Count(AB, 1) != 2");
    }
    const std::vector<Text> s = {txt(x, "AAAAAA"), txt(x, "AAAAAB"), txt(x, "ABAABB"),
                                 txt(x, "ABBBBB")};
    const std::vector<PropertyArray> pi = {
        {2, 2, 3, 4, 5, 6}, {4, 4, 5, 6, 6, 6}, {4, 4, 5, 6, 6, 6}, {2, 2, 3, 3, 5, 6}};
    EstimationFamily table(t, 6, s, pi);
    if (occ_with_property(table.string(2), table.property(2), txt(x, "AB")) != std::vector<Pos>{1, 4}) {
        o.fail("Occ_pi3(AB, S3) != {1, 4}");
    }
    MinimizerScheme scheme(4, 2, KmerOrder::lexicographic, kDefaultSeed, 2);
    if (minimizer_set_plain(scheme, txt(x, "ABAABB")) != std::vector<Pos>{3}) {
        o.fail("minimizers of ABAABB != {3}");
    }
    if (o.pass) {
        o.detail = "P(ABA@3)=" + fmt("%.15g", aba) + ", verdicts, Count, Occ, minimizers match";
    }
    return o;
}

Outcome ac2() {
    Outcome o;
    WeightedString x = example1();
    for (bool retain : {false, true}) {
        BuildConfig c = example_config();
        c.retain_x = retain;
        Index idx = watched_build(x, c);
        for (QueryMode mode : {QueryMode::grid, QueryMode::verify, QueryMode::array}) {
            if (query(idx, txt(x, "AAAA"), mode).positions != std::vector<Pos>{1} ||
                !query(idx, txt(x, "BAAB"), mode).positions.empty() ||
                !query(idx, txt(x, "BABA"), mode).positions.empty()) {
                o.fail("wrong answer in mode " + std::to_string(static_cast<int>(mode)));
            }
        }
        if (retain) {
            QueryResult r = query_verify(idx, txt(x, "BAAB"));
            if (r.examined.size() != 2) {
                o.fail("BAAB examined " + std::to_string(r.examined.size()) + " candidates");
            } else {
                const double p0 = std::exp(r.examined[0].verdict.log_prob);
                const double p1 = std::exp(r.examined[1].verdict.log_prob);
                if (std::abs(p0 - 3.0 / 20) > 1e-12 || std::abs(p1 - 3.0 / 40) > 1e-12) {
                    o.fail("candidate probabilities " + fmt("%g", p0) + ", " + fmt("%g", p1));
                }
                o.detail = "BAAB candidates at " + std::to_string(r.examined[0].start) + "," +
                           std::to_string(r.examined[1].start) + " with p=" + fmt("%g", p0) +
                           "," + fmt("%g", p1);
            }
        }
    }
    return o;
}

Outcome ac3() {
    Outcome o;
    std::mt19937_64 rng(3003);
    std::size_t trials = 0;
    std::size_t occurrences = 0;
    const Pos ells[] = {4, 8, 16};
    int instance = 0;
    while (trials < 10000) {
        ++instance;
        const std::size_t sigma = instance % 2 ? 2 : 4;
        const Pos ell = ells[rng() % 3];
        const Pos n = std::max<Pos>(ell, 8 + static_cast<Pos>(rng() % 193));
        WeightedString x = wsi::testing::random_weighted(rng, n, sigma);
        BuildConfig c;
        c.z = instance % 3 ? static_cast<double>(2 + rng() % 15)
                           : 2 + 14 * std::uniform_real_distribution<double>(0, 1)(rng);
        c.ell = ell;
        c.order = instance % 4 ? KmerOrder::fingerprint : KmerOrder::lexicographic;
        c.seed = rng();
        c.path = instance % 10 == 0 ? BuildPath::naive : BuildPath::space_efficient;
        c.retain_x = true;
        Index idx = watched_build(x, c);
        for (int q = 0; q < 20; ++q, ++trials) {
            const Pos hi = std::min(n, 4 * ell);
            const Pos m = ell + static_cast<Pos>(rng() % static_cast<std::uint64_t>(hi - ell + 1));
            Text p = q % 2 ? wsi::testing::uniform_pattern(rng, sigma, m)
                           : wsi::testing::sample_pattern(rng, x, m);
            const auto want = wsi::testing::oracle_occurrences(x, p, c.z);
            occurrences += want.size();
            for (QueryMode mode : {QueryMode::grid, QueryMode::verify, QueryMode::array}) {
                for (VerifySource src : {VerifySource::retained_x, VerifySource::records}) {
                    if (query(idx, p, mode, src).positions != want) {
                        o.fail("mismatch on instance " + std::to_string(instance) + " mode " +
                               std::to_string(static_cast<int>(mode)));
                    }
                }
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(trials) + " trials on " + std::to_string(instance) +
                   " instances, 3 paths x 2 verifiers, " + std::to_string(occurrences) +
                   " occurrences";
    }
    return o;
}

Outcome ac4() {
    Outcome o;
    std::mt19937_64 rng(4004);
    std::size_t checks = 0;
    const int instances = 200;
    for (int rep = 0; rep < instances; ++rep) {
        const std::size_t sigma = 2 + static_cast<std::size_t>(rep % 3);
        const Pos n = 6 + static_cast<Pos>(rng() % 20);
        WeightedString x = wsi::testing::random_weighted(rng, n, sigma);
        const double z = rep % 2 ? static_cast<double>(1 + rng() % 8)
                                 : 1 + 7 * std::uniform_real_distribution<double>(0, 1)(rng);
        Threshold t(z);
        EstimationFamily f = build_estimation(x, t);
        for (std::size_t m = 1; m <= 6 && static_cast<Pos>(m) <= n; ++m) {
            for (const Text& p : wsi::testing::all_strings(sigma, m)) {
                for (Pos i = 1; i + static_cast<Pos>(m) - 1 <= n; ++i) {
                    ++checks;
                    if (count(f, p, i) != wsi::testing::oracle_count(x, p, i, z)) {
                        o.fail("instance " + std::to_string(rep) + " at i=" + std::to_string(i));
                    }
                }
            }
        }
    }
    if (o.pass) {
        o.detail = std::to_string(instances) + " instances, " + std::to_string(checks) +
                   " (pattern, position) checks";
    }
    return o;
}

std::string tree_bytes(const MinimizerFactorTree& t) {
    std::ostringstream out;
    write_tree(out, t);
    return out.str();
}

Outcome ac5() {
    Outcome o;
    std::mt19937_64 rng(5005);
    const int instances = 120;
    std::size_t leaves = 0;
    for (int rep = 0; rep < instances; ++rep) {
        const std::size_t sigma = rep % 3 == 0 ? 4 : 2;
        const Pos n = 4 + static_cast<Pos>(rng() % 57);
        WeightedString x = wsi::testing::random_weighted(rng, n, sigma);
        BuildConfig c;
        c.z = static_cast<double>(2 + rng() % 7);
        c.ell = std::min<Pos>(n, 2 + static_cast<Pos>(rng() % 7));
        c.k = 1 + static_cast<Pos>(rng() % static_cast<std::uint64_t>(std::min<Pos>(c.ell, 3)));
        c.order = rep % 2 ? KmerOrder::fingerprint : KmerOrder::lexicographic;
        c.seed = rng();
        c.path = BuildPath::naive;
        Index naive = Index::build(x, c);
        c.path = BuildPath::space_efficient;
        Index se = watched_build(x, c);
        for (Direction d : {Direction::forward, Direction::backward}) {
            if (!(naive.tree(d) == se.tree(d)) || tree_bytes(naive.tree(d)) != tree_bytes(se.tree(d))) {
                o.fail("trees differ on instance " + std::to_string(rep));
            }
            leaves += se.tree(d).leaf_count();
        }
        if (naive.serialize() != se.serialize()) {
            o.fail("index files differ on instance " + std::to_string(rep));
        }
    }
    if (o.pass) {
        o.detail = std::to_string(instances) + " instances, " + std::to_string(leaves) +
                   " leaves, byte-identical";
    }
    return o;
}

Outcome ac6() {
    Outcome o;
    // A few larger builds on top of everything observed so far.
    for (std::uint64_t seed : {1, 2, 3}) {
        GenConfig g;
        g.kind = seed == 2 ? GenKind::snp_like : GenKind::uniform;
        g.n = 3000;
        g.sigma = 4;
        g.delta = 30;
        g.seed = seed;
        BuildConfig c;
        c.z = 16;
        c.ell = 16;
        watched_build(generate(g), c);
    }
    if (watch.live_violations) {
        o.fail(std::to_string(watch.live_violations) + " builds exceeded n+1");
    } else {
        o.detail = std::to_string(watch.builds) + " builds, worst peak/(n+1) = " +
                   fmt("%.3f", watch.worst_live_ratio);
    }
    return o;
}

// Walks every valid factor by extension; solidity is closed under prefixes.
void walk_valid(const WeightedString& x, const HeavyContext& h, const Threshold& t, Pos start,
                Text& cur, double lp, int mismatches, std::size_t& factors, int& worst) {
    const Pos next = start + static_cast<Pos>(cur.size());
    if (next > x.length()) {
        return;
    }
    for (Letter a = 0; a < x.sigma(); ++a) {
        const double v = lp + x.log_prob(next, a);
        if (!t.accepts(v)) {
            continue;
        }
        const int mm = mismatches + (a != h.heavy(next));
        ++factors;
        worst = std::max(worst, mm);
        cur.push_back(a);
        walk_valid(x, h, t, start, cur, v, mm, factors, worst);
        cur.pop_back();
    }
}

Outcome ac7() {
    Outcome o;
    std::mt19937_64 rng(7007);
    std::size_t factors = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t sigma = 2 + static_cast<std::size_t>(rep % 3);
        const Pos n = 1 + static_cast<Pos>(rng() % 20);
        WeightedString x = wsi::testing::random_weighted(rng, n, sigma);
        const double z = 1 + static_cast<double>(rng() % 32);
        Threshold t(z);
        HeavyContext h(x);
        for (Pos i = 1; i <= n; ++i) {
            Text cur;
            int worst = 0;
            walk_valid(x, h, t, i, cur, 0.0, 0, factors, worst);
            if (worst > t.max_mismatches()) {
                o.fail("factor with " + std::to_string(worst) + " mismatches at z=" + fmt("%g", z));
            }
        }
    }
    if (watch.diff_violations) {
        o.fail(std::to_string(watch.diff_violations) + " diff lists over the bound");
    }
    if (o.pass) {
        o.detail = std::to_string(factors) + " valid factors enumerated, " +
                   std::to_string(watch.diff_lists) + " diff lists within bound";
    }
    return o;
}

Outcome ac8() {
    Outcome o;
    std::mt19937_64 rng(8008);
    int grids = 0;
    std::size_t rects = 0;
    auto check_grid = [&](const std::vector<GridPoint>& pts, std::int32_t xs, std::int32_t ys) {
        Grid wav(pts, 0);
        Grid scan(pts, SIZE_MAX);
        ++grids;
        for (int q = 0; q < 1000; ++q, ++rects) {
            auto a = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(xs + 1));
            auto b = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(xs + 1));
            auto c = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(ys + 1));
            auto d = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(ys + 1));
            LeafRange xr{std::min(a, b), std::max(a, b)};
            LeafRange yr{std::min(c, d), std::max(c, d)};
            if (wav.range_report(xr, yr) != scan.scan(xr, yr)) {
                o.fail("grid " + std::to_string(grids) + " disagrees");
                return;
            }
        }
    };
    // Random point sets.
    for (int rep = 0; rep < 40; ++rep) {
        const auto xs = static_cast<std::int32_t>(1 + rng() % 400);
        const auto ys = static_cast<std::int32_t>(1 + rng() % 400);
        std::set<std::pair<std::int32_t, std::int32_t>> seen;
        std::vector<GridPoint> pts;
        const std::size_t want = std::min<std::size_t>(1 + rng() % 3000,
                                                       static_cast<std::size_t>(xs) * ys / 2 + 1);
        while (pts.size() < want) {
            const auto px = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(xs));
            const auto py = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(ys));
            if (seen.insert({px, py}).second) {
                pts.push_back({px, py, 1});
            }
        }
        check_grid(pts, xs, ys);
    }
    // Grids of real indexes.
    for (int rep = 0; rep < 12; ++rep) {
        WeightedString x = wsi::testing::random_weighted(rng, 300 + static_cast<Pos>(rng() % 300), 4);
        BuildConfig c;
        c.z = 8;
        c.ell = 8;
        c.seed = rng();
        Index idx = watched_build(x, c);
        check_grid(idx.grid().points(), static_cast<std::int32_t>(idx.tree(Direction::forward).leaf_count()),
                   static_cast<std::int32_t>(idx.tree(Direction::backward).leaf_count()));
    }
    if (o.pass) {
        o.detail = std::to_string(grids) + " grids, " + std::to_string(rects) + " rectangles";
    }
    return o;
}

Outcome ac9() {
    Outcome o;
    std::mt19937_64 rng(9009);
    const Pos n = 100000;
    Text s(static_cast<std::size_t>(n));
    for (auto& c : s) {
        c = static_cast<Letter>(rng() % 4);
    }
    MinimizerScheme scheme(64, 5, KmerOrder::fingerprint, 99, 4);
    const auto mins = minimizer_set_plain(scheme, s);
    const double density = static_cast<double>(mins.size()) / static_cast<double>(n);
    const double lo = 1.0 / 64;
    const double hi = 4.0 / 64;
    o.detail = "density " + fmt("%.5f", density) + " in [" + fmt("%.5f", lo) + ", " +
               fmt("%.5f", hi) + "]";
    if (density < lo || density > hi) {
        o.fail(o.detail);
    }
    return o;
}

Outcome ac10() {
    Outcome o;
    GenConfig g;
    // Few enough uncertain positions that windows of 128 are still solid.
    g.kind = GenKind::snp_like;
    g.n = 10000;
    g.sigma = 4;
    g.delta = 5;
    g.seed = 10;
    const WeightedString x = generate(g);
    auto bytes = [&](double z, Pos ell) {
        BuildConfig c;
        c.z = z;
        c.ell = ell;
        c.seed = 10;
        return watched_build(x, c).serialize().size();
    };
    const std::size_t base = bytes(16, 10001);  // no window fits: header and heavy string only
    std::string by_ell;
    std::size_t prev = SIZE_MAX;
    for (Pos ell : {16, 32, 64, 128}) {
        const std::size_t b = bytes(16, ell);
        by_ell += (by_ell.empty() ? "" : " ") + std::to_string(b);
        if (b > prev) {
            o.fail("size grows from ell=" + std::to_string(ell / 2) + " to ell=" + std::to_string(ell));
        }
        prev = b;
    }
    std::string by_z;
    prev = 0;
    for (double z : {2.0, 4.0, 8.0, 16.0}) {
        const std::size_t b = bytes(z, 64);
        by_z += (by_z.empty() ? "" : " ") + std::to_string(b);
        if (b < prev) {
            o.fail("size shrinks at z=" + fmt("%g", z));
        }
        prev = b;
    }
    if (prev <= base) {
        o.fail("the trees are empty at z=16, ell=64");
    }
    const std::string d = "bytes by ell {16,32,64,128}: " + by_ell + "; by z {2,4,8,16}: " + by_z;
    o.detail = o.pass ? d : o.detail + " (" + d + ")";
    return o;
}

Outcome ac11() {
    Outcome o;
    std::mt19937_64 rng(1111);
    std::size_t queries = 0;
    for (int rep = 0; rep < 12; ++rep) {
        GenConfig g;
        g.kind = static_cast<GenKind>(rep % 3);
        g.n = 500 + static_cast<Pos>(rng() % 1500);
        g.sigma = rep % 2 ? 4 : 2;
        g.delta = 25;
        g.seed = rng();
        const WeightedString x = generate(g);
        BuildConfig c;
        c.z = static_cast<double>(2 + rng() % 15);
        c.ell = 8 + static_cast<Pos>(rng() % 9);
        c.seed = rng();
        c.retain_x = rep % 2 == 0;
        c.path = rep % 4 == 1 ? BuildPath::naive : BuildPath::space_efficient;
        const Index a = watched_build(x, c);
        const std::string bytes = a.serialize();
        if (watched_build(x, c).serialize() != bytes) {
            o.fail("rebuild differs on instance " + std::to_string(rep));
        }
        std::istringstream in(bytes);
        const Index b = Index::load(in);
        if (b.serialize() != bytes) {
            o.fail("reload re-serializes differently on instance " + std::to_string(rep));
        }
        for (int q = 0; q < 50; ++q, ++queries) {
            const Pos m = c.ell + static_cast<Pos>(rng() % static_cast<std::uint64_t>(c.ell));
            Text p = q % 2 ? wsi::testing::uniform_pattern(rng, x.sigma(), m)
                           : wsi::testing::sample_pattern(rng, x, m);
            for (QueryMode mode : {QueryMode::grid, QueryMode::verify, QueryMode::array}) {
                if (query(a, p, mode).positions != query(b, p, mode).positions) {
                    o.fail("answers change after reload on instance " + std::to_string(rep));
                }
            }
        }
    }
    if (o.pass) {
        o.detail = "12 configs rebuilt and reloaded byte-identically, " + std::to_string(queries) +
                   " patterns x 3 modes unchanged";
    }
    return o;
}

}  // namespace

int main() {
    // AC6 and AC7 read counters collected by the builds of the other criteria,
    // so they run last.
    const std::vector<std::pair<int, std::function<Outcome()>>> order = {
        {1, ac1}, {2, ac2}, {3, ac3}, {4, ac4}, {5, ac5}, {8, ac8},
        {9, ac9}, {10, ac10}, {11, ac11}, {6, ac6}, {7, ac7}};
    std::vector<std::pair<int, std::string>> lines;
    bool all = true;
    for (const auto& [id, run] : order) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && r.pass;
        lines.push_back({id, "AC" + std::to_string(id) + " " + (r.pass ? "PASS" : "FAIL") + " " +
                                 r.detail + " [" + fmt("%.1f", secs) + "s]"});
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [id, line] : lines) {
        std::printf("%s\n", line.c_str());
    }
    return all ? 0 : 1;
}
