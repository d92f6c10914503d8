#include "wsi/index.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <sstream>

#include "wsi/binary_io.hpp"

namespace wsi {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'I', 'X'};

enum Flags : std::uint8_t {
    kRetainX = 1,
    kHasGrid = 2,
    kFallback = 4,
};

Text reversed_text(const Text& t) { return Text(t.rbegin(), t.rend()); }

bool joinable(const HeavyContext& hf, const HeavyContext& hb, Pos n,
              const std::map<std::pair<Pos, Letter>, double>& logs, const Threshold& t,
              const HeavyHandle& f, const HeavyHandle& b) {
    if (letter_at(hf, f, 0) != letter_at(hb, b, 0)) {
        return false;
    }
    std::vector<Mismatch> joined = f.diffs;
    for (const Mismatch& m : b.diffs) {
        if (m.pos != b.start) {
            joined.push_back({n + 1 - m.pos, m.letter});
        }
    }
    Pos lo = f.start;
    Pos hi = f.start;
    double lp = 0;
    for (const Mismatch& m : joined) {
        lo = std::min(lo, m.pos);
        hi = std::max(hi, m.pos);
        lp += logs.at({m.pos, m.letter}) - hf.heavy_log(m.pos);
    }
    lp += hf.range_log(lo, hi);
    return t.accepts(lp);
}

void check_letters(const MinimizerFactorTree& tree, std::size_t sigma) {
    for (const HeavyHandle& leaf : tree.leaves()) {
        for (const Mismatch& m : leaf.diffs) {
            if (m.letter >= sigma) {
                throw io::FormatError("diff letter outside the alphabet");
            }
        }
    }
}

}  // namespace

Index::Index()
    : threshold_(1.0), scheme_(1, 1, KmerOrder::lexicographic, kDefaultSeed, 1) {}

Index Index::build(const WeightedString& x, const BuildConfig& config, BuildReport* report) {
    Index idx;
    const Threshold t(config.z);
    const Pos k = config.k > 0 ? config.k : MinimizerScheme::default_k(config.ell, x.sigma());
    const MinimizerScheme scheme(config.ell, k, config.order, config.seed, x.sigma());
    idx.alphabet_ = x.alphabet();
    idx.threshold_ = t;
    idx.scheme_ = scheme;
    idx.fallback_ = t.max_mismatches() > config.ell;

    const Pos n = x.length();
    const HeavyContext h(x);
    idx.heavy_logs_.resize(static_cast<std::size_t>(n));
    for (Pos i = 1; i <= n; ++i) {
        idx.heavy_logs_[static_cast<std::size_t>(i - 1)] = x.log_prob(i, h.heavy(i));
    }
    idx.heavy_fwd_ = HeavyContext::from_parts(h.heavy_string(), idx.heavy_logs_);
    idx.heavy_bwd_ = HeavyContext::from_parts(
        reversed_text(h.heavy_string()),
        std::vector<double>(idx.heavy_logs_.rbegin(), idx.heavy_logs_.rend()));

    BuildReport local;
    if (config.path == BuildPath::naive) {
        EstimationFamily family = build_estimation(x, t);
        TreePair pair = build_trees_naive(x, family, scheme);
        idx.tree_fwd_ = std::move(pair.forward);
        idx.tree_bwd_ = std::move(pair.backward);
        local.family_letters = pair.stats.family_letters;
    } else {
        const Orientation fwd = Orientation::make(x, Direction::forward);
        idx.tree_fwd_ = build_tree_space_efficient(fwd, t, scheme, &local.forward);
        const Orientation bwd = Orientation::make(x, Direction::backward);
        idx.tree_bwd_ = build_tree_space_efficient(bwd, t, scheme, &local.backward);
    }
    local.fallback = idx.fallback_;

    // Records: every diff of every leaf, grouped by the leaf's anchor.
    std::map<Pos, std::vector<RecordEntry>> by_anchor;
    std::map<std::pair<Pos, Letter>, double> logs;
    for (const HeavyHandle& leaf : idx.tree_fwd_.leaves()) {
        auto& rec = by_anchor[leaf.start];
        for (const Mismatch& m : leaf.diffs) {
            rec.push_back({m.pos, m.letter, x.log_prob(m.pos, m.letter)});
        }
    }
    for (const HeavyHandle& leaf : idx.tree_bwd_.leaves()) {
        auto& rec = by_anchor[n + 1 - leaf.start];
        for (const Mismatch& m : leaf.diffs) {
            const Pos p = n + 1 - m.pos;
            rec.push_back({p, m.letter, x.log_prob(p, m.letter)});
        }
    }
    for (auto& [anchor, rec] : by_anchor) {
        std::sort(rec.begin(), rec.end(), [](const RecordEntry& a, const RecordEntry& b) {
            return a.pos != b.pos ? a.pos < b.pos : a.letter < b.letter;
        });
        rec.erase(std::unique(rec.begin(), rec.end()), rec.end());
        idx.record_anchors_.push_back(anchor);
        idx.record_offsets_.push_back(static_cast<std::uint32_t>(idx.record_entries_.size()));
        for (const RecordEntry& e : rec) {
            logs[{e.pos, e.letter}] = e.log_prob;
            idx.record_entries_.push_back(e);
        }
    }
    idx.record_offsets_.push_back(static_cast<std::uint32_t>(idx.record_entries_.size()));

    idx.has_grid_ = config.with_grid;
    if (config.with_grid) {
        const HeavyContext& hf = idx.heavy_fwd_;
        const HeavyContext& hb = idx.heavy_bwd_;
        idx.grid_ = build_grid(idx.tree_fwd_, idx.tree_bwd_, n,
                               [&](const HeavyHandle& f, const HeavyHandle& b) {
                                   return joinable(hf, hb, n, logs, t, f, b);
                               });
    }
    if (config.retain_x) {
        idx.x_ = x;
    }
    idx.finish_derived();
    if (report) {
        *report = local;
    }
    return idx;
}

void Index::finish_derived() {
    array_fwd_ = to_array(tree_fwd_);
    array_bwd_ = to_array(tree_bwd_);
}

std::span<const RecordEntry> Index::records(Pos anchor) const {
    auto it = std::lower_bound(record_anchors_.begin(), record_anchors_.end(), anchor);
    if (it == record_anchors_.end() || *it != anchor) {
        return {};
    }
    const auto r = static_cast<std::size_t>(it - record_anchors_.begin());
    return std::span<const RecordEntry>(record_entries_)
        .subspan(record_offsets_[r], record_offsets_[r + 1] - record_offsets_[r]);
}

void Index::require_scheme(const MinimizerScheme& expected) const {
    if (!(expected == scheme_)) {
        std::ostringstream msg;
        msg << "index scheme (ell=" << scheme_.ell() << ", k=" << scheme_.k()
            << ", order=" << static_cast<int>(scheme_.order()) << ", seed=" << scheme_.seed()
            << ") differs from the requested one (ell=" << expected.ell()
            << ", k=" << expected.k() << ", order=" << static_cast<int>(expected.order())
            << ", seed=" << expected.seed() << ")";
        throw SchemeMismatch(msg.str());
    }
}

void Index::save(std::ostream& out) const {
    out.write(kMagic, 4);
    io::put<std::uint32_t>(out, kIndexVersion);
    io::put<std::int32_t>(out, length());
    io::put<std::uint32_t>(out, static_cast<std::uint32_t>(alphabet_.size()));
    io::put<double>(out, threshold_.z());
    io::put<std::int32_t>(out, scheme_.ell());
    io::put<std::int32_t>(out, scheme_.k());
    io::put<std::uint8_t>(out, static_cast<std::uint8_t>(scheme_.order()));
    io::put<std::uint64_t>(out, scheme_.seed());
    std::uint8_t flags = 0;
    flags |= has_x() ? kRetainX : 0;
    flags |= has_grid_ ? kHasGrid : 0;
    flags |= fallback_ ? kFallback : 0;
    io::put<std::uint8_t>(out, flags);

    for (const std::string& s : alphabet_.letters()) {
        io::put_string(out, s);
    }
    const Text& heavy = heavy_fwd_.heavy_string();
    out.write(reinterpret_cast<const char*>(heavy.data()), static_cast<std::streamsize>(heavy.size()));
    for (double v : heavy_logs_) {
        io::put<double>(out, v);
    }
    if (has_x()) {
        for (double v : x_->raw_probs()) {
            io::put<double>(out, v);
        }
    }
    write_tree(out, tree_fwd_);
    write_tree(out, tree_bwd_);

    io::put<std::uint64_t>(out, record_anchors_.size());
    for (std::size_t r = 0; r < record_anchors_.size(); ++r) {
        io::put<std::int32_t>(out, record_anchors_[r]);
        io::put<std::uint32_t>(out, record_offsets_[r + 1] - record_offsets_[r]);
        for (std::uint32_t e = record_offsets_[r]; e < record_offsets_[r + 1]; ++e) {
            io::put<std::int32_t>(out, record_entries_[e].pos);
            io::put<std::uint8_t>(out, record_entries_[e].letter);
            io::put<double>(out, record_entries_[e].log_prob);
        }
    }
    if (has_grid_) {
        write_grid(out, grid_);
    }
}

std::string Index::serialize() const {
    std::ostringstream out;
    save(out);
    return out.str();
}

Index Index::load(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw io::FormatError("not an index file (bad magic)");
    }
    const auto version = io::get<std::uint32_t>(in);
    if (version != kIndexVersion) {
        throw io::FormatError("unsupported index version " + std::to_string(version));
    }
    const auto n = io::get<std::int32_t>(in);
    const auto sigma = io::get<std::uint32_t>(in);
    const auto z = io::get<double>(in);
    const auto ell = io::get<std::int32_t>(in);
    const auto k = io::get<std::int32_t>(in);
    const auto order = io::get<std::uint8_t>(in);
    const auto seed = io::get<std::uint64_t>(in);
    const auto flags = io::get<std::uint8_t>(in);
    if (n < 0 || sigma < 1 || sigma > kMaxSigma || order > 1 || !(z >= 1) || flags > 7) {
        throw io::FormatError("bad index header");
    }

    Index idx;
    try {
        idx.threshold_ = Threshold(z);
        idx.scheme_ = MinimizerScheme(ell, k, static_cast<KmerOrder>(order), seed, sigma);
    } catch (const std::invalid_argument& e) {
        throw io::FormatError(std::string("bad index header: ") + e.what());
    }
    idx.fallback_ = (flags & kFallback) != 0;
    idx.has_grid_ = (flags & kHasGrid) != 0;

    std::vector<std::string> letters;
    for (std::uint32_t a = 0; a < sigma; ++a) {
        letters.push_back(io::get_string(in, 1024));
    }
    try {
        idx.alphabet_ = Alphabet(letters);
    } catch (const std::invalid_argument& e) {
        throw io::FormatError(std::string("bad alphabet: ") + e.what());
    }
    Text heavy(static_cast<std::size_t>(n));
    if (!in.read(reinterpret_cast<char*>(heavy.data()), n)) {
        throw io::FormatError("truncated index data");
    }
    for (Letter c : heavy) {
        if (c >= sigma) {
            throw io::FormatError("heavy letter outside the alphabet");
        }
    }
    idx.heavy_logs_.resize(static_cast<std::size_t>(n));
    for (double& v : idx.heavy_logs_) {
        v = io::get<double>(in);
    }
    idx.heavy_fwd_ = HeavyContext::from_parts(heavy, idx.heavy_logs_);
    idx.heavy_bwd_ = HeavyContext::from_parts(
        reversed_text(heavy), std::vector<double>(idx.heavy_logs_.rbegin(), idx.heavy_logs_.rend()));
    if (flags & kRetainX) {
        std::vector<double> probs(static_cast<std::size_t>(n) * sigma);
        for (double& v : probs) {
            v = io::get<double>(in);
        }
        try {
            idx.x_ = WeightedString(idx.alphabet_, std::move(probs));
        } catch (const std::invalid_argument& e) {
            throw io::FormatError(std::string("bad stored probabilities: ") + e.what());
        }
    }

    idx.tree_fwd_ = read_tree(in);
    idx.tree_bwd_ = read_tree(in);
    if (idx.tree_fwd_.direction() != Direction::forward ||
        idx.tree_bwd_.direction() != Direction::backward) {
        throw io::FormatError("tree directions out of order");
    }
    const int bound = idx.threshold_.max_mismatches();
    for (Direction d : {Direction::forward, Direction::backward}) {
        const std::string err = validate_tree(idx.tree(d), idx.heavy(d), bound);
        if (!err.empty()) {
            throw io::FormatError("corrupt tree: " + err);
        }
        check_letters(idx.tree(d), sigma);
    }

    const auto anchors = io::get_count(in, static_cast<std::uint64_t>(n));
    for (std::uint64_t r = 0; r < anchors; ++r) {
        const auto anchor = io::get<std::int32_t>(in);
        const auto count = io::get<std::uint32_t>(in);
        if (anchor < 1 || anchor > n || (!idx.record_anchors_.empty() && anchor <= idx.record_anchors_.back()) ||
            count > static_cast<std::uint64_t>(n) * sigma) {
            throw io::FormatError("bad record block");
        }
        idx.record_anchors_.push_back(anchor);
        idx.record_offsets_.push_back(static_cast<std::uint32_t>(idx.record_entries_.size()));
        for (std::uint32_t e = 0; e < count; ++e) {
            RecordEntry entry{};
            entry.pos = io::get<std::int32_t>(in);
            entry.letter = io::get<std::uint8_t>(in);
            entry.log_prob = io::get<double>(in);
            if (entry.pos < 1 || entry.pos > n || entry.letter >= sigma) {
                throw io::FormatError("record entry out of range");
            }
            idx.record_entries_.push_back(entry);
        }
    }
    idx.record_offsets_.push_back(static_cast<std::uint32_t>(idx.record_entries_.size()));

    if (idx.has_grid_) {
        idx.grid_ = read_grid(in, idx.tree_fwd_.leaf_count(), idx.tree_bwd_.leaf_count());
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw io::FormatError("trailing bytes after the index");
    }
    idx.finish_derived();
    return idx;
}

}  // namespace wsi
