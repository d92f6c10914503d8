#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wsi/grid.hpp"
#include "wsi/tree_build.hpp"

namespace wsi {

enum class BuildPath : std::uint8_t { naive, space_efficient };

struct BuildConfig {
    double z = 4;
    Pos ell = 16;
    Pos k = 0;  // 0 picks MinimizerScheme::default_k
    KmerOrder order = KmerOrder::fingerprint;
    std::uint64_t seed = kDefaultSeed;
    BuildPath path = BuildPath::space_efficient;
    bool retain_x = false;
    bool with_grid = true;
};

struct BuildReport {
    // floor(log2 z) > ell: the mismatch bound no longer fits inside one window.
    bool fallback = false;
    TreeBuildStats forward;
    TreeBuildStats backward;
    // Letters of the materialized estimation; zero on the space-efficient path.
    std::size_t family_letters = 0;
};

// A mismatch seen in some leaf sampled at an anchor, with its log-probability.
struct RecordEntry {
    Pos pos;
    Letter letter;
    double log_prob;
    bool operator==(const RecordEntry&) const = default;
};

class SchemeMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kIndexVersion = 1;

class Index {
public:
    static Index build(const WeightedString& x, const BuildConfig& config,
                       BuildReport* report = nullptr);

    void save(std::ostream& out) const;
    std::string serialize() const;
    // Throws io::FormatError on malformed input.
    static Index load(std::istream& in);

    // Throws SchemeMismatch unless the index was built with this scheme.
    void require_scheme(const MinimizerScheme& expected) const;

    Pos length() const { return heavy_fwd_.length(); }
    const Alphabet& alphabet() const { return alphabet_; }
    const Threshold& threshold() const { return threshold_; }
    const MinimizerScheme& scheme() const { return scheme_; }
    bool fallback() const { return fallback_; }

    const HeavyContext& heavy(Direction d) const {
        return d == Direction::forward ? heavy_fwd_ : heavy_bwd_;
    }
    const MinimizerFactorTree& tree(Direction d) const {
        return d == Direction::forward ? tree_fwd_ : tree_bwd_;
    }
    const ArrayIndex& array(Direction d) const {
        return d == Direction::forward ? array_fwd_ : array_bwd_;
    }

    bool has_grid() const { return has_grid_; }
    const Grid& grid() const { return grid_; }
    bool has_x() const { return x_.has_value(); }
    const WeightedString& x() const { return x_.value(); }

    // Mismatch records of one anchor, sorted by (pos, letter); empty if unknown.
    std::span<const RecordEntry> records(Pos anchor) const;
    std::size_t anchor_count() const { return record_anchors_.size(); }

private:
    Index();
    void finish_derived();

    Alphabet alphabet_;
    Threshold threshold_;
    MinimizerScheme scheme_;
    bool fallback_ = false;
    std::vector<double> heavy_logs_;
    HeavyContext heavy_fwd_;
    HeavyContext heavy_bwd_;
    std::optional<WeightedString> x_;
    MinimizerFactorTree tree_fwd_;
    MinimizerFactorTree tree_bwd_;
    ArrayIndex array_fwd_;
    ArrayIndex array_bwd_;
    std::vector<Pos> record_anchors_;
    std::vector<std::uint32_t> record_offsets_;
    std::vector<RecordEntry> record_entries_;
    bool has_grid_ = false;
    Grid grid_;
};

}  // namespace wsi
