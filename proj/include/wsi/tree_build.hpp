#pragma once

#include <cstddef>
#include <vector>

#include "wsi/estimation.hpp"
#include "wsi/factor_tree.hpp"
#include "wsi/minimizers.hpp"

namespace wsi {

// One reading direction of the input. The backward orientation works on X^r,
// so every position inside it is n + 1 - p of the input.
struct Orientation {
    Direction direction = Direction::forward;
    WeightedString x;
    HeavyContext h;
    HeavyLce lce;

    static Orientation make(const WeightedString& input, Direction d);
};

struct TreeBuildStats {
    std::size_t peak_live_path_nodes = 0;
    std::size_t nodes_created = 0;
    std::size_t marks = 0;
    std::size_t family_letters = 0;
};

// A sampled node of the extended solid factor tree: the string starting at
// the anchor, H[anchor..n] with diffs applied. length is n - start + 1.
using Mark = HeavyHandle;

// The minimizer-marked nodes collected by the depth-first construction.
struct ExtendedTree {
    Direction direction = Direction::forward;
    std::vector<Mark> marks;  // distinct, ordered by (start, diffs)
    TreeBuildStats stats;
};

// The string of a mark cut back to its longest solid prefix; every diff stays.
HeavyHandle trim_mark(const Orientation& o, const Threshold& t, const Mark& mark);

// Depth-first traversal of the extended solid factor tree of o.x, leftwards
// from the root at position n + 1. Keeps only the current root path live.
ExtendedTree build_extended_tree(const Orientation& o, const Threshold& t,
                                 const MinimizerScheme& scheme);

MinimizerFactorTree reverse_and_compact(const ExtendedTree& ext, const Orientation& o,
                                        const Threshold& t);

MinimizerFactorTree build_tree_space_efficient(const Orientation& o, const Threshold& t,
                                               const MinimizerScheme& scheme,
                                               TreeBuildStats* stats = nullptr);

struct TreePair {
    MinimizerFactorTree forward;
    MinimizerFactorTree backward;
    TreeBuildStats stats;
};

// Builds both trees from a materialized estimation.
TreePair build_trees_naive(const WeightedString& x, const EstimationFamily& family,
                           const MinimizerScheme& scheme);

// Node count of the full (unsampled) extended solid factor tree, read off the
// estimation: one root plus one node per position and distinct diff set.
std::size_t count_extended_nodes_naive(const WeightedString& x, const EstimationFamily& family);

}  // namespace wsi
