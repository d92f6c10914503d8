#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wsi/heavy_handle.hpp"

namespace wsi {

enum class Direction : std::uint8_t { forward = 0, backward = 1 };

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Leaf ranks are half-open [lo, hi).
using LeafRange = std::pair<std::int32_t, std::int32_t>;

struct TreeNode {
    NodeId parent = kNoNode;
    NodeId first_child = kNoNode;
    NodeId next_sibling = kNoNode;
    // Edge into this node: H[edge_start .. edge_start+edge_length-1] with
    // edge_diffs applied.
    Pos edge_start = 0;
    Pos edge_length = 0;
    Pos depth = 0;
    std::vector<Mismatch> edge_diffs;
    // Leaves whose string ends here come first in the range.
    std::int32_t leaf_lo = 0;
    std::int32_t leaf_hi = 0;
    std::int32_t own_leaves = 0;

    bool operator==(const TreeNode&) const = default;
};

// Compacted trie over leaf strings. Backward trees live in reversed
// coordinates: position p stands for n + 1 - p of the input, and the heavy
// context passed alongside must be the reversed one.
class MinimizerFactorTree {
public:
    MinimizerFactorTree() = default;
    MinimizerFactorTree(Direction d, std::vector<TreeNode> nodes, std::vector<HeavyHandle> leaves);

    Direction direction() const { return direction_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const std::vector<HeavyHandle>& leaves() const { return leaves_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const { return leaves_.size(); }

    bool operator==(const MinimizerFactorTree&) const = default;

private:
    Direction direction_ = Direction::forward;
    std::vector<TreeNode> nodes_;
    std::vector<HeavyHandle> leaves_;
};

// Intermediate trie produced by the two insertion procedures; children are
// kept in insertion order, which is lexicographic for sorted input.
struct RawTrie {
    struct Node {
        NodeId parent = kNoNode;
        Pos depth = 0;
        std::vector<NodeId> children;
        std::vector<std::int32_t> own;
    };
    std::vector<Node> nodes;  // node 0 is the root
};

// Both take leaves in canonical order and lcp[t] = LCP(leaf t-1, leaf t)
// (lcp[0] ignored). The first keeps the rightmost path on an explicit stack;
// the second climbs parent links from the last inserted leaf.
RawTrie compact_sorted_stack(std::span<const HeavyHandle> leaves, std::span<const Pos> lcp);
RawTrie compact_sorted_walk(std::span<const HeavyHandle> leaves, std::span<const Pos> lcp);

// Renumbers in preorder, assigns leaf ranges and heavy-relative edge labels.
MinimizerFactorTree finalize_tree(Direction d, std::vector<HeavyHandle> leaves, const RawTrie& raw);

// Canonical leaf order: string, proper prefix first, then anchor.
bool canonical_less(const HeavyContext& h, const HeavyLce& lce, const HeavyHandle& a,
                    const HeavyHandle& b);

// Leaf interval of strings having q as a prefix; empty range when q falls off.
LeafRange spell(const MinimizerFactorTree& tree, const HeavyContext& h, std::span<const Letter> q);

// Leaves in in-order DFS order, searched by binary search.
class ArrayIndex {
public:
    ArrayIndex() = default;
    explicit ArrayIndex(const MinimizerFactorTree& tree) : leaves_(tree.leaves()) {}

    const std::vector<HeavyHandle>& leaves() const { return leaves_; }
    std::size_t size() const { return leaves_.size(); }
    LeafRange interval(const HeavyContext& h, std::span<const Letter> q) const;

private:
    std::vector<HeavyHandle> leaves_;
};

ArrayIndex to_array(const MinimizerFactorTree& tree);

// Structural checks: compaction, edge labels decode to the leaf strings,
// leaf order, diff bounds. Returns an empty string when everything holds.
std::string validate_tree(const MinimizerFactorTree& tree, const HeavyContext& h,
                          int max_mismatches);

void write_tree(std::ostream& out, const MinimizerFactorTree& tree);
MinimizerFactorTree read_tree(std::istream& in);

// Text dump, one node per line, for debugging and the CLI.
void dump_tree(std::ostream& out, const MinimizerFactorTree& tree, const HeavyContext& h,
               const Alphabet& alphabet, Pos n);

}  // namespace wsi
