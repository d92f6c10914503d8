#include "wsi/factor_tree.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "wsi/binary_io.hpp"

namespace wsi {

MinimizerFactorTree::MinimizerFactorTree(Direction d, std::vector<TreeNode> nodes,
                                         std::vector<HeavyHandle> leaves)
    : direction_(d), nodes_(std::move(nodes)), leaves_(std::move(leaves)) {
    if (nodes_.empty()) {
        nodes_.emplace_back();
    }
}

namespace {

NodeId add_node(RawTrie& t, NodeId parent, Pos depth) {
    RawTrie::Node node;
    node.parent = parent;
    node.depth = depth;
    t.nodes.push_back(std::move(node));
    return static_cast<NodeId>(t.nodes.size() - 1);
}

// Puts a new node at depth l between v and its last child `below`.
NodeId split_last_child(RawTrie& t, NodeId v, NodeId below, Pos l) {
    const NodeId w = add_node(t, v, l);
    auto& kids = t.nodes[static_cast<std::size_t>(v)].children;
    if (kids.empty() || kids.back() != below) {
        throw std::logic_error("trie insertion out of order");
    }
    kids.back() = w;
    t.nodes[static_cast<std::size_t>(below)].parent = w;
    t.nodes[static_cast<std::size_t>(w)].children.push_back(below);
    return w;
}

NodeId attach_leaf(RawTrie& t, NodeId v, const HeavyHandle& leaf, std::int32_t idx) {
    auto& node = t.nodes[static_cast<std::size_t>(v)];
    if (node.depth == leaf.length) {
        node.own.push_back(idx);
        return v;
    }
    const NodeId c = add_node(t, v, leaf.length);
    t.nodes[static_cast<std::size_t>(v)].children.push_back(c);
    t.nodes[static_cast<std::size_t>(c)].own.push_back(idx);
    return c;
}

Pos lcp_at(std::span<const Pos> lcp, std::size_t idx) { return idx == 0 ? 0 : lcp[idx]; }

}  // namespace

RawTrie compact_sorted_stack(std::span<const HeavyHandle> leaves, std::span<const Pos> lcp) {
    RawTrie t;
    add_node(t, kNoNode, 0);
    std::vector<NodeId> stack{0};
    auto depth = [&](NodeId v) { return t.nodes[static_cast<std::size_t>(v)].depth; };
    for (std::size_t idx = 0; idx < leaves.size(); ++idx) {
        const Pos l = lcp_at(lcp, idx);
        NodeId last = kNoNode;
        while (depth(stack.back()) > l) {
            last = stack.back();
            stack.pop_back();
        }
        if (depth(stack.back()) < l) {
            stack.push_back(split_last_child(t, stack.back(), last, l));
        }
        const NodeId v = attach_leaf(t, stack.back(), leaves[idx], static_cast<std::int32_t>(idx));
        if (v != stack.back()) {
            stack.push_back(v);
        }
    }
    return t;
}

RawTrie compact_sorted_walk(std::span<const HeavyHandle> leaves, std::span<const Pos> lcp) {
    RawTrie t;
    add_node(t, kNoNode, 0);
    NodeId cur = 0;
    for (std::size_t idx = 0; idx < leaves.size(); ++idx) {
        const Pos l = lcp_at(lcp, idx);
        // Ancestor of the previous leaf at string depth l, found by climbing.
        NodeId v = cur;
        NodeId below = kNoNode;
        while (t.nodes[static_cast<std::size_t>(v)].depth > l) {
            below = v;
            v = t.nodes[static_cast<std::size_t>(v)].parent;
        }
        if (t.nodes[static_cast<std::size_t>(v)].depth < l) {
            v = split_last_child(t, v, below, l);
        }
        cur = attach_leaf(t, v, leaves[idx], static_cast<std::int32_t>(idx));
    }
    return t;
}

MinimizerFactorTree finalize_tree(Direction d, std::vector<HeavyHandle> leaves,
                                  const RawTrie& raw) {
    const std::size_t count = raw.nodes.size();
    std::vector<NodeId> preorder;
    preorder.reserve(count);
    std::vector<NodeId> stack{0};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        preorder.push_back(v);
        const auto& kids = raw.nodes[static_cast<std::size_t>(v)].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            stack.push_back(*it);
        }
    }
    std::vector<NodeId> id(count, kNoNode);
    for (std::size_t r = 0; r < preorder.size(); ++r) {
        id[static_cast<std::size_t>(preorder[r])] = static_cast<NodeId>(r);
    }

    std::vector<TreeNode> nodes(preorder.size());
    std::int32_t counter = 0;
    for (std::size_t r = 0; r < preorder.size(); ++r) {
        const auto& src = raw.nodes[static_cast<std::size_t>(preorder[r])];
        TreeNode& dst = nodes[r];
        dst.parent = src.parent == kNoNode ? kNoNode : id[static_cast<std::size_t>(src.parent)];
        dst.depth = src.depth;
        dst.leaf_lo = counter;
        dst.own_leaves = static_cast<std::int32_t>(src.own.size());
        for (std::size_t k = 0; k < src.own.size(); ++k) {
            if (src.own[k] != counter + static_cast<std::int32_t>(k)) {
                throw std::logic_error("leaves are not in canonical order");
            }
        }
        counter += dst.own_leaves;
        NodeId prev = kNoNode;
        for (NodeId c : src.children) {
            const NodeId cid = id[static_cast<std::size_t>(c)];
            if (prev == kNoNode) {
                dst.first_child = cid;
            } else {
                nodes[static_cast<std::size_t>(prev)].next_sibling = cid;
            }
            prev = cid;
        }
    }
    // Subtree sizes in reverse preorder give the range ends.
    std::vector<std::int32_t> size(nodes.size(), 0);
    for (std::size_t r = nodes.size(); r-- > 0;) {
        size[r] += nodes[r].own_leaves;
        nodes[r].leaf_hi = nodes[r].leaf_lo + size[r];
        if (nodes[r].parent != kNoNode) {
            size[static_cast<std::size_t>(nodes[r].parent)] += size[r];
        }
    }
    for (std::size_t r = 1; r < nodes.size(); ++r) {
        TreeNode& v = nodes[r];
        const HeavyHandle& leaf = leaves[static_cast<std::size_t>(v.leaf_lo)];
        const Pos up = nodes[static_cast<std::size_t>(v.parent)].depth;
        v.edge_start = leaf.start + up;
        v.edge_length = v.depth - up;
        for (const Mismatch& m : leaf.diffs) {
            if (m.pos >= v.edge_start && m.pos < v.edge_start + v.edge_length) {
                v.edge_diffs.push_back(m);
            }
        }
    }
    return MinimizerFactorTree(d, std::move(nodes), std::move(leaves));
}

bool canonical_less(const HeavyContext& h, const HeavyLce& lce, const HeavyHandle& a,
                    const HeavyHandle& b) {
    const int c = heavy_compare(h, lce, a, b);
    return c != 0 ? c < 0 : a.start < b.start;
}

namespace {

// Walks the letters of an edge or leaf string in order.
class LetterCursor {
public:
    LetterCursor(const HeavyContext& h, Pos start, const std::vector<Mismatch>& diffs)
        : h_(h), start_(start), diffs_(diffs) {}

    Letter at(Pos offset) {
        const Pos pos = start_ + offset;
        while (next_ < diffs_.size() && diffs_[next_].pos < pos) {
            ++next_;
        }
        if (next_ < diffs_.size() && diffs_[next_].pos == pos) {
            return diffs_[next_].letter;
        }
        return h_.heavy(pos);
    }

private:
    const HeavyContext& h_;
    Pos start_;
    const std::vector<Mismatch>& diffs_;
    std::size_t next_ = 0;
};

Letter edge_first(const HeavyContext& h, const TreeNode& v) {
    if (!v.edge_diffs.empty() && v.edge_diffs.front().pos == v.edge_start) {
        return v.edge_diffs.front().letter;
    }
    return h.heavy(v.edge_start);
}

// Compares the first min(|leaf|, |q|) letters; a leaf shorter than q that
// matches it sorts before q.
int compare_prefix(const HeavyContext& h, const HeavyHandle& leaf, std::span<const Letter> q) {
    LetterCursor cur(h, leaf.start, leaf.diffs);
    const auto m = static_cast<Pos>(q.size());
    const Pos len = std::min(leaf.length, m);
    for (Pos t = 0; t < len; ++t) {
        const Letter a = cur.at(t);
        if (a != q[static_cast<std::size_t>(t)]) {
            return a < q[static_cast<std::size_t>(t)] ? -1 : 1;
        }
    }
    return leaf.length < m ? -1 : 0;
}

}  // namespace

LeafRange spell(const MinimizerFactorTree& tree, const HeavyContext& h,
                std::span<const Letter> q) {
    const auto& nodes = tree.nodes();
    const auto m = static_cast<Pos>(q.size());
    if (m == 0) {
        return {nodes[0].leaf_lo, nodes[0].leaf_hi};
    }
    NodeId v = 0;
    Pos matched = 0;
    while (true) {
        NodeId c = nodes[static_cast<std::size_t>(v)].first_child;
        while (c != kNoNode && edge_first(h, nodes[static_cast<std::size_t>(c)]) !=
                                   q[static_cast<std::size_t>(matched)]) {
            c = nodes[static_cast<std::size_t>(c)].next_sibling;
        }
        if (c == kNoNode) {
            return {0, 0};
        }
        const TreeNode& child = nodes[static_cast<std::size_t>(c)];
        const Pos len = std::min(child.edge_length, m - matched);
        LetterCursor cur(h, child.edge_start, child.edge_diffs);
        for (Pos t = 1; t < len; ++t) {
            if (cur.at(t) != q[static_cast<std::size_t>(matched + t)]) {
                return {0, 0};
            }
        }
        matched += len;
        if (matched == m) {
            return {child.leaf_lo, child.leaf_hi};
        }
        v = c;
    }
}

LeafRange ArrayIndex::interval(const HeavyContext& h, std::span<const Letter> q) const {
    auto lo = std::partition_point(leaves_.begin(), leaves_.end(), [&](const HeavyHandle& leaf) {
        return compare_prefix(h, leaf, q) < 0;
    });
    auto hi = std::partition_point(lo, leaves_.end(), [&](const HeavyHandle& leaf) {
        return compare_prefix(h, leaf, q) == 0;
    });
    if (lo == hi) {
        return {0, 0};
    }
    return {static_cast<std::int32_t>(lo - leaves_.begin()),
            static_cast<std::int32_t>(hi - leaves_.begin())};
}

ArrayIndex to_array(const MinimizerFactorTree& tree) { return ArrayIndex(tree); }

std::string validate_tree(const MinimizerFactorTree& tree, const HeavyContext& h,
                          int max_mismatches) {
    std::ostringstream err;
    const auto& nodes = tree.nodes();
    const auto& leaves = tree.leaves();
    const HeavyLce lce(h.heavy_string());
    if (nodes.empty() || nodes[0].parent != kNoNode || nodes[0].depth != 0) {
        return "bad root";
    }
    if (nodes[0].leaf_lo != 0 || nodes[0].leaf_hi != static_cast<std::int32_t>(leaves.size())) {
        return "root range does not cover all leaves";
    }
    for (std::size_t t = 0; t < leaves.size(); ++t) {
        const HeavyHandle& leaf = leaves[t];
        if (static_cast<int>(leaf.diffs.size()) > max_mismatches) {
            err << "leaf " << t << " has " << leaf.diffs.size() << " diffs";
            return err.str();
        }
        if (leaf.length < 1 || leaf.start < 1 || leaf.start + leaf.length - 1 > h.length()) {
            err << "leaf " << t << " out of range";
            return err.str();
        }
        for (std::size_t d = 0; d < leaf.diffs.size(); ++d) {
            const Mismatch& m = leaf.diffs[d];
            if (m.pos < leaf.start || m.pos >= leaf.start + leaf.length ||
                m.letter == h.heavy(m.pos) || (d > 0 && leaf.diffs[d - 1].pos >= m.pos)) {
                err << "leaf " << t << " has a malformed diff list";
                return err.str();
            }
        }
        if (t > 0 && !canonical_less(h, lce, leaves[t - 1], leaf)) {
            err << "leaves " << t - 1 << " and " << t << " out of order";
            return err.str();
        }
    }
    for (std::size_t r = 1; r < nodes.size(); ++r) {
        const TreeNode& v = nodes[r];
        std::size_t kids = 0;
        for (NodeId c = v.first_child; c != kNoNode; c = nodes[static_cast<std::size_t>(c)].next_sibling) {
            ++kids;
            if (nodes[static_cast<std::size_t>(c)].parent != static_cast<NodeId>(r)) {
                err << "node " << c << " has a wrong parent";
                return err.str();
            }
        }
        if (kids < 2 && v.own_leaves == 0) {
            err << "node " << r << " is not compacted";
            return err.str();
        }
        if (v.edge_length < 1 || static_cast<int>(v.edge_diffs.size()) > max_mismatches) {
            err << "node " << r << " has a bad edge";
            return err.str();
        }
        const Pos up = nodes[static_cast<std::size_t>(v.parent)].depth;
        for (std::int32_t leaf_rank : {v.leaf_lo, v.leaf_hi - 1}) {
            const HeavyHandle& leaf = leaves[static_cast<std::size_t>(leaf_rank)];
            if (leaf.length < v.depth) {
                err << "leaf " << leaf_rank << " shorter than node " << r;
                return err.str();
            }
            LetterCursor edge(h, v.edge_start, v.edge_diffs);
            for (Pos t = 0; t < v.edge_length; ++t) {
                if (edge.at(t) != letter_at(h, leaf, up + t)) {
                    err << "edge of node " << r << " does not decode to leaf " << leaf_rank;
                    return err.str();
                }
            }
        }
        for (std::int32_t k = 0; k < v.own_leaves; ++k) {
            if (leaves[static_cast<std::size_t>(v.leaf_lo + k)].length != v.depth) {
                err << "own leaf of node " << r << " has the wrong length";
                return err.str();
            }
        }
    }
    return {};
}

namespace {

void put_diffs(std::ostream& out, Pos base, const std::vector<Mismatch>& diffs) {
    io::put<std::uint32_t>(out, static_cast<std::uint32_t>(diffs.size()));
    Pos prev = base;
    for (const Mismatch& m : diffs) {
        io::put<std::uint32_t>(out, static_cast<std::uint32_t>(m.pos - prev));
        io::put<std::uint8_t>(out, m.letter);
        prev = m.pos;
    }
}

std::vector<Mismatch> get_diffs(std::istream& in, Pos base) {
    const auto count = io::get<std::uint32_t>(in);
    if (count > 64) {
        throw io::FormatError("diff list too long");
    }
    std::vector<Mismatch> out(count);
    Pos prev = base;
    for (auto& m : out) {
        prev += static_cast<Pos>(io::get<std::uint32_t>(in));
        m.pos = prev;
        m.letter = io::get<std::uint8_t>(in);
    }
    return out;
}

}  // namespace

void write_tree(std::ostream& out, const MinimizerFactorTree& tree) {
    io::put<std::uint8_t>(out, static_cast<std::uint8_t>(tree.direction()));
    io::put<std::uint64_t>(out, tree.nodes().size());
    for (const TreeNode& v : tree.nodes()) {
        io::put<std::int32_t>(out, v.parent);
        io::put<std::int32_t>(out, v.first_child);
        io::put<std::int32_t>(out, v.next_sibling);
        io::put<std::int32_t>(out, v.edge_start);
        io::put<std::int32_t>(out, v.edge_length);
        io::put<std::int32_t>(out, v.depth);
        io::put<std::int32_t>(out, v.leaf_lo);
        io::put<std::int32_t>(out, v.leaf_hi);
        io::put<std::int32_t>(out, v.own_leaves);
        put_diffs(out, v.edge_start, v.edge_diffs);
    }
    io::put<std::uint64_t>(out, tree.leaves().size());
    for (const HeavyHandle& leaf : tree.leaves()) {
        io::put<std::int32_t>(out, leaf.start);
        io::put<std::int32_t>(out, leaf.length);
        put_diffs(out, leaf.start, leaf.diffs);
    }
}

MinimizerFactorTree read_tree(std::istream& in) {
    const auto dir = io::get<std::uint8_t>(in);
    if (dir > 1) {
        throw io::FormatError("bad tree direction");
    }
    const auto node_count = io::get_count(in, std::uint64_t{1} << 32);
    if (node_count == 0) {
        throw io::FormatError("tree without a root");
    }
    std::vector<TreeNode> nodes;
    for (std::uint64_t r = 0; r < node_count; ++r) {
        TreeNode v;
        v.parent = io::get<std::int32_t>(in);
        v.first_child = io::get<std::int32_t>(in);
        v.next_sibling = io::get<std::int32_t>(in);
        v.edge_start = io::get<std::int32_t>(in);
        v.edge_length = io::get<std::int32_t>(in);
        v.depth = io::get<std::int32_t>(in);
        v.leaf_lo = io::get<std::int32_t>(in);
        v.leaf_hi = io::get<std::int32_t>(in);
        v.own_leaves = io::get<std::int32_t>(in);
        v.edge_diffs = get_diffs(in, v.edge_start);
        const auto limit = static_cast<std::int64_t>(node_count);
        for (NodeId link : {v.parent, v.first_child, v.next_sibling}) {
            if (link < kNoNode || link >= limit) {
                throw io::FormatError("node link out of range");
            }
        }
        nodes.push_back(std::move(v));
    }
    const auto leaf_count = io::get_count(in, std::uint64_t{1} << 32);
    std::vector<HeavyHandle> leaves;
    for (std::uint64_t t = 0; t < leaf_count; ++t) {
        HeavyHandle leaf;
        leaf.start = io::get<std::int32_t>(in);
        leaf.length = io::get<std::int32_t>(in);
        leaf.diffs = get_diffs(in, leaf.start);
        leaves.push_back(std::move(leaf));
    }
    for (const TreeNode& v : nodes) {
        if (v.leaf_lo < 0 || v.leaf_hi < v.leaf_lo ||
            v.leaf_hi > static_cast<std::int32_t>(leaf_count)) {
            throw io::FormatError("leaf range out of bounds");
        }
    }
    return MinimizerFactorTree(static_cast<Direction>(dir), std::move(nodes), std::move(leaves));
}

void dump_tree(std::ostream& out, const MinimizerFactorTree& tree, const HeavyContext& h,
               const Alphabet& alphabet, Pos n) {
    const bool back = tree.direction() == Direction::backward;
    auto outside = [&](Pos p) { return back ? n + 1 - p : p; };
    const auto& nodes = tree.nodes();
    for (std::size_t r = 0; r < nodes.size(); ++r) {
        const TreeNode& v = nodes[r];
        std::size_t level = 0;
        for (NodeId u = v.parent; u != kNoNode; u = nodes[static_cast<std::size_t>(u)].parent) {
            ++level;
        }
        out << std::string(2 * level, ' ') << r;
        if (r > 0) {
            HeavyHandle edge{v.edge_start, v.edge_length, v.edge_diffs};
            out << " \"" << alphabet.decode(decode(h, edge)) << "\"";
        }
        out << " depth=" << v.depth << " leaves=[" << v.leaf_lo << "," << v.leaf_hi << ")";
        for (std::int32_t k = 0; k < v.own_leaves; ++k) {
            out << " @" << outside(tree.leaves()[static_cast<std::size_t>(v.leaf_lo + k)].start);
        }
        out << '\n';
    }
}

}  // namespace wsi
