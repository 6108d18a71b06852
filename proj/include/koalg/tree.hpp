#ifndef KOALG_TREE_HPP
#define KOALG_TREE_HPP

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "koalg/errors.hpp"
#include "koalg/process.hpp"

namespace koalg {

// Physical node cap for one unfolding. Shared subtrees (memoized by state
// and remaining depth) count once.
inline constexpr std::size_t kUnfoldNodeBudget = 2'000'000;

struct TreeNode;
using TreeNodePtr = std::shared_ptr<const TreeNode>;

struct TreeEdge {
    // Input label; absent only on the marker edge to a Truncated leaf.
    std::optional<Value> input;
    // Edge probability; present exactly for probabilistic trees.
    std::optional<double> prob;
    TreeNodePtr target;
};

// A node of a bounded game tree. The root is unlabelled; results label
// leaves; outputs label inner nodes. A node whose expansion was cut off at
// the depth bound carries a single marker edge to a Truncated leaf.
// The state annotation on root/output nodes is for diagnostics only and is
// excluded from structural equality.
struct TreeNode {
    enum class Label : std::uint8_t { Root, Result, Output, Truncated };
    Label label = Label::Root;
    std::optional<Value> value;  // result or output payload
    std::optional<Value> state;  // annotation, not part of tree identity
    std::vector<TreeEdge> edges;

    bool is_leaf() const { return label == Label::Result || label == Label::Truncated; }
};

struct GameTree {
    TreeNodePtr root;
    ChoiceKind kind = ChoiceKind::Det;
    int depth_bound = 0;
};

// Exact canonical order on trees (state annotations ignored); used to keep
// sibling lists deterministic.
inline int tree_compare(const TreeNodePtr& a, const TreeNodePtr& b) {
    if (a == b) return 0;
    if (a->label != b->label) return a->label < b->label ? -1 : 1;
    bool av = a->value.has_value(), bv = b->value.has_value();
    if (av != bv) return av ? 1 : -1;
    if (av) {
        int c = Value::compare(*a->value, *b->value);
        if (c != 0) return c;
    }
    std::size_t n = std::min(a->edges.size(), b->edges.size());
    for (std::size_t i = 0; i < n; ++i) {
        const TreeEdge& ea = a->edges[i];
        const TreeEdge& eb = b->edges[i];
        bool ia = ea.input.has_value(), ib = eb.input.has_value();
        if (ia != ib) return ia ? 1 : -1;
        if (ia) {
            int c = Value::compare(*ea.input, *eb.input);
            if (c != 0) return c;
        }
        double pa = ea.prob.value_or(-1.0), pb = eb.prob.value_or(-1.0);
        if (pa != pb) return pa < pb ? -1 : 1;
        int c = tree_compare(ea.target, eb.target);
        if (c != 0) return c;
    }
    if (a->edges.size() != b->edges.size()) return a->edges.size() < b->edges.size() ? -1 : 1;
    return 0;
}

// Structural equality with a per-edge probability tolerance.
inline bool tree_equal(const TreeNodePtr& a, const TreeNodePtr& b,
                       double prob_tol = kProbEntryTolerance) {
    if (a == b) return true;
    if (a->label != b->label) return false;
    if (a->value.has_value() != b->value.has_value()) return false;
    if (a->value && *a->value != *b->value) return false;
    if (a->edges.size() != b->edges.size()) return false;
    for (std::size_t i = 0; i < a->edges.size(); ++i) {
        const TreeEdge& ea = a->edges[i];
        const TreeEdge& eb = b->edges[i];
        if (ea.input.has_value() != eb.input.has_value()) return false;
        if (ea.input && *ea.input != *eb.input) return false;
        if (ea.prob.has_value() != eb.prob.has_value()) return false;
        if (ea.prob && std::abs(*ea.prob - *eb.prob) > prob_tol) return false;
        if (!tree_equal(ea.target, eb.target, prob_tol)) return false;
    }
    return true;
}

namespace detail {

struct Unfolder {
    const Process& p;
    std::size_t nodes = 0;
    // (state, remaining depth) -> edge fan; reused so repeated states share
    // their expansions physically.
    std::map<std::pair<Value, int>, std::vector<TreeEdge>> memo;

    TreeNodePtr make_node(TreeNode n) {
        if (++nodes > kUnfoldNodeBudget)
            throw ExplosionError("unfolding exceeds the node budget");
        return std::make_shared<const TreeNode>(std::move(n));
    }

    TreeNodePtr truncated_leaf() {
        return make_node(TreeNode{TreeNode::Label::Truncated, std::nullopt, std::nullopt, {}});
    }

    // Children reached from `state` under one input, already merged.
    std::vector<std::pair<TreeNodePtr, double>> children(const Value& state, const Value& input,
                                                         int depth) {
        Choice c = p.step(state, input);
        std::vector<std::pair<TreeNodePtr, double>> kids;
        for (std::size_t i = 0; i < c.support().size(); ++i) {
            const Value& el = c.support()[i];
            double w = c.kind() == ChoiceKind::Prob ? c.weights()[i] : 1.0;
            TreeNodePtr node;
            if (is_step_result(el)) {
                node = make_node(
                    TreeNode{TreeNode::Label::Result, result_of(el), std::nullopt, {}});
            } else if (is_step_continue(el)) {
                node = make_node(TreeNode{TreeNode::Label::Output, continue_output(el),
                                          continue_state(el), expand(continue_state(el), depth - 1)});
            } else {
                throw ValidationError("step outcome is neither result nor continuation: " +
                                      el.str());
            }
            kids.emplace_back(std::move(node), w);
        }
        merge_children(kids, c.kind());
        return kids;
    }

    // Per-input sibling normalization: probabilistic trees merge equal
    // subtrees summing their probabilities; non-deterministic trees drop
    // structural duplicates.
    static void merge_children(std::vector<std::pair<TreeNodePtr, double>>& kids,
                               ChoiceKind kind) {
        if (kind == ChoiceKind::Det || kids.size() <= 1) return;
        std::sort(kids.begin(), kids.end(),
                  [](const auto& a, const auto& b) { return tree_compare(a.first, b.first) < 0; });
        std::vector<std::pair<TreeNodePtr, double>> merged;
        for (auto& [node, w] : kids) {
            if (!merged.empty() && tree_equal(merged.back().first, node)) {
                merged.back().second += w;
            } else {
                merged.emplace_back(std::move(node), w);
            }
        }
        kids = std::move(merged);
    }

    // Edge fan of a node for `state` with `depth` steps remaining. Depth
    // zero yields the single marker edge to a Truncated leaf.
    std::vector<TreeEdge> expand(const Value& state, int depth) {
        auto key = std::make_pair(state, depth);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<TreeEdge> edges;
        if (depth <= 0) {
            edges.push_back(TreeEdge{std::nullopt, std::nullopt, truncated_leaf()});
        } else {
            for (const Value& c : p.inputs().enumeration()) {
                for (auto& [node, w] : children(state, c, depth)) {
                    TreeEdge e;
                    e.input = c;
                    if (p.kind() == ChoiceKind::Prob) e.prob = w;
                    e.target = std::move(node);
                    edges.push_back(std::move(e));
                }
            }
        }
        memo.emplace(std::move(key), edges);
        return edges;
    }
};

}  // namespace detail

// Unravels a process from a state into its game tree, cut off at `depth`
// steps. Requires a finite input space.
inline GameTree unfold(const Process& p, const Value& state, int depth) {
    if (depth < 0) throw ValidationError("unfold depth must be non-negative");
    if (!p.inputs().has_enumeration())
        throw InputNotEnumerableError("unfold requires an enumerated input space, but '" +
                                      p.inputs().name() + "' is not enumerated");
    detail::Unfolder u{p};
    TreeNode root;
    root.label = TreeNode::Label::Root;
    root.state = state;
    root.edges = u.expand(state, depth);
    GameTree t;
    t.root = std::make_shared<const TreeNode>(std::move(root));
    t.kind = p.kind();
    t.depth_bound = depth;
    return t;
}

// Checks the unravelling square for a given tree: for every input, stepping
// first and unfolding one level less must agree with the corresponding
// branch of the tree.
inline bool commutes_with(const Process& p, const Value& state, int depth, const GameTree& t) {
    if (depth <= 0) return true;
    for (const Value& c : p.inputs().enumeration()) {
        detail::Unfolder u{p};
        auto expected = u.children(state, c, depth);
        std::vector<std::pair<TreeNodePtr, double>> actual;
        for (const TreeEdge& e : t.root->edges) {
            if (e.input && *e.input == c)
                actual.emplace_back(e.target, e.prob.value_or(1.0));
        }
        if (expected.size() != actual.size()) return false;
        std::sort(actual.begin(), actual.end(),
                  [](const auto& a, const auto& b) { return tree_compare(a.first, b.first) < 0; });
        // expected is already sorted and merged for NDet/Prob; Det fans have
        // one child per input on both sides.
        std::sort(expected.begin(), expected.end(),
                  [](const auto& a, const auto& b) { return tree_compare(a.first, b.first) < 0; });
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (!tree_equal(expected[i].first, actual[i].first)) return false;
            if (p.kind() == ChoiceKind::Prob &&
                std::abs(expected[i].second - actual[i].second) > kProbEntryTolerance)
                return false;
        }
    }
    return true;
}

inline bool check_commutes(const Process& p, const Value& state, int depth) {
    return commutes_with(p, state, depth, unfold(p, state, depth));
}

struct TreeStats {
    std::size_t node_count = 0;        // logical nodes (shared subtrees recounted)
    std::size_t result_leaves = 0;     // leaves labelled with a result
    std::size_t truncated_leaves = 0;  // cut-off markers
    std::size_t output_nodes = 0;      // inner nodes labelled with an output
    std::size_t max_branching = 0;
    // Probability mass arriving at result leaves, per depth level; entry d
    // holds the mass of results reached after exactly d steps. For Det and
    // NDet trees each path counts with mass from edge weight 1.
    std::vector<double> result_mass_per_depth;
};

namespace detail {

inline void stats_walk(const TreeNodePtr& n, std::size_t depth, double mass, TreeStats& st) {
    ++st.node_count;
    switch (n->label) {
        case TreeNode::Label::Result:
            ++st.result_leaves;
            if (st.result_mass_per_depth.size() < depth)
                st.result_mass_per_depth.resize(depth, 0.0);
            st.result_mass_per_depth[depth - 1] += mass;
            return;
        case TreeNode::Label::Truncated:
            ++st.truncated_leaves;
            return;
        case TreeNode::Label::Output:
            ++st.output_nodes;
            break;
        case TreeNode::Label::Root:
            break;
    }
    st.max_branching = std::max(st.max_branching, n->edges.size());
    for (const TreeEdge& e : n->edges)
        stats_walk(e.target, depth + 1, mass * e.prob.value_or(1.0), st);
}

}  // namespace detail

inline TreeStats tree_stats(const GameTree& t) {
    TreeStats st;
    detail::stats_walk(t.root, 0, 1.0, st);
    return st;
}

// Cuts a tree down to a smaller depth bound, replacing deeper expansions
// with Truncated markers. Siblings that become equal under the shorter
// horizon are re-merged, so the result matches a direct shallower unfold.
// Used to compare unfoldings of different depths.
inline GameTree truncate_tree(const GameTree& t, int depth) {
    struct Cutter {
        ChoiceKind kind;

        TreeNodePtr cut(const TreeNodePtr& n, int remaining) {
            TreeNode out = *n;
            if (n->label == TreeNode::Label::Result || n->label == TreeNode::Label::Truncated)
                return std::make_shared<const TreeNode>(std::move(out));
            if (remaining <= 0) {
                out.edges = {TreeEdge{std::nullopt, std::nullopt,
                                      std::make_shared<const TreeNode>(TreeNode{
                                          TreeNode::Label::Truncated, std::nullopt, std::nullopt, {}})}};
                return std::make_shared<const TreeNode>(std::move(out));
            }
            // Group edges by input in encounter order, cut each target, then
            // re-merge within the group.
            std::vector<TreeEdge> edges;
            std::size_t i = 0;
            while (i < n->edges.size()) {
                std::size_t j = i;
                std::vector<std::pair<TreeNodePtr, double>> kids;
                while (j < n->edges.size() &&
                       n->edges[j].input.has_value() == n->edges[i].input.has_value() &&
                       (!n->edges[i].input || *n->edges[j].input == *n->edges[i].input)) {
                    kids.emplace_back(cut(n->edges[j].target, remaining - 1),
                                      n->edges[j].prob.value_or(1.0));
                    ++j;
                }
                detail::Unfolder::merge_children(kids, kind);
                for (auto& [node, w] : kids) {
                    TreeEdge e;
                    e.input = n->edges[i].input;
                    if (kind == ChoiceKind::Prob) e.prob = w;
                    e.target = std::move(node);
                    edges.push_back(std::move(e));
                }
                i = j;
            }
            out.edges = std::move(edges);
            return std::make_shared<const TreeNode>(std::move(out));
        }
    };
    Cutter cutter{t.kind};
    GameTree out;
    out.root = cutter.cut(t.root, depth);
    out.kind = t.kind;
    out.depth_bound = std::min(t.depth_bound, depth);
    return out;
}

}  // namespace koalg

#endif  // KOALG_TREE_HPP
