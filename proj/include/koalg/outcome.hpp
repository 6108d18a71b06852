#ifndef KOALG_OUTCOME_HPP
#define KOALG_OUTCOME_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "koalg/errors.hpp"
#include "koalg/tree.hpp"

namespace koalg {

// How a play's outcome vector is computed: results map through
// `tau_result`, and each turn's output folds into the running outcome via
// `tau_step`, which must contract in its first argument with factor
// `discount`. `output_bound` caps the sup-norm of any single turn's
// contribution and of (1 - discount) times any result, which is what makes
// truncation errors certifiable.
struct OutcomeSpec {
    std::size_t player_count = 0;
    double discount = 0.5;      // in (0,1), strictly
    double output_bound = 0.0;  // M
    std::function<std::vector<double>(const Value&)> tau_result;
    std::function<std::vector<double>(const std::vector<double>&, const Value&)> tau_step;
};

inline void validate_outcome_spec(const OutcomeSpec& spec) {
    if (spec.player_count == 0) throw ValidationError("outcome spec needs at least one player");
    if (!(spec.discount > 0.0 && spec.discount < 1.0))
        throw ParamError("discount factor must lie strictly between 0 and 1");
    if (spec.output_bound < 0.0) throw ParamError("output bound must be non-negative");
    if (!spec.tau_result || !spec.tau_step)
        throw ValidationError("outcome spec must provide both fold functions");
}

// Reads the first `n` numeric slots of a tuple output as the per-player
// contribution; anything else contributes zero. This covers payoff tuples,
// payoff-plus-signal tuples and non-numeric outputs uniformly.
inline std::vector<double> numeric_prefix(const Value& v, std::size_t n) {
    std::vector<double> out(n, 0.0);
    if (v.is_tuple() || v.is_seq()) {
        const auto& xs = v.items();
        for (std::size_t i = 0; i < n && i < xs.size(); ++i)
            if (xs[i].is_number()) out[i] = xs[i].as_number();
    } else if (n == 1 && v.is_number()) {
        out[0] = v.as_number();
    }
    return out;
}

// The discounted-sum outcome: a result is read as a payoff vector and each
// turn adds its output payoffs onto the discounted tail.
inline OutcomeSpec discounted_sum(std::size_t players, double lambda, double output_bound) {
    OutcomeSpec spec;
    spec.player_count = players;
    spec.discount = lambda;
    spec.output_bound = output_bound;
    spec.tau_result = [players](const Value& r) { return numeric_prefix(r, players); };
    spec.tau_step = [players, lambda](const std::vector<double>& tail, const Value& o) {
        std::vector<double> out = numeric_prefix(o, players);
        for (std::size_t i = 0; i < players; ++i) out[i] += lambda * tail[i];
        return out;
    };
    validate_outcome_spec(spec);
    return spec;
}

// An outcome vector with a certified truncation radius (sup norm). `exact`
// is set when no Truncated leaf contributed.
struct OutcomeResult {
    std::vector<double> value;
    double error_bound = 0.0;
    bool exact = true;

    friend bool operator==(const OutcomeResult& a, const OutcomeResult& b) {
        return a.value == b.value && a.error_bound == b.error_bound && a.exact == b.exact;
    }
    friend bool operator<(const OutcomeResult& a, const OutcomeResult& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.error_bound != b.error_bound) return a.error_bound < b.error_bound;
        return a.exact < b.exact;
    }
};

namespace detail {

struct Evaluator {
    const OutcomeSpec& spec;
    std::map<const TreeNode*, OutcomeResult> memo;

    double truncation_radius() const {
        return spec.output_bound / (1.0 - spec.discount);
    }

    // Value a child contributes to its parent: results and truncations are
    // base cases; output nodes fold their own aggregate through tau_step.
    OutcomeResult contribution(const TreeNodePtr& child) {
        switch (child->label) {
            case TreeNode::Label::Result:
                return OutcomeResult{spec.tau_result(*child->value), 0.0, true};
            case TreeNode::Label::Truncated:
                return OutcomeResult{std::vector<double>(spec.player_count, 0.0),
                                     truncation_radius(), false};
            case TreeNode::Label::Output: {
                OutcomeResult inner = aggregate(child);
                return OutcomeResult{spec.tau_step(inner.value, *child->value),
                                     spec.discount * inner.error_bound, inner.exact};
            }
            case TreeNode::Label::Root:
                throw ShapeError("malformed tree: nested root node");
        }
        throw ShapeError("unreachable tree label");
    }

    // Aggregate over a node's edge fan. Closed trees carry exactly one
    // input label per node; Det nodes have one child, Prob nodes average
    // their children.
    OutcomeResult aggregate(const TreeNodePtr& node) {
        auto it = memo.find(node.get());
        if (it != memo.end()) return it->second;
        if (node->edges.empty())
            throw ShapeError("inner tree node without successors");
        for (std::size_t i = 1; i < node->edges.size(); ++i) {
            const auto& a = node->edges[i - 1].input;
            const auto& b = node->edges[i].input;
            if (a.has_value() != b.has_value() || (a && !(*a == *b)))
                throw ShapeError("outcome evaluation requires a closed tree with one input per node");
        }
        OutcomeResult out;
        if (node->edges.size() == 1 && !node->edges.front().prob) {
            out = contribution(node->edges.front().target);
        } else {
            out.value.assign(spec.player_count, 0.0);
            out.error_bound = 0.0;
            out.exact = true;
            for (const TreeEdge& e : node->edges) {
                if (!e.prob)
                    throw ShapeError("probabilistic tree edge without a probability");
                OutcomeResult c = contribution(e.target);
                for (std::size_t i = 0; i < spec.player_count; ++i)
                    out.value[i] += *e.prob * c.value[i];
                out.error_bound += *e.prob * c.error_bound;
                out.exact = out.exact && c.exact;
            }
        }
        memo.emplace(node.get(), out);
        return out;
    }
};

}  // namespace detail

// Folds a deterministic or probabilistic closed tree into its outcome with
// a certified truncation bound.
inline OutcomeResult evaluate(const GameTree& t, const OutcomeSpec& spec) {
    validate_outcome_spec(spec);
    if (t.kind == ChoiceKind::NDet)
        throw NDetOutcomeError("evaluate does not apply to non-deterministic trees; "
                               "use evaluate_ndet");
    detail::Evaluator ev{spec};
    OutcomeResult r = ev.aggregate(t.root);
    if (r.exact) r.error_bound = 0.0;
    return r;
}

// All outcomes of a non-deterministic closed tree, one per resolution of
// the non-determinism, de-duplicated. The number of resolutions is capped.
inline std::vector<OutcomeResult> evaluate_ndet(const GameTree& t, const OutcomeSpec& spec,
                                                std::size_t cap = 10000) {
    validate_outcome_spec(spec);
    if (t.kind != ChoiceKind::NDet)
        throw ValidationError("evaluate_ndet applies to non-deterministic trees only");

    struct Walker {
        const OutcomeSpec& spec;
        std::size_t cap;
        std::size_t resolutions = 0;

        std::vector<OutcomeResult> contribution(const TreeNodePtr& child) {
            switch (child->label) {
                case TreeNode::Label::Result:
                    bump(1);
                    return {OutcomeResult{spec.tau_result(*child->value), 0.0, true}};
                case TreeNode::Label::Truncated:
                    bump(1);
                    return {OutcomeResult{std::vector<double>(spec.player_count, 0.0),
                                          spec.output_bound / (1.0 - spec.discount), false}};
                case TreeNode::Label::Output: {
                    std::vector<OutcomeResult> inner = aggregate(child);
                    std::vector<OutcomeResult> out;
                    out.reserve(inner.size());
                    for (const OutcomeResult& r : inner)
                        out.push_back(OutcomeResult{spec.tau_step(r.value, *child->value),
                                                    spec.discount * r.error_bound, r.exact});
                    return out;
                }
                case TreeNode::Label::Root:
                    throw ShapeError("malformed tree: nested root node");
            }
            throw ShapeError("unreachable tree label");
        }

        std::vector<OutcomeResult> aggregate(const TreeNodePtr& node) {
            if (node->edges.empty())
                throw ShapeError("inner tree node without successors");
            std::set<OutcomeResult> out;
            for (const TreeEdge& e : node->edges)
                for (OutcomeResult& r : contribution(e.target)) out.insert(std::move(r));
            return {out.begin(), out.end()};
        }

        void bump(std::size_t n) {
            resolutions += n;
            if (resolutions > cap)
                throw ResolutionExplosionError("non-deterministic resolution count exceeds cap");
        }
    };

    Walker w{spec, cap};
    return w.aggregate(t.root);
}

// Picks the unfolding depth needed for a target certified precision, then
// unfolds and evaluates. The returned error bound is at most eps.
inline OutcomeResult evaluate_to_tolerance(const Process& closed, const Value& initial,
                                           const OutcomeSpec& spec, double eps) {
    validate_outcome_spec(spec);
    if (eps <= 0.0) throw ParamError("tolerance must be positive");
    double radius = spec.output_bound / (1.0 - spec.discount);
    int depth = 0;
    if (radius > eps) {
        depth = static_cast<int>(
            std::ceil(std::log(eps / radius) / std::log(spec.discount)));
        if (depth < 0) depth = 0;
        while (std::pow(spec.discount, depth) * radius > eps) ++depth;
    }
    return evaluate(unfold(closed, initial, depth), spec);
}

}  // namespace koalg

#endif  // KOALG_OUTCOME_HPP
