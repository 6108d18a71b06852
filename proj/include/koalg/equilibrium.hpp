#ifndef KOALG_EQUILIBRIUM_HPP
#define KOALG_EQUILIBRIUM_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "koalg/errors.hpp"
#include "koalg/game.hpp"

namespace koalg {

// Enumeration caps for strategy modifications.
inline constexpr std::size_t kNModCap = 10000;
inline constexpr std::size_t kJointPrefixCap = 100000;

enum class VerdictStatus { Holds, Fails, Inconclusive };

inline const char* verdict_status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Holds: return "holds";
        case VerdictStatus::Fails: return "fails";
        case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

// The alternative with the largest potential gain found during a check.
struct Witness {
    std::string player;
    std::string alternative;
    double baseline_value = 0.0;
    double baseline_error = 0.0;
    double alternative_value = 0.0;
    double alternative_error = 0.0;
    std::optional<int> horizon;          // n of the modification (subgame checks)
    std::optional<std::string> prefix;   // rendered prefix actions (subgame checks)

    // Certified bounds on the deviation gain.
    double gain_lo() const {
        return (alternative_value - alternative_error) - (baseline_value + baseline_error);
    }
    double gain_hi() const {
        return (alternative_value + alternative_error) - (baseline_value - baseline_error);
    }
};

// Outcome comparisons use certified intervals: a check holds when no
// alternative can gain more than eps, fails when some alternative
// certainly gains more than eps, and is inconclusive when the intervals
// straddle the threshold.
struct Verdict {
    std::string kind;  // "best_response" | "nash" | "subgame_perfect"
    VerdictStatus status = VerdictStatus::Holds;
    double eps = 0.0;
    std::optional<int> n_max;
    std::optional<Witness> witness;
    std::optional<OutcomeResult> outcome;  // outcome of the checked profile
};

// Per-player candidate strategies (each carries its initial epistemic state).
using CandidateSet = std::map<std::string, std::vector<Strategy>>;

namespace detail {

inline OutcomeResult profile_outcome(const Game& g, const StrategyProfile& profile, double eps) {
    Process closed = fix_strategies(g, profile);
    return evaluate_to_tolerance(closed, closed_initial_state(g, profile), g.outcome, eps);
}

// Folds one alternative's intervals into the running verdict, keeping the
// alternative with the largest optimistic gain as the witness.
struct VerdictAccumulator {
    double eps;
    VerdictStatus status = VerdictStatus::Holds;
    std::optional<Witness> witness;

    void consider(Witness w) {
        if (!witness || w.gain_hi() > witness->gain_hi()) witness = w;
        if (w.gain_lo() > eps) {
            status = VerdictStatus::Fails;
        } else if (w.gain_hi() > eps && status == VerdictStatus::Holds) {
            status = VerdictStatus::Inconclusive;
        }
    }

    void merge(const VerdictAccumulator& other) {
        if (other.witness) consider(*other.witness);
        if (other.status == VerdictStatus::Fails) status = VerdictStatus::Fails;
        else if (other.status == VerdictStatus::Inconclusive && status == VerdictStatus::Holds)
            status = VerdictStatus::Inconclusive;
    }
};

}  // namespace detail

// Is (profile[q], its initial epistemic state) a best response against the
// rest of the profile, relative to the finite candidate list for q?
inline Verdict best_response(const Game& g, const StrategyProfile& profile,
                             const std::string& deviator, const std::vector<Strategy>& candidates,
                             double eps) {
    if (eps <= 0.0) throw ParamError("eps must be positive");
    std::size_t qi = g.player_index(deviator);
    OutcomeResult base = detail::profile_outcome(g, profile, eps / 4.0);
    detail::VerdictAccumulator acc{eps};
    for (const Strategy& cand : candidates) {
        OutcomeResult alt = detail::profile_outcome(g, profile.with(deviator, cand), eps / 4.0);
        Witness w;
        w.player = deviator;
        w.alternative = cand.name;
        w.baseline_value = base.value[qi];
        w.baseline_error = base.error_bound;
        w.alternative_value = alt.value[qi];
        w.alternative_error = alt.error_bound;
        acc.consider(std::move(w));
    }
    Verdict v;
    v.kind = "best_response";
    v.status = acc.status;
    v.eps = eps;
    v.witness = acc.witness;
    v.outcome = base;
    return v;
}

// Nash equilibrium check: best response for every player.
inline Verdict nash_check(const Game& g, const StrategyProfile& profile,
                          const CandidateSet& candidates, double eps) {
    if (eps <= 0.0) throw ParamError("eps must be positive");
    detail::VerdictAccumulator acc{eps};
    OutcomeResult base = detail::profile_outcome(g, profile, eps / 4.0);
    for (const std::string& player : g.players) {
        auto it = candidates.find(player);
        if (it == candidates.end()) continue;
        Verdict br = best_response(g, profile, player, it->second, eps);
        detail::VerdictAccumulator sub{eps};
        sub.status = br.status;
        sub.witness = br.witness;
        acc.merge(sub);
    }
    Verdict v;
    v.kind = "nash";
    v.status = acc.status;
    v.eps = eps;
    v.witness = acc.witness;
    v.outcome = base;
    return v;
}

// ---------------------------------------------------------------------------
// n-modifications

// A strategy altered on its first `horizon` turns: the prefix chooses the
// action as a function of (turn, observation), after which the base
// strategy takes over from its initial epistemic state. The epistemic
// space is the base's extended by the turn counter.
struct NModification {
    Strategy base;
    int horizon = 0;
    std::function<Value(int, const Value&)> prefix;
    std::string prefix_desc;
    Strategy strategy;  // the materialized modified strategy
};

namespace detail {

inline Value turn_state(int k) { return Value::tagged("turn", Value::integer(k)); }
inline Value base_state(const Value& e) { return Value::tagged("base", e); }

inline Strategy materialize_nmod(const Strategy& base, int horizon,
                                 std::function<Value(int, const Value&)> prefix,
                                 const std::string& desc) {
    if (base.kind != ChoiceKind::Det)
        throw ValidationError("n-modifications are defined for deterministic strategies");
    if (horizon == 0) return base;
    std::vector<Value> turns;
    turns.reserve(static_cast<std::size_t>(horizon));
    for (int k = 0; k < horizon; ++k) turns.push_back(Value::integer(k));
    SpaceDescriptor epistemic = SpaceDescriptor::tagged_union(
        base.epistemic.name() + "+turns",
        {{"base", base.epistemic},
         {"turn", SpaceDescriptor::enumerated("turns", turns)}});
    Strategy out;
    out.name = base.name + "[" + desc + "]";
    out.epistemic = epistemic;
    out.kind = ChoiceKind::Det;
    out.initial_epistemic = turn_state(0);
    Value base_initial = base.initial_epistemic;
    auto base_step = base.step;
    out.step = [horizon, prefix, base_initial, base_step](const Value& es,
                                                          const Value& obs) -> Choice {
        if (es.has_tag("turn")) {
            int k = static_cast<int>(es.payload().int_value());
            Value action = prefix(k, obs);
            Value next = k + 1 < horizon ? turn_state(k + 1) : base_state(base_initial);
            return Choice::det(Value::pair(std::move(next), std::move(action)));
        }
        if (!es.has_tag("base"))
            throw MembershipError("modified strategy state must be a turn or base state");
        return base_step(es.payload(), obs).map([](const Value& pr) {
            return Value::pair(base_state(pr.item(0)), pr.item(1));
        });
    };
    return out;
}

}  // namespace detail

// All n-modifications of a strategy with deterministic prefixes: one per
// assignment of an action to every (turn, observation) pair. Requires
// enumerated action and observation spaces for the player.
inline std::vector<NModification> enumerate_nmods(const Strategy& base, int n, const Game& g,
                                                  const std::string& player) {
    if (n < 0) throw ParamError("modification horizon must be non-negative");
    std::size_t p = g.player_index(player);
    const auto& actions = g.actions[p].enumeration();
    if (!g.observations[p].has_enumeration())
        throw InputNotEnumerableError("enumerating modifications requires an enumerated "
                                      "observation space for player " + player);
    const auto& obs = g.observations[p].enumeration();

    if (n == 0) {
        NModification m;
        m.base = base;
        m.horizon = 0;
        m.prefix = [](int, const Value&) -> Value {
            throw ValidationError("empty prefix must not be consulted");
        };
        m.prefix_desc = "";
        m.strategy = base;
        return {m};
    }

    std::size_t cells = static_cast<std::size_t>(n) * obs.size();
    double count = std::pow(static_cast<double>(actions.size()), static_cast<double>(cells));
    if (count > static_cast<double>(kNModCap))
        throw ExplosionError("modification count exceeds the enumeration cap");

    std::vector<NModification> out;
    std::vector<std::size_t> digits(cells, 0);
    while (true) {
        // table[k][i] = action at turn k on the i-th enumerated observation
        auto table = std::make_shared<std::vector<std::vector<Value>>>();
        table->resize(static_cast<std::size_t>(n));
        std::string desc;
        for (int k = 0; k < n; ++k) {
            (*table)[static_cast<std::size_t>(k)].reserve(obs.size());
            for (std::size_t i = 0; i < obs.size(); ++i) {
                const Value& a = actions[digits[static_cast<std::size_t>(k) * obs.size() + i]];
                (*table)[static_cast<std::size_t>(k)].push_back(a);
                if (!desc.empty()) desc += ",";
                desc += a.str();
            }
        }
        std::vector<Value> obs_list = obs;
        auto prefix = [table, obs_list](int k, const Value& o) -> Value {
            for (std::size_t i = 0; i < obs_list.size(); ++i)
                if (obs_list[i] == o) return (*table)[static_cast<std::size_t>(k)][i];
            throw MembershipError("observation outside the enumerated space: " + o.str());
        };
        NModification m;
        m.base = base;
        m.horizon = n;
        m.prefix = prefix;
        m.prefix_desc = desc;
        m.strategy = detail::materialize_nmod(base, n, prefix, desc);
        out.push_back(std::move(m));

        std::size_t pos = 0;
        while (pos < cells && ++digits[pos] == actions.size()) digits[pos++] = 0;
        if (pos == cells) break;
    }
    return out;
}

// Subgame perfection up to a finite horizon: for every n <= n_max and every
// joint n-modification of the profile, each player's modification must be
// a best response among the modifications of their candidates that share
// the same first n turns. Two modifications that play the same actions on
// every reachable observation induce identical plays in every comparison,
// so the joint enumeration ranges over realized prefix actions.
inline Verdict subgame_perfect_check(const Game& g, const StrategyProfile& profile,
                                     const CandidateSet& candidates, int n_max, double eps) {
    if (n_max < 1) throw ParamError("n_max must be at least 1");
    if (eps <= 0.0) throw ParamError("eps must be positive");
    std::size_t np = g.players.size();

    std::vector<Strategy> base_strats;
    base_strats.reserve(np);
    for (const std::string& id : g.players) {
        auto it = profile.assigned.find(id);
        if (it == profile.assigned.end())
            throw ValidationError("subgame perfection requires a strategy for every player");
        if (it->second.kind != ChoiceKind::Det)
            throw ValidationError("subgame perfection is checked for deterministic strategies");
        base_strats.push_back(it->second);
    }

    detail::VerdictAccumulator acc{eps};
    for (int n = 1; n <= n_max; ++n) {
        // Caps mirror enumerate_nmods even though only realized prefixes are
        // walked here.
        double joint = 1.0;
        for (std::size_t p = 0; p < np; ++p) {
            if (!g.observations[p].has_enumeration())
                throw InputNotEnumerableError("subgame perfection requires enumerated "
                                              "observation spaces");
            double per_player = std::pow(
                static_cast<double>(g.actions[p].enumeration().size()),
                static_cast<double>(n) * static_cast<double>(g.observations[p].enumeration().size()));
            if (per_player > static_cast<double>(kNModCap))
                throw ExplosionError("modification count exceeds the enumeration cap");
            joint *= std::pow(static_cast<double>(g.actions[p].enumeration().size()),
                              static_cast<double>(n));
        }
        if (joint > static_cast<double>(kJointPrefixCap))
            throw ExplosionError("joint modification count exceeds the enumeration cap");

        // Enumerate realized prefixes: one action per player per turn.
        std::vector<std::size_t> digits(static_cast<std::size_t>(n) * np, 0);
        while (true) {
            // actions_by_player[p][k] = action of player p at prefix turn k
            std::vector<std::vector<Value>> actions_by_player(np);
            std::string joint_desc;
            for (std::size_t p = 0; p < np; ++p) {
                for (int k = 0; k < n; ++k) {
                    const auto& as = g.actions[p].enumeration();
                    const Value& a = as[digits[p * static_cast<std::size_t>(n) +
                                               static_cast<std::size_t>(k)]];
                    actions_by_player[p].push_back(a);
                }
            }
            StrategyProfile modified;
            std::vector<std::string> prefix_desc(np);
            for (std::size_t p = 0; p < np; ++p) {
                std::string desc;
                for (const Value& a : actions_by_player[p]) {
                    if (!desc.empty()) desc += ",";
                    desc += a.str();
                }
                prefix_desc[p] = desc;
                if (!joint_desc.empty()) joint_desc += " / ";
                joint_desc += g.players[p] + ":" + desc;
                auto seq = actions_by_player[p];
                auto prefix = [seq](int k, const Value&) { return seq[static_cast<std::size_t>(k)]; };
                modified.assigned.insert_or_assign(
                    g.players[p],
                    detail::materialize_nmod(base_strats[p], n, prefix, desc));
            }

            OutcomeResult base_outcome = detail::profile_outcome(g, modified, eps / 4.0);
            for (std::size_t q = 0; q < np; ++q) {
                auto it = candidates.find(g.players[q]);
                if (it == candidates.end()) continue;
                for (const Strategy& cand : it->second) {
                    auto seq = actions_by_player[q];
                    auto prefix = [seq](int k, const Value&) {
                        return seq[static_cast<std::size_t>(k)];
                    };
                    Strategy alt = detail::materialize_nmod(cand, n, prefix, prefix_desc[q]);
                    OutcomeResult alt_outcome =
                        detail::profile_outcome(g, modified.with(g.players[q], alt), eps / 4.0);
                    Witness w;
                    w.player = g.players[q];
                    w.alternative = alt.name;
                    w.baseline_value = base_outcome.value[q];
                    w.baseline_error = base_outcome.error_bound;
                    w.alternative_value = alt_outcome.value[q];
                    w.alternative_error = alt_outcome.error_bound;
                    w.horizon = n;
                    w.prefix = joint_desc;
                    acc.consider(std::move(w));
                }
            }

            std::size_t pos = 0;
            std::size_t total = digits.size();
            while (pos < total) {
                std::size_t p = pos / static_cast<std::size_t>(n);
                if (++digits[pos] == g.actions[p].enumeration().size()) {
                    digits[pos++] = 0;
                } else {
                    break;
                }
            }
            if (pos == total) break;
        }
    }

    Verdict v;
    v.kind = "subgame_perfect";
    v.status = acc.status;
    v.eps = eps;
    v.n_max = n_max;
    v.witness = acc.witness;
    v.outcome = detail::profile_outcome(g, profile, eps / 4.0);
    return v;
}

}  // namespace koalg

#endif  // KOALG_EQUILIBRIUM_HPP
