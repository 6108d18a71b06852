#ifndef KOALG_GAME_HPP
#define KOALG_GAME_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "koalg/errors.hpp"
#include "koalg/outcome.hpp"
#include "koalg/process.hpp"

namespace koalg {

// A strategy for one player: a result-free process from observations to
// actions over a private epistemic state space.
struct Strategy {
    std::string name;
    SpaceDescriptor epistemic;
    ChoiceKind kind = ChoiceKind::Det;
    // (epistemic state, observation) -> choice over (epistemic', action) pairs.
    std::function<Choice(const Value&, const Value&)> step;
    Value initial_epistemic;
};

// Copy of a strategy starting from a different epistemic state; candidate
// sets pair strategies with their initial states this way.
inline Strategy with_initial(Strategy s, Value initial) {
    s.initial_epistemic = std::move(initial);
    return s;
}

// Computes what a player sees from the last output and action profile.
using ObserveFn = std::function<Value(const Value& output, const Value& actions)>;

// A game: a process whose input space is the product of per-player action
// spaces, together with observation functions, an outcome specification
// and the seed values standing in for the turn before the first.
struct Game {
    std::vector<std::string> players;
    std::vector<SpaceDescriptor> actions;       // per player, finite
    std::vector<SpaceDescriptor> observations;  // per player
    Process core;
    std::vector<ObserveFn> observe;
    OutcomeSpec outcome;
    Value initial_state;
    Value seed_output;   // imaginary previous output
    Value seed_actions;  // imaginary previous action profile

    std::size_t player_index(const std::string& id) const {
        for (std::size_t i = 0; i < players.size(); ++i)
            if (players[i] == id) return i;
        throw ValidationError("unknown player id: " + id);
    }
};

inline Game make_game(std::vector<std::string> players, std::vector<SpaceDescriptor> actions,
                      std::vector<SpaceDescriptor> observations, Process core,
                      std::vector<ObserveFn> observe, OutcomeSpec outcome, Value initial_state,
                      Value seed_output, Value seed_actions) {
    if (players.empty()) throw ValidationError("a game needs at least one player");
    if (actions.size() != players.size() || observations.size() != players.size() ||
        observe.size() != players.size())
        throw ValidationError("per-player data must match the player list");
    for (std::size_t p = 0; p < players.size(); ++p) {
        if (!actions[p].has_enumeration() || actions[p].enumeration().empty())
            throw ValidationError("action space of player " + players[p] +
                                  " must be finite and non-empty");
    }
    const auto* parts = core.inputs().product_parts();
    if (!parts || parts->size() != players.size())
        throw ValidationError("the core input space must be the product of the per-player "
                              "action spaces");
    for (std::size_t p = 0; p < players.size(); ++p)
        if (!same_space((*parts)[p], actions[p]))
            throw ValidationError("core input factor " + std::to_string(p) +
                                  " is not the action space of player " + players[p]);
    if (core.states().has_membership_info() && !core.states().contains(initial_state))
        throw ValidationError("initial state lies outside the state space");
    if (core.outputs().has_membership_info() && !core.outputs().contains(seed_output))
        throw ValidationError("seed output lies outside the output space");
    if (core.inputs().has_membership_info() && !core.inputs().contains(seed_actions))
        throw ValidationError("seed actions lie outside the action profile space");
    validate_outcome_spec(outcome);
    if (outcome.player_count != players.size())
        throw ValidationError("outcome spec player count must match the player list");
    for (std::size_t p = 0; p < players.size(); ++p) {
        Value obs = observe[p](seed_output, seed_actions);
        if (observations[p].has_membership_info() && !observations[p].contains(obs))
            throw ValidationError("seed observation of player " + players[p] +
                                  " lies outside the observation space: " + obs.str());
    }
    // Contraction probe for the outcome fold: tau_step must shrink
    // differences in its first argument by the discount factor.
    {
        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::vector<Value> sample_outputs;
        if (core.outputs().has_enumeration()) {
            const auto& en = core.outputs().enumeration();
            sample_outputs.assign(en.begin(), en.begin() + std::min<std::size_t>(en.size(), 4));
        } else {
            sample_outputs.push_back(seed_output);
        }
        std::size_t n = outcome.player_count;
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<double> u(n), v(n);
            double diff = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                u[i] = 10.0 * uni(rng);
                v[i] = 10.0 * uni(rng);
                diff = std::max(diff, std::abs(u[i] - v[i]));
            }
            for (const Value& o : sample_outputs) {
                std::vector<double> fu = outcome.tau_step(u, o);
                std::vector<double> fv = outcome.tau_step(v, o);
                double fdiff = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    fdiff = std::max(fdiff, std::abs(fu[i] - fv[i]));
                if (fdiff > outcome.discount * diff + 1e-9)
                    throw ValidationError("outcome fold is not contracting with the declared "
                                          "discount factor");
            }
        }
    }
    Game g{std::move(players), std::move(actions), std::move(observations), std::move(core),
           std::move(observe),  std::move(outcome), std::move(initial_state),
           std::move(seed_output), std::move(seed_actions)};
    return g;
}

// The non-deterministic dummy strategy: one epistemic state, and for every
// observation it offers every action of the player.
inline Strategy dummy_strategy(const Game& g, const std::string& player) {
    std::size_t p = g.player_index(player);
    const SpaceDescriptor& a = g.actions[p];
    Value star = Value::atom("*");
    std::vector<Value> options;
    options.reserve(a.enumeration().size());
    for (const Value& act : a.enumeration()) options.push_back(Value::pair(star, act));
    Strategy s;
    s.name = "dummy";
    s.epistemic = SpaceDescriptor::enumerated("dummy-state", {star});
    s.kind = ChoiceKind::NDet;
    s.initial_epistemic = star;
    s.step = [options](const Value&, const Value&) { return Choice::ndet(options); };
    return s;
}

// Per-player strategy assignment; players without an entry get the dummy.
struct StrategyProfile {
    std::map<std::string, Strategy> assigned;

    StrategyProfile() = default;
    explicit StrategyProfile(std::map<std::string, Strategy> m) : assigned(std::move(m)) {}

    StrategyProfile with(const std::string& player, Strategy s) const {
        StrategyProfile out = *this;
        out.assigned.insert_or_assign(player, std::move(s));
        return out;
    }
};

namespace detail {

// Left-nested tuple encoding used while folding binary products.
inline Value nest_left(const std::vector<Value>& flat) {
    if (flat.empty()) throw ValidationError("cannot nest an empty tuple");
    Value acc = flat[0];
    for (std::size_t i = 1; i < flat.size(); ++i) acc = Value::pair(acc, flat[i]);
    return acc;
}

inline std::vector<Value> unnest_left(const Value& nested, std::size_t n) {
    std::vector<Value> out(n, Value::unit());
    Value cur = nested;
    for (std::size_t i = n; i-- > 1;) {
        out[i] = cur.item(1);
        cur = cur.item(0);
    }
    out[0] = cur;
    return out;
}

// Simultaneous product of result-free processes with flat tuple state,
// input and output spaces. Built by folding the binary product and
// conjugating the nested encoding away.
inline Process product_flat(const std::vector<Process>& ps, SpaceDescriptor flat_inputs,
                            SpaceDescriptor flat_outputs) {
    if (ps.empty()) throw ValidationError("product of zero processes");
    for (const Process& p : ps)
        if (!p.results().is_empty())
            throw ShapeError("flat products are defined for result-free processes");
    std::size_t n = ps.size();

    std::vector<SpaceDescriptor> state_parts;
    state_parts.reserve(n);
    for (const Process& p : ps) state_parts.push_back(p.states());
    SpaceDescriptor flat_states = SpaceDescriptor::product("states", state_parts);

    if (n == 1) {
        const Process& p = ps.front();
        Process one = reindex_states(
            p, flat_states, [](const Value& s) { return s.item(0); },
            [](const Value& s) { return Value::tuple({s}); });
        one = map_input(flat_inputs, [](const Value& i) { return i.item(0); }, one);
        return map_output(one, flat_outputs, [](const Value& s, const Value& o) {
            return std::make_pair(s, Value::tuple({o}));
        });
    }

    Process folded = ps[0];
    for (std::size_t i = 1; i < n; ++i) folded = product(folded, ps[i]);

    folded = reindex_states(
        folded, flat_states,
        [n](const Value& flat) { return nest_left(flat.items()); },
        [n](const Value& nested) { return Value::tuple(unnest_left(nested, n)); });
    folded = map_input(flat_inputs,
                       [n](const Value& flat) { return nest_left(flat.items()); }, folded);
    return map_output(folded, flat_outputs, [n](const Value& s, const Value& nested) {
        return std::make_pair(s, Value::tuple(unnest_left(nested, n)));
    });
}

// A strategy as a process from observations to actions.
inline Process strategy_process(const Strategy& s, const SpaceDescriptor& observations,
                                const SpaceDescriptor& actions) {
    auto step_fn = s.step;
    auto step = [step_fn](const Value& e, const Value& obs) -> Choice {
        return step_fn(e, obs).map([](const Value& pair) {
            return step_continue(pair.item(0), pair.item(1));
        });
    };
    return Process(s.epistemic, observations, actions,
                   SpaceDescriptor::empty_space("no-results"), s.kind, std::move(step));
}

}  // namespace detail

// Closes a game over a strategy profile: the joint strategy process is fed
// the players' observations, its action profile is fed back and cascaded
// into the game, and the game's output is fed back as the source of the
// next observations. The result is a process with unit input whose states
// decompose as (game state, epistemic states, last output, last actions).
inline Process fix_strategies(const Game& g, const StrategyProfile& profile) {
    std::size_t n = g.players.size();
    for (const auto& [id, s] : profile.assigned) g.player_index(id);  // validate ids

    std::vector<Strategy> strategies;
    strategies.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        auto it = profile.assigned.find(g.players[p]);
        strategies.push_back(it != profile.assigned.end() ? it->second
                                                          : dummy_strategy(g, g.players[p]));
    }

    // All kinds must combine, pairwise and with the game's.
    ChoiceKind joint = g.core.kind();
    for (const Strategy& s : strategies) joint = combine_kinds(joint, s.kind);

    // Spot-check each strategy once at its seed observation.
    for (std::size_t p = 0; p < n; ++p) {
        Value obs = g.observe[p](g.seed_output, g.seed_actions);
        Choice c = strategies[p].step(strategies[p].initial_epistemic, obs);
        if (c.kind() != strategies[p].kind)
            throw ValidationError("strategy '" + strategies[p].name +
                                  "' stepped with the wrong choice kind");
        for (const Value& el : c.support()) {
            if (!el.is_tuple() || el.items().size() != 2)
                throw ValidationError("strategy '" + strategies[p].name +
                                      "' must yield (state, action) pairs");
            if (!g.actions[p].contains(el.item(1)))
                throw ValidationError("strategy '" + strategies[p].name +
                                      "' plays an action outside the action space of player " +
                                      g.players[p] + ": " + el.item(1).str());
        }
    }

    std::vector<SpaceDescriptor> obs_parts = g.observations;
    SpaceDescriptor obs_profile = SpaceDescriptor::product("observations", obs_parts);
    SpaceDescriptor action_profile = g.core.inputs();
    SpaceDescriptor output_space = g.core.outputs();

    std::vector<Process> strategy_procs;
    strategy_procs.reserve(n);
    for (std::size_t p = 0; p < n; ++p)
        strategy_procs.push_back(
            detail::strategy_process(strategies[p], g.observations[p], g.actions[p]));
    Process joint_strategies = detail::product_flat(strategy_procs, obs_profile, action_profile);

    // Observation stage: (last output, last actions) -> observation profile.
    std::vector<ObserveFn> observe = g.observe;
    SpaceDescriptor pre_feedback_inputs =
        SpaceDescriptor::product("output-and-actions", {output_space, action_profile});
    Process observed = map_input(
        pre_feedback_inputs,
        [observe, n](const Value& in) {
            const Value& c = in.item(0);
            const Value& acts = in.item(1);
            Value::List obs;
            obs.reserve(n);
            for (std::size_t p = 0; p < n; ++p) obs.push_back(observe[p](c, acts));
            return Value::tuple(std::move(obs));
        },
        joint_strategies);

    // Feed the action profile back, cascade into the game, feed the game
    // output back.
    Process actions_fed = feedback(observed);
    Process cascaded = cascade(actions_fed, g.core);
    SpaceDescriptor unit_and_output =
        SpaceDescriptor::product("unit-and-output", {SpaceDescriptor::unit_space(), output_space});
    Process with_unit =
        map_input(unit_and_output, [](const Value& in) { return in.item(1); }, cascaded);
    Process closed_raw = feedback(with_unit);

    // Surface shape: states (s, epistemic profile, last output, last actions),
    // plain results. The raw construction nests as (((e-bar, a-bar), s), c).
    std::vector<SpaceDescriptor> epi_parts;
    epi_parts.reserve(n);
    for (const Strategy& s : strategies) epi_parts.push_back(s.epistemic);
    SpaceDescriptor epi_profile = SpaceDescriptor::product("epistemic", epi_parts);
    SpaceDescriptor closed_states = SpaceDescriptor::product(
        "closed-states", {g.core.states(), epi_profile, output_space, action_profile});

    auto to_raw = [](const Value& pretty) {
        return Value::pair(
            Value::pair(Value::pair(pretty.item(1), pretty.item(3)), pretty.item(0)),
            pretty.item(2));
    };
    auto to_pretty = [](const Value& raw) {
        const Value& inner = raw.item(0);
        const Value& c = raw.item(1);
        const Value& ea = inner.item(0);
        const Value& s = inner.item(1);
        return Value::tuple({s, ea.item(0), c, ea.item(1)});
    };

    auto step = [closed_raw, to_raw, to_pretty](const Value& state, const Value& input) -> Choice {
        return closed_raw.step(to_raw(state), input).map([&to_pretty](const Value& el) {
            if (is_step_result(el)) {
                const Value& r = result_of(el);
                if (!r.has_tag("R"))
                    throw ValidationError("strategy processes must not terminate");
                return step_result(r.payload());
            }
            return step_continue(to_pretty(continue_state(el)), continue_output(el));
        });
    };
    return Process(closed_states, SpaceDescriptor::unit_space(), output_space, g.core.results(),
                   joint, std::move(step));
}

// Initial state of the closed process built by fix_strategies.
inline Value closed_initial_state(const Game& g, const StrategyProfile& profile) {
    Value::List epi;
    epi.reserve(g.players.size());
    for (const std::string& id : g.players) {
        auto it = profile.assigned.find(id);
        epi.push_back(it != profile.assigned.end() ? it->second.initial_epistemic
                                                   : Value::atom("*"));
    }
    return Value::tuple({g.initial_state, Value::tuple(std::move(epi)), g.seed_output,
                         g.seed_actions});
}

// ---------------------------------------------------------------------------
// Rollouts

enum class NDetPolicy { First, SeededRandom, Error };

struct RolloutStep {
    Value state;                  // state after the step (pre-step state on termination)
    std::optional<Value> output;  // present on continuation steps
    std::optional<Value> result;  // present on the terminating step
};

namespace detail {

// Uniform double in [0,1) from the top 53 bits; keeps sampling identical
// across platforms for a fixed seed.
inline double canonical_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Drives a closed process for at most `turns` steps. Probabilistic choices
// are sampled with the seeded generator; non-deterministic choices are
// resolved per policy.
inline std::vector<RolloutStep> rollout(const Process& closed, const Value& initial, int turns,
                                        std::uint64_t seed, NDetPolicy policy = NDetPolicy::Error) {
    if (!closed.inputs().has_enumeration() || closed.inputs().enumeration().size() != 1)
        throw ShapeError("rollout requires a closed process (unit input space)");
    const Value input = closed.inputs().enumeration().front();
    std::mt19937_64 rng(seed);
    std::vector<RolloutStep> trace;
    Value state = initial;
    for (int t = 0; t < turns; ++t) {
        Choice c = closed.probe(state, input);
        std::size_t pick = 0;
        switch (c.kind()) {
            case ChoiceKind::Det:
                break;
            case ChoiceKind::Prob: {
                double u = detail::canonical_unit(rng);
                double acc = 0.0;
                for (std::size_t i = 0; i < c.support().size(); ++i) {
                    acc += c.weights()[i];
                    pick = i;
                    if (u < acc) break;
                }
                break;
            }
            case ChoiceKind::NDet:
                switch (policy) {
                    case NDetPolicy::First:
                        pick = 0;
                        break;
                    case NDetPolicy::SeededRandom:
                        pick = static_cast<std::size_t>(rng() % c.support().size());
                        break;
                    case NDetPolicy::Error:
                        throw NDetUnresolvedError(
                            "rollout hit a non-deterministic choice at turn " +
                            std::to_string(t + 1));
                }
                break;
        }
        const Value& el = c.support()[pick];
        if (is_step_result(el)) {
            trace.push_back(RolloutStep{state, std::nullopt, result_of(el)});
            break;
        }
        state = continue_state(el);
        trace.push_back(RolloutStep{state, continue_output(el), std::nullopt});
    }
    return trace;
}

}  // namespace koalg

#endif  // KOALG_GAME_HPP
