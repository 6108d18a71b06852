#include <catch2/catch_amalgamated.hpp>

#include "koalg/game.hpp"

#include "koalg/catalog.hpp"
#include "koalg/outcome.hpp"

using namespace koalg;

namespace {

Value star() { return Value::atom("*"); }
Value ac() { return Value::atom("c"); }
Value ad() { return Value::atom("d"); }

Value payoff(double a, double b) {
    return Value::tuple({Value::real(a), Value::real(b)});
}

Game rpd() { return build_matrix_game(repeated_pd_spec(0.9)); }
Game pd1() { return build_matrix_game(pd_spec()); }

}  // namespace

TEST_CASE("game construction shapes") {
    Game g = pd1();
    CHECK(g.core.states().enumeration().size() == 1);
    CHECK(g.core.outputs().enumeration() == std::vector<Value>{Value::unit()});
    CHECK(g.core.results().contains(payoff(1, 1)));

    Game r = rpd();
    CHECK(r.core.results().is_empty());
    CHECK(r.core.outputs().contains(payoff(0, 0)));
}

TEST_CASE("make_game rejects malformed data") {
    Game g = pd1();
    // action space without an enumeration
    std::vector<SpaceDescriptor> bad_actions = {SpaceDescriptor::anything("a1"), g.actions[1]};
    CHECK_THROWS_AS(make_game(g.players, bad_actions, g.observations, g.core, g.observe,
                              g.outcome, g.initial_state, g.seed_output, g.seed_actions),
                    ValidationError);
    // core inputs must be the action product
    Process p2 = map_input(SpaceDescriptor::enumerated("flat", {Value::unit()}),
                           [](const Value&) { return Value::pair(ac(), ac()); }, g.core);
    CHECK_THROWS_AS(make_game(g.players, g.actions, g.observations, p2, g.observe, g.outcome,
                              g.initial_state, g.seed_output, g.seed_actions),
                    ValidationError);
    // outcome player count must match
    CHECK_THROWS_AS(make_game(g.players, g.actions, g.observations, g.core, g.observe,
                              discounted_sum(3, 0.5, 1.0), g.initial_state, g.seed_output,
                              g.seed_actions),
                    ValidationError);
}

TEST_CASE("dummy strategy offers every action at every observation") {
    Game g = pd1();
    Strategy dummy = dummy_strategy(g, "1");
    CHECK(dummy.kind == ChoiceKind::NDet);
    Value obs1 = g.observe[0](g.seed_output, g.seed_actions);
    Value obs2 = g.observe[0](Value::unit(), Value::pair(ad(), ad()));
    Choice c1 = dummy.step(dummy.initial_epistemic, obs1);
    Choice c2 = dummy.step(dummy.initial_epistemic, obs2);
    CHECK(c1 == Choice::ndet({Value::pair(star(), ac()), Value::pair(star(), ad())}));
    CHECK(c1 == c2);  // observation independent

    // singleton action sets give a one-element choice
    MatrixGameSpec s;
    s.players = {"1", "2"};
    s.actions = {{"only"}, {"x", "y"}};
    s.payoffs = {{{"only", "x"}, {0.0, 0.0}}, {{"only", "y"}, {1.0, -1.0}}};
    s.mode = MatrixGameSpec::Mode::OneShot;
    Game g1 = build_matrix_game(s);
    CHECK(dummy_strategy(g1, "1").step(star(), Value::unit()).support().size() == 1);
}

TEST_CASE("always-deny against itself holds the zero stream") {
    Game g = rpd();
    StrategyProfile profile;
    profile.assigned.emplace("1", make_builtin_strategy("always-deny", g, "1"));
    profile.assigned.emplace("2", make_builtin_strategy("always-deny", g, "2"));
    Process closed = fix_strategies(g, profile);
    CHECK(closed.kind() == ChoiceKind::Det);

    auto trace = rollout(closed, closed_initial_state(g, profile), 3, 0);
    REQUIRE(trace.size() == 3);
    for (const auto& step : trace) CHECK(*step.output == payoff(0, 0));
}

TEST_CASE("tit-for-tat against itself keeps cooperating from the (c,c) seed") {
    Game g = rpd();
    StrategyProfile profile;
    profile.assigned.emplace("1", make_builtin_strategy("tit-for-tat", g, "1"));
    profile.assigned.emplace("2", make_builtin_strategy("tit-for-tat", g, "2"));
    Process closed = fix_strategies(g, profile);
    auto trace = rollout(closed, closed_initial_state(g, profile), 5, 0);
    REQUIRE(trace.size() == 5);
    for (const auto& step : trace) CHECK(*step.output == payoff(1, 1));
}

TEST_CASE("closing over deterministic strategies yields deterministic probes") {
    Game g = rpd();
    StrategyProfile profile;
    profile.assigned.emplace("1", make_builtin_strategy("grim-trigger", g, "1"));
    profile.assigned.emplace("2", make_builtin_strategy("tit-for-tat", g, "2"));
    Process closed = fix_strategies(g, profile);
    Value state = closed_initial_state(g, profile);
    for (int t = 0; t < 4; ++t) {
        Choice c = closed.probe(state, Value::unit());
        REQUIRE(c.kind() == ChoiceKind::Det);
        state = continue_state(c.det_value());
    }
}

TEST_CASE("dummy profile closes the one-shot game non-deterministically") {
    Game g = pd1();
    Process closed = fix_strategies(g, StrategyProfile{});
    CHECK(closed.kind() == ChoiceKind::NDet);
    GameTree t = unfold(closed, closed_initial_state(g, StrategyProfile{}), 1);
    TreeStats st = tree_stats(t);
    CHECK(st.result_leaves == 4);

    // the four leaves are exactly the payoff table
    auto outcomes = evaluate_ndet(t, g.outcome);
    std::set<std::pair<double, double>> seen;
    for (const auto& r : outcomes) seen.insert({r.value[0], r.value[1]});
    std::set<std::pair<double, double>> expected = {{1, 1}, {2, -1}, {-1, 2}, {0, 0}};
    CHECK(seen == expected);
}

TEST_CASE("one-shot play ends at the first turn") {
    Game g = pd1();
    StrategyProfile profile;
    profile.assigned.emplace("1", make_builtin_strategy("always-confess", g, "1"));
    profile.assigned.emplace("2", make_builtin_strategy("always-deny", g, "2"));
    Process closed = fix_strategies(g, profile);
    auto trace = rollout(closed, closed_initial_state(g, profile), 10, 0);
    REQUIRE(trace.size() == 1);
    REQUIRE(trace.front().result.has_value());
    CHECK(*trace.front().result == payoff(-1, 2));
}

TEST_CASE("rollout edge cases") {
    Game g = rpd();
    StrategyProfile deny;
    deny.assigned.emplace("1", make_builtin_strategy("always-deny", g, "1"));
    deny.assigned.emplace("2", make_builtin_strategy("always-deny", g, "2"));
    Process closed = fix_strategies(g, deny);
    Value init = closed_initial_state(g, deny);

    CHECK(rollout(closed, init, 0, 7).empty());

    // non-deterministic processes respect the policy
    Process wild = fix_strategies(g, StrategyProfile{});
    Value winit = closed_initial_state(g, StrategyProfile{});
    CHECK_THROWS_AS(rollout(wild, winit, 2, 0), NDetUnresolvedError);
    auto first = rollout(wild, winit, 2, 0, NDetPolicy::First);
    CHECK(first.size() == 2);
    auto r1 = rollout(wild, winit, 4, 99, NDetPolicy::SeededRandom);
    auto r2 = rollout(wild, winit, 4, 99, NDetPolicy::SeededRandom);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(*r1[i].output == *r2[i].output);

    // rollouts need a closed process
    CHECK_THROWS_AS(rollout(g.core, g.initial_state, 2, 0), ShapeError);
}

TEST_CASE("mixing probabilistic strategies with the dummy is rejected") {
    Game g = rpd();
    StrategyProfile profile;
    profile.assigned.emplace("1", make_builtin_strategy("copy-2/3", g, "1"));
    // player 2 falls back to the non-deterministic dummy
    CHECK_THROWS_AS(fix_strategies(g, profile), MixedChoiceError);
}

TEST_CASE("strategies playing outside the action space are rejected") {
    Game g = rpd();
    StrategyProfile profile;
    profile.assigned.emplace("1", constant_strategy("bad", Value::atom("zzz")));
    profile.assigned.emplace("2", make_builtin_strategy("always-deny", g, "2"));
    CHECK_THROWS_AS(fix_strategies(g, profile), ValidationError);
}

TEST_CASE("closed states decompose as (state, epistemics, output, actions)") {
    Game g = rpd();
    StrategyProfile profile;
    profile.assigned.emplace("1", make_builtin_strategy("grim-trigger", g, "1"));
    profile.assigned.emplace("2", make_builtin_strategy("always-confess", g, "2"));
    Process closed = fix_strategies(g, profile);
    Value state = closed_initial_state(g, profile);
    for (int t = 0; t < 5; ++t) {
        REQUIRE(state.is_tuple());
        REQUIRE(state.items().size() == 4);
        CHECK(g.core.states().contains(state.item(0)));
        REQUIRE(state.item(1).is_tuple());
        CHECK(state.item(1).items().size() == 2);
        CHECK(g.core.outputs().contains(state.item(2)));
        CHECK(g.core.inputs().contains(state.item(3)));
        Choice c = closed.probe(state, Value::unit());
        state = continue_state(c.det_value());
    }
}

TEST_CASE("actions depend only on the previous observation and epistemic state") {
    Game g = rpd();
    Strategy s1 = make_builtin_strategy("tit-for-tat", g, "1");
    Strategy s2 = make_builtin_strategy("grim-trigger", g, "2");
    StrategyProfile profile;
    profile.assigned.emplace("1", s1);
    profile.assigned.emplace("2", s2);
    Process closed = fix_strategies(g, profile);

    auto trace = rollout(closed, closed_initial_state(g, profile), 6, 0);
    Value prev = closed_initial_state(g, profile);
    for (const auto& step : trace) {
        // replay each strategy against the observation computed from the
        // previous turn's output and actions
        const Value& prev_epi = prev.item(1);
        const Value& prev_out = prev.item(2);
        const Value& prev_act = prev.item(3);
        const Value& now = step.state;
        for (std::size_t p = 0; p < 2; ++p) {
            const Strategy& s = p == 0 ? s1 : s2;
            Value obs = g.observe[p](prev_out, prev_act);
            Choice c = s.step(prev_epi.item(p), obs);
            Value expected = c.det_value();
            CHECK(expected.item(1) == now.item(3).item(p));  // action played
            CHECK(expected.item(0) == now.item(1).item(p));  // epistemic update
        }
        prev = now;
    }
}

TEST_CASE("network game closes over many players") {
    Game g = build_network_game(3);
    StrategyProfile profile;
    profile.assigned.emplace("1", constant_strategy("befriend-2", Value::atom("befriend:2")));
    profile.assigned.emplace("2", constant_strategy("pass", Value::atom("pass")));
    profile.assigned.emplace("3", constant_strategy("befriend-1", Value::atom("befriend:1")));
    Process closed = fix_strategies(g, profile);
    auto trace = rollout(closed, closed_initial_state(g, profile), 2, 0);
    REQUIRE(trace.size() == 2);
    Value expected = Value::set(
        {Value::set({Value::atom("1"), Value::atom("2")}),
         Value::set({Value::atom("1"), Value::atom("3")})});
    CHECK(*trace.back().output == expected);
}
