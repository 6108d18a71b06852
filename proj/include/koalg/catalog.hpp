#ifndef KOALG_CATALOG_HPP
#define KOALG_CATALOG_HPP

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "koalg/equilibrium.hpp"
#include "koalg/game.hpp"

namespace koalg {

// ---------------------------------------------------------------------------
// Matrix game descriptions ("koalg-matrix/1")

struct MatrixGameSpec {
    enum class Mode { OneShot, Repeated };
    enum class Visibility { FullProfile, OwnPayoff };

    std::vector<std::string> players;
    std::vector<std::vector<std::string>> actions;  // per player, order matters
    std::map<std::vector<std::string>, std::vector<double>> payoffs;
    Mode mode = Mode::OneShot;
    std::optional<double> discount;
    Visibility visibility = Visibility::FullProfile;
    std::optional<std::vector<std::string>> seed_actions;
    std::optional<std::vector<double>> seed_output;

    friend bool operator==(const MatrixGameSpec& a, const MatrixGameSpec& b) {
        return a.players == b.players && a.actions == b.actions && a.payoffs == b.payoffs &&
               a.mode == b.mode && a.discount == b.discount && a.visibility == b.visibility &&
               a.seed_actions == b.seed_actions && a.seed_output == b.seed_output;
    }
};

namespace detail {

inline std::string join_profile(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ",";
        out += n;
    }
    return out;
}

inline std::vector<std::string> split_profile(const std::string& key) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : key) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] inline void spec_error(const std::string& pointer, const std::string& message) {
    throw ValidationError("invalid game description at " + pointer + ": " + message);
}

// Order-preserving de-duplication for enumerations assembled from
// overlapping sources (reachable observations plus the seed observation).
inline std::vector<Value> dedup_values(std::vector<Value> xs) {
    std::vector<Value> out;
    for (Value& x : xs)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
    return out;
}

}  // namespace detail

// Parses and validates a matrix game description. Unknown fields are
// rejected; errors carry a JSON-pointer style location.
inline MatrixGameSpec parse_matrix_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top-level value must be an object");

    static const std::set<std::string> known = {
        "format", "players", "actions", "payoffs", "mode",
        "discount", "visibility", "seed_actions", "seed_output"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) detail::spec_error("/" + it.key(), "unknown field");

    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) detail::spec_error(std::string("/") + key, "missing field");
        return j.at(key);
    };

    if (!require("format").is_string() || j["format"].get<std::string>() != "koalg-matrix/1")
        detail::spec_error("/format", "expected \"koalg-matrix/1\"");

    MatrixGameSpec spec;

    const auto& players = require("players");
    if (!players.is_array() || players.empty()) detail::spec_error("/players", "expected a non-empty array");
    for (std::size_t i = 0; i < players.size(); ++i) {
        if (!players[i].is_string())
            detail::spec_error("/players/" + std::to_string(i), "expected a string");
        spec.players.push_back(players[i].get<std::string>());
    }
    {
        std::set<std::string> uniq(spec.players.begin(), spec.players.end());
        if (uniq.size() != spec.players.size()) detail::spec_error("/players", "duplicate player id");
    }

    const auto& actions = require("actions");
    if (!actions.is_array() || actions.size() != spec.players.size())
        detail::spec_error("/actions", "expected one action list per player");
    for (std::size_t p = 0; p < actions.size(); ++p) {
        std::string ptr = "/actions/" + std::to_string(p);
        if (!actions[p].is_array() || actions[p].empty())
            detail::spec_error(ptr, "expected a non-empty array of action names");
        std::vector<std::string> as;
        for (std::size_t i = 0; i < actions[p].size(); ++i) {
            if (!actions[p][i].is_string())
                detail::spec_error(ptr + "/" + std::to_string(i), "expected a string");
            as.push_back(actions[p][i].get<std::string>());
        }
        std::set<std::string> uniq(as.begin(), as.end());
        if (uniq.size() != as.size()) detail::spec_error(ptr, "duplicate action name");
        spec.actions.push_back(std::move(as));
    }

    const auto& mode = require("mode");
    if (!mode.is_string()) detail::spec_error("/mode", "expected a string");
    if (mode.get<std::string>() == "one-shot") spec.mode = MatrixGameSpec::Mode::OneShot;
    else if (mode.get<std::string>() == "repeated") spec.mode = MatrixGameSpec::Mode::Repeated;
    else detail::spec_error("/mode", "expected \"one-shot\" or \"repeated\"");

    if (j.contains("discount")) {
        if (!j["discount"].is_number()) detail::spec_error("/discount", "expected a number");
        spec.discount = j["discount"].get<double>();
        if (!(*spec.discount > 0.0 && *spec.discount < 1.0))
            detail::spec_error("/discount", "discount must lie strictly between 0 and 1");
    }
    if (spec.mode == MatrixGameSpec::Mode::Repeated && !spec.discount)
        detail::spec_error("/discount", "repeated games require a discount factor");

    if (j.contains("visibility")) {
        if (!j["visibility"].is_string()) detail::spec_error("/visibility", "expected a string");
        std::string v = j["visibility"].get<std::string>();
        if (v == "full-profile") spec.visibility = MatrixGameSpec::Visibility::FullProfile;
        else if (v == "own-payoff-and-signal") spec.visibility = MatrixGameSpec::Visibility::OwnPayoff;
        else detail::spec_error("/visibility", "expected \"full-profile\" or \"own-payoff-and-signal\"");
    }

    const auto& payoffs = require("payoffs");
    if (!payoffs.is_object()) detail::spec_error("/payoffs", "expected an object");
    std::size_t expected = 1;
    for (const auto& as : spec.actions) expected *= as.size();
    for (auto it = payoffs.begin(); it != payoffs.end(); ++it) {
        std::string ptr = "/payoffs/" + it.key();
        std::vector<std::string> profile = detail::split_profile(it.key());
        if (profile.size() != spec.players.size())
            detail::spec_error(ptr, "profile key must list one action per player");
        for (std::size_t p = 0; p < profile.size(); ++p) {
            const auto& as = spec.actions[p];
            if (std::find(as.begin(), as.end(), profile[p]) == as.end())
                detail::spec_error(ptr, "unknown action '" + profile[p] + "' for player " +
                                            spec.players[p]);
        }
        if (!it.value().is_array() || it.value().size() != spec.players.size())
            detail::spec_error(ptr, "expected one payoff per player");
        std::vector<double> pay;
        for (std::size_t i = 0; i < it.value().size(); ++i) {
            if (!it.value()[i].is_number())
                detail::spec_error(ptr + "/" + std::to_string(i), "expected a number");
            pay.push_back(it.value()[i].get<double>());
        }
        if (!spec.payoffs.emplace(std::move(profile), std::move(pay)).second)
            detail::spec_error(ptr, "duplicate payoff entry");
    }
    if (spec.payoffs.size() != expected)
        detail::spec_error("/payoffs", "payoffs must cover every action profile exactly once");

    if (j.contains("seed_actions")) {
        const auto& sa = j["seed_actions"];
        if (!sa.is_array() || sa.size() != spec.players.size())
            detail::spec_error("/seed_actions", "expected one action per player");
        std::vector<std::string> seed;
        for (std::size_t p = 0; p < sa.size(); ++p) {
            if (!sa[p].is_string())
                detail::spec_error("/seed_actions/" + std::to_string(p), "expected a string");
            std::string a = sa[p].get<std::string>();
            const auto& as = spec.actions[p];
            if (std::find(as.begin(), as.end(), a) == as.end())
                detail::spec_error("/seed_actions/" + std::to_string(p), "unknown action '" + a + "'");
            seed.push_back(std::move(a));
        }
        spec.seed_actions = std::move(seed);
    }
    if (j.contains("seed_output")) {
        const auto& so = j["seed_output"];
        if (!so.is_array() || so.size() != spec.players.size())
            detail::spec_error("/seed_output", "expected one value per player");
        std::vector<double> seed;
        for (std::size_t i = 0; i < so.size(); ++i) {
            if (!so[i].is_number())
                detail::spec_error("/seed_output/" + std::to_string(i), "expected a number");
            seed.push_back(so[i].get<double>());
        }
        spec.seed_output = std::move(seed);
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Constant strategies and the named built-ins

// Plays one fixed action regardless of observation.
inline Strategy constant_strategy(std::string name, Value action) {
    Value star = Value::atom("*");
    Strategy s;
    s.name = std::move(name);
    s.epistemic = SpaceDescriptor::enumerated("unit-state", {star});
    s.kind = ChoiceKind::Det;
    s.initial_epistemic = star;
    s.step = [star, action](const Value&, const Value&) {
        return Choice::det(Value::pair(star, action));
    };
    return s;
}

namespace detail {

// Opponent's previous action from a full-profile observation (profile, payoff).
inline Value opponent_action(const Value& obs, std::size_t self_index) {
    if (!obs.is_tuple() || obs.items().size() != 2 || !obs.item(0).is_tuple())
        throw ShapeError("strategy requires full-profile observations, got " + obs.str());
    const Value& profile = obs.item(0);
    if (profile.items().size() != 2)
        throw ShapeError("strategy requires a two-player action profile");
    return profile.item(self_index == 0 ? 1 : 0);
}

inline Value require_action(const Game& g, std::size_t p, const std::string& name) {
    Value a = Value::atom(name);
    if (!g.actions[p].contains(a))
        throw ValidationError("player " + g.players[p] + " has no action '" + name + "'");
    return a;
}

}  // namespace detail

inline std::vector<std::string> builtin_strategy_names() {
    return {"always-deny",  "always-confess",      "tit-for-tat",          "copy-2/3",
            "grim-trigger", "type-contingent:X,Y", "always-d-with-history"};
}

// Builds a named strategy for one player of a game. The strategy reads the
// game's observation format, so the game and player are needed to wire it.
inline Strategy make_builtin_strategy(const std::string& name, const Game& g,
                                      const std::string& player) {
    std::size_t p = g.player_index(player);
    Value star = Value::atom("*");

    if (name == "always-deny") return constant_strategy(name, detail::require_action(g, p, "d"));
    if (name == "always-confess") return constant_strategy(name, detail::require_action(g, p, "c"));
    if (name.rfind("always-", 0) == 0 && name != "always-d-with-history") {
        // always-<action>: constant play of a named action
        return constant_strategy(name, detail::require_action(g, p, name.substr(7)));
    }

    if (name == "tit-for-tat") {
        Strategy s;
        s.name = name;
        s.epistemic = SpaceDescriptor::enumerated("unit-state", {star});
        s.kind = ChoiceKind::Det;
        s.initial_epistemic = star;
        s.step = [star, p](const Value&, const Value& obs) {
            return Choice::det(Value::pair(star, detail::opponent_action(obs, p)));
        };
        return s;
    }

    if (name == "copy-2/3") {
        if (g.actions[p].enumeration().size() != 2)
            throw ValidationError("copy-2/3 requires exactly two actions");
        std::vector<Value> acts = g.actions[p].enumeration();
        Strategy s;
        s.name = name;
        s.epistemic = SpaceDescriptor::enumerated("unit-state", {star});
        s.kind = ChoiceKind::Prob;
        s.initial_epistemic = star;
        s.step = [star, p, acts](const Value&, const Value& obs) {
            Value mirror = detail::opponent_action(obs, p);
            Value other = mirror == acts[0] ? acts[1] : acts[0];
            return Choice::prob({{Value::pair(star, mirror), 2.0 / 3.0},
                                 {Value::pair(star, other), 1.0 / 3.0}});
        };
        return s;
    }

    if (name == "grim-trigger") {
        Value calm = Value::atom("calm");
        Value trig = Value::atom("triggered");
        Value c = detail::require_action(g, p, "c");
        Value d = detail::require_action(g, p, "d");
        Strategy s;
        s.name = name;
        s.epistemic = SpaceDescriptor::enumerated("trigger-state", {calm, trig});
        s.kind = ChoiceKind::Det;
        s.initial_epistemic = calm;
        s.step = [calm, trig, c, d, p](const Value& e, const Value& obs) {
            if (e == trig) return Choice::det(Value::pair(trig, d));
            Value opp = detail::opponent_action(obs, p);
            if (opp == d) return Choice::det(Value::pair(trig, d));
            return Choice::det(Value::pair(calm, c));
        };
        return s;
    }

    if (name.rfind("type-contingent:", 0) == 0) {
        // type-contingent:X,Y plays X when the observed type class contains
        // MP (or before types are drawn) and Y otherwise.
        std::string args = name.substr(std::string("type-contingent:").size());
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw UnknownStrategyError("type-contingent needs two actions, e.g. "
                                       "type-contingent:U,D");
        Value first = detail::require_action(g, p, args.substr(0, comma));
        Value second = detail::require_action(g, p, args.substr(comma + 1));
        Value mp = Value::atom("MP");
        Strategy s;
        s.name = name;
        s.epistemic = SpaceDescriptor::enumerated("unit-state", {star});
        s.kind = ChoiceKind::Det;
        s.initial_epistemic = star;
        s.step = [star, first, second, mp](const Value&, const Value& obs) {
            bool type_two = obs.is_set() &&
                            std::find(obs.items().begin(), obs.items().end(), mp) ==
                                obs.items().end();
            return Choice::det(Value::pair(star, type_two ? second : first));
        };
        return s;
    }

    if (name == "always-d-with-history") {
        // Plays d unconditionally while recording (own action, signal)
        // pairs. Retained history is capped at a window of 16.
        Value d = detail::require_action(g, p, "d");
        Strategy s;
        s.name = name;
        s.epistemic = SpaceDescriptor::with_membership(
            "history", [](const Value& v) { return v.is_seq(); });
        s.kind = ChoiceKind::Det;
        s.initial_epistemic = Value::seq({});
        s.step = [d](const Value& h, const Value& obs) {
            if (!obs.is_tuple() || obs.items().size() != 3)
                throw ShapeError("history strategy expects (payoff, signal, action) "
                                 "observations, got " + obs.str());
            Value::List hist = h.items();
            hist.push_back(Value::pair(obs.item(2), obs.item(1)));
            if (hist.size() > 16) hist.erase(hist.begin());
            return Choice::det(Value::pair(Value::seq(std::move(hist)), d));
        };
        return s;
    }

    throw UnknownStrategyError("unknown strategy name: " + name);
}

// ---------------------------------------------------------------------------
// Matrix games

inline Game build_matrix_game(const MatrixGameSpec& spec) {
    std::size_t n = spec.players.size();

    std::vector<SpaceDescriptor> action_spaces;
    action_spaces.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        std::vector<Value> acts;
        for (const std::string& a : spec.actions[p]) acts.push_back(Value::atom(a));
        action_spaces.push_back(
            SpaceDescriptor::enumerated("actions:" + spec.players[p], std::move(acts)));
    }
    SpaceDescriptor profile_space = SpaceDescriptor::product("action-profiles", action_spaces);

    std::map<Value, Value> table;
    double max_abs = 0.0;
    for (const auto& [profile, pay] : spec.payoffs) {
        Value::List acts, pays;
        for (const std::string& a : profile) acts.push_back(Value::atom(a));
        for (double x : pay) {
            pays.push_back(Value::real(x));
            max_abs = std::max(max_abs, std::abs(x));
        }
        table.emplace(Value::tuple(std::move(acts)), Value::tuple(std::move(pays)));
    }

    Value star = Value::atom("*");
    SpaceDescriptor states = SpaceDescriptor::enumerated("states", {star});
    auto payoff_tuple = [n](const Value& v) {
        if (!v.is_tuple() || v.items().size() != n) return false;
        for (const Value& x : v.items())
            if (!x.is_number()) return false;
        return true;
    };

    bool repeated = spec.mode == MatrixGameSpec::Mode::Repeated;
    SpaceDescriptor outputs = repeated
        ? SpaceDescriptor::with_membership("payoffs", payoff_tuple)
        : SpaceDescriptor::unit_space();
    SpaceDescriptor results = repeated
        ? SpaceDescriptor::empty_space("no-results")
        : SpaceDescriptor::with_membership("payoffs", payoff_tuple);

    auto step = [table, star, repeated](const Value&, const Value& input) -> Choice {
        auto it = table.find(input);
        if (it == table.end())
            throw MembershipError("no payoff entry for profile " + input.str());
        if (repeated) return Choice::det(step_continue(star, it->second));
        return Choice::det(step_result(it->second));
    };
    Process core = make_process(states, profile_space, outputs, results, ChoiceKind::Det, step);

    // Seeds: default previous actions are the first-listed ones, the
    // default previous output is the zero payoff vector (unit when the
    // game has no outputs).
    Value::List seed_acts;
    for (std::size_t p = 0; p < n; ++p)
        seed_acts.push_back(Value::atom(
            spec.seed_actions ? (*spec.seed_actions)[p] : spec.actions[p].front()));
    Value seed_actions = Value::tuple(std::move(seed_acts));
    Value seed_output = Value::unit();
    if (repeated) {
        Value::List zs;
        for (std::size_t p = 0; p < n; ++p)
            zs.push_back(Value::real(spec.seed_output ? (*spec.seed_output)[p] : 0.0));
        seed_output = Value::tuple(std::move(zs));
        if (spec.seed_output)
            for (double x : *spec.seed_output) max_abs = std::max(max_abs, std::abs(x));
    }

    bool full = spec.visibility == MatrixGameSpec::Visibility::FullProfile;
    std::vector<ObserveFn> observe;
    std::vector<SpaceDescriptor> observations;
    for (std::size_t p = 0; p < n; ++p) {
        auto own_pay = [p](const Value& output) {
            if (output.is_tuple() && p < output.items().size() && output.item(p).is_number())
                return Value::real(output.item(p).as_number());
            return Value::real(0.0);
        };
        if (full) {
            observe.push_back([own_pay](const Value& output, const Value& actions) {
                return Value::pair(actions, own_pay(output));
            });
        } else {
            observe.push_back([own_pay, p](const Value& output, const Value& actions) {
                return Value::pair(own_pay(output), actions.item(p));
            });
        }
        std::vector<Value> obs_values;
        for (const Value& profile : profile_space.enumeration()) {
            Value out = repeated ? table.at(profile) : Value::unit();
            obs_values.push_back(observe.back()(out, profile));
        }
        obs_values.push_back(observe.back()(seed_output, seed_actions));
        observations.push_back(SpaceDescriptor::enumerated(
            "observations:" + spec.players[p], detail::dedup_values(std::move(obs_values))));
    }

    double lambda = spec.discount.value_or(0.5);
    double bound = repeated ? max_abs : (1.0 - lambda) * max_abs;
    OutcomeSpec outcome = discounted_sum(n, lambda, bound);

    return make_game(spec.players, action_spaces, observations, core, observe, outcome, star,
                     seed_output, seed_actions);
}

inline MatrixGameSpec pd_spec() {
    MatrixGameSpec s;
    s.players = {"1", "2"};
    s.actions = {{"c", "d"}, {"c", "d"}};
    s.payoffs = {{{"c", "c"}, {1.0, 1.0}},
                 {{"d", "c"}, {2.0, -1.0}},
                 {{"c", "d"}, {-1.0, 2.0}},
                 {{"d", "d"}, {0.0, 0.0}}};
    s.mode = MatrixGameSpec::Mode::OneShot;
    return s;
}

inline MatrixGameSpec repeated_pd_spec(double lambda = 0.9) {
    MatrixGameSpec s = pd_spec();
    s.mode = MatrixGameSpec::Mode::Repeated;
    s.discount = lambda;
    return s;
}

// ---------------------------------------------------------------------------
// Imperfect public monitoring

// Signal quality parameters; the signal is more likely good the more
// players cooperate, and the stage payoffs are tuned so their expectation
// reproduces the one-shot payoff matrix.
struct MonitoringParams {
    double k = 0.9;
    double m = 0.5;
    double n = 0.1;
};

inline void validate_monitoring_params(const MonitoringParams& p) {
    if (!(p.k <= 1.0 && p.k > p.m && p.m > p.n && p.n >= 0.0))
        throw ParamError("monitoring parameters must satisfy 1 >= k > m > n >= 0");
}

inline Game build_monitoring_game(const MonitoringParams& params, double lambda = 0.9) {
    validate_monitoring_params(params);
    const double k = params.k, m = params.m, n = params.n;

    Value star = Value::atom("*");
    Value good = Value::atom("G"), bad = Value::atom("B");
    Value c = Value::atom("c"), d = Value::atom("d");

    auto stage_payoff = [k, m, n, c, good](const Value& action, const Value& signal) {
        bool coop = action == c;
        bool g = signal == good;
        if (coop && g) return 1.0 + (2.0 - 2.0 * k) / (k - m);
        if (coop) return 1.0 - 2.0 * k / (k - m);
        if (g) return (2.0 - 2.0 * n) / (m - n);
        return -2.0 * n / (m - n);
    };
    auto good_probability = [k, m, n, c](const Value& a1, const Value& a2) {
        bool c1 = a1 == c, c2 = a2 == c;
        if (c1 && c2) return k;
        if (c1 || c2) return m;
        return n;
    };

    SpaceDescriptor a1 = SpaceDescriptor::enumerated("actions:1", {c, d});
    SpaceDescriptor a2 = SpaceDescriptor::enumerated("actions:2", {c, d});
    SpaceDescriptor profile_space = SpaceDescriptor::product("action-profiles", {a1, a2});
    SpaceDescriptor states = SpaceDescriptor::enumerated("states", {star});
    SpaceDescriptor outputs = SpaceDescriptor::with_membership(
        "payoffs-and-signal", [good, bad](const Value& v) {
            return v.is_tuple() && v.items().size() == 3 && v.item(0).is_number() &&
                   v.item(1).is_number() && (v.item(2) == good || v.item(2) == bad);
        });

    auto step = [=](const Value&, const Value& input) -> Choice {
        const Value& x1 = input.item(0);
        const Value& x2 = input.item(1);
        double pg = good_probability(x1, x2);
        auto out = [&](const Value& y) {
            return step_continue(star, Value::tuple({Value::real(stage_payoff(x1, y)),
                                                     Value::real(stage_payoff(x2, y)), y}));
        };
        return Choice::prob({{out(good), pg}, {out(bad), 1.0 - pg}});
    };
    Process core = make_process(states, profile_space, outputs,
                                SpaceDescriptor::empty_space("no-results"), ChoiceKind::Prob,
                                step);

    Value seed_output = Value::tuple({Value::real(0.0), Value::real(0.0), good});
    Value seed_actions = Value::pair(c, c);

    std::vector<ObserveFn> observe;
    std::vector<SpaceDescriptor> observations;
    for (std::size_t p = 0; p < 2; ++p) {
        observe.push_back([p](const Value& output, const Value& actions) {
            return Value::tuple({output.item(p), output.item(2), actions.item(p)});
        });
        std::vector<Value> obs_values;
        for (const Value& a : {c, d})
            for (const Value& y : {good, bad})
                obs_values.push_back(Value::tuple({Value::real(stage_payoff(a, y)), y, a}));
        obs_values.push_back(observe.back()(seed_output, seed_actions));
        observations.push_back(SpaceDescriptor::enumerated(
            "observations:" + std::to_string(p + 1), detail::dedup_values(std::move(obs_values))));
    }

    double max_abs = 0.0;
    for (const Value& a : {c, d})
        for (const Value& y : {good, bad}) max_abs = std::max(max_abs, std::abs(stage_payoff(a, y)));

    return make_game({"1", "2"}, {a1, a2}, observations, core, observe,
                     discounted_sum(2, lambda, max_abs), star, seed_output, seed_actions);
}

// ---------------------------------------------------------------------------
// Incomplete information (a Bayesian game of four 2x2 tables)

// Nature draws one of four payoff tables in round one; round two plays the
// drawn table and ends the game. Each player observes only an equivalence
// class of the drawn table.
inline Game build_bayesian_game(double lambda = 0.9) {
    Value star = Value::atom("*");
    Value mp = Value::atom("MP"), pd = Value::atom("PD");
    Value cg = Value::atom("CG"), bs = Value::atom("BS");
    Value u = Value::atom("U"), dn = Value::atom("D");
    Value l = Value::atom("L"), r = Value::atom("R");

    SpaceDescriptor a1 = SpaceDescriptor::enumerated("actions:1", {u, dn});
    SpaceDescriptor a2 = SpaceDescriptor::enumerated("actions:2", {l, r});
    SpaceDescriptor profile_space = SpaceDescriptor::product("action-profiles", {a1, a2});
    SpaceDescriptor states = SpaceDescriptor::enumerated("states", {star, mp, pd, cg, bs});
    SpaceDescriptor outputs = SpaceDescriptor::enumerated("types", {star, mp, pd, cg, bs});
    SpaceDescriptor results = SpaceDescriptor::with_membership("payoffs", [](const Value& v) {
        return v.is_tuple() && v.items().size() == 2 && v.item(0).is_number() &&
               v.item(1).is_number();
    });

    auto pay = [](double x, double y) {
        return Value::tuple({Value::real(x), Value::real(y)});
    };
    // type -> 2x2 table indexed by (row action U/D, column action L/R)
    std::map<Value, std::map<Value, Value>> tables;
    tables[mp] = {{Value::pair(u, l), pay(2, 0)},
                  {Value::pair(u, r), pay(0, 2)},
                  {Value::pair(dn, l), pay(0, 2)},
                  {Value::pair(dn, r), pay(2, 0)}};
    tables[pd] = {{Value::pair(u, l), pay(2, 2)},
                  {Value::pair(u, r), pay(0, 3)},
                  {Value::pair(dn, l), pay(3, 0)},
                  {Value::pair(dn, r), pay(1, 1)}};
    tables[cg] = {{Value::pair(u, l), pay(2, 0)},
                  {Value::pair(u, r), pay(0, 0)},
                  {Value::pair(dn, l), pay(0, 0)},
                  {Value::pair(dn, r), pay(1, 1)}};
    tables[bs] = {{Value::pair(u, l), pay(2, 1)},
                  {Value::pair(u, r), pay(0, 0)},
                  {Value::pair(dn, l), pay(0, 0)},
                  {Value::pair(dn, r), pay(1, 2)}};

    auto step = [=](const Value& state, const Value& input) -> Choice {
        if (state == star) {
            return Choice::prob({{step_continue(mp, mp), 0.3},
                                 {step_continue(pd, pd), 0.1},
                                 {step_continue(cg, cg), 0.2},
                                 {step_continue(bs, bs), 0.4}});
        }
        return Choice::prob({{step_result(tables.at(state).at(input)), 1.0}});
    };
    Process core =
        make_process(states, profile_space, outputs, results, ChoiceKind::Prob, step);

    Value class_1_1 = Value::set({mp, pd});  // player 1, type 1
    Value class_1_2 = Value::set({cg, bs});
    Value class_2_1 = Value::set({mp, cg});  // player 2, type 1
    Value class_2_2 = Value::set({pd, bs});

    std::vector<ObserveFn> observe = {
        [=](const Value& output, const Value&) -> Value {
            if (output == star) return star;
            return (output == mp || output == pd) ? class_1_1 : class_1_2;
        },
        [=](const Value& output, const Value&) -> Value {
            if (output == star) return star;
            return (output == mp || output == cg) ? class_2_1 : class_2_2;
        }};
    std::vector<SpaceDescriptor> observations = {
        SpaceDescriptor::enumerated("observations:1", {star, class_1_1, class_1_2}),
        SpaceDescriptor::enumerated("observations:2", {star, class_2_1, class_2_2})};

    // Outputs are type labels (payoff contribution zero); results are
    // bounded by 3, so M = (1 - lambda) * 3 certifies truncations.
    return make_game({"1", "2"}, {a1, a2}, observations, core, observe,
                     discounted_sum(2, lambda, (1.0 - lambda) * 3.0), star, star,
                     Value::pair(u, l));
}

// ---------------------------------------------------------------------------
// Endogenous network formation

// Players jointly rewrite a friendship graph: each turn everyone may
// befriend or unfriend one other player or pass. Simultaneous befriend and
// unfriend of the same edge resolve to removal.
inline Game build_network_game(int nodes, double lambda = 0.5) {
    if (nodes < 2) throw SizeError("network game needs at least 2 nodes");
    if (nodes > 6) throw SizeError("network game supports at most 6 nodes");
    std::size_t nn = static_cast<std::size_t>(nodes);

    std::vector<std::string> players;
    for (std::size_t p = 1; p <= nn; ++p) players.push_back(std::to_string(p));

    std::vector<Value> all_edges;
    for (std::size_t p = 0; p < nn; ++p)
        for (std::size_t q = p + 1; q < nn; ++q)
            all_edges.push_back(
                Value::set({Value::atom(players[p]), Value::atom(players[q])}));

    std::vector<Value> graphs;
    std::size_t edge_count = all_edges.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << edge_count); ++mask) {
        Value::List es;
        for (std::size_t e = 0; e < edge_count; ++e)
            if (mask & (std::size_t{1} << e)) es.push_back(all_edges[e]);
        graphs.push_back(Value::set(std::move(es)));
    }
    SpaceDescriptor states = SpaceDescriptor::enumerated("graphs", graphs);
    SpaceDescriptor outputs = SpaceDescriptor::enumerated("graphs", graphs);

    std::vector<SpaceDescriptor> action_spaces;
    for (std::size_t p = 0; p < nn; ++p) {
        std::vector<Value> acts = {Value::atom("pass")};
        for (std::size_t q = 0; q < nn; ++q) {
            if (q == p) continue;
            acts.push_back(Value::atom("befriend:" + players[q]));
            acts.push_back(Value::atom("unfriend:" + players[q]));
        }
        action_spaces.push_back(
            SpaceDescriptor::enumerated("actions:" + players[p], std::move(acts)));
    }
    SpaceDescriptor profile_space = SpaceDescriptor::product("action-profiles", action_spaces);

    std::vector<std::string> player_ids = players;
    auto step = [player_ids](const Value& state, const Value& input) -> Choice {
        std::vector<Value> adds, removes;
        for (std::size_t p = 0; p < player_ids.size(); ++p) {
            const std::string& a = input.item(p).atom_name();
            if (a == "pass") continue;
            auto colon = a.find(':');
            Value edge = Value::set(
                {Value::atom(player_ids[p]), Value::atom(a.substr(colon + 1))});
            if (a.rfind("befriend:", 0) == 0) adds.push_back(std::move(edge));
            else removes.push_back(std::move(edge));
        }
        Value::List edges = state.items();
        for (const Value& e : adds)
            if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
        Value::List kept;
        for (const Value& e : edges)
            if (std::find(removes.begin(), removes.end(), e) == removes.end())
                kept.push_back(e);
        Value next = Value::set(std::move(kept));
        return Choice::det(step_continue(next, next));
    };
    Process core = make_process(states, profile_space, outputs,
                                SpaceDescriptor::empty_space("no-results"), ChoiceKind::Det,
                                step);

    std::vector<ObserveFn> observe;
    std::vector<SpaceDescriptor> observations;
    for (std::size_t p = 0; p < nn; ++p) {
        observe.push_back([](const Value& output, const Value&) { return output; });
        observations.push_back(outputs);
    }

    Value::List all_pass;
    for (std::size_t p = 0; p < nn; ++p) all_pass.push_back(Value::atom("pass"));
    Value empty_graph = Value::set({});

    return make_game(players, action_spaces, observations, core, observe,
                     discounted_sum(nn, lambda, 0.0), empty_graph, empty_graph,
                     Value::tuple(std::move(all_pass)));
}

// ---------------------------------------------------------------------------
// Catalog registry

struct CatalogOptions {
    MonitoringParams monitoring;
    std::optional<double> lambda;  // overrides the entry's default discount
    int network_nodes = 2;
};

inline std::vector<std::string> catalog_names() {
    return {"pd", "pd-repeated", "monitoring", "bayesian", "network"};
}

inline Game catalog_game(const std::string& name, const CatalogOptions& opts = {}) {
    if (name == "pd") {
        MatrixGameSpec s = pd_spec();
        if (opts.lambda) s.discount = *opts.lambda;
        return build_matrix_game(s);
    }
    if (name == "pd-repeated") return build_matrix_game(repeated_pd_spec(opts.lambda.value_or(0.9)));
    if (name == "monitoring")
        return build_monitoring_game(opts.monitoring, opts.lambda.value_or(0.9));
    if (name == "bayesian") return build_bayesian_game(opts.lambda.value_or(0.9));
    if (name == "network") return build_network_game(opts.network_nodes, opts.lambda.value_or(0.5));
    throw ValidationError("unknown catalog game: " + name);
}

// Deterministic candidate lists used by the command line checks.
inline std::vector<Strategy> default_candidates(const std::string& catalog_name, const Game& g,
                                                const std::string& player) {
    std::vector<Strategy> out;
    if (catalog_name == "bayesian") {
        std::size_t p = g.player_index(player);
        const auto& acts = g.actions[p].enumeration();
        for (const Value& x : acts)
            for (const Value& y : acts)
                out.push_back(make_builtin_strategy(
                    "type-contingent:" + x.atom_name() + "," + y.atom_name(), g, player));
        return out;
    }
    if (catalog_name == "monitoring") {
        out.push_back(make_builtin_strategy("always-deny", g, player));
        out.push_back(make_builtin_strategy("always-confess", g, player));
        out.push_back(make_builtin_strategy("always-d-with-history", g, player));
        return out;
    }
    if (catalog_name == "network") {
        std::size_t p = g.player_index(player);
        for (const Value& a : g.actions[p].enumeration())
            out.push_back(constant_strategy("always-" + a.atom_name(), a));
        return out;
    }
    // Matrix games: one constant strategy per action, plus tit-for-tat on
    // two-player games whose observations expose the action profile.
    std::size_t p = g.player_index(player);
    for (const Value& a : g.actions[p].enumeration()) {
        std::string nm = a == Value::atom("d")   ? "always-deny"
                         : a == Value::atom("c") ? "always-confess"
                                                 : "always-" + a.atom_name();
        out.push_back(constant_strategy(std::move(nm), a));
    }
    if (g.players.size() == 2) {
        Value seed_obs = g.observe[p](g.seed_output, g.seed_actions);
        if (seed_obs.is_tuple() && seed_obs.items().size() == 2 && seed_obs.item(0).is_tuple())
            out.push_back(make_builtin_strategy("tit-for-tat", g, player));
    }
    return out;
}

}  // namespace koalg

#endif  // KOALG_CATALOG_HPP
