// Command line front end: catalog and JSON-defined games, strategy
// attachment, tree export, outcome evaluation and equilibrium checks.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "koalg/koalg.hpp"

namespace {

using namespace koalg;

struct CommonArgs {
    std::string game;
    std::string spec_path;
    std::vector<std::string> strategy_args;
    double k = 0.9, m = 0.5, n = 0.1;
    std::optional<double> lambda;
    double eps = 1e-6;
    int depth = 3;
    int turns = 10;
    int nmax = 1;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out_path;
};

void add_game_options(CLI::App* cmd, CommonArgs& a, bool game_required) {
    auto* pos = cmd->add_option("game", a.game, "catalog game name");
    cmd->add_option("--spec", a.spec_path, "game description file (koalg-matrix/1)");
    if (game_required) pos->required(false);
    cmd->add_option("--strategy", a.strategy_args,
                    "strategy assignment player=name (repeatable)");
    cmd->add_option("--lambda", a.lambda, "discount factor override");
    cmd->add_option("--eps", a.eps, "certified outcome tolerance");
    cmd->add_option("--depth", a.depth, "tree depth bound");
    cmd->add_option("--turns", a.turns, "rollout turn bound");
    cmd->add_option("--nmax", a.nmax, "subgame perfection horizon");
    cmd->add_option("--seed", a.seed, "random seed (default: KOALG_SEED or 0)");
    cmd->add_option("--k", a.k, "monitoring parameter k");
    cmd->add_option("--m", a.m, "monitoring parameter m");
    cmd->add_option("--n", a.n, "monitoring parameter n");
    cmd->add_option("--format", a.format, "output format: json|dot|text")
        ->check(CLI::IsMember({"json", "dot", "text"}));
    cmd->add_option("--out", a.out_path, "write output to a file instead of stdout");
}

struct LoadedGame {
    Game game;
    std::string kind;  // catalog name, or "spec" for description files
};

LoadedGame load_game(const CommonArgs& a) {
    if (!a.spec_path.empty()) {
        std::ifstream in(a.spec_path);
        if (!in) throw ParseError("cannot open game description: " + a.spec_path);
        std::stringstream buf;
        buf << in.rdbuf();
        MatrixGameSpec spec = parse_matrix_spec(buf.str());
        if (a.lambda) spec.discount = *a.lambda;
        return {build_matrix_game(spec), "spec"};
    }
    if (a.game.empty()) throw ValidationError("a game name or --spec file is required");
    CatalogOptions opts;
    opts.monitoring = MonitoringParams{a.k, a.m, a.n};
    opts.lambda = a.lambda;
    return {catalog_game(a.game, opts), a.game};
}

StrategyProfile parse_profile(const CommonArgs& a, const Game& g) {
    StrategyProfile profile;
    for (const std::string& arg : a.strategy_args) {
        auto eq = arg.find('=');
        if (eq == std::string::npos)
            throw ValidationError("strategy assignments take the form player=name: " + arg);
        std::string player = arg.substr(0, eq);
        std::string name = arg.substr(eq + 1);
        profile.assigned.insert_or_assign(player, make_builtin_strategy(name, g, player));
    }
    return profile;
}

CandidateSet candidates_for(const LoadedGame& lg) {
    CandidateSet out;
    for (const std::string& player : lg.game.players)
        out[player] = default_candidates(lg.kind, lg.game, player);
    return out;
}

void emit(const CommonArgs& a, const std::string& text) {
    if (a.out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(a.out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + a.out_path);
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

std::string verdict_text(const Verdict& v) {
    std::ostringstream os;
    os << v.kind << ": " << verdict_status_name(v.status);
    if (v.outcome) {
        os << "  outcome = [";
        for (std::size_t i = 0; i < v.outcome->value.size(); ++i) {
            if (i) os << ", ";
            os << json_real_brief(v.outcome->value[i], 9);
        }
        os << "] +/- " << json_real_brief(v.outcome->error_bound, 3);
    }
    if (v.witness) {
        os << "\n  worst alternative: player " << v.witness->player << " -> "
           << v.witness->alternative;
        if (v.witness->prefix) os << " (prefix " << *v.witness->prefix << ")";
        os << ", baseline " << json_real_brief(v.witness->baseline_value, 9) << " vs "
           << json_real_brief(v.witness->alternative_value, 9);
    }
    return os.str();
}

int run_command(const std::string& command, const CommonArgs& a) {
    if (command == "list") {
        if (a.format == "text") {
            std::string out = "games:";
            for (const auto& n : catalog_names()) out += " " + n;
            out += "\nstrategies:";
            for (const auto& n : builtin_strategy_names()) out += " " + n;
            emit(a, out);
            return 0;
        }
        std::string out = "{\"games\":[";
        const auto games = catalog_names();
        for (std::size_t i = 0; i < games.size(); ++i) {
            if (i) out += ",";
            out += json_escape(games[i]);
        }
        out += "],\"strategies\":[";
        const auto strats = builtin_strategy_names();
        for (std::size_t i = 0; i < strats.size(); ++i) {
            if (i) out += ",";
            out += json_escape(strats[i]);
        }
        out += "]}";
        emit(a, out);
        return 0;
    }

    LoadedGame lg = load_game(a);
    const Game& g = lg.game;

    if (command == "tree") {
        GameTree t;
        if (a.strategy_args.empty()) {
            t = unfold(g.core, g.initial_state, a.depth);
        } else {
            StrategyProfile profile = parse_profile(a, g);
            Process closed = fix_strategies(g, profile);
            t = unfold(closed, closed_initial_state(g, profile), a.depth);
        }
        if (a.format == "dot") {
            emit(a, tree_to_dot(t));
        } else if (a.format == "text") {
            TreeStats st = tree_stats(t);
            std::ostringstream os;
            os << "kind=" << choice_kind_name(t.kind) << " depth=" << t.depth_bound
               << " nodes=" << st.node_count << " result_leaves=" << st.result_leaves
               << " truncated=" << st.truncated_leaves << " max_branching=" << st.max_branching;
            emit(a, os.str());
        } else {
            emit(a, tree_to_json(t));
        }
        return 0;
    }

    if (command == "run") {
        StrategyProfile profile = parse_profile(a, g);
        Process closed = fix_strategies(g, profile);
        auto trace = rollout(closed, closed_initial_state(g, profile), a.turns, a.seed);
        if (a.format == "text") {
            std::ostringstream os;
            for (std::size_t i = 0; i < trace.size(); ++i) {
                os << "turn " << (i + 1) << ": ";
                if (trace[i].result) os << "result " << trace[i].result->str();
                else os << "output " << trace[i].output->str();
                if (i + 1 < trace.size()) os << "\n";
            }
            emit(a, os.str());
        } else {
            emit(a, trace_to_json(trace));
        }
        return 0;
    }

    if (command == "outcome") {
        StrategyProfile profile = parse_profile(a, g);
        Process closed = fix_strategies(g, profile);
        OutcomeResult r =
            evaluate_to_tolerance(closed, closed_initial_state(g, profile), g.outcome, a.eps);
        if (a.format == "text") {
            std::ostringstream os;
            os << "value = [";
            for (std::size_t i = 0; i < r.value.size(); ++i) {
                if (i) os << ", ";
                os << json_real_brief(r.value[i], 12);
            }
            os << "] +/- " << json_real_brief(r.error_bound, 3)
               << (r.exact ? " (exact)" : " (certified)");
            emit(a, os.str());
        } else {
            emit(a, outcome_to_json(r));
        }
        return 0;
    }

    if (command == "nash" || command == "spc") {
        StrategyProfile profile = parse_profile(a, g);
        CandidateSet candidates = candidates_for(lg);
        Verdict v = command == "nash"
                        ? nash_check(g, profile, candidates, a.eps)
                        : subgame_perfect_check(g, profile, candidates, a.nmax, a.eps);
        emit(a, a.format == "text" ? verdict_text(v) : verdict_to_json(v));
        return 0;
    }

    throw ValidationError("unknown command: " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coalgebraic game engine"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"run", "tree", "outcome", "nash", "spc", "list"};
    std::map<std::string, CommonArgs> args;
    for (const std::string& c : commands) {
        auto* cmd = app.add_subcommand(c);
        args[c] = CommonArgs{};
        if (const char* env = std::getenv("KOALG_SEED")) args[c].seed = std::strtoull(env, nullptr, 10);
        add_game_options(cmd, args[c], c != "list");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        for (const std::string& c : commands)
            if (app.got_subcommand(c)) return run_command(c, args[c]);
        std::cerr << "error: no command given\n";
        return 2;
    } catch (const koalg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
