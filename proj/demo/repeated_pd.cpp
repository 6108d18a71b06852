// Closes the repeated prisoner's dilemma over two strategies, rolls the
// play out for a few turns and checks the always-deny equilibrium.

#include <iostream>

#include "koalg/koalg.hpp"

using namespace koalg;

int main() {
    Game g = catalog_game("pd-repeated");

    StrategyProfile tft;
    tft.assigned.emplace("1", make_builtin_strategy("tit-for-tat", g, "1"));
    tft.assigned.emplace("2", make_builtin_strategy("always-deny", g, "2"));

    Process closed = fix_strategies(g, tft);
    auto trace = rollout(closed, closed_initial_state(g, tft), 5, 0);
    std::cout << "tit-for-tat vs always-deny:\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        std::cout << "  turn " << (i + 1) << " payoffs " << trace[i].output->str() << "\n";

    StrategyProfile deny;
    deny.assigned.emplace("1", make_builtin_strategy("always-deny", g, "1"));
    deny.assigned.emplace("2", make_builtin_strategy("always-deny", g, "2"));
    CandidateSet candidates;
    for (const std::string& p : g.players)
        candidates[p] = default_candidates("pd-repeated", g, p);

    Verdict v = nash_check(g, deny, candidates, 1e-6);
    std::cout << "always-deny profile: " << verdict_status_name(v.status) << ", outcome ["
              << v.outcome->value[0] << ", " << v.outcome->value[1] << "]\n";
    return 0;
}
