// Builds a two-state deterministic process by hand, unravels it into a
// bounded tree and prints the DOT rendering.

#include <iostream>

#include "koalg/koalg.hpp"

using namespace koalg;

int main() {
    Value sa = Value::atom("sa"), sb = Value::atom("sb");
    Value a = Value::atom("a"), b = Value::atom("b");
    Value zero = Value::integer(0), one = Value::integer(1);

    SpaceDescriptor states = SpaceDescriptor::enumerated("states", {sa, sb});
    SpaceDescriptor inputs = SpaceDescriptor::enumerated("bits", {zero, one});
    SpaceDescriptor outputs = SpaceDescriptor::enumerated("letters", {a, b});

    // From state s_x, input 0 goes to s_a and input 1 to s_b; the output is
    // the letter of the state the step left.
    Process p = make_process(
        states, inputs, outputs, SpaceDescriptor::empty_space(), ChoiceKind::Det,
        [=](const Value& s, const Value& i) {
            Value out = s == sa ? a : b;
            return Choice::det(step_continue(i == zero ? sa : sb, out));
        });

    GameTree t = unfold(p, sa, 3);
    std::cout << tree_to_dot(t);
    return 0;
}
