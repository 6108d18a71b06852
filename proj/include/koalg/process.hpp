#ifndef KOALG_PROCESS_HPP
#define KOALG_PROCESS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "koalg/choice.hpp"
#include "koalg/errors.hpp"
#include "koalg/space.hpp"
#include "koalg/value.hpp"

namespace koalg {

// ---------------------------------------------------------------------------
// Step outcome encoding. One step of a process either terminates with a
// result or continues with a successor state and an output. Both cases are
// plain Values so they can live inside a Choice.

inline Value step_result(Value r) { return Value::tagged("result", std::move(r)); }

inline Value step_continue(Value state, Value output) {
    return Value::tagged("continue", Value::pair(std::move(state), std::move(output)));
}

inline bool is_step_result(const Value& v) { return v.has_tag("result"); }
inline bool is_step_continue(const Value& v) { return v.has_tag("continue"); }

inline const Value& result_of(const Value& v) {
    if (!is_step_result(v)) throw ValidationError("not a result step: " + v.str());
    return v.payload();
}

inline const Value& continue_state(const Value& v) {
    if (!is_step_continue(v)) throw ValidationError("not a continue step: " + v.str());
    return v.payload().item(0);
}

inline const Value& continue_output(const Value& v) {
    if (!is_step_continue(v)) throw ValidationError("not a continue step: " + v.str());
    return v.payload().item(1);
}

// Canonical injection helpers for sum-shaped spaces.
inline Value inj_left(Value v) { return Value::tagged("L", std::move(v)); }
inline Value inj_right(Value v) { return Value::tagged("R", std::move(v)); }

// ---------------------------------------------------------------------------

// A process: a state space, input/output/result spaces, a choice kind and
// a total step mapping (state, input) -> Choice over (result | continue).
// Step mappings must be pure; processes are immutable and freely shared.
class Process {
public:
    using StepFn = std::function<Choice(const Value& state, const Value& input)>;

    Process(SpaceDescriptor states, SpaceDescriptor inputs, SpaceDescriptor outputs,
            SpaceDescriptor results, ChoiceKind kind, StepFn step)
        : states_(std::move(states)),
          inputs_(std::move(inputs)),
          outputs_(std::move(outputs)),
          results_(std::move(results)),
          kind_(kind),
          step_(std::move(step)) {}

    const SpaceDescriptor& states() const { return states_; }
    const SpaceDescriptor& inputs() const { return inputs_; }
    const SpaceDescriptor& outputs() const { return outputs_; }
    const SpaceDescriptor& results() const { return results_; }
    ChoiceKind kind() const { return kind_; }

    // Raw step access without membership checks; used by combinators that
    // construct arguments known to be in-space.
    Choice step(const Value& state, const Value& input) const {
        Choice c = step_(state, input);
        if (c.kind() != kind_)
            throw ValidationError("step produced a " +
                                  std::string(choice_kind_name(c.kind())) +
                                  " choice but the process is declared " +
                                  choice_kind_name(kind_));
        return c;
    }

    // Membership-checked step access for external callers and tests.
    Choice probe(const Value& state, const Value& input) const {
        if (states_.has_membership_info() && !states_.contains(state))
            throw MembershipError("state " + state.str() + " is not in space '" +
                                  states_.name() + "'");
        if (inputs_.has_membership_info() && !inputs_.contains(input))
            throw MembershipError("input " + input.str() + " is not in space '" +
                                  inputs_.name() + "'");
        return step(state, input);
    }

private:
    SpaceDescriptor states_;
    SpaceDescriptor inputs_;
    SpaceDescriptor outputs_;
    SpaceDescriptor results_;
    ChoiceKind kind_;
    StepFn step_;
};

namespace detail {

// Shared validation for one probed step outcome.
inline void check_step_choice(const Process& p, const Value& state, const Value& input,
                              const Choice& c) {
    for (const Value& el : c.support()) {
        if (is_step_result(el)) {
            if (p.results().has_membership_info() && !p.results().contains(result_of(el)))
                throw ValidationError("step at (" + state.str() + ", " + input.str() +
                                      ") leaves the result space: " + el.str());
        } else if (is_step_continue(el)) {
            if (p.states().has_membership_info() && !p.states().contains(continue_state(el)))
                throw ValidationError("step at (" + state.str() + ", " + input.str() +
                                      ") leaves the state space: " + el.str());
            if (p.outputs().has_membership_info() && !p.outputs().contains(continue_output(el)))
                throw ValidationError("step at (" + state.str() + ", " + input.str() +
                                      ") leaves the output space: " + el.str());
        } else {
            throw ValidationError("step produced a value that is neither a result nor a "
                                  "continuation: " + el.str());
        }
    }
}

}  // namespace detail

// Validating constructor. When both the state and the input space are
// enumerated and small, every (state, input) pair is probed and the step
// outcomes are checked against the declared spaces.
inline Process make_process(SpaceDescriptor states, SpaceDescriptor inputs,
                            SpaceDescriptor outputs, SpaceDescriptor results,
                            ChoiceKind kind, Process::StepFn step,
                            std::size_t validation_cap = 10000) {
    Process p(std::move(states), std::move(inputs), std::move(outputs), std::move(results),
              kind, std::move(step));
    if (p.states().has_enumeration() && p.inputs().has_enumeration()) {
        std::size_t pairs = p.states().enumeration().size() * p.inputs().enumeration().size();
        if (pairs <= validation_cap) {
            for (const Value& s : p.states().enumeration()) {
                for (const Value& i : p.inputs().enumeration()) {
                    Choice c = [&] {
                        try {
                            return p.step(s, i);
                        } catch (const Error&) {
                            throw;
                        } catch (const std::exception& e) {
                            throw ValidationError("step failed at (" + s.str() + ", " +
                                                  i.str() + "): " + e.what());
                        }
                    }();
                    detail::check_step_choice(p, s, i, c);
                }
            }
        }
    }
    return p;
}

// Sum: depending on the state, either the first or the second process
// takes the step. Both must share the input space and the choice functor.
inline Process sum(const Process& p0, const Process& p1) {
    if (p0.kind() != p1.kind())
        throw KindMismatchError("sum requires both processes to use the same choice functor");
    if (!same_space(p0.inputs(), p1.inputs()))
        throw InputMismatchError("sum requires both processes to share the input space");
    SpaceDescriptor states =
        SpaceDescriptor::sum(p0.states().name() + "+" + p1.states().name(), p0.states(), p1.states());
    SpaceDescriptor outputs =
        SpaceDescriptor::sum(p0.outputs().name() + "+" + p1.outputs().name(), p0.outputs(), p1.outputs());
    SpaceDescriptor results =
        SpaceDescriptor::sum(p0.results().name() + "+" + p1.results().name(), p0.results(), p1.results());
    auto side = [p0, p1](bool left) { return left ? p0 : p1; };
    auto step = [side](const Value& state, const Value& input) -> Choice {
        bool left = state.has_tag("L");
        if (!left && !state.has_tag("R"))
            throw MembershipError("sum state must be an L/R injection: " + state.str());
        const std::string tag = left ? "L" : "R";
        Choice c = side(left).step(state.payload(), input);
        return c.map([&tag](const Value& el) {
            if (is_step_result(el)) return step_result(Value::tagged(tag, result_of(el)));
            return step_continue(Value::tagged(tag, continue_state(el)),
                                 Value::tagged(tag, continue_output(el)));
        });
    };
    return Process(std::move(states), p0.inputs(), std::move(outputs), std::move(results),
                   p0.kind(), std::move(step));
}

// Product: both components step simultaneously. Results of the combined
// process live in R0xR1 + R0 + R1, tagged "Both", "L0" and "L1"; the lone
// result cases fire when exactly one component terminates on this step.
inline Process product(const Process& p0, const Process& p1) {
    ChoiceKind ck = combine_kinds(p0.kind(), p1.kind());
    SpaceDescriptor states = SpaceDescriptor::product(
        p0.states().name() + "x" + p1.states().name(), {p0.states(), p1.states()});
    SpaceDescriptor inputs = SpaceDescriptor::product(
        p0.inputs().name() + "x" + p1.inputs().name(), {p0.inputs(), p1.inputs()});
    SpaceDescriptor outputs = SpaceDescriptor::product(
        p0.outputs().name() + "x" + p1.outputs().name(), {p0.outputs(), p1.outputs()});
    SpaceDescriptor both = SpaceDescriptor::product(
        p0.results().name() + "x" + p1.results().name(), {p0.results(), p1.results()});
    SpaceDescriptor results = SpaceDescriptor::tagged_union(
        "results(" + p0.results().name() + "," + p1.results().name() + ")",
        {{"Both", both}, {"L0", p0.results()}, {"L1", p1.results()}});
    auto step = [p0, p1](const Value& state, const Value& input) -> Choice {
        const Value& s0 = state.item(0);
        const Value& s1 = state.item(1);
        const Value& i0 = input.item(0);
        const Value& i1 = input.item(1);
        Choice joint = pair_choices(p0.step(s0, i0), p1.step(s1, i1));
        return joint.map([](const Value& pr) {
            const Value& x0 = pr.item(0);
            const Value& x1 = pr.item(1);
            bool r0 = is_step_result(x0);
            bool r1 = is_step_result(x1);
            if (r0 && r1)
                return step_result(
                    Value::tagged("Both", Value::pair(result_of(x0), result_of(x1))));
            if (r0) return step_result(Value::tagged("L0", result_of(x0)));
            if (r1) return step_result(Value::tagged("L1", result_of(x1)));
            return step_continue(Value::pair(continue_state(x0), continue_state(x1)),
                                 Value::pair(continue_output(x0), continue_output(x1)));
        });
    };
    return Process(std::move(states), std::move(inputs), std::move(outputs), std::move(results),
                   ck, std::move(step));
}

// Rewrites the state-output pair after each step; results pass through.
inline Process map_output(const Process& p, SpaceDescriptor new_outputs,
                          std::function<std::pair<Value, Value>(const Value&, const Value&)> f) {
    auto step = [p, f](const Value& state, const Value& input) -> Choice {
        return p.step(state, input).map([&f](const Value& el) {
            if (is_step_result(el)) return el;
            auto [s, o] = f(continue_state(el), continue_output(el));
            return step_continue(std::move(s), std::move(o));
        });
    };
    return Process(p.states(), p.inputs(), std::move(new_outputs), p.results(), p.kind(),
                   std::move(step));
}

// Rewrites the input before each step.
inline Process map_input(SpaceDescriptor new_inputs, std::function<Value(const Value&)> f,
                         const Process& p) {
    auto step = [p, f](const Value& state, const Value& input) -> Choice {
        return p.step(state, f(input));
    };
    return Process(p.states(), std::move(new_inputs), p.outputs(), p.results(), p.kind(),
                   std::move(step));
}

// Feedback: the process must take inputs from a product I x O where O is
// its own output space; the new process stores the previous output in its
// state and supplies it as the second input component.
inline Process feedback(const Process& p) {
    const auto* parts = p.inputs().product_parts();
    if (!parts || parts->size() != 2)
        throw ShapeError("feedback requires an input space that is a product of two factors");
    if (!same_space((*parts)[1], p.outputs()))
        throw ShapeError("feedback requires the second input factor to be the output space");
    SpaceDescriptor reduced_inputs = (*parts)[0];
    SpaceDescriptor states = SpaceDescriptor::product(
        p.states().name() + "x" + p.outputs().name(), {p.states(), p.outputs()});
    auto step = [p](const Value& state, const Value& input) -> Choice {
        const Value& s = state.item(0);
        const Value& prev = state.item(1);
        Choice c = p.step(s, Value::pair(input, prev));
        return c.map([](const Value& el) {
            if (is_step_result(el)) return el;
            const Value& s2 = continue_state(el);
            const Value& o2 = continue_output(el);
            return step_continue(Value::pair(s2, o2), o2);
        });
    };
    return Process(std::move(states), std::move(reduced_inputs), p.outputs(), p.results(),
                   p.kind(), std::move(step));
}

// Cascade: feeds the first process's outputs into the second within one
// combined step. Results are P + R (tags "L"/"R"); when the second process
// terminates, the pending state of the first is dropped.
inline Process cascade(const Process& p, const Process& q) {
    ChoiceKind ck = combine_kinds(p.kind(), q.kind());
    if (!same_space(p.outputs(), q.inputs()))
        throw ShapeError("cascade requires the first process's outputs to be the second's inputs");
    SpaceDescriptor states = SpaceDescriptor::product(
        p.states().name() + "x" + q.states().name(), {p.states(), q.states()});
    SpaceDescriptor results = SpaceDescriptor::sum(
        p.results().name() + "+" + q.results().name(), p.results(), q.results());
    ChoiceKind qk = q.kind();
    auto step = [p, q, qk](const Value& state, const Value& input) -> Choice {
        const Value& s = state.item(0);
        const Value& t = state.item(1);
        Choice first = p.step(s, input);
        // Apply the distributive law elementwise, then flatten: every
        // element of the first step becomes an inner choice of q's kind.
        BasicChoice<Choice> nested = first.map([&](const Value& el) -> Choice {
            if (is_step_result(el)) return Choice::point(qk, el);
            const Value& s2 = continue_state(el);
            const Value& m = continue_output(el);
            return distribute_pair(s2, q.step(t, m));
        });
        Choice flat = flatten(nested);
        return flat.map([](const Value& el) {
            if (is_step_result(el))  // a result of p, passed through
                return step_result(inj_left(result_of(el)));
            // el = (s2, x) where x is q's step outcome
            const Value& s2 = el.item(0);
            const Value& x = el.item(1);
            if (is_step_result(x)) return step_result(inj_right(result_of(x)));
            return step_continue(Value::pair(s2, continue_state(x)), continue_output(x));
        });
    };
    return Process(std::move(states), p.inputs(), q.outputs(), std::move(results), ck,
                   std::move(step));
}

// Conjugates a process along a bijection between state encodings. Inputs,
// outputs and results are untouched; `to_old` maps new states to old ones
// and `to_new` the other way.
inline Process reindex_states(const Process& p, SpaceDescriptor new_states,
                              std::function<Value(const Value&)> to_old,
                              std::function<Value(const Value&)> to_new) {
    auto step = [p, to_old, to_new](const Value& state, const Value& input) -> Choice {
        return p.step(to_old(state), input).map([&to_new](const Value& el) {
            if (is_step_result(el)) return el;
            return step_continue(to_new(continue_state(el)), continue_output(el));
        });
    };
    return Process(std::move(new_states), p.inputs(), p.outputs(), p.results(), p.kind(),
                   std::move(step));
}

}  // namespace koalg

#endif  // KOALG_PROCESS_HPP
