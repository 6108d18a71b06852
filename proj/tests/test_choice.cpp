#include <catch2/catch_amalgamated.hpp>

#include "koalg/choice.hpp"

#include "support/generators.hpp"

using namespace koalg;

namespace {

Value va() { return Value::atom("a"); }
Value vb() { return Value::atom("b"); }
Value vc() { return Value::atom("c"); }

}  // namespace

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(Choice::ndet({}), ValidationError);
    CHECK_THROWS_AS(Choice::prob({{va(), 0.5}, {vb(), 0.4}}), ValidationError);
    CHECK_THROWS_AS(Choice::prob({{va(), -0.1}, {vb(), 1.1}}), ValidationError);
    // zero entries are dropped, equal values merged
    Choice c = Choice::prob({{va(), 0.25}, {va(), 0.25}, {vb(), 0.5}, {vc(), 0.0}});
    CHECK(c.support().size() == 2);
    CHECK(c.weight_of(va()) == 0.5);
}

TEST_CASE("combined kind table") {
    using CK = ChoiceKind;
    const CK kinds[] = {CK::Det, CK::NDet, CK::Prob};
    for (CK a : kinds) {
        for (CK b : kinds) {
            auto ab = combined_kind(a, b);
            auto ba = combined_kind(b, a);
            CHECK(ab == ba);  // symmetric
            if (a == CK::Det) CHECK(ab == b);  // Det is the identity
            if (b == CK::Det) CHECK(ab == a);
        }
    }
    CHECK(!combined_kind(CK::NDet, CK::Prob));
    CHECK_THROWS_AS(combine_kinds(CK::Prob, CK::NDet), MixedChoiceError);
}

TEST_CASE("map examples") {
    // identity on a deterministic choice
    Choice det = Choice::det(Value::integer(3));
    CHECK(det.map([](const Value& v) { return v; }) == det);

    // elementwise image with de-duplication
    Choice nd = Choice::ndet({Value::integer(1), Value::integer(2), Value::integer(3)});
    Choice mapped = nd.map([](const Value& v) { return Value::integer(v.int_value() % 2); });
    CHECK(mapped == Choice::ndet({Value::integer(0), Value::integer(1)}));

    // pushforward onto a point
    Choice pr = Choice::prob({{va(), 0.3}, {vb(), 0.7}});
    Choice onto = pr.map([](const Value&) { return Value::atom("k"); });
    CHECK(onto == Choice::prob({{Value::atom("k"), 1.0}}));
}

TEST_CASE("flatten examples") {
    // union of non-deterministic choices
    BasicChoice<Choice> outer = BasicChoice<Choice>::ndet(
        {Choice::ndet({va(), vb()}), Choice::ndet({vb(), vc()})});
    CHECK(flatten(outer) == Choice::ndet({va(), vb(), vc()}));

    // probabilistic flattening follows the weighted-sum rule
    BasicChoice<Choice> pp = BasicChoice<Choice>::prob(
        {{Choice::prob({{Value::atom("x"), 1.0}}), 0.5},
         {Choice::prob({{Value::atom("y"), 1.0}}), 0.5}});
    CHECK(approx_equal(flatten(pp),
                       Choice::prob({{Value::atom("x"), 0.5}, {Value::atom("y"), 0.5}})));

    // Det outer layer is the identity
    Choice inner = Choice::prob({{Value::atom("x"), 0.4}, {Value::atom("y"), 0.6}});
    CHECK(flatten(BasicChoice<Choice>::det(inner)) == inner);

    // mixed inner kinds are rejected
    BasicChoice<Choice> bad = BasicChoice<Choice>::ndet({Choice::prob({{va(), 1.0}})});
    CHECK_THROWS_AS(flatten(bad), MixedChoiceError);
}

TEST_CASE("distribute examples") {
    // (b, {x, y}) -> {(b, x), (b, y)}
    Choice inner = Choice::ndet({Value::atom("x"), Value::atom("y")});
    Choice d = distribute(ChoiceKind::NDet, DistributiveInput(std::make_pair(vb(), inner)));
    CHECK(d == Choice::ndet({Value::pair(vb(), Value::atom("x")),
                             Value::pair(vb(), Value::atom("y"))}));

    // left-injected element becomes a singleton
    CHECK(distribute(ChoiceKind::NDet, DistributiveInput(va())) == Choice::ndet({va()}));

    // probabilistic pair case keeps the weights
    Choice e = Choice::prob({{vc(), 0.25}, {Value::atom("c2"), 0.75}});
    Choice dp = distribute(ChoiceKind::Prob, DistributiveInput(std::make_pair(vb(), e)));
    CHECK(approx_equal(dp, Choice::prob({{Value::pair(vb(), vc()), 0.25},
                                         {Value::pair(vb(), Value::atom("c2")), 0.75}})));
}

TEST_CASE("pair examples") {
    Choice n1 = Choice::ndet({va(), vb()});
    Choice n2 = Choice::ndet({Value::integer(0), Value::integer(1)});
    Choice cart = pair_choices(n1, n2);
    CHECK(cart == Choice::ndet({Value::pair(va(), Value::integer(0)),
                                Value::pair(va(), Value::integer(1)),
                                Value::pair(vb(), Value::integer(0)),
                                Value::pair(vb(), Value::integer(1))}));

    Choice coin = Choice::prob({{Value::atom("h"), 0.5}, {Value::atom("t"), 0.5}});
    Choice two = pair_choices(coin, coin);
    CHECK(two.support().size() == 4);
    for (double w : two.weights()) CHECK(w == Catch::Approx(0.25));

    CHECK(pair_choices(Choice::det(va()), Choice::det(vb())) ==
          Choice::det(Value::pair(va(), vb())));

    CHECK_THROWS_AS(pair_choices(n1, coin), MixedChoiceError);
}

TEST_CASE("functor laws on random choices") {
    testgen::Gen gen(7);
    auto id = [](const Value& v) { return v; };
    for (int i = 0; i < 400; ++i) {
        Choice c = gen.choice(gen.kind());
        CHECK(approx_equal(c.map(id), c));
        auto f = gen.function(0x1111 + i);
        auto g = gen.function(0x2222 + i);
        auto fg = [&](const Value& v) { return f(g(v)); };
        CHECK(approx_equal(c.map(g).map(f), c.map(fg)));
    }
}

TEST_CASE("naturality of flatten") {
    testgen::Gen gen(11);
    for (int i = 0; i < 200; ++i) {
        ChoiceKind inner_kind = gen.kind();
        ChoiceKind outer_kind = gen.kind();
        if (!combined_kind(outer_kind, inner_kind)) continue;
        // build outer choice of inner choices
        std::vector<Choice> inners;
        std::size_t n = gen.index(3) + 1;
        for (std::size_t j = 0; j < n; ++j) inners.push_back(gen.choice(inner_kind));
        BasicChoice<Choice> outer = [&] {
            switch (outer_kind) {
                case ChoiceKind::Det:
                    return BasicChoice<Choice>::det(inners[0]);
                case ChoiceKind::NDet:
                    return BasicChoice<Choice>::ndet(inners);
                default: {
                    std::vector<std::pair<Choice, double>> entries;
                    for (std::size_t j = 0; j < inners.size(); ++j)
                        entries.emplace_back(inners[j], 1.0 / static_cast<double>(inners.size()));
                    return BasicChoice<Choice>::prob(entries);
                }
            }
            throw std::logic_error("unreachable");
        }();
        auto f = gen.function(0x3333 + i);
        Choice lhs = flatten(outer).map(f);
        Choice rhs = flatten(outer.map([&](const Choice& c) { return c.map(f); }));
        CHECK(approx_equal(lhs, rhs));
    }
}

TEST_CASE("naturality of distribute and pair") {
    testgen::Gen gen(13);
    for (int i = 0; i < 200; ++i) {
        ChoiceKind k = gen.kind();
        auto f = gen.function(0x4444 + i);

        // distribute: pushing f through the inner choice first or last agrees
        Choice inner = gen.choice(k);
        Value b = gen.value(1);
        Choice lhs = distribute_pair(b, inner.map(f));
        Choice rhs = distribute_pair(b, inner).map(
            [&](const Value& pr) { return Value::pair(pr.item(0), f(pr.item(1))); });
        CHECK(approx_equal(lhs, rhs));

        // pair: mapping components then pairing agrees with pairing then mapping
        ChoiceKind k2 = gen.kind();
        if (!combined_kind(k, k2)) continue;
        auto g = gen.function(0x5555 + i);
        Choice c1 = gen.choice(k);
        Choice c2 = gen.choice(k2);
        Choice left = pair_choices(c1.map(f), c2.map(g));
        Choice right = pair_choices(c1, c2).map(
            [&](const Value& pr) { return Value::pair(f(pr.item(0)), g(pr.item(1))); });
        CHECK(approx_equal(left, right));
    }
}

TEST_CASE("flatten on nested non-deterministic choices is associative") {
    testgen::Gen gen(17);
    for (int i = 0; i < 100; ++i) {
        std::vector<BasicChoice<Choice>> middles;
        std::size_t n = gen.index(2) + 1;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Choice> inners;
            std::size_t m = gen.index(2) + 1;
            for (std::size_t q = 0; q < m; ++q) inners.push_back(gen.choice(ChoiceKind::NDet));
            middles.push_back(BasicChoice<Choice>::ndet(inners));
        }
        auto nested = BasicChoice<BasicChoice<Choice>>::ndet(middles);
        Choice one = flatten(flatten(nested));
        Choice two = flatten(nested.map([](const BasicChoice<Choice>& cc) { return flatten(cc); }));
        CHECK(one == two);
    }
}

TEST_CASE("normalization is preserved by the transformations") {
    testgen::Gen gen(19);
    auto mass = [](const Choice& c) {
        double s = 0.0;
        for (double w : c.weights()) s += w;
        return s;
    };
    for (int i = 0; i < 200; ++i) {
        Choice c = gen.choice(ChoiceKind::Prob);
        CHECK(mass(c.map(gen.function(i))) == Catch::Approx(1.0).margin(1e-9));
        CHECK(mass(distribute_pair(gen.value(1), c)) == Catch::Approx(1.0).margin(1e-9));
        Choice c2 = gen.choice(ChoiceKind::Prob);
        CHECK(mass(pair_choices(c, c2)) == Catch::Approx(1.0).margin(1e-9));
        BasicChoice<Choice> outer = BasicChoice<Choice>::prob({{c, 0.5}, {c2, 0.5}});
        CHECK(mass(flatten(outer)) == Catch::Approx(1.0).margin(1e-9));
    }
}
