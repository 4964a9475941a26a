#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rigid/error.hpp"

using namespace rigid;

namespace {

Position P(const char* s) { return Position::parse(s); }

void expect_same_judgment(const Checked& a, const Checked& b) {
    EXPECT_EQ(print_context(a.conclusion().ctx), print_context(b.conclusion().ctx));
    EXPECT_EQ(print_type(a.conclusion().type), print_type(b.conclusion().type));
}

}  // namespace

TEST(ReduceS, DeltaAppliedToVariable) {
    Derivation d = load_derivation(fixtures::data("delta_y.deriv"));
    Checked p = check_derivation(d, Flavor::S);
    Derivation r = reduce_S(d, Position{});
    Checked q = check_derivation(r, Flavor::S);
    EXPECT_EQ(print_term(r.term), "y y");
    expect_same_judgment(p, q);
    EXPECT_EQ(r.nodes.at(P("1")), NodeData::ax(3, parse_type("(8:o, 3:o', 2:o) -> o'")));
    EXPECT_EQ(r.nodes.at(P("2")), NodeData::ax(5, parse_type("o")));
    EXPECT_EQ(r.nodes.at(P("3")), NodeData::ax(2, parse_type("o'")));
    EXPECT_EQ(r.nodes.at(P("8")), NodeData::ax(4, parse_type("o")));
    EXPECT_EQ(r.nodes.size(), 5u);
}

TEST(ReduceS, RejectsNonRedex) {
    EXPECT_THROW(reduce_S(fixtures::pex(), Position{}), Error);
}

TEST(ReduceS, UntypedRedexOnlyRewritesTerm) {
    Derivation d;
    d.term = parse_term("x ((\\y. y) z)");
    d.nodes.emplace(Position{}, NodeData::app({}));
    d.nodes.emplace(P("1"), NodeData::ax(2, parse_type("() -> o")));
    Derivation r = reduce_S(d, P("2"));
    EXPECT_EQ(print_term(r.term), "x z");
    EXPECT_EQ(r.nodes.size(), 2u);
    check_derivation(r, Flavor::S);
}

TEST(Interfaces, Fig5Counts) {
    Checked p = check_derivation(fixtures::fig5());
    EXPECT_EQ(enumerate_interfaces(p, Position{}).size(), 2u);
    EXPECT_EQ(enumerate_interfaces(p, P("1")).size(), 2u);
    EXPECT_EQ(enumerate_interfaces(p, P("1.6")).size(), 1u);
    EXPECT_TRUE(enumerate_interfaces(p, P("1.6")).front().empty());
}

TEST(Interfaces, Fig5OperableChecks) {
    auto op = fixtures::fig5_operable();
    Checked p = check_operable(op);
    EXPECT_FALSE(is_trivial(p, op.iface));
    auto bad = op;
    bad.iface.erase(P("1"));
    EXPECT_THROW(check_operable(bad), Error);
}

TEST(Interfaces, JsonRoundTrip) {
    auto op = fixtures::fig5_operable();
    EXPECT_EQ(interface_from_json(interface_to_json(op.iface)), op.iface);
}

TEST(ReduceSh, Fig5EveryRootInterface) {
    Checked p = check_derivation(fixtures::fig5());
    auto choices = enumerate_choices(p, P("1.1"));
    ASSERT_FALSE(choices.empty());
    RDerivation pi = collapse_derivation(p);
    for (const auto& rc : choices) {
        Derivation r = reduce_Sh(p, rc);
        Checked q = check_derivation(r);
        EXPECT_EQ(print_context(q.conclusion().ctx), print_context(p.conclusion().ctx));
        EXPECT_TRUE(equiv(q.conclusion().type, p.conclusion().type));
        EXPECT_EQ(collapse_derivation(q), reduce_R(pi, collapse_choice(p, rc)));
        EXPECT_EQ(choice_from_json(choice_to_json(rc)).rho, rc.rho);
    }
}

TEST(ReduceSh, InvalidRootInterface) {
    Checked p = check_derivation(fixtures::fig5());
    auto rc = enumerate_choices(p, P("1.1")).front();
    rc.rho.begin()->second = {{3, 9}};
    EXPECT_THROW(reduce_Sh(p, rc), Error);
}

TEST(ReduceOperable, Fig5TwoSteps) {
    auto op = fixtures::fig5_operable();
    auto s1 = reduce_operable(op, P("1.1"));
    EXPECT_EQ(print_term(s1.result.d.term), "(\\x. x z) (a x) b");
    auto s2 = reduce_operable(s1.result, P("1"));
    Checked q = check_operable(s2.result);
    Checked p = check_derivation(op.d);
    EXPECT_EQ(print_context(q.conclusion().ctx), print_context(p.conclusion().ctx));
    EXPECT_TRUE(equiv(q.conclusion().type, p.conclusion().type));
}

TEST(ReduceOperable, IdentityInterfaceAgreesWithReduceS) {
    Derivation d = load_derivation(fixtures::data("delta_y.deriv"));
    Checked p = check_derivation(d);
    Operable op{d, identity_interface(p)};
    auto st = reduce_operable(op, Position{});
    Derivation r = reduce_S(d, Position{});
    EXPECT_TRUE(derivation_equal(Derivation{st.result.d.term, st.result.d.nodes, Flavor::S}, r));
    EXPECT_TRUE(is_trivial(check_derivation(st.result.d), st.result.iface));
}

TEST(ReduceR, ThreeOccurrencesGiveSixReducts) {
    Derivation d;
    d.term = parse_term("(\\x. f x x x) y");
    d.nodes.emplace(Position{}, NodeData::app({2, 3, 4}));
    d.nodes.emplace(P("1"), NodeData::abs());
    d.nodes.emplace(P("1.0"), NodeData::app({2}));
    d.nodes.emplace(P("1.0.1"), NodeData::app({2}));
    d.nodes.emplace(P("1.0.1.1"), NodeData::app({2}));
    d.nodes.emplace(P("1.0.1.1.1"), NodeData::ax(5, parse_type("(2:o) -> (2:o) -> (2:o) -> o")));
    d.nodes.emplace(P("1.0.1.1.2"), NodeData::ax(2, parse_type("o")));
    d.nodes.emplace(P("1.0.1.2"), NodeData::ax(3, parse_type("o")));
    d.nodes.emplace(P("1.0.2"), NodeData::ax(4, parse_type("o")));
    d.nodes.emplace(P("2"), NodeData::ax(2, parse_type("o")));
    d.nodes.emplace(P("3"), NodeData::ax(3, parse_type("o")));
    d.nodes.emplace(P("4"), NodeData::ax(4, parse_type("o")));
    Checked p = check_derivation(d, Flavor::S);
    RDerivation pi = collapse_derivation(p);
    auto cs = enumerate_reduction_choices(pi, Position{});
    EXPECT_EQ(cs.size(), 6u);
    for (const auto& c : cs) check_R(reduce_R(pi, c));
    EXPECT_EQ(enumerate_choices(p, Position{}).size(), 6u);
}

TEST(ReduceR, TypeMismatchedChoice) {
    Derivation d = load_derivation(fixtures::data("delta_y.deriv"));
    RDerivation pi = collapse_derivation(check_derivation(d));
    auto cs = enumerate_reduction_choices(pi, Position{});
    ASSERT_FALSE(cs.empty());
    RChoice c = cs.front();
    auto& v = c.per_node.begin()->second;
    std::reverse(v.begin(), v.end());
    bool any_mismatch = false;
    try {
        reduce_R(pi, c);
    } catch (const Error& e) {
        any_mismatch = e.kind() == ErrorKind::ChoiceMismatch;
    }
    EXPECT_TRUE(any_mismatch);
}

TEST(Representation, EmptySequenceGivesDefaultInterface) {
    Checked p = check_derivation(fixtures::fig5());
    Operable op = build_operable_from_choices(collapse_derivation(p), Operable{fixtures::fig5(), {}}, {});
    EXPECT_EQ(op.iface, default_interface(p));
}

TEST(Representation, Fig5AllTwoStepSequences) {
    Checked p = check_derivation(fixtures::fig5());
    RDerivation pi0 = collapse_derivation(p);
    Operable p0{fixtures::fig5(), {}};
    for (const auto& c1 : enumerate_reduction_choices(pi0, P("1.1"))) {
        RDerivation pi1 = reduce_R(pi0, c1);
        for (const auto& c2 : enumerate_reduction_choices(pi1, P("1"))) {
            RDerivation pi2 = reduce_R(pi1, c2);
            Operable op = build_operable_from_choices(pi0, p0, {c1, c2});
            auto s1 = reduce_operable(op, P("1.1"));
            EXPECT_EQ(collapse_derivation(check_derivation(s1.result.d)), pi1);
            auto s2 = reduce_operable(s1.result, P("1"));
            EXPECT_EQ(collapse_derivation(check_derivation(s2.result.d)), pi2);
        }
    }
}
