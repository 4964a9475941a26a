#include <gtest/gtest.h>

#include "rigid/corpus.hpp"
#include "rigid/error.hpp"
#include "rigid/positions.hpp"
#include "rigid/types.hpp"
#include "fixtures.hpp"

using namespace rigid;

namespace {

Position P(const char* s) { return Position::parse(s); }
PosSet S(std::initializer_list<const char*> xs) {
    PosSet u;
    for (auto x : xs) u.insert(P(x));
    return u;
}

SType random_type(Rng& rng, int depth) {
    if (depth == 0 || draw(rng, 3) == 0) return SType::atom(draw(rng, 2) ? "o" : "o'");
    SeqType f;
    std::size_t n = draw(rng, 3);
    for (std::size_t i = 0; i < n; ++i) f.emplace(static_cast<Track>(2 + draw(rng, 8)), random_type(rng, depth - 1));
    return SType::arrow(std::move(f), random_type(rng, depth - 1));
}

}  // namespace

TEST(Collapse, Tracks) {
    EXPECT_EQ(collapse_track(8), 2u);
    EXPECT_EQ(collapse_track(0), 0u);
    EXPECT_EQ(collapse_track(1), 1u);
}

TEST(Collapse, Positions) {
    EXPECT_EQ(collapse_position(P("0.5.1.3.2")), P("0.2.1.2.2"));
    EXPECT_EQ(collapse_position(Position{}), Position{});
    EXPECT_EQ(collapse_position(P("1.1.0")), P("1.1.0"));
}

TEST(ApplicativeDepth, Examples) {
    EXPECT_EQ(applicative_depth(P("0.3.2.1.1")), 2u);
    EXPECT_EQ(applicative_depth(P("0.1.0.0.1")), 0u);
    EXPECT_EQ(applicative_depth(Position{}), 0u);
}

TEST(PositionText, RoundTrip) {
    for (const char* s : {"eps", "0", "1.4.8", "2.3.1.0"}) EXPECT_EQ(P(s).str(), s);
    EXPECT_THROW(P("1..2"), Error);
}

TEST(ZeroOneIso, Fig2) {
    PosSet u1 = domain(type_support(fixtures::t1())), u2 = domain(type_support(fixtures::t2()));
    PosMap phi = {{P("eps"), P("eps")}, {P("1"), P("1")}, {P("4"), P("5")}, {P("4.1"), P("5.1")},
                  {P("4.3"), P("5.7")}, {P("4.8"), P("5.2")}, {P("8"), P("3")}};
    EXPECT_EQ(check_01_iso(u1, u2, phi), IsoCheck::Ok);
    EXPECT_EQ(check_01_iso(u1, u1, identity_map(u1)), IsoCheck::Ok);
    PosMap bad = phi;
    bad[P("8")] = P("5");
    EXPECT_NE(check_01_iso(u1, u2, bad), IsoCheck::Ok);
}

TEST(ZeroOneIso, Enumeration) {
    EXPECT_EQ(enumerate_01_isos(S({"2", "3"}), S({"5", "7"})).size(), 2u);
    PosSet chain = S({"eps", "1", "1.1", "1.1.1"});
    EXPECT_EQ(enumerate_01_isos(chain, chain).size(), 1u);
    EXPECT_TRUE(enumerate_01_isos(S({"2"}), S({"5", "7"})).empty());
}

TEST(Relabelling, Fig2) {
    PosSet u1 = domain(type_support(fixtures::t1()));
    Resetting r = apply_relabelling(u1, {{P("4"), 5}, {P("4.3"), 7}, {P("4.8"), 2}, {P("8"), 3}});
    EXPECT_EQ(r.image, domain(type_support(fixtures::t2())));
    EXPECT_EQ(check_01_iso(u1, r.image, r.iso), IsoCheck::Ok);
}

TEST(Relabelling, IdentityAndForest) {
    PosSet u = S({"eps", "1", "3", "3.4"});
    Resetting r = apply_relabelling(u, {{P("3"), 3}, {P("3.4"), 4}});
    EXPECT_EQ(r.image, u);
    EXPECT_EQ(r.iso, identity_map(u));
    EXPECT_EQ(apply_relabelling(S({"2", "3"}), {{P("2"), 9}, {P("3"), 4}}).image, S({"9", "4"}));
    EXPECT_THROW(apply_relabelling(S({"2", "3"}), {{P("2"), 9}, {P("3"), 9}}), Error);
}

TEST(ZeroOneIso, PropertiesOnRandomTypes) {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        Labelled u = type_support(random_type(rng, 3));
        Labelled v = type_support(random_type(rng, 3));
        PosSet du = domain(u);
        for (const auto& phi : enumerate_01_isos(du, du, 8)) {
            EXPECT_EQ(check_01_iso(du, du, phi), IsoCheck::Ok);
            for (const auto& [a, b] : phi) {
                EXPECT_EQ(a.size(), b.size());
                EXPECT_EQ(applicative_depth(a), applicative_depth(b));
            }
            EXPECT_EQ(compose(inverse_map(phi), phi), identity_map(du));
        }
        for (const auto& phi : enumerate_labelled_isos(u, v, 4)) EXPECT_EQ(check_labelled_iso(u, v, phi), IsoCheck::Ok);
        EXPECT_EQ(labelled_equiv(u, v), !enumerate_labelled_isos(u, v, 1).empty());
    }
}
