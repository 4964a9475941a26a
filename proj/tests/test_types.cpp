#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rigid/corpus.hpp"
#include "rigid/error.hpp"
#include "rigid/types.hpp"

using namespace rigid;

namespace {

Position P(const char* s) { return Position::parse(s); }

SType random_type(Rng& rng, int depth) {
    if (depth == 0 || draw(rng, 3) == 0) return SType::atom(draw(rng, 2) ? "o" : "o'");
    SeqType f;
    std::size_t n = draw(rng, 3);
    for (std::size_t i = 0; i < n; ++i) f.emplace(static_cast<Track>(2 + draw(rng, 8)), random_type(rng, depth - 1));
    return SType::arrow(std::move(f), random_type(rng, depth - 1));
}

}  // namespace

TEST(Support, Sex) {
    Labelled u = type_support(parse_type("(8:o, 3:o', 2:o) -> o'"));
    for (const char* c : {"eps", "1", "2", "3", "8"}) EXPECT_TRUE(u.count(P(c))) << c;
    EXPECT_EQ(u.at(Position{}), "->");
    EXPECT_EQ(u.at(P("1")), "o'");
    EXPECT_EQ(type_support(parse_type("o")), (Labelled{{Position{}, "o"}}));
}

TEST(Support, Fig2T1) {
    PosSet want = {Position{}, P("1"), P("4"), P("8"), P("4.1"), P("4.3"), P("4.8")};
    EXPECT_EQ(domain(type_support(fixtures::t1())), want);
    EXPECT_EQ(type_from_support(type_support(fixtures::t1())), fixtures::t1());
}

TEST(SeqUnion, Examples) {
    try {
        seq_union(parse_seq("(2:o, 3:o')"), parse_seq("(3:o', 8:o)"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TrackConflict);
    }
    EXPECT_EQ(seq_conflicts(parse_seq("(2:o, 3:o')"), parse_seq("(3:o', 8:o)")), std::set<Track>{3});
    SeqType f = parse_seq("(2:o, 3:o')");
    EXPECT_EQ(seq_union(f, {}), f);
    EXPECT_EQ(seq_union(parse_seq("(2:s, 3:t)"), parse_seq("(8:s)")), parse_seq("(2:s, 3:t, 8:s)"));
}

TEST(CollapseType, Examples) {
    EXPECT_EQ(collapse_type(parse_type("(7:o1, 3:o2, 2:o1) -> o")), parse_rtype("[o1, o2, o1] -> o"));
    EXPECT_EQ(collapse_type(parse_type("o")), parse_rtype("o"));
    RType want = parse_rtype("[o2, [o1, o3] -> o2] -> o1");
    EXPECT_EQ(collapse_type(fixtures::t1()), want);
    EXPECT_EQ(collapse_type(fixtures::t2()), want);
}

TEST(Isos, Examples) {
    EXPECT_TRUE(equiv(fixtures::t1(), fixtures::t2()));
    EXPECT_TRUE(equiv(fixtures::t1(), fixtures::t1()));
    EXPECT_EQ(enumerate_seq_isos(parse_seq("(2:o, 3:o)"), parse_seq("(5:o, 7:o)")).size(), 2u);
    EXPECT_TRUE(enumerate_seq_isos(parse_seq("(2:o, 3:o)"), parse_seq("(5:o, 7:o')")).empty());
}

TEST(Text, Examples) {
    SType t = parse_type("(2:o, 7:o) -> o'");
    ASSERT_TRUE(t.is_arrow());
    EXPECT_EQ(t.source().size(), 2u);
    EXPECT_EQ(t.source().at(7), SType::atom("o"));
    EXPECT_EQ(t.target(), SType::atom("o'"));
    EXPECT_TRUE(parse_type("o").is_atom());
    EXPECT_EQ(print_type(parse_type("(7:o,  2:o)->o'")), print_type(t));
    EXPECT_THROW(parse_type("(1:o) -> o"), Error);
    EXPECT_THROW(parse_type("(2:o, 2:o) -> o"), Error);
}

TEST(Types, ThreeWayAgreementOnRandomTypes) {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        SType a = random_type(rng, 3), b = random_type(rng, 3);
        bool isos = !enumerate_type_isos(a, b, 1).empty();
        bool coll = collapse_type(a) == collapse_type(b);
        EXPECT_EQ(equiv(a, b), isos);
        EXPECT_EQ(isos, coll) << print_type(a) << " vs " << print_type(b);
        for (const auto& phi : enumerate_type_isos(a, b, 4)) {
            EXPECT_TRUE(is_type_iso(a, b, phi));
            EXPECT_EQ(apply_type_iso(a, phi), b);
        }
        EXPECT_EQ(parse_type(print_type(a)), a);
        EXPECT_EQ(parse_rtype(print_rtype(collapse_type(a))), collapse_type(a));
    }
}

TEST(Types, RelabellingPreservesCollapse) {
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        SType a = random_type(rng, 3);
        Labelled u = type_support(a);
        std::map<Position, std::vector<Position>> sib;
        for (const auto& [c, _] : u)
            if (!c.empty() && is_mutable(c.back())) sib[c.parent()].push_back(c);
        Relabelling01 rel;
        for (const auto& [_, cs] : sib) {
            std::vector<Track> pool = {2, 3, 4, 5, 6, 7, 8, 9, 10};
            for (std::size_t j = pool.size(); j > 1; --j) std::swap(pool[j - 1], pool[draw(rng, j)]);
            for (std::size_t j = 0; j < cs.size(); ++j) rel[cs[j]] = pool[j];
        }
        Resetting r = apply_relabelling(domain(u), rel);
        Labelled v;
        for (const auto& [c, l] : u) v.emplace(r.iso.at(c), l);
        SType b = type_from_support(v);
        EXPECT_TRUE(equiv(a, b));
        EXPECT_TRUE(is_type_iso(a, b, r.iso));
    }
}
