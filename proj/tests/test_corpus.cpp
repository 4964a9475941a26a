#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rigid/corpus.hpp"
#include "rigid/error.hpp"

using namespace rigid;

TEST(Terms, EnumerationCounts) {
    EXPECT_EQ(enumerate_terms(1, {"y"}).size(), 1u);
    // y, \x. y, \x. x
    EXPECT_EQ(enumerate_terms(2, {"y"}).size(), 3u);
    for (const auto& t : enumerate_terms(5, {"y", "z"})) {
        EXPECT_LE(term_size(t), 5u);
        EXPECT_TRUE(free_vars(t) == std::set<std::string>{} || free_vars(t).size() <= 2);
    }
}

TEST(Terms, LeftmostPath) {
    auto p = leftmost_path(parse_term("(\\x. x x) ((\\w. w) y)"), 8);
    ASSERT_TRUE(p.normal);
    EXPECT_EQ(p.steps.front(), Position{});
    EXPECT_EQ(print_term(p.terms.back()), "y y");
    EXPECT_FALSE(leftmost_path(parse_term("(\\x. x x) (\\x. x x)"), 5).normal);
}

TEST(Expansion, InvertsReduceS) {
    for (const char* src : {"(\\x. x x) y", "(\\x. x (x y)) (\\w. w)", "(\\x. y) z", "\\w. (\\x. x w) (\\v. v)",
                            "(\\x. \\w. x w w) y", "(\\f. (\\x. x) f) y z"}) {
        ReductionPath path = leftmost_path(parse_term(src), 8);
        ASSERT_TRUE(path.normal) << src;
        auto ds = expand_path(path, {});
        ASSERT_FALSE(ds.empty()) << src;
        for (auto d : ds) {
            for (std::size_t i = 0; i < path.steps.size(); ++i) {
                check_derivation(d, Flavor::S);
                Derivation next = reduce_S(d, path.steps[i]);
                Derivation back = subject_expand(path.terms[i], path.steps[i], next);
                EXPECT_TRUE(derivation_equal(back, d)) << src << " step " << i;
                d = next;
            }
            EXPECT_TRUE(is_normal(d.term));
        }
    }
}

TEST(Expansion, DeltaYUpToArgumentTracks) {
    Derivation fixture = load_derivation(fixtures::data("delta_y.deriv"));
    Derivation nf = reduce_S(fixture, Position{});
    Derivation back = subject_expand(fixture.term, Position{}, nf);
    EXPECT_FALSE(derivation_equal(back, fixture));  // arguments renumbered 2, 3, ...
    EXPECT_EQ(collapse_derivation(check_derivation(back)), collapse_derivation(check_derivation(fixture)));
    EXPECT_TRUE(derivation_equal(reduce_S(back, Position{}), nf));
}

TEST(Expansion, RejectsWrongReduct) {
    Derivation d = load_derivation(fixtures::data("delta_y.deriv"));
    EXPECT_THROW(subject_expand(parse_term("(\\x. x) y"), Position{}, d), Error);
}

TEST(Corpus, DeterministicAndChecked) {
    CorpusOptions o;
    o.max_size = 5;
    o.count = 100;
    auto c1 = generate_corpus(o), c2 = generate_corpus(o);
    ASSERT_EQ(c1.size(), 100u);
    ASSERT_EQ(c2.size(), 100u);
    for (std::size_t i = 0; i < c1.size(); ++i) {
        EXPECT_EQ(c1[i].name, c2[i].name);
        EXPECT_EQ(write_derivation(c1[i].d), write_derivation(c2[i].d));
        check_derivation(c1[i].d, Flavor::S);
    }
}

TEST(Corpus, SizeOneHasOnlyVariables) {
    CorpusOptions o;
    o.max_size = 1;
    auto c = generate_corpus(o);
    EXPECT_FALSE(c.empty());
    for (const auto& it : c) {
        EXPECT_TRUE(it.d.term->is_var());
        EXPECT_EQ(it.d.nodes.size(), 1u);
    }
}

TEST(Corpus, RandomHybridIsIsomorphic) {
    CorpusOptions o;
    o.max_size = 5;
    o.count = 40;
    Rng rng(7);
    for (const auto& it : generate_corpus(o)) {
        Checked p = check_derivation(it.d);
        Operable hy = random_hybrid(p, rng);
        Checked q = check_operable(hy);
        EXPECT_EQ(collapse_derivation(q), collapse_derivation(p));
        Interface other = random_interface(q, rng);
        check_operable(Operable{hy.d, other});
    }
}

TEST(Towers, InstancesHaveNegativeRootArcs) {
    auto ts = redex_towers(1, 20);
    ASSERT_EQ(ts.size(), 20u);
    std::set<std::size_t> heights;
    for (const auto& t : ts) {
        heights.insert(t.height);
        EXPECT_TRUE(t.arc.a.empty());
        EXPECT_EQ(t.arc.left_pol, Polarity::Neg);
    }
    EXPECT_EQ(heights.size(), 3u);
}
