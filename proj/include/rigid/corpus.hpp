#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rigid/derivations.hpp"
#include "rigid/reduction.hpp"
#include "rigid/threads.hpp"
#include "rigid/trivialize.hpp"

namespace rigid {

using Rng = std::mt19937_64;
// Uniform enough for test generation and identical on every platform.
inline std::size_t draw(Rng& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

// All terms of size <= max_size over the given free names; binders are named by depth.
std::vector<TermPtr> enumerate_terms(std::size_t max_size, const std::vector<std::string>& free_names);

// Leftmost-outermost reduction path: terms[0] = t, steps[i] reduces terms[i] to terms[i+1].
struct ReductionPath {
    std::vector<TermPtr> terms;
    std::vector<Position> steps;
    bool normal = false;
};
ReductionPath leftmost_path(const TermPtr& t, std::size_t max_steps);

// Reverse of reduce_S at b: t reduces at b to the term of reduct. Copies of the argument
// found in reduct become argument derivations on tracks 2, 3, ... in position order.
Derivation subject_expand(const TermPtr& t, const Position& b, const Derivation& reduct);
// Types the normal form, then expands back along the path.
std::vector<Derivation> expand_path(const ReductionPath& path, const GenBudget& budget);

struct CorpusOptions {
    std::uint64_t seed = 42;
    std::size_t max_size = 7;
    std::size_t width = 2;
    std::size_t count = 500;
    std::size_t max_steps = 8;
    std::size_t per_term = 3;
};
struct CorpusItem {
    std::string name;
    Derivation d;
};
// Terms with redexes first; deterministic for a fixed seed.
std::vector<CorpusItem> generate_corpus(const CorpusOptions& o);

// Derivations with at least one typed redex offering 2..max_choices reduction choices.
// Terms over the single free name y, all atoms equal.
std::vector<CorpusItem> duplication_corpus(std::uint64_t seed, std::size_t max_size, std::size_t count,
                                           std::size_t max_choices = 24);

DerivationRelabelling random_relabelling(const Checked& p, Rng& rng, Track spread = 6);
// A relabelled copy of p with the interface transported from the identity.
Operable random_hybrid(const Checked& p, Rng& rng);
Interface random_interface(const Checked& p, Rng& rng, std::size_t limit = 16);

struct TowerInstance {
    std::string name;
    std::size_t height = 0;  // redexes in the tower, root included
    Operable op;
    ConsumptionArc arc;
};
// ((lam f. ... ((lam h. lam x. u) w) ...) w') v with negatively left-consumed arcs at the root.
std::vector<TowerInstance> redex_towers(std::uint64_t seed, std::size_t count, std::size_t max_height = 3);

}  // namespace rigid
