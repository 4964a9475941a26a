#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rigid/error.hpp"

namespace rigid {

using Track = std::uint32_t;

// Finite word over tracks. 0 and 1 are fixed tracks, k >= 2 are mutable.
class Position {
public:
    Position() = default;
    Position(std::initializer_list<Track> ws) : w_(ws) {}
    explicit Position(std::vector<Track> ws) : w_(std::move(ws)) {}

    static Position parse(const std::string& text);
    std::string str() const;

    std::size_t size() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    Track operator[](std::size_t i) const { return w_[i]; }
    Track front() const { return w_.front(); }
    Track back() const { return w_.back(); }
    const std::vector<Track>& letters() const { return w_; }

    Position child(Track k) const;
    Position concat(const Position& o) const;
    Position parent() const;
    Position prefix(std::size_t n) const;
    Position suffix(std::size_t from) const;
    bool is_prefix_of(const Position& o) const;

    auto operator<=>(const Position&) const = default;
    bool operator==(const Position&) const = default;

private:
    std::vector<Track> w_;
};

Position operator+(const Position& a, const Position& b);

Track collapse_track(Track k);
Position collapse_position(const Position& a);
std::size_t applicative_depth(const Position& a);
inline bool is_mutable(Track k) { return k >= 2; }

using PosSet = std::set<Position>;
using PosMap = std::map<Position, Position>;
// Labels on the nodes of a (possibly labelled) tree or forest.
using Labelled = std::map<Position, std::string>;

bool is_tree(const PosSet& u);
bool is_forest(const PosSet& u);
std::set<Track> roots(const PosSet& forest);
PosSet mutable_support(const PosSet& u);
Labelled unlabelled(const PosSet& u);
PosSet domain(const Labelled& u);

enum class IsoCheck { Ok, DomainMismatch, NotIso };

// Unlabelled clauses only; labels are checked by callers carrying them.
IsoCheck check_01_iso(const PosSet& u1, const PosSet& u2, const PosMap& phi);
IsoCheck check_labelled_iso(const Labelled& u1, const Labelled& u2, const PosMap& phi);

// All 01-isomorphisms, in lexicographic order of root assignment.
// Trees and forests are both accepted; forests get an implicit root at eps
// which is dropped from the result.
std::vector<PosMap> enumerate_01_isos(const PosSet& u1, const PosSet& u2,
                                      std::size_t limit = std::numeric_limits<std::size_t>::max());
std::vector<PosMap> enumerate_labelled_isos(const Labelled& u1, const Labelled& u2,
                                            std::size_t limit = std::numeric_limits<std::size_t>::max());
bool labelled_equiv(const Labelled& u1, const Labelled& u2);

// Canonical text of the subtree rooted at a; equal iff the subtrees are 01-isomorphic.
std::string canonical_subtree(const Labelled& u, const Position& a);

using RootIso = std::map<Track, Track>;
bool root_iso_extends(const Labelled& f1, const Labelled& f2, const RootIso& rho);
RootIso root_of(const PosMap& phi);

using Relabelling01 = std::map<Position, Track>;
struct Resetting {
    PosSet image;
    PosMap iso;
};
Resetting apply_relabelling(const PosSet& u, const Relabelling01& relab);

PosMap identity_map(const PosSet& u);
PosMap inverse_map(const PosMap& phi);
// (g . f)(a) = g(f(a)); every image of f must lie in dom(g).
PosMap compose(const PosMap& g, const PosMap& f);

}  // namespace rigid
