#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rigid/derivations.hpp"
#include "rigid/reduction.hpp"

namespace rigid {

// A mutable edge, addressed by the position of its lower endpoint.
//   Arg:   argument edge a.k of the derivation support (a = parent, c = k)
//   Right: edge ending at c in T(a)
//   Left:  edge ending at c in C(a)(x)
struct Edge {
    enum class Kind { Arg, Right, Left };
    Kind kind = Kind::Arg;
    Position a;
    std::string x;
    Position c;

    static Edge arg(const Position& ak) { return {Kind::Arg, ak.parent(), "", Position{ak.back()}}; }
    static Edge right(Position a, Position c) { return {Kind::Right, std::move(a), "", std::move(c)}; }
    static Edge left(Position a, std::string x, Position c) {
        return {Kind::Left, std::move(a), std::move(x), std::move(c)};
    }

    // Derivation position of the judgment the edge lives in (a.k for argument edges).
    Position outer() const { return kind == Kind::Arg ? a.concat(c) : a; }
    Track label() const { return c.back(); }
    std::string str() const;

    auto operator<=>(const Edge& o) const {
        if (auto r = a <=> o.a; r != 0) return r;
        if (auto r = kind <=> o.kind; r != 0) return r;
        if (auto r = x <=> o.x; r != 0) return r;
        return c <=> o.c;
    }
    bool operator==(const Edge&) const = default;
};

enum class Polarity { Pos, Neg };
const char* polarity_symbol(Polarity p);

std::set<Edge> mutable_edges(const Checked& p);
std::optional<Edge> ascendant(const Checked& p, const Edge& e);
Edge highest_ascendant(const Checked& p, const Edge& e);
// Left (a,x,k.c) <-> Right (a,c) at an axiom leaf a with track k, c non-empty.
std::optional<Edge> polar_inverse(const Checked& p, const Edge& e);
bool is_axiom_edge(const Checked& p, const Edge& e);
Polarity polarity(const Checked& p, const Edge& e);
Edge referent(const Checked& p, const Edge& e);

enum class ThreadKind { Axiom, Argument, Inner };
const char* thread_kind_name(ThreadKind k);

struct Threads {
    std::vector<std::vector<Edge>> members;  // by id, each sorted
    std::map<Edge, std::size_t> id_of;
    std::vector<Edge> ref;
    std::vector<ThreadKind> kind;

    std::size_t count() const { return members.size(); }
    std::size_t of(const Edge& e) const;
    Track label(std::size_t id) const { return members.at(id).front().label(); }
};

// Union-find over ascendance and polar inversion; ids follow the least member edge.
Threads compute_threads(const Checked& p);
// ad of the referent; throws Domain on axiom threads.
std::size_t thread_ad(const Threads& th, std::size_t id);
// Largest ad of a judgment where the thread occurs.
std::size_t thread_max_ad(const Threads& th, std::size_t id);

struct ConsumptionArc {
    std::size_t left = 0, right = 0;
    Position a;
    Polarity left_pol = Polarity::Pos, right_pol = Polarity::Pos;
    Edge left_edge, right_edge;
};

std::vector<ConsumptionArc> consumption(const Checked& p, const Interface& iface, const Threads& th);

bool brother_edges(const Checked& p, const Edge& e1, const Edge& e2);
// Unordered pairs (i < j) of brother threads, plus (i, i) if a thread holds two brother edges.
std::set<std::pair<std::size_t, std::size_t>> brother_pairs(const Checked& p, const Threads& th);
bool brothers(const Checked& p, const Threads& th, std::size_t i, std::size_t j);

struct ChainStep {
    std::size_t from = 0, to = 0;
    Position a;
    bool forward = true;  // from is the left-consumed thread
};
struct BrotherChain {
    std::vector<std::size_t> threads;
    std::vector<ChainStep> steps;
};
std::string chain_str(const BrotherChain& c);

std::optional<BrotherChain> find_brother_chain(const Checked& p, const Threads& th,
                                               const std::vector<ConsumptionArc>& arcs);

// At most one left arc and one right arc per (thread, polarity).
bool check_uniqueness_of_consumption(const std::vector<ConsumptionArc>& arcs);
// At most one partner thread per (thread, polarity), left and right roles together.
bool check_strong_uniqueness(const std::vector<ConsumptionArc>& arcs);
// Positive left arcs strictly increase ad; axiom threads use thread_max_ad.
bool check_monotonicity(const Threads& th, const std::vector<ConsumptionArc>& arcs);

struct ThreadAnalysis {
    Threads th;
    std::vector<ConsumptionArc> arcs;
};
ThreadAnalysis analyze_threads(const Checked& p, const Interface& iface);

std::string threads_report(const Checked& p, const ThreadAnalysis& an);
nlohmann::json threads_json(const Checked& p, const ThreadAnalysis& an);
std::string threads_dot(const Checked& p, const ThreadAnalysis& an);

}  // namespace rigid
