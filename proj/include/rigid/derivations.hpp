#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rigid/terms.hpp"
#include "rigid/types.hpp"

namespace rigid {

enum class Flavor { S, Sh };
const char* flavor_name(Flavor f);
Flavor parse_flavor(const std::string& s);

struct NodeData {
    enum class Kind { Ax, Abs, App };
    Kind kind = Kind::Ax;
    Track track = 0;        // axiom track
    SType type;             // axiom type
    std::set<Track> args;   // argument tracks of an application

    static NodeData ax(Track k, SType t) { return {Kind::Ax, k, std::move(t), {}}; }
    static NodeData abs() { return {Kind::Abs, 0, SType{}, {}}; }
    static NodeData app(std::set<Track> ks) { return {Kind::App, 0, SType{}, std::move(ks)}; }
    bool operator==(const NodeData& o) const {
        return kind == o.kind && track == o.track && args == o.args &&
               (kind != Kind::Ax || type == o.type);
    }
};

// Absent variables have the empty sequence type.
using Context = std::map<std::string, SeqType>;

struct Judgment {
    Context ctx;
    SType type;
};

struct Derivation {
    TermPtr term;
    std::map<Position, NodeData> nodes;
    Flavor flavor = Flavor::S;
};

bool derivation_equal(const Derivation& a, const Derivation& b);

// A derivation whose judgments have been reconstructed and validated.
class Checked {
public:
    const Derivation& derivation() const { return *d_; }
    const TermPtr& term() const { return d_->term; }
    const std::map<Position, NodeData>& nodes() const { return d_->nodes; }
    const NodeData& node(const Position& a) const;
    bool has(const Position& a) const { return d_->nodes.count(a) != 0; }

    const Judgment& judgment(const Position& a) const;
    const SType& type(const Position& a) const { return judgment(a).type; }
    SeqType ctx(const Position& a, const std::string& x) const;
    const Judgment& conclusion() const { return judgment(Position{}); }

    SeqType L(const Position& a) const;
    SeqType R(const Position& a) const;
    std::vector<Position> app_nodes() const;

    // Variable of an axiom leaf, or binder of an abstraction node.
    const std::string& var(const Position& a) const;
    std::vector<Position> axioms_above(const Position& a, const std::string& x) const;
    Position pos(const Position& a, const std::string& x, Track k) const;

    friend Checked check_derivation(const Derivation& d);

private:
    std::shared_ptr<const Derivation> d_;
    std::shared_ptr<const std::map<Position, Judgment>> j_;
    std::shared_ptr<const std::map<Position, std::string>> names_;
};

Checked check_derivation(const Derivation& d);
Checked check_derivation(const Derivation& d, Flavor f);

struct Biposition {
    bool left = false;
    Position a;
    std::string x;  // left bipositions only
    Position c;

    auto operator<=>(const Biposition&) const = default;
    bool operator==(const Biposition&) const = default;
    std::string str() const;
};

std::string biposition_lookup(const Checked& p, const Biposition& b);
std::set<Biposition> bisupport(const Checked& p);

using RContext = std::map<std::string, RMulti>;

struct RNode {
    NodeData::Kind kind = NodeData::Kind::Ax;
    std::string var;  // axiom variable or binder
    RType type;
    RContext ctx;
    // App: children[0] is the left premise, then the argument premises in canonical order.
    std::vector<RNode> children;
    // Derivation position this node was collapsed from; not part of equality.
    Position origin;
};

int compare(const RNode& a, const RNode& b);
inline bool operator==(const RNode& a, const RNode& b) { return compare(a, b) == 0; }

struct RDerivation {
    TermPtr term;
    RNode root;
};

bool operator==(const RDerivation& a, const RDerivation& b);
inline bool operator!=(const RDerivation& a, const RDerivation& b) { return !(a == b); }

RDerivation collapse_derivation(const Checked& p);
void check_R(const RDerivation& pi);
// Rebuild contexts and types bottom-up from axioms and re-sort premises.
RNode normalize_rnode(const RNode& n);
// Paths from the root, keyed by the origin position of each node.
std::map<Position, std::vector<std::size_t>> collapse_paths(const RNode& root);
const RNode& rnode_at(const RNode& root, const std::vector<std::size_t>& path);
Position rpath_position(const RNode& root, const std::vector<std::size_t>& path);
std::string print_rderivation(const RDerivation& pi);
std::string path_str(const std::vector<std::size_t>& path);

std::string print_context(const Context& c);
std::string print_judgment(const TermPtr& t, const Judgment& j);
std::string print_rcontext(const RContext& c);

nlohmann::json derivation_to_json(const Derivation& d);
Derivation derivation_from_json(const nlohmann::json& j);
std::string write_derivation(const Derivation& d);
Derivation read_derivation(const std::string& text);
Derivation load_derivation(const std::string& path);
void save_derivation(const Derivation& d, const std::string& path);

struct GenBudget {
    std::size_t width = 2;
    Track track_pool = 64;
    std::size_t max_results = 64;
    std::size_t atom_pool = 0;  // atoms drawn cyclically from o1..oN; 0 makes every atom fresh
};

std::vector<Derivation> generate_normal_form_derivations(const TermPtr& t, const GenBudget& budget = {});

Derivation hybridize(const RDerivation& pi);

}  // namespace rigid
