#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rigid/derivations.hpp"

namespace rigid {

// Per application node a, a sequence type isomorphism L(a) -> R(a).
using Interface = std::map<Position, TypeIso>;

struct Operable {
    Derivation d;
    Interface iface;
};

Checked check_operable(const Operable& p);
bool is_trivial(const Checked& p, const Interface& iface);
Interface identity_interface(const Checked& p);
// Lexicographically least interface at every application node.
Interface default_interface(const Checked& p);

std::vector<RootIso> enumerate_root_interfaces(const Checked& p, const Position& a);
std::vector<TypeIso> enumerate_interfaces(const Checked& p, const Position& a,
                                          std::size_t limit = std::numeric_limits<std::size_t>::max());

nlohmann::json interface_to_json(const Interface& i);
Interface interface_from_json(const nlohmann::json& j);
Interface load_interface(const std::string& path);

// Root interfaces at every derivation node over the redex position b.
struct ReductionChoice {
    Position b;
    std::map<Position, RootIso> rho;
};

nlohmann::json choice_to_json(const ReductionChoice& c);
ReductionChoice choice_from_json(const nlohmann::json& j);

std::vector<Position> redex_nodes(const Checked& p, const Position& b);
std::vector<ReductionChoice> enumerate_choices(const Checked& p, const Position& b,
                                               std::size_t limit = std::numeric_limits<std::size_t>::max());

struct ResidualMaps {
    Position b;
    std::map<Position, Position> res;   // Res_b
    std::map<Position, Position> qres;  // QRes_b, extends Res_b
    // Per redex node a: bound variable, and relative position a_k of the axiom with track k.
    std::map<Position, std::string> redex_var;
    std::map<Position, std::map<Track, Position>> axiom_of_track;
    // QRes_{b|alpha} : T(alpha) -> T'(QRes alpha); filled by compute_residual_isos.
    std::map<Position, TypeIso> iso;
    Derivation reduct;
};

ResidualMaps residual_support(const Checked& p, const ReductionChoice& rho);
void compute_residual_isos(const Checked& p, const Checked& reduct, const Interface& redex_iface,
                           ResidualMaps& m);
// ResL and ResR at an application node alpha in the domain of Res_b.
TypeIso res_left(const Checked& p, const ResidualMaps& m, const Position& alpha);
TypeIso res_right(const Checked& p, const ResidualMaps& m, const Position& alpha);

Derivation reduce_Sh(const Checked& p, const ReductionChoice& rho);
Derivation reduce_S(const Derivation& p, const Position& b);

struct OperableStep {
    Operable result;
    ResidualMaps maps;
};
OperableStep reduce_operable(const Operable& p, const Position& b);

// Reduction choice on an R-derivation: for every redex node (path from the root),
// the premise index (child index >= 1) replacing each occurrence of the bound
// variable, occurrences taken in path order.
using RPath = std::vector<std::size_t>;
struct RChoice {
    Position b;
    std::map<RPath, std::vector<std::size_t>> per_node;
    bool operator==(const RChoice&) const = default;
};

std::vector<RPath> redex_nodes_R(const RDerivation& pi, const Position& b);
std::vector<RPath> occurrences_R(const RNode& redex);
RDerivation reduce_R(const RDerivation& pi, const RChoice& c);
std::vector<RChoice> enumerate_reduction_choices(const RDerivation& pi, const Position& b,
                                                 std::size_t limit = std::numeric_limits<std::size_t>::max());
RChoice collapse_choice(const Checked& p, const ReductionChoice& rho);
ReductionChoice lift_choice(const Checked& p, const RChoice& c);

Operable build_operable_from_choices(const RDerivation& pi, const Operable& p0,
                                     const std::vector<RChoice>& choices);

}  // namespace rigid
