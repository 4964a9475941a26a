#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rigid/derivations.hpp"
#include "rigid/reduction.hpp"
#include "rigid/threads.hpp"

namespace rigid {

// Isomorphism of hybrid derivations: a 01-iso of supports and a type iso at every axiom leaf.
struct DerivationIso {
    PosMap supp;
    std::map<Position, TypeIso> ax;
};

// Type and context isos induced at every node by a DerivationIso.
struct DerivedIsos {
    std::map<Position, TypeIso> node;
    std::map<Position, std::map<std::string, TypeIso>> ctx;
};

// Throws Domain when psi does not induce isomorphisms everywhere.
DerivedIsos derive_isos(const Checked& p1, const Checked& p2, const DerivationIso& psi);
TypeIso iso_left(const DerivedIsos& d, const Position& a);
TypeIso iso_right(const Checked& p1, const DerivationIso& psi, const DerivedIsos& d, const Position& a);
// The interface on p2 making psi commute with i1.
Interface transport_interface(const Checked& p1, const Interface& i1, const Checked& p2,
                              const DerivationIso& psi);

bool verify_derivation_iso(const Checked& p1, const Interface& i1, const Checked& p2, const Interface& i2,
                           const DerivationIso& psi, std::string* why = nullptr);
std::vector<DerivationIso> enumerate_derivation_isos(const Checked& p1, const Interface& i1, const Checked& p2,
                                                     const Interface& i2, std::size_t budget = 64);

struct DerivationRelabelling {
    std::map<Position, Track> arg;       // argument edge a.k -> new track
    std::map<Position, Track> ax_track;  // axiom leaf -> new axiom track
    std::map<Position, Relabelling01> ax_type;
};

struct Relabelled {
    Derivation d;  // flavor Sh
    DerivationIso psi;
};
Relabelled apply_derivation_relabelling(const Checked& p, const DerivationRelabelling& r);

struct ThreadClasses {
    std::vector<std::size_t> class_of;  // by thread id
    std::vector<std::vector<std::size_t>> members;
};

ThreadClasses consumption_closure(const Threads& th, const std::vector<ConsumptionArc>& arcs);
// Least track >= 2 unused by any brother class, classes in order. Throws BrotherChain.
std::vector<Track> assign_track_values(const Checked& p, const ThreadAnalysis& an, const ThreadClasses& cls);
DerivationRelabelling thread_relabelling(const Checked& p, const Threads& th, const ThreadClasses& cls,
                                         const std::vector<Track>& values);

struct Trivialization {
    Derivation p0;  // flavor S
    DerivationIso psi;
    ThreadAnalysis an;
    ThreadClasses classes;
    std::vector<Track> values;
};
Trivialization trivialize(const Operable& p);
nlohmann::json trivialization_report(const Trivialization& t);

// Residual of a referent edge across one reduction step.
std::optional<Edge> residual_referent(const Checked& p, const Checked& p2, const ResidualMaps& m, const Edge& r);
// QRes on right bipositions and argument edges.
std::optional<Edge> residual_edge(const Checked& p, const ResidualMaps& m, const Edge& e);

struct StrategyTrace {
    std::vector<Position> seq;
    std::vector<Operable> states;  // states[0] is the input
    std::optional<Edge> left_ref, right_ref;
};
// Requires a negative left polarity; the positions are redexes of the successive terms.
StrategyTrace run_collapsing_strategy(const Operable& p, const ConsumptionArc& arc);
std::vector<Position> collapsing_strategy(const Operable& p, const ConsumptionArc& arc);

}  // namespace rigid
