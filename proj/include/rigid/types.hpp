#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rigid/positions.hpp"

namespace rigid {

struct STypeRep;

// Rigid type: an atom or an arrow from a sequence type.
class SType {
public:
    SType() = default;
    static SType atom(std::string name);
    static SType arrow(std::map<Track, SType> source, SType target);

    bool valid() const { return rep_ != nullptr; }
    bool is_atom() const;
    bool is_arrow() const { return !is_atom(); }
    const std::string& name() const;
    const std::map<Track, SType>& source() const;
    const SType& target() const;

    friend int compare(const SType& a, const SType& b);
    bool operator==(const SType& o) const { return compare(*this, o) == 0; }
    bool operator<(const SType& o) const { return compare(*this, o) < 0; }

private:
    std::shared_ptr<const STypeRep> rep_;
};

using SeqType = std::map<Track, SType>;

struct STypeRep {
    std::string atom;  // empty for arrows
    SeqType source;
    SType target;
};

// Labels: atom name, or "->" for arrows.
Labelled type_support(const SType& t);
Labelled seq_support(const SeqType& f);
SType type_at(const SType& t, const Position& c);
SType seq_at(const SeqType& f, const Position& kc);
SType type_from_support(const Labelled& u);
SeqType seq_from_support(const Labelled& u);

SeqType seq_union(const SeqType& f1, const SeqType& f2);
std::set<Track> seq_conflicts(const SeqType& f1, const SeqType& f2);

SType parse_type(const std::string& text);
SeqType parse_seq(const std::string& text);
std::string print_type(const SType& t);
std::string print_seq(const SeqType& f);

struct RTypeRep;

// Multiset type in canonical form; structural equality is equality of types.
class RType {
public:
    RType() = default;
    static RType atom(std::string name);
    static RType arrow(std::vector<RType> source, RType target);

    bool is_atom() const;
    const std::string& name() const;
    const std::vector<RType>& source() const;
    const RType& target() const;

    friend int compare(const RType& a, const RType& b);
    bool operator==(const RType& o) const { return compare(*this, o) == 0; }
    bool operator!=(const RType& o) const { return compare(*this, o) != 0; }
    bool operator<(const RType& o) const { return compare(*this, o) < 0; }

private:
    std::shared_ptr<const RTypeRep> rep_;
};

using RMulti = std::vector<RType>;  // kept sorted

struct RTypeRep {
    std::string atom;
    RMulti source;
    RType target;
};

int compare(const RMulti& a, const RMulti& b);
RMulti multi_sum(const RMulti& a, const RMulti& b);

RType collapse_type(const SType& t);
RMulti collapse_seq(const SeqType& f);
std::string print_rtype(const RType& t);
std::string print_multi(const RMulti& m);
RType parse_rtype(const std::string& text);

bool equiv(const SType& a, const SType& b);
bool equiv(const SeqType& a, const SeqType& b);

using TypeIso = PosMap;
std::vector<TypeIso> enumerate_type_isos(const SType& a, const SType& b,
                                         std::size_t limit = std::numeric_limits<std::size_t>::max());
std::vector<TypeIso> enumerate_seq_isos(const SeqType& a, const SeqType& b,
                                        std::size_t limit = std::numeric_limits<std::size_t>::max());
std::vector<RootIso> enumerate_root_isos(const SeqType& a, const SeqType& b);
bool is_type_iso(const SType& a, const SType& b, const TypeIso& phi);
bool is_seq_iso(const SeqType& a, const SeqType& b, const TypeIso& phi);

// Image of a type under a 01-resetting of its support.
SType apply_type_iso(const SType& t, const TypeIso& phi);
SeqType apply_seq_iso(const SeqType& f, const TypeIso& phi);

// Iso on F -> T from isos on F and on T.
TypeIso arrow_iso(const TypeIso& source, const TypeIso& target);
// Restriction of an iso on F -> T to T (Tg) and to F (Sc).
TypeIso target_iso(const TypeIso& phi);
TypeIso source_iso(const TypeIso& phi);

}  // namespace rigid
