#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rigid/positions.hpp"

namespace rigid {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Var, Lam, App };
    Kind kind;
    std::string name;  // variable name, or binder name for Lam
    TermPtr left;      // Lam body, or App function
    TermPtr right;     // App argument

    bool is_var() const { return kind == Kind::Var; }
    bool is_lam() const { return kind == Kind::Lam; }
    bool is_app() const { return kind == Kind::App; }
};

TermPtr make_var(std::string x);
TermPtr make_lam(std::string x, TermPtr body);
TermPtr make_app(TermPtr f, TermPtr u);

TermPtr parse_term(const std::string& text);
std::string print_term(const TermPtr& t);

// Structural (name-sensitive) equality.
bool term_equal(const TermPtr& a, const TermPtr& b);
bool alpha_equiv(const TermPtr& a, const TermPtr& b);

PosSet support(const TermPtr& t);
std::size_t term_size(const TermPtr& t);
std::set<std::string> free_vars(const TermPtr& t);

// Positions are collapsed first, so derivation positions are accepted.
TermPtr subterm_at(const TermPtr& t, const Position& a);
struct Constructor {
    Term::Kind kind;
    std::string name;  // variable, or binder for Lam, empty for App
};
Constructor constructor_at(const TermPtr& t, const Position& a);

bool is_redex(const TermPtr& t);
std::vector<Position> redexes(const TermPtr& t);
TermPtr beta_reduce_at(const TermPtr& t, const Position& b);
TermPtr barendregt_rename(const TermPtr& t);
bool is_normal(const TermPtr& t);

// Leftmost-outermost normalization; empty result when the step bound is hit.
TermPtr normalize(const TermPtr& t, std::size_t max_steps);

}  // namespace rigid
