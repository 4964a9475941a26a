#include "rigid/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "rigid/error.hpp"

namespace rigid {

namespace {

const std::vector<std::string> kBinders = {"x", "w", "v", "u", "s", "r", "q", "p"};

std::vector<TermPtr> terms_of_size(std::size_t n, std::size_t depth, const std::vector<std::string>& free_names) {
    std::vector<TermPtr> out;
    if (n == 1) {
        for (const auto& y : free_names) out.push_back(make_var(y));
        for (std::size_t i = 0; i < depth; ++i) out.push_back(make_var(kBinders.at(i)));
        return out;
    }
    if (depth < kBinders.size())
        for (const auto& b : terms_of_size(n - 1, depth + 1, free_names)) out.push_back(make_lam(kBinders[depth], b));
    for (std::size_t l = 1; l + 1 < n; ++l) {
        auto us = terms_of_size(n - 1 - l, depth, free_names);
        for (const auto& f : terms_of_size(l, depth, free_names))
            for (const auto& u : us) out.push_back(make_app(f, u));
    }
    return out;
}

void free_occurrences(const TermPtr& t, const std::string& x, const Position& at, std::vector<Position>& out) {
    switch (t->kind) {
    case Term::Kind::Var:
        if (t->name == x) out.push_back(at);
        break;
    case Term::Kind::Lam:
        if (t->name != x) free_occurrences(t->left, x, at.child(0), out);
        break;
    case Term::Kind::App:
        free_occurrences(t->left, x, at.child(1), out);
        free_occurrences(t->right, x, at.child(2), out);
        break;
    }
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[draw(rng, i)]);
}

// k distinct tracks drawn from [2, 2 + k + spread).
std::vector<Track> distinct_tracks(std::size_t k, Track spread, Rng& rng) {
    std::vector<Track> pool(k + spread);
    std::iota(pool.begin(), pool.end(), Track{2});
    shuffle(pool, rng);
    pool.resize(k);
    return pool;
}

}  // namespace

std::vector<TermPtr> enumerate_terms(std::size_t max_size, const std::vector<std::string>& free_names) {
    std::vector<TermPtr> out;
    for (std::size_t n = 1; n <= max_size; ++n) {
        auto layer = terms_of_size(n, 0, free_names);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

ReductionPath leftmost_path(const TermPtr& t, std::size_t max_steps) {
    ReductionPath p;
    p.terms.push_back(t);
    for (std::size_t i = 0; i <= max_steps; ++i) {
        auto rs = redexes(p.terms.back());
        if (rs.empty()) {
            p.normal = true;
            break;
        }
        if (i == max_steps) break;
        p.steps.push_back(rs.front());
        p.terms.push_back(beta_reduce_at(p.terms.back(), rs.front()));
    }
    return p;
}

Derivation subject_expand(const TermPtr& t, const Position& b, const Derivation& reduct) {
    TermPtr redex = subterm_at(t, b);
    if (!is_redex(redex)) throw Error(ErrorKind::NotARedex, "no redex at " + b.str(), b.str());
    if (!alpha_equiv(beta_reduce_at(t, b), reduct.term))
        throw Error(ErrorKind::Domain, "derivation does not type the reduct at " + b.str(), b.str());
    const std::string& x = redex->left->name;
    std::vector<Position> occ;
    free_occurrences(redex->left->left, x, Position{}, occ);
    Checked p2 = check_derivation(reduct);

    Derivation out{t, {}, reduct.flavor};
    const std::size_t n = b.size();
    std::map<Position, std::map<Position, Track>> copies;  // redex node -> copy root -> track
    for (const auto& [d, node] : reduct.nodes) {
        if (d.size() < n || collapse_position(d.prefix(n)) != b) {
            out.nodes.emplace(d, node);
            continue;
        }
        Position a = d.prefix(n), g = d.suffix(n), cg = collapse_position(g);
        auto& cp = copies[a];
        auto q = std::find_if(occ.begin(), occ.end(), [&](const Position& o) { return o.is_prefix_of(cg); });
        if (q == occ.end()) {
            out.nodes.emplace(a.child(1).child(0).concat(g), node);
            continue;
        }
        Position g0 = g.prefix(q->size());
        auto it = cp.find(g0);
        if (it == cp.end()) it = cp.emplace(g0, static_cast<Track>(cp.size() + 2)).first;
        out.nodes.emplace(a.child(it->second).concat(g.suffix(q->size())), node);
    }
    for (const auto& [a, cp] : copies) {
        std::set<Track> ks;
        for (const auto& [g0, k] : cp) {
            ks.insert(k);
            out.nodes.emplace(a.child(1).child(0).concat(g0), NodeData::ax(k, p2.type(a.concat(g0))));
        }
        out.nodes.emplace(a, NodeData::app(std::move(ks)));
        out.nodes.emplace(a.child(1), NodeData::abs());
    }
    check_derivation(out);
    return out;
}

std::vector<Derivation> expand_path(const ReductionPath& path, const GenBudget& budget) {
    if (!path.normal) throw Error(ErrorKind::Budget, "term not normalized within the step bound");
    std::vector<Derivation> out = generate_normal_form_derivations(path.terms.back(), budget);
    for (auto& d : out)
        for (std::size_t i = path.steps.size(); i-- > 0;) d = subject_expand(path.terms[i], path.steps[i], d);
    return out;
}

std::vector<CorpusItem> generate_corpus(const CorpusOptions& o) {
    Rng rng(o.seed);
    std::vector<TermPtr> with_redex, normal;
    for (const auto& t : enumerate_terms(o.max_size, {"y", "z"})) {
        if (is_normal(t)) {
            normal.push_back(t);
            continue;
        }
        ReductionPath p = leftmost_path(t, o.max_steps);
        if (p.normal && term_size(p.terms.back()) <= 2 * o.max_size) with_redex.push_back(t);
    }
    shuffle(with_redex, rng);
    shuffle(normal, rng);
    with_redex.insert(with_redex.end(), normal.begin(), normal.end());

    std::vector<CorpusItem> out;
    GenBudget budget;
    budget.width = o.width;
    budget.max_results = 4 * o.per_term;
    std::size_t term_no = 0;
    for (const auto& t : with_redex) {
        if (out.size() >= o.count) break;
        std::vector<Derivation> ds;
        budget.atom_pool = draw(rng, 3);
        try {
            ds = expand_path(leftmost_path(t, o.max_steps), budget);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Budget) throw;
            continue;
        }
        shuffle(ds, rng);
        if (ds.size() > o.per_term) ds.resize(o.per_term);
        for (std::size_t i = 0; i < ds.size() && out.size() < o.count; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "t%04zu_%zu", term_no, i);
            out.push_back({name, std::move(ds[i])});
        }
        ++term_no;
    }
    return out;
}

std::vector<CorpusItem> duplication_corpus(std::uint64_t seed, std::size_t max_size, std::size_t count,
                                           std::size_t max_choices) {
    Rng rng(seed);
    std::vector<TermPtr> terms = enumerate_terms(max_size, {"y"});
    shuffle(terms, rng);
    GenBudget budget;
    budget.atom_pool = 1;
    budget.max_results = 16;
    std::vector<CorpusItem> out;
    for (std::size_t n = 0; n < terms.size() && out.size() < count; ++n) {
        if (is_normal(terms[n])) continue;
        ReductionPath path = leftmost_path(terms[n], 6);
        if (!path.normal || term_size(path.terms.back()) > 12) continue;
        std::vector<Derivation> ds = expand_path(path, budget);
        std::size_t i = 0;
        for (auto& d : ds) {
            Checked p = check_derivation(d);
            bool wanted = false;
            for (const auto& b : redexes(d.term)) {
                if (redex_nodes(p, b).empty()) continue;
                std::size_t k = enumerate_choices(p, b, max_choices + 1).size();
                wanted = wanted || (k > 1 && k <= max_choices);
            }
            if (!wanted || out.size() >= count) continue;
            char name[32];
            std::snprintf(name, sizeof name, "d%05zu_%zu", n, i++);
            out.push_back({name, std::move(d)});
        }
    }
    return out;
}

DerivationRelabelling random_relabelling(const Checked& p, Rng& rng, Track spread) {
    DerivationRelabelling r;
    std::vector<Position> axioms;
    for (const auto& [a, n] : p.nodes()) {
        if (n.kind == NodeData::Kind::App) {
            auto ks = distinct_tracks(n.args.size(), spread, rng);
            std::size_t i = 0;
            for (Track k : n.args) r.arg[a.child(k)] = ks[i++];
        } else if (n.kind == NodeData::Kind::Ax) {
            axioms.push_back(a);
            std::map<Position, std::vector<Position>> siblings;
            for (const auto& c : domain(type_support(n.type)))
                if (!c.empty() && is_mutable(c.back())) siblings[c.parent()].push_back(c);
            Relabelling01 rel;
            for (const auto& [_, cs] : siblings) {
                auto ks = distinct_tracks(cs.size(), spread, rng);
                for (std::size_t i = 0; i < cs.size(); ++i) rel[cs[i]] = ks[i];
            }
            r.ax_type[a] = std::move(rel);
        }
    }
    // Axiom tracks are made globally distinct so that every context union stays disjoint.
    auto ks = distinct_tracks(axioms.size(), spread, rng);
    for (std::size_t i = 0; i < axioms.size(); ++i) r.ax_track[axioms[i]] = ks[i];
    return r;
}

Operable random_hybrid(const Checked& p, Rng& rng) {
    Relabelled rel = apply_derivation_relabelling(p, random_relabelling(p, rng));
    Checked q = check_derivation(rel.d);
    Interface iface = transport_interface(p, identity_interface(p), q, rel.psi);
    return {std::move(rel.d), std::move(iface)};
}

Interface random_interface(const Checked& p, Rng& rng, std::size_t limit) {
    Interface out;
    for (const auto& a : p.app_nodes()) {
        auto isos = enumerate_interfaces(p, a, limit);
        if (isos.empty()) throw Error(ErrorKind::Internal, "no interface at " + a.str(), a.str());
        out[a] = isos[draw(rng, isos.size())];
    }
    return out;
}

std::vector<TowerInstance> redex_towers(std::uint64_t seed, std::size_t count, std::size_t max_height) {
    Rng rng(seed);
    const std::vector<std::string> bodies = {"x", "x y", "y x", "x x", "x (x y)", "\\w. x w", "x z y", "x (y x)"};
    const std::vector<std::string> args = {"y", "z", "\\w. w", "\\w. y", "y z"};
    const std::vector<std::string> tower = {"f", "g", "h"};
    std::vector<TowerInstance> out;
    GenBudget budget;
    budget.width = 2;
    budget.max_results = 8;
    for (std::size_t attempt = 0; out.size() < count && attempt < 50 * count; ++attempt) {
        std::size_t height = 1 + draw(rng, max_height);
        // The bodies may also use the tower binders.
        std::string u = bodies[draw(rng, bodies.size())];
        if (height > 1 && draw(rng, 3) == 0) u = "(" + u + ") " + tower[draw(rng, height - 1)];
        std::string t = "\\x. " + u;
        for (std::size_t i = height - 1; i-- > 0;)
            t = "(\\" + tower[i] + ". " + t + ") (" + args[draw(rng, args.size())] + ")";
        t = "(" + t + ") (" + args[draw(rng, args.size())] + ")";
        TermPtr term = parse_term(t);
        std::vector<Derivation> ds = expand_path(leftmost_path(term, 8), budget);
        if (ds.empty()) continue;
        Checked p = check_derivation(ds[draw(rng, ds.size())]);
        Operable hy = random_hybrid(p, rng);
        Checked q = check_derivation(hy.d);
        if (draw(rng, 2) == 0) hy.iface = random_interface(q, rng);
        check_operable(hy);
        auto an = analyze_threads(q, hy.iface);
        std::vector<ConsumptionArc> neg;
        for (const auto& arc : an.arcs)
            if (arc.a.empty() && arc.left_pol == Polarity::Neg) neg.push_back(arc);
        if (neg.empty()) continue;
        char name[48];
        std::snprintf(name, sizeof name, "tower%03zu_h%zu", out.size(), height);
        out.push_back({name, height, std::move(hy), neg[draw(rng, neg.size())]});
    }
    return out;
}

}  // namespace rigid
