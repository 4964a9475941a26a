#include "rigid/trivialize.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace rigid {

namespace {

[[noreturn]] void bad_iso(const Position& a, const std::string& why) {
    throw Error(ErrorKind::Domain, "not a derivation isomorphism at " + a.str() + ": " + why, a.str());
}

TypeIso prefix_iso(Track k, Track k2, const TypeIso& inner) {
    TypeIso m;
    for (const auto& [c, d] : inner) m.emplace(Position{k}.concat(c), Position{k2}.concat(d));
    return m;
}

std::string node_label(const Checked& p, const Position& a) {
    const NodeData& n = p.node(a);
    switch (n.kind) {
    case NodeData::Kind::Ax: return "ax " + p.var(a) + " " + print_rtype(collapse_type(n.type));
    case NodeData::Kind::Abs: return "abs " + p.var(a);
    case NodeData::Kind::App: return "app";
    }
    return "?";
}

}  // namespace

DerivedIsos derive_isos(const Checked& p1, const Checked& p2, const DerivationIso& psi) {
    PosSet s1, s2;
    for (const auto& [a, _] : p1.nodes()) s1.insert(a);
    for (const auto& [a, _] : p2.nodes()) s2.insert(a);
    if (check_01_iso(s1, s2, psi.supp) != IsoCheck::Ok) bad_iso(Position{}, "support map is not a 01-isomorphism");

    DerivedIsos d;
    for (auto it = p1.nodes().rbegin(); it != p1.nodes().rend(); ++it) {
        const Position& a = it->first;
        const NodeData& n = it->second;
        const Position& a2 = psi.supp.at(a);
        const NodeData& n2 = p2.node(a2);
        if (n.kind != n2.kind || (n.kind != NodeData::Kind::App && p1.var(a) != p2.var(a2)))
            bad_iso(a, "rule mismatch");
        TypeIso ti;
        std::map<std::string, TypeIso> ci;
        switch (n.kind) {
        case NodeData::Kind::Ax: {
            auto f = psi.ax.find(a);
            if (f == psi.ax.end()) bad_iso(a, "no axiom type iso");
            ti = f->second;
            ci[p1.var(a)] = prefix_iso(n.track, n2.track, ti);
            break;
        }
        case NodeData::Kind::Abs: {
            const std::string& x = p1.var(a);
            ci = d.ctx.at(a.child(0));
            TypeIso src;
            if (auto f = ci.find(x); f != ci.end()) {
                src = f->second;
                ci.erase(f);
            }
            ti = arrow_iso(src, d.node.at(a.child(0)));
            break;
        }
        case NodeData::Kind::App: {
            ti = target_iso(d.node.at(a.child(1)));
            ci = d.ctx.at(a.child(1));
            for (Track k : n.args) {
                Position ak2 = psi.supp.at(a.child(k));
                if (ak2.parent() != a2) bad_iso(a, "argument edge leaves the node");
                for (const auto& [x, m] : d.ctx.at(a.child(k)))
                    for (const auto& [c, c2] : m) ci[x].emplace(c, c2);
            }
            break;
        }
        }
        if (!is_type_iso(p1.type(a), p2.type(a2), ti)) bad_iso(a, "type isomorphism fails");
        for (const auto& [x, m] : ci)
            if (!is_seq_iso(p1.ctx(a, x), p2.ctx(a2, x), m)) bad_iso(a, "context isomorphism fails for " + x);
        for (const auto& [x, f] : p1.judgment(a).ctx)
            if (!f.empty() && !ci.count(x)) bad_iso(a, "context entry without iso for " + x);
        d.node.emplace(a, std::move(ti));
        d.ctx.emplace(a, std::move(ci));
    }
    return d;
}

TypeIso iso_left(const DerivedIsos& d, const Position& a) { return source_iso(d.node.at(a.child(1))); }

TypeIso iso_right(const Checked& p1, const DerivationIso& psi, const DerivedIsos& d, const Position& a) {
    TypeIso m;
    for (Track k : p1.node(a).args) {
        TypeIso part = prefix_iso(k, psi.supp.at(a.child(k)).back(), d.node.at(a.child(k)));
        m.insert(part.begin(), part.end());
    }
    return m;
}

Interface transport_interface(const Checked& p1, const Interface& i1, const Checked& p2,
                              const DerivationIso& psi) {
    DerivedIsos d = derive_isos(p1, p2, psi);
    Interface out;
    for (const auto& a : p1.app_nodes())
        out.emplace(psi.supp.at(a),
                    compose(iso_right(p1, psi, d, a), compose(i1.at(a), inverse_map(iso_left(d, a)))));
    return out;
}

bool verify_derivation_iso(const Checked& p1, const Interface& i1, const Checked& p2, const Interface& i2,
                           const DerivationIso& psi, std::string* why) {
    try {
        if (!term_equal(p1.term(), p2.term()) && !alpha_equiv(p1.term(), p2.term()))
            throw Error(ErrorKind::Domain, "subjects differ");
        DerivedIsos d = derive_isos(p1, p2, psi);
        for (const auto& a : p1.app_nodes()) {
            const Position& a2 = psi.supp.at(a);
            TypeIso lhs = compose(iso_right(p1, psi, d, a), i1.at(a));
            TypeIso rhs = compose(i2.at(a2), iso_left(d, a));
            if (lhs != rhs) bad_iso(a, "interface square does not commute");
        }
        return true;
    } catch (const Error& e) {
        if (why) *why = e.what();
        return false;
    } catch (const std::out_of_range& e) {
        if (why) *why = std::string("incomplete map: ") + e.what();
        return false;
    }
}

std::vector<DerivationIso> enumerate_derivation_isos(const Checked& p1, const Interface& i1, const Checked& p2,
                                                     const Interface& i2, std::size_t budget) {
    std::vector<DerivationIso> out;
    if (!alpha_equiv(p1.term(), p2.term())) return out;
    Labelled l1, l2;
    for (const auto& [a, _] : p1.nodes()) l1.emplace(a, node_label(p1, a));
    for (const auto& [a, _] : p2.nodes()) l2.emplace(a, node_label(p2, a));
    std::vector<Position> axioms;
    for (const auto& [a, n] : p1.nodes())
        if (n.kind == NodeData::Kind::Ax) axioms.push_back(a);

    for (const auto& supp : enumerate_labelled_isos(l1, l2)) {
        std::vector<std::vector<TypeIso>> choices;
        bool empty = false;
        for (const auto& a : axioms) {
            choices.push_back(enumerate_type_isos(p1.type(a), p2.type(supp.at(a))));
            empty = empty || choices.back().empty();
        }
        if (empty) continue;
        DerivationIso psi{supp, {}};
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (out.size() >= budget) return;
            if (i == axioms.size()) {
                if (verify_derivation_iso(p1, i1, p2, i2, psi)) out.push_back(psi);
                return;
            }
            for (const auto& t : choices[i]) {
                psi.ax[axioms[i]] = t;
                go(i + 1);
            }
            psi.ax.erase(axioms[i]);
        };
        go(0);
        if (out.size() >= budget) break;
    }
    return out;
}

Relabelled apply_derivation_relabelling(const Checked& p, const DerivationRelabelling& r) {
    Relabelled out;
    out.d.term = p.term();
    out.d.flavor = Flavor::Sh;
    for (const auto& [a, n] : p.nodes()) {
        Position a2 = a.empty() ? Position{} : out.psi.supp.at(a.parent());
        if (!a.empty()) {
            Track k = a.back();
            if (is_mutable(k)) {
                auto it = r.arg.find(a);
                if (it == r.arg.end()) throw Error(ErrorKind::Domain, "relabelling misses edge " + a.str(), a.str());
                k = it->second;
            }
            a2 = a2.child(k);
        }
        out.psi.supp.emplace(a, a2);
        NodeData n2 = n;
        if (n.kind == NodeData::Kind::App) {
            n2.args.clear();
            for (Track k : n.args) n2.args.insert(r.arg.at(a.child(k)));
            if (n2.args.size() != n.args.size())
                throw Error(ErrorKind::Domain, "relabelling not injective on the arguments of " + a.str(), a.str());
        } else if (n.kind == NodeData::Kind::Ax) {
            auto tt = r.ax_track.find(a);
            if (tt == r.ax_track.end())
                throw Error(ErrorKind::Domain, "relabelling misses axiom " + a.str(), a.str());
            n2.track = tt->second;
            Labelled sup = type_support(n.type);
            auto rt = r.ax_type.find(a);
            PosMap iso = rt == r.ax_type.end() ? identity_map(domain(sup))
                                               : apply_relabelling(domain(sup), rt->second).iso;
            Labelled sup2;
            for (const auto& [c, lab] : sup) sup2.emplace(iso.at(c), lab);
            n2.type = type_from_support(sup2);
            out.psi.ax.emplace(a, std::move(iso));
        }
        if (!out.d.nodes.emplace(a2, std::move(n2)).second)
            throw Error(ErrorKind::Domain, "relabelling not injective at " + a2.str(), a2.str());
    }
    return out;
}

ThreadClasses consumption_closure(const Threads& th, const std::vector<ConsumptionArc>& arcs) {
    std::vector<std::size_t> parent(th.count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (const auto& a : arcs) {
        std::size_t i = find(a.left), j = find(a.right);
        if (i != j) parent[std::max(i, j)] = std::min(i, j);
    }
    ThreadClasses cls;
    cls.class_of.resize(th.count());
    std::map<std::size_t, std::size_t> ids;
    for (std::size_t t = 0; t < th.count(); ++t) {
        auto [it, fresh] = ids.emplace(find(t), cls.members.size());
        if (fresh) cls.members.emplace_back();
        cls.members[it->second].push_back(t);
        cls.class_of[t] = it->second;
    }
    return cls;
}

std::vector<Track> assign_track_values(const Checked& p, const ThreadAnalysis& an, const ThreadClasses& cls) {
    std::vector<std::set<std::size_t>> conflicts(cls.members.size());
    for (const auto& [i, j] : brother_pairs(p, an.th)) {
        std::size_t ci = cls.class_of[i], cj = cls.class_of[j];
        if (ci == cj) {
            auto chain = find_brother_chain(p, an.th, an.arcs);
            throw Error(ErrorKind::BrotherChain,
                        "brother chain: " + (chain ? chain_str(*chain)
                                                   : "t" + std::to_string(i) + " ~ t" + std::to_string(j)));
        }
        conflicts[ci].insert(cj);
        conflicts[cj].insert(ci);
    }
    std::vector<Track> values(cls.members.size(), 0);
    for (std::size_t c = 0; c < cls.members.size(); ++c) {
        std::set<Track> used;
        for (std::size_t d : conflicts[c])
            if (values[d]) used.insert(values[d]);
        Track v = 2;
        while (used.count(v)) ++v;
        values[c] = v;
    }
    return values;
}

DerivationRelabelling thread_relabelling(const Checked& p, const Threads& th, const ThreadClasses& cls,
                                         const std::vector<Track>& values) {
    auto val = [&](const Edge& e) { return values.at(cls.class_of.at(th.of(e))); };
    DerivationRelabelling r;
    for (const auto& [a, n] : p.nodes()) {
        if (!a.empty() && is_mutable(a.back())) r.arg.emplace(a, val(Edge::arg(a)));
        if (n.kind != NodeData::Kind::Ax) continue;
        r.ax_track.emplace(a, val(Edge::left(a, p.var(a), Position{n.track})));
        Relabelling01& t = r.ax_type[a];
        for (const auto& [c, _] : type_support(n.type))
            if (!c.empty() && is_mutable(c.back())) t.emplace(c, val(Edge::right(a, c)));
    }
    return r;
}

Trivialization trivialize(const Operable& op) {
    Checked p = check_operable(op);
    Trivialization t;
    t.an = analyze_threads(p, op.iface);
    t.classes = consumption_closure(t.an.th, t.an.arcs);
    t.values = assign_track_values(p, t.an, t.classes);
    Relabelled rel = apply_derivation_relabelling(p, thread_relabelling(p, t.an.th, t.classes, t.values));
    rel.d.flavor = Flavor::S;
    Checked p0 = check_derivation(rel.d, Flavor::S);
    std::string why;
    if (!verify_derivation_iso(p, op.iface, p0, identity_interface(p0), rel.psi, &why))
        throw Error(ErrorKind::Internal, "trivialization is not an isomorphism: " + why);
    if (collapse_derivation(p0) != collapse_derivation(p))
        throw Error(ErrorKind::Internal, "trivialization changed the collapse");
    t.p0 = std::move(rel.d);
    t.psi = std::move(rel.psi);
    return t;
}

nlohmann::json trivialization_report(const Trivialization& t) {
    nlohmann::json supp = nlohmann::json::array();
    for (const auto& [a, b] : t.psi.supp) supp.push_back({a.str(), b.str()});
    nlohmann::json ax = nlohmann::json::array();
    for (const auto& [a, m] : t.psi.ax) {
        nlohmann::json tab = nlohmann::json::array();
        for (const auto& [c, d] : m) tab.push_back({c.str(), d.str()});
        ax.push_back({{"pos", a.str()}, {"iso", tab}});
    }
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t c = 0; c < t.classes.members.size(); ++c)
        classes.push_back({{"class", c}, {"threads", t.classes.members[c]}, {"track", t.values[c]}});
    return {{"derivation", derivation_to_json(t.p0)}, {"psi", {{"support", supp}, {"axioms", ax}}},
            {"classes", classes}};
}

std::optional<Edge> residual_referent(const Checked& p, const Checked& p2, const ResidualMaps& m, const Edge& r) {
    if (r.kind == Edge::Kind::Arg) {
        if (collapse_position(r.a) == m.b) return std::nullopt;
        return Edge::arg(m.res.at(r.outer()));
    }
    auto it = m.res.find(r.a);
    if (r.kind == Edge::Kind::Left) {
        if (it == m.res.end()) return std::nullopt;
        return Edge::left(it->second, p2.var(it->second), r.c);
    }
    if (it != m.res.end()) return Edge::right(it->second, r.c);
    (void)p;
    return referent(p2, Edge::right(m.qres.at(r.a), m.iso.at(r.a).at(r.c)));
}

std::optional<Edge> residual_edge(const Checked& p, const ResidualMaps& m, const Edge& e) {
    (void)p;
    if (e.kind == Edge::Kind::Left) return std::nullopt;
    if (e.kind == Edge::Kind::Arg) {
        auto it = m.res.find(e.outer());
        if (it == m.res.end()) return std::nullopt;
        return Edge::arg(it->second);
    }
    if (collapse_position(e.a) == m.b.child(1)) return std::nullopt;
    auto q = m.qres.find(e.a);
    if (q == m.qres.end()) return std::nullopt;
    return Edge::right(q->second, m.iso.at(e.a).at(e.c));
}

StrategyTrace run_collapsing_strategy(const Operable& p, const ConsumptionArc& arc) {
    if (arc.left_pol != Polarity::Neg)
        throw Error(ErrorKind::Domain, "collapsing strategy needs a negatively left-consumed thread", arc.a.str());
    StrategyTrace tr;
    tr.states.push_back(p);
    Checked c = check_operable(p);
    Threads th = compute_threads(c);
    std::optional<Edge> rl = th.ref.at(arc.left), rr = th.ref.at(arc.right);
    Position a = arc.a;
    for (;;) {
        const Position& a0 = rl->a;
        const std::string y = c.var(a0);
        Position binder;
        bool found = false;
        for (std::size_t n = a0.size(); n-- > 0;) {
            Position q = a0.prefix(n);
            if (c.node(q).kind == NodeData::Kind::Abs && c.var(q) == y) {
                binder = q;
                found = true;
                break;
            }
        }
        if (!found || !a.child(1).is_prefix_of(binder))
            throw Error(ErrorKind::Internal, "left referent is not bound above the consuming node", a.str());
        Position fire = a;
        if (binder != a.child(1)) {
            bool got = false;
            for (std::size_t n = binder.size(); n-- > a.size() + 1;) {
                Position q = binder.prefix(n);
                if (c.node(q).kind == NodeData::Kind::App) {
                    fire = q;
                    got = true;
                    break;
                }
            }
            if (!got) throw Error(ErrorKind::Internal, "no inner redex in the tower", a.str());
        }
        Position b = collapse_position(fire);
        OperableStep st = reduce_operable(tr.states.back(), b);
        Checked c2 = check_derivation(st.result.d);
        tr.seq.push_back(b);
        tr.states.push_back(st.result);
        rl = residual_referent(c, c2, st.maps, *rl);
        rr = residual_referent(c, c2, st.maps, *rr);
        c = c2;
        if (fire == a) break;
        a = st.maps.res.at(a);
        if (!rl || !rr) throw Error(ErrorKind::Internal, "arc thread destroyed before the last step", a.str());
    }
    tr.left_ref = rl;
    tr.right_ref = rr;
    return tr;
}

std::vector<Position> collapsing_strategy(const Operable& p, const ConsumptionArc& arc) {
    return run_collapsing_strategy(p, arc).seq;
}

}  // namespace rigid
