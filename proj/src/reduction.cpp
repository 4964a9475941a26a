#include "rigid/reduction.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace rigid {

Checked check_operable(const Operable& p) {
    Checked c = check_derivation(p.d);
    auto apps = c.app_nodes();
    for (const auto& a : apps) {
        auto it = p.iface.find(a);
        if (it == p.iface.end())
            throw Error(ErrorKind::InvalidInterface, "no interface at " + a.str(), a.str());
        if (!is_seq_iso(c.L(a), c.R(a), it->second))
            throw Error(ErrorKind::InvalidInterface, "interface at " + a.str() + " is not an isomorphism L -> R",
                        a.str());
    }
    if (p.iface.size() != apps.size())
        throw Error(ErrorKind::InvalidInterface, "interface given at a non-application node");
    return c;
}

Interface identity_interface(const Checked& p) {
    Interface i;
    for (const auto& a : p.app_nodes()) {
        if (!(p.L(a) == p.R(a)))
            throw Error(ErrorKind::InvalidInterface, "no identity interface at " + a.str(), a.str());
        i.emplace(a, identity_map(domain(seq_support(p.L(a)))));
    }
    return i;
}

bool is_trivial(const Checked& p, const Interface& iface) {
    for (const auto& a : p.app_nodes()) {
        if (!(p.L(a) == p.R(a))) return false;
        for (const auto& [c, d] : iface.at(a))
            if (c != d) return false;
    }
    return true;
}

std::vector<RootIso> enumerate_root_interfaces(const Checked& p, const Position& a) {
    return enumerate_root_isos(p.L(a), p.R(a));
}

std::vector<TypeIso> enumerate_interfaces(const Checked& p, const Position& a, std::size_t limit) {
    return enumerate_seq_isos(p.L(a), p.R(a), limit);
}

Interface default_interface(const Checked& p) {
    Interface i;
    for (const auto& a : p.app_nodes()) {
        auto is = enumerate_interfaces(p, a, 1);
        if (is.empty()) throw Error(ErrorKind::InvalidInterface, "no interface at " + a.str(), a.str());
        i.emplace(a, is.front());
    }
    return i;
}

nlohmann::json interface_to_json(const Interface& iface) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [a, phi] : iface) {
        nlohmann::json m = nlohmann::json::array();
        for (const auto& [c, d] : phi) m.push_back({c.str(), d.str()});
        arr.push_back({{"pos", a.str()}, {"phi", m}});
    }
    return {{"interfaces", arr}};
}

Interface interface_from_json(const nlohmann::json& j) {
    try {
        Interface iface;
        for (const auto& e : j.at("interfaces")) {
            TypeIso phi;
            for (const auto& pr : e.at("phi"))
                phi.emplace(Position::parse(pr.at(0).get<std::string>()),
                            Position::parse(pr.at(1).get<std::string>()));
            iface.emplace(Position::parse(e.at("pos").get<std::string>()), std::move(phi));
        }
        return iface;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Syntax, std::string("interface file: ") + e.what());
    }
}

Interface load_interface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Domain, "cannot open " + path);
    try {
        return interface_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Syntax, std::string("interface file: ") + e.what());
    }
}

nlohmann::json choice_to_json(const ReductionChoice& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [a, rho] : c.rho) {
        nlohmann::json m = nlohmann::json::array();
        for (const auto& [k, k2] : rho) m.push_back({k, k2});
        arr.push_back({{"pos", a.str()}, {"rho", m}});
    }
    return {{"redex", c.b.str()}, {"per_node", arr}};
}

ReductionChoice choice_from_json(const nlohmann::json& j) {
    try {
        ReductionChoice c;
        c.b = Position::parse(j.at("redex").get<std::string>());
        for (const auto& e : j.at("per_node")) {
            RootIso rho;
            for (const auto& pr : e.at("rho")) rho.emplace(pr.at(0).get<Track>(), pr.at(1).get<Track>());
            c.rho.emplace(Position::parse(e.at("pos").get<std::string>()), std::move(rho));
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Syntax, std::string("choice file: ") + e.what());
    }
}

std::vector<Position> redex_nodes(const Checked& p, const Position& b) {
    std::vector<Position> out;
    for (const auto& [a, _] : p.nodes())
        if (a.size() == b.size() && collapse_position(a) == b) out.push_back(a);
    return out;
}

std::vector<ReductionChoice> enumerate_choices(const Checked& p, const Position& b, std::size_t limit) {
    auto nodes = redex_nodes(p, b);
    std::vector<ReductionChoice> out;
    ReductionChoice cur{b, {}};
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (out.size() >= limit) return;
        if (i == nodes.size()) {
            out.push_back(cur);
            return;
        }
        for (const auto& r : enumerate_root_interfaces(p, nodes[i])) {
            cur.rho[nodes[i]] = r;
            go(i + 1);
        }
        cur.rho.erase(nodes[i]);
    };
    go(0);
    return out;
}

ResidualMaps residual_support(const Checked& p, const ReductionChoice& rc) {
    const Position& b = rc.b;
    if (!is_redex(subterm_at(p.term(), b)))
        throw Error(ErrorKind::NotARedex, "no redex at " + b.str(), b.str());
    ResidualMaps m;
    m.b = b;
    auto nodes = redex_nodes(p, b);
    if (nodes.size() != rc.rho.size())
        throw Error(ErrorKind::InvalidInterface, "root interfaces do not match the redex nodes", b.str());

    std::map<Position, std::map<Track, Track>> inv;
    std::set<Position> x_axioms;
    for (const auto& a : nodes) {
        auto it = rc.rho.find(a);
        if (it == rc.rho.end())
            throw Error(ErrorKind::InvalidInterface, "no root interface at " + a.str(), a.str());
        if (!root_iso_extends(seq_support(p.L(a)), seq_support(p.R(a)), it->second))
            throw Error(ErrorKind::InvalidInterface, "invalid root interface at " + a.str(), a.str());
        for (const auto& [k, k2] : it->second) inv[a][k2] = k;
        const std::string& x = p.var(a.child(1));
        m.redex_var[a] = x;
        for (const auto& al : p.axioms_above(a.child(1).child(0), x)) {
            m.axiom_of_track[a][p.node(al).track] = al.suffix(a.size() + 2);
            x_axioms.insert(al);
        }
    }

    for (const auto& [al, n] : p.nodes()) {
        if (!b.is_prefix_of(collapse_position(al))) {
            m.res.emplace(al, al);
            m.qres.emplace(al, al);
            continue;
        }
        Position a = al.prefix(b.size());
        Position beta = al.suffix(b.size());
        if (beta.empty()) {
            m.qres.emplace(al, a);
            continue;
        }
        if (beta.size() == 1 && beta[0] == 1) continue;
        if (beta[0] == 1) {
            Position g = beta.suffix(2);
            m.qres.emplace(al, a.concat(g));
            if (!x_axioms.count(al)) m.res.emplace(al, a.concat(g));
            continue;
        }
        Track kl = inv.at(a).at(beta[0]);
        Position r = a.concat(m.axiom_of_track.at(a).at(kl)).concat(beta.suffix(1));
        m.res.emplace(al, r);
        m.qres.emplace(al, r);
    }

    m.reduct.term = beta_reduce_at(p.term(), b);
    m.reduct.flavor = Flavor::Sh;
    for (const auto& [al, r] : m.res)
        if (!m.reduct.nodes.emplace(r, p.node(al)).second)
            throw Error(ErrorKind::Internal, "residual map not injective at " + r.str(), r.str());
    return m;
}

void compute_residual_isos(const Checked& p, const Checked& reduct, const Interface& redex_iface,
                           ResidualMaps& m) {
    const Position& b = m.b;
    std::map<Position, TypeIso>& memo = m.iso;
    std::function<const TypeIso&(const Position&)> iso = [&](const Position& al) -> const TypeIso& {
        auto it = memo.find(al);
        if (it != memo.end()) return it->second;
        TypeIso r;
        bool inside = b.is_prefix_of(collapse_position(al));
        const NodeData& n = p.node(al);
        if (inside && al.size() == b.size()) {
            r = iso(al.child(1).child(0));
        } else if (inside && al[b.size()] >= 2) {
            r = identity_map(domain(type_support(p.type(al))));
        } else if (inside && n.kind == NodeData::Kind::Ax &&
                   p.var(al) == m.redex_var.at(al.prefix(b.size())) &&
                   m.axiom_of_track.at(al.prefix(b.size())).count(n.track) &&
                   m.axiom_of_track.at(al.prefix(b.size())).at(n.track) == al.suffix(b.size() + 2)) {
            const TypeIso& phi = redex_iface.at(al.prefix(b.size()));
            for (const auto& [c, d] : phi)
                if (c[0] == n.track) r.emplace(c.suffix(1), d.suffix(1));
        } else {
            switch (n.kind) {
            case NodeData::Kind::Ax: r = identity_map(domain(type_support(p.type(al)))); break;
            case NodeData::Kind::Abs:
                r = arrow_iso(identity_map(domain(seq_support(p.type(al).source()))), iso(al.child(0)));
                break;
            case NodeData::Kind::App: r = target_iso(iso(al.child(1))); break;
            }
        }
        return memo.emplace(al, std::move(r)).first->second;
    };
    for (const auto& [al, q] : m.qres) {
        const TypeIso& r = iso(al);
        if (!is_type_iso(p.type(al), reduct.type(q), r))
            throw Error(ErrorKind::Internal, "residual type isomorphism invalid at " + al.str(), al.str());
    }
    for (auto it = memo.begin(); it != memo.end();)
        it = m.qres.count(it->first) ? std::next(it) : memo.erase(it);
}

TypeIso res_left(const Checked&, const ResidualMaps& m, const Position& al) {
    return source_iso(m.iso.at(al.child(1)));
}

TypeIso res_right(const Checked& p, const ResidualMaps& m, const Position& al) {
    TypeIso r;
    for (Track k : p.node(al).args)
        for (const auto& [c, d] : m.iso.at(al.child(k))) r.emplace(Position{k}.concat(c), Position{k}.concat(d));
    return r;
}

Derivation reduce_Sh(const Checked& p, const ReductionChoice& rho) {
    ResidualMaps m = residual_support(p, rho);
    check_derivation(m.reduct);
    return m.reduct;
}

Derivation reduce_S(const Derivation& d, const Position& b) {
    if (d.flavor != Flavor::S) throw Error(ErrorKind::Domain, "reduce_S expects an S-derivation");
    Checked p = check_derivation(d);
    ReductionChoice rc{b, {}};
    for (const auto& a : redex_nodes(p, b)) {
        RootIso id;
        for (const auto& [k, _] : p.L(a)) id.emplace(k, k);
        rc.rho.emplace(a, id);
    }
    ResidualMaps m = residual_support(p, rc);
    m.reduct.flavor = Flavor::S;
    check_derivation(m.reduct);
    return m.reduct;
}

OperableStep reduce_operable(const Operable& op, const Position& b) {
    Checked p = check_operable(op);
    ReductionChoice rc{b, {}};
    Interface redex_iface;
    for (const auto& a : redex_nodes(p, b)) {
        rc.rho.emplace(a, root_of(op.iface.at(a)));
        redex_iface.emplace(a, op.iface.at(a));
    }
    OperableStep st;
    st.maps = residual_support(p, rc);
    Checked p2 = check_derivation(st.maps.reduct);
    compute_residual_isos(p, p2, redex_iface, st.maps);
    st.result.d = st.maps.reduct;
    for (const auto& a : p.app_nodes()) {
        auto it = st.maps.res.find(a);
        if (it == st.maps.res.end()) continue;
        TypeIso l = res_left(p, st.maps, a);
        TypeIso r = res_right(p, st.maps, a);
        st.result.iface.emplace(it->second, compose(r, compose(op.iface.at(a), inverse_map(l))));
    }
    check_operable(st.result);
    return st;
}

namespace {

void collect_redex_paths(const RNode& n, const Position& at, RPath& cur, const Position& b,
                         std::vector<RPath>& out) {
    if (at.size() == b.size()) {
        if (at == b) out.push_back(cur);
        return;
    }
    if (!at.is_prefix_of(b)) return;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(i);
        collect_redex_paths(n.children[i], at.child(n.kind == NodeData::Kind::Abs ? 0 : (i == 0 ? 1 : 2)), cur,
                            b, out);
        cur.pop_back();
    }
}

void collect_occurrences(const RNode& n, const std::string& x, RPath& cur, std::vector<RPath>& out) {
    if (n.kind == NodeData::Kind::Ax) {
        if (n.var == x) out.push_back(cur);
        return;
    }
    if (n.kind == NodeData::Kind::Abs && n.var == x) return;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(i);
        collect_occurrences(n.children[i], x, cur, out);
        cur.pop_back();
    }
}

RNode& mutable_at(RNode& root, const RPath& path, std::size_t from = 0) {
    RNode* n = &root;
    for (std::size_t i = from; i < path.size(); ++i) n = &n->children.at(path[i]);
    return *n;
}

void rename_along(RNode& n, const TermPtr& t) {
    switch (n.kind) {
    case NodeData::Kind::Ax: n.var = t->name; break;
    case NodeData::Kind::Abs:
        n.var = t->name;
        rename_along(n.children.at(0), t->left);
        break;
    case NodeData::Kind::App:
        rename_along(n.children.at(0), t->left);
        for (std::size_t i = 1; i < n.children.size(); ++i) rename_along(n.children[i], t->right);
        break;
    }
}

}  // namespace

std::vector<RPath> redex_nodes_R(const RDerivation& pi, const Position& b) {
    std::vector<RPath> out;
    RPath cur;
    collect_redex_paths(pi.root, Position{}, cur, b, out);
    return out;
}

std::vector<RPath> occurrences_R(const RNode& redex) {
    std::vector<RPath> out;
    const RNode& lam = redex.children.at(0);
    RPath cur{0, 0};
    collect_occurrences(lam.children.at(0), lam.var, cur, out);
    return out;
}

RDerivation reduce_R(const RDerivation& pi, const RChoice& c) {
    if (!is_redex(subterm_at(pi.term, c.b)))
        throw Error(ErrorKind::NotARedex, "no redex at " + c.b.str(), c.b.str());
    auto nodes = redex_nodes_R(pi, c.b);
    if (nodes.size() != c.per_node.size())
        throw Error(ErrorKind::ChoiceMismatch, "choice does not cover the redex nodes", c.b.str());
    RNode root = pi.root;
    for (const auto& path : nodes) {
        auto it = c.per_node.find(path);
        if (it == c.per_node.end())
            throw Error(ErrorKind::ChoiceMismatch, "no choice at redex node " + path_str(path), c.b.str());
        RNode& n = mutable_at(root, path);
        auto occs = occurrences_R(n);
        const auto& pick = it->second;
        if (pick.size() != occs.size() || pick.size() + 1 != n.children.size())
            throw Error(ErrorKind::ChoiceMismatch, "choice arity mismatch at " + path_str(path), c.b.str());
        std::set<std::size_t> seen;
        RNode body = n.children.at(0).children.at(0);
        for (std::size_t j = 0; j < occs.size(); ++j) {
            std::size_t m = pick[j];
            if (m < 1 || m >= n.children.size() || !seen.insert(m).second)
                throw Error(ErrorKind::ChoiceMismatch, "choice is not a bijection at " + path_str(path),
                            c.b.str());
            RNode& occ = mutable_at(body, occs[j], 2);
            if (occ.type != n.children[m].type)
                throw Error(ErrorKind::ChoiceMismatch,
                            "type-mismatched choice at " + path_str(path) + ": " + print_rtype(occ.type) +
                                " vs " + print_rtype(n.children[m].type),
                            c.b.str());
            occ = n.children[m];
        }
        n = std::move(body);
    }
    RDerivation out;
    out.term = beta_reduce_at(pi.term, c.b);
    rename_along(root, out.term);
    out.root = normalize_rnode(root);
    return out;
}

std::vector<RChoice> enumerate_reduction_choices(const RDerivation& pi, const Position& b, std::size_t limit) {
    auto nodes = redex_nodes_R(pi, b);
    std::vector<std::vector<std::vector<std::size_t>>> per;
    for (const auto& path : nodes) {
        const RNode& n = rnode_at(pi.root, path);
        auto occs = occurrences_R(n);
        std::vector<std::vector<std::size_t>> bij;
        if (occs.size() + 1 == n.children.size()) {
            std::vector<std::size_t> cur(occs.size());
            std::vector<bool> used(n.children.size(), false);
            std::function<void(std::size_t)> go = [&](std::size_t j) {
                if (bij.size() >= limit) return;
                if (j == occs.size()) {
                    bij.push_back(cur);
                    return;
                }
                const RType& t = rnode_at(n, occs[j]).type;
                for (std::size_t m = 1; m < n.children.size(); ++m) {
                    if (used[m] || n.children[m].type != t) continue;
                    used[m] = true;
                    cur[j] = m;
                    go(j + 1);
                    used[m] = false;
                }
            };
            go(0);
        }
        per.push_back(std::move(bij));
    }
    std::vector<RChoice> out;
    RChoice cur{b, {}};
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (out.size() >= limit) return;
        if (i == nodes.size()) {
            out.push_back(cur);
            return;
        }
        for (const auto& bj : per[i]) {
            cur.per_node[nodes[i]] = bj;
            go(i + 1);
        }
        cur.per_node.erase(nodes[i]);
    };
    go(0);
    return out;
}

RChoice collapse_choice(const Checked& p, const ReductionChoice& rc) {
    RDerivation pi = collapse_derivation(p);
    auto paths = collapse_paths(pi.root);
    RChoice out{rc.b, {}};
    for (const auto& [a, rho] : rc.rho) {
        const RPath& pa = paths.at(a);
        const RNode& n = rnode_at(pi.root, pa);
        std::vector<std::size_t> pick;
        for (const auto& q : occurrences_R(n)) {
            Track k = p.node(rnode_at(n, q).origin).track;
            pick.push_back(paths.at(a.child(rho.at(k))).back());
        }
        out.per_node.emplace(pa, std::move(pick));
    }
    return out;
}

ReductionChoice lift_choice(const Checked& p, const RChoice& c) {
    RDerivation pi = collapse_derivation(p);
    ReductionChoice out{c.b, {}};
    for (const auto& [pa, pick] : c.per_node) {
        const RNode& n = rnode_at(pi.root, pa);
        const Position& a = n.origin;
        auto occs = occurrences_R(n);
        if (occs.size() != pick.size())
            throw Error(ErrorKind::ChoiceMismatch, "choice arity mismatch at " + path_str(pa), c.b.str());
        RootIso rho;
        for (std::size_t j = 0; j < occs.size(); ++j) {
            Track k = p.node(rnode_at(n, occs[j]).origin).track;
            const Position& arg = n.children.at(pick[j]).origin;
            rho.emplace(k, arg.back());
        }
        out.rho.emplace(a, std::move(rho));
    }
    if (out.rho.size() != redex_nodes(p, c.b).size())
        throw Error(ErrorKind::ChoiceMismatch, "choice does not cover the redex nodes", c.b.str());
    return out;
}

Operable build_operable_from_choices(const RDerivation& pi, const Operable& p0, const std::vector<RChoice>& choices) {
    Checked ci = check_derivation(p0.d);
    if (collapse_derivation(ci) != pi)
        throw Error(ErrorKind::ChoiceMismatch, "initial derivation does not collapse on the given R-derivation");
    RDerivation pii = pi;

    struct Track_ {
        Position at;
        PosMap lchain, rchain;
    };
    std::map<Position, Track_> alive;
    for (const auto& a : ci.app_nodes())
        alive.emplace(a, Track_{a, identity_map(domain(seq_support(ci.L(a)))),
                                identity_map(domain(seq_support(ci.R(a))))});
    Interface result;

    for (const auto& ch : choices) {
        ReductionChoice rc = lift_choice(ci, ch);
        Interface redex_iface;
        for (const auto& [a, rho] : rc.rho) {
            SeqType l = ci.L(a), r = ci.R(a);
            TypeIso phi;
            for (const auto& [k, k2] : rho) {
                auto isos = enumerate_type_isos(l.at(k), r.at(k2), 1);
                if (isos.empty())
                    throw Error(ErrorKind::ChoiceMismatch, "choice relates non-isomorphic types at " + a.str(),
                                a.str());
                for (const auto& [c, d] : isos.front()) phi.emplace(Position{k}.concat(c), Position{k2}.concat(d));
            }
            redex_iface.emplace(a, std::move(phi));
        }
        ResidualMaps m = residual_support(ci, rc);
        Checked c2 = check_derivation(m.reduct);
        compute_residual_isos(ci, c2, redex_iface, m);
        RDerivation next = reduce_R(pii, ch);
        if (collapse_derivation(c2) != next)
            throw Error(ErrorKind::ChoiceMismatch, "reduct does not collapse on the chosen R-reduct", ch.b.str());

        for (auto it = alive.begin(); it != alive.end();) {
            Track_& t = it->second;
            if (t.at.size() == ch.b.size() && collapse_position(t.at) == ch.b) {
                result.emplace(it->first, compose(inverse_map(t.rchain), compose(redex_iface.at(t.at), t.lchain)));
                it = alive.erase(it);
                continue;
            }
            t.lchain = compose(res_left(ci, m, t.at), t.lchain);
            t.rchain = compose(res_right(ci, m, t.at), t.rchain);
            t.at = m.res.at(t.at);
            ++it;
        }
        ci = c2;
        pii = std::move(next);
    }

    Checked c0 = check_derivation(p0.d);
    for (const auto& [a, _] : alive) {
        auto is = enumerate_interfaces(c0, a, 1);
        result.emplace(a, is.front());
    }
    Operable out{p0.d, std::move(result)};
    out.d.flavor = Flavor::Sh;
    check_operable(out);
    return out;
}

}  // namespace rigid
