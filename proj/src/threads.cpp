#include "rigid/threads.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace rigid {

std::string Edge::str() const {
    switch (kind) {
    case Kind::Arg: return "arg " + outer().str();
    case Kind::Right: return "(" + a.str() + ", " + c.str() + ")";
    case Kind::Left: return "(" + a.str() + ", " + x + ", " + c.str() + ")";
    }
    return "?";
}

const char* polarity_symbol(Polarity p) { return p == Polarity::Pos ? "+" : "-"; }

const char* thread_kind_name(ThreadKind k) {
    switch (k) {
    case ThreadKind::Axiom: return "axiom";
    case ThreadKind::Argument: return "argument";
    case ThreadKind::Inner: return "inner";
    }
    return "?";
}

std::set<Edge> mutable_edges(const Checked& p) {
    std::set<Edge> out;
    for (const auto& [a, _] : p.nodes())
        if (!a.empty() && is_mutable(a.back())) out.insert(Edge::arg(a));
    for (const auto& b : bisupport(p)) {
        if (b.c.empty() || !is_mutable(b.c.back())) continue;
        out.insert(b.left ? Edge::left(b.a, b.x, b.c) : Edge::right(b.a, b.c));
    }
    return out;
}

std::optional<Edge> ascendant(const Checked& p, const Edge& e) {
    if (e.kind == Edge::Kind::Arg) return std::nullopt;
    const NodeData& n = p.node(e.a);
    switch (n.kind) {
    case NodeData::Kind::Ax: return std::nullopt;
    case NodeData::Kind::App:
        if (e.kind == Edge::Kind::Right) return Edge::right(e.a.child(1), Position{1}.concat(e.c));
        if (p.ctx(e.a.child(1), e.x).count(e.c.front())) return Edge::left(e.a.child(1), e.x, e.c);
        for (Track k : n.args)
            if (p.ctx(e.a.child(k), e.x).count(e.c.front())) return Edge::left(e.a.child(k), e.x, e.c);
        throw Error(ErrorKind::Internal, "context entry without origin at " + e.str(), e.a.str());
    case NodeData::Kind::Abs: {
        if (e.kind == Edge::Kind::Left) return Edge::left(e.a.child(0), e.x, e.c);
        if (e.c.front() == 1) return Edge::right(e.a.child(0), e.c.suffix(1));
        return Edge::left(e.a.child(0), p.var(e.a), e.c);
    }
    }
    return std::nullopt;
}

Edge highest_ascendant(const Checked& p, const Edge& e) {
    Edge cur = e;
    while (auto nx = ascendant(p, cur)) cur = *nx;
    return cur;
}

std::optional<Edge> polar_inverse(const Checked& p, const Edge& e) {
    if (e.kind == Edge::Kind::Arg || p.node(e.a).kind != NodeData::Kind::Ax) return std::nullopt;
    if (e.kind == Edge::Kind::Right) return Edge::left(e.a, p.var(e.a), Position{p.node(e.a).track}.concat(e.c));
    if (e.c.size() < 2) return std::nullopt;
    return Edge::right(e.a, e.c.suffix(1));
}

bool is_axiom_edge(const Checked& p, const Edge& e) {
    return e.kind == Edge::Kind::Left && e.c.size() == 1 && p.node(e.a).kind == NodeData::Kind::Ax;
}

Polarity polarity(const Checked& p, const Edge& e) {
    if (e.kind == Edge::Kind::Arg) return Polarity::Pos;
    return highest_ascendant(p, e).kind == Edge::Kind::Right ? Polarity::Pos : Polarity::Neg;
}

Edge referent(const Checked& p, const Edge& e) {
    if (e.kind == Edge::Kind::Arg) return e;
    Edge top = highest_ascendant(p, e);
    if (top.kind == Edge::Kind::Right || top.c.size() == 1) return top;
    return *polar_inverse(p, top);
}

std::size_t Threads::of(const Edge& e) const {
    auto it = id_of.find(e);
    if (it == id_of.end()) throw Error(ErrorKind::Domain, "not a mutable edge: " + e.str());
    return it->second;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    // The smaller index stays the representative.
    void unite(std::size_t i, std::size_t j) {
        i = find(i);
        j = find(j);
        if (i == j) return;
        if (j < i) std::swap(i, j);
        parent[j] = i;
    }
};

}  // namespace

Threads compute_threads(const Checked& p) {
    auto es = mutable_edges(p);
    std::vector<Edge> edges(es.begin(), es.end());
    std::map<Edge, std::size_t> idx;
    for (std::size_t i = 0; i < edges.size(); ++i) idx.emplace(edges[i], i);
    UnionFind uf(edges.size());
    auto link = [&](std::size_t i, const std::optional<Edge>& o) {
        if (!o) return;
        auto it = idx.find(*o);
        if (it == idx.end()) throw Error(ErrorKind::Internal, "edge relation leaves the bisupport: " + o->str());
        uf.unite(i, it->second);
    };
    for (std::size_t i = 0; i < edges.size(); ++i) {
        link(i, ascendant(p, edges[i]));
        link(i, polar_inverse(p, edges[i]));
    }

    Threads th;
    std::map<std::size_t, std::size_t> rep_id;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::size_t r = uf.find(i);
        auto [it, fresh] = rep_id.emplace(r, th.members.size());
        if (fresh) th.members.emplace_back();
        th.members[it->second].push_back(edges[i]);
        th.id_of.emplace(edges[i], it->second);
    }
    for (const auto& m : th.members) {
        Edge r = referent(p, m.front());
        for (const auto& e : m)
            if (e.label() != m.front().label())
                throw Error(ErrorKind::Internal, "thread with two labels at " + e.str(), e.a.str());
        th.ref.push_back(r);
        th.kind.push_back(r.kind == Edge::Kind::Arg    ? ThreadKind::Argument
                          : r.kind == Edge::Kind::Left ? ThreadKind::Axiom
                                                       : ThreadKind::Inner);
    }
    return th;
}

std::size_t thread_ad(const Threads& th, std::size_t id) {
    if (th.kind.at(id) == ThreadKind::Axiom)
        throw Error(ErrorKind::Domain, "applicative depth of an axiom thread");
    return applicative_depth(th.ref[id].outer());
}

std::size_t thread_max_ad(const Threads& th, std::size_t id) {
    std::size_t m = 0;
    for (const auto& e : th.members.at(id)) m = std::max(m, applicative_depth(e.outer()));
    return m;
}

std::vector<ConsumptionArc> consumption(const Checked& p, const Interface& iface, const Threads& th) {
    std::vector<ConsumptionArc> out;
    for (const auto& a : p.app_nodes()) {
        const TypeIso& phi = iface.at(a);
        for (const auto& [kc, img] : phi) {
            if (!is_mutable(kc.back())) continue;
            Edge le = Edge::right(a.child(1), kc);
            Edge re = img.size() == 1 ? Edge::arg(a.child(img.front()))
                                      : Edge::right(a.child(img.front()), img.suffix(1));
            ConsumptionArc arc;
            arc.left = th.of(le);
            arc.right = th.of(re);
            arc.a = a;
            arc.left_pol = polarity(p, le);
            arc.right_pol = polarity(p, re);
            arc.left_edge = le;
            arc.right_edge = re;
            out.push_back(std::move(arc));
        }
    }
    return out;
}

namespace {

// Edges sharing a node: same kind, outer position, variable and parent inner position.
std::optional<std::tuple<int, Position, std::string, Position>> brother_key(const Checked& p, const Edge& e) {
    if (is_axiom_edge(p, e)) return std::make_tuple(3, Position{}, std::string{}, Position{});
    switch (e.kind) {
    case Edge::Kind::Arg: return std::make_tuple(0, e.a, std::string{}, Position{});
    case Edge::Kind::Right: return std::make_tuple(1, e.a, std::string{}, e.c.parent());
    case Edge::Kind::Left:
        if (e.c.size() < 2) return std::nullopt;
        return std::make_tuple(2, e.a, e.x, e.c.parent());
    }
    return std::nullopt;
}

}  // namespace

bool brother_edges(const Checked& p, const Edge& e1, const Edge& e2) {
    if (e1 == e2) return false;
    auto k1 = brother_key(p, e1);
    auto k2 = brother_key(p, e2);
    if (!k1 || !k2 || *k1 != *k2) return false;
    if (std::get<0>(*k1) == 3) return e1.a != e2.a;
    return e1.label() != e2.label();
}

std::set<std::pair<std::size_t, std::size_t>> brother_pairs(const Checked& p, const Threads& th) {
    std::map<std::tuple<int, Position, std::string, Position>, std::vector<Edge>> groups;
    for (const auto& [e, _] : th.id_of)
        if (auto k = brother_key(p, e)) groups[*k].push_back(e);
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (const auto& [_, g] : groups)
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j) {
                if (!brother_edges(p, g[i], g[j])) continue;
                std::size_t a = th.of(g[i]), b = th.of(g[j]);
                out.emplace(std::min(a, b), std::max(a, b));
            }
    return out;
}

bool brothers(const Checked& p, const Threads& th, std::size_t i, std::size_t j) {
    return brother_pairs(p, th).count({std::min(i, j), std::max(i, j)}) != 0;
}

std::string chain_str(const BrotherChain& c) {
    std::ostringstream os;
    os << "t" << c.threads.front();
    for (const auto& s : c.steps) os << (s.forward ? " ->" : " <-") << "[" << s.a.str() << "] t" << s.to;
    return os.str();
}

std::optional<BrotherChain> find_brother_chain(const Checked& p, const Threads& th,
                                               const std::vector<ConsumptionArc>& arcs) {
    std::vector<std::vector<ChainStep>> adj(th.count());
    for (const auto& arc : arcs) {
        adj[arc.left].push_back({arc.left, arc.right, arc.a, true});
        adj[arc.right].push_back({arc.right, arc.left, arc.a, false});
    }
    for (const auto& [i, j] : brother_pairs(p, th)) {
        if (i == j) return BrotherChain{{i}, {}};
        std::vector<std::optional<ChainStep>> via(th.count());
        std::vector<bool> seen(th.count(), false);
        std::deque<std::size_t> q{i};
        seen[i] = true;
        while (!q.empty() && !seen[j]) {
            std::size_t u = q.front();
            q.pop_front();
            for (const auto& s : adj[u])
                if (!seen[s.to]) {
                    seen[s.to] = true;
                    via[s.to] = s;
                    q.push_back(s.to);
                }
        }
        if (!seen[j]) continue;
        BrotherChain c;
        for (std::size_t v = j; v != i; v = via[v]->from) c.steps.push_back(*via[v]);
        std::reverse(c.steps.begin(), c.steps.end());
        c.threads.push_back(i);
        for (const auto& s : c.steps) c.threads.push_back(s.to);
        return c;
    }
    return std::nullopt;
}

bool check_uniqueness_of_consumption(const std::vector<ConsumptionArc>& arcs) {
    std::map<std::pair<std::size_t, Polarity>, std::set<std::size_t>> as_left, as_right;
    for (const auto& a : arcs) {
        as_left[{a.left, a.left_pol}].insert(a.right);
        as_right[{a.right, a.right_pol}].insert(a.left);
    }
    for (const auto* m : {&as_left, &as_right})
        for (const auto& [_, s] : *m)
            if (s.size() > 1) return false;
    return true;
}

bool check_strong_uniqueness(const std::vector<ConsumptionArc>& arcs) {
    std::map<std::pair<std::size_t, Polarity>, std::set<std::size_t>> partners;
    for (const auto& a : arcs) {
        partners[{a.left, a.left_pol}].insert(a.right);
        partners[{a.right, a.right_pol}].insert(a.left);
    }
    for (const auto& [_, s] : partners)
        if (s.size() > 1) return false;
    return true;
}

bool check_monotonicity(const Threads& th, const std::vector<ConsumptionArc>& arcs) {
    auto ad = [&](std::size_t id) {
        return th.kind[id] == ThreadKind::Axiom ? thread_max_ad(th, id) : thread_ad(th, id);
    };
    for (const auto& a : arcs)
        if (a.left_pol == Polarity::Pos && !(ad(a.left) < ad(a.right))) return false;
    return true;
}

ThreadAnalysis analyze_threads(const Checked& p, const Interface& iface) {
    ThreadAnalysis an{compute_threads(p), {}};
    an.arcs = consumption(p, iface, an.th);
    return an;
}

std::string threads_report(const Checked& p, const ThreadAnalysis& an) {
    std::ostringstream os;
    const Threads& th = an.th;
    os << "threads: " << th.count() << "\n";
    for (std::size_t i = 0; i < th.count(); ++i) {
        os << "  t" << i << " label " << th.label(i) << " " << thread_kind_name(th.kind[i]) << " ref "
           << th.ref[i].str();
        if (th.kind[i] != ThreadKind::Axiom) os << " ad " << thread_ad(th, i);
        os << "\n";
        for (const auto& e : th.members[i]) os << "    " << polarity_symbol(polarity(p, e)) << " " << e.str() << "\n";
    }
    os << "consumption: " << an.arcs.size() << "\n";
    for (const auto& a : an.arcs)
        os << "  t" << a.left << "^" << polarity_symbol(a.left_pol) << " ->[" << a.a.str() << "] ^"
           << polarity_symbol(a.right_pol) << "t" << a.right << "   " << a.left_edge.str() << " -> "
           << a.right_edge.str() << "\n";
    auto bro = brother_pairs(p, th);
    os << "brothers: " << bro.size() << "\n";
    for (const auto& [i, j] : bro) os << "  t" << i << " t" << j << "\n";
    auto chain = find_brother_chain(p, th, an.arcs);
    os << "brother chain: " << (chain ? chain_str(*chain) : "none") << "\n";
    return os.str();
}

nlohmann::json threads_json(const Checked& p, const ThreadAnalysis& an) {
    const Threads& th = an.th;
    nlohmann::json ts = nlohmann::json::array();
    for (std::size_t i = 0; i < th.count(); ++i) {
        nlohmann::json es = nlohmann::json::array();
        for (const auto& e : th.members[i])
            es.push_back({{"edge", e.str()}, {"polarity", polarity_symbol(polarity(p, e))}});
        nlohmann::json t = {{"id", i},
                            {"label", th.label(i)},
                            {"kind", thread_kind_name(th.kind[i])},
                            {"referent", th.ref[i].str()},
                            {"edges", es}};
        if (th.kind[i] != ThreadKind::Axiom) t["ad"] = thread_ad(th, i);
        ts.push_back(t);
    }
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& a : an.arcs)
        arcs.push_back({{"pos", a.a.str()},
                        {"left", a.left},
                        {"left_polarity", polarity_symbol(a.left_pol)},
                        {"right", a.right},
                        {"right_polarity", polarity_symbol(a.right_pol)}});
    nlohmann::json bro = nlohmann::json::array();
    for (const auto& [i, j] : brother_pairs(p, th)) bro.push_back({i, j});
    auto chain = find_brother_chain(p, th, an.arcs);
    return {{"threads", ts},
            {"consumption", arcs},
            {"brothers", bro},
            {"brother_chain", chain ? nlohmann::json(chain->threads) : nlohmann::json(nullptr)}};
}

std::string threads_dot(const Checked& p, const ThreadAnalysis& an) {
    static const char* palette[] = {"red",     "blue",   "darkgreen", "orange", "purple", "brown",
                                    "magenta", "cyan4",  "gold3",     "navy",   "olive",  "gray40"};
    auto color = [](std::size_t id) { return palette[id % (sizeof(palette) / sizeof(*palette))]; };
    auto node_name = [](const Position& a) { return "\"" + a.str() + "\""; };
    std::ostringstream os;
    os << "digraph derivation {\n  node [shape=box, fontname=monospace];\n";
    for (const auto& [a, n] : p.nodes()) {
        std::string rule = n.kind == NodeData::Kind::Ax    ? "ax " + p.var(a)
                           : n.kind == NodeData::Kind::Abs ? "abs " + p.var(a)
                                                           : "app";
        std::string label = a.str() + "  " + rule + "\\n" + print_type(p.type(a));
        os << "  " << node_name(a) << " [label=\"" << label << "\"];\n";
    }
    for (const auto& [a, _] : p.nodes()) {
        if (a.empty()) continue;
        os << "  " << node_name(a.parent()) << " -> " << node_name(a) << " [label=\"" << a.back() << "\"";
        if (is_mutable(a.back())) {
            std::size_t id = an.th.of(Edge::arg(a));
            os << ", color=" << color(id) << ", fontcolor=" << color(id);
        }
        os << "];\n";
    }
    os << "  legend [shape=note, label=\"";
    for (std::size_t i = 0; i < an.th.count(); ++i) {
        std::size_t pos = 0, neg = 0;
        for (const auto& e : an.th.members[i]) (polarity(p, e) == Polarity::Pos ? pos : neg)++;
        os << "t" << i << " (" << color(i) << "): label " << an.th.label(i) << ", " << pos << "+ " << neg << "-\\l";
    }
    os << "\"];\n}\n";
    return os.str();
}

}  // namespace rigid
