#include "rigid/derivations.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace rigid {

const char* flavor_name(Flavor f) { return f == Flavor::S ? "S" : "Sh"; }

Flavor parse_flavor(const std::string& s) {
    if (s == "S") return Flavor::S;
    if (s == "Sh" || s == "S_h") return Flavor::Sh;
    throw Error(ErrorKind::Syntax, "unknown flavor '" + s + "'");
}

bool derivation_equal(const Derivation& a, const Derivation& b) {
    return a.flavor == b.flavor && term_equal(a.term, b.term) && a.nodes == b.nodes;
}

const NodeData& Checked::node(const Position& a) const {
    auto it = d_->nodes.find(a);
    if (it == d_->nodes.end())
        throw Error(ErrorKind::OutsideSupport, "no node at " + a.str(), a.str());
    return it->second;
}

const Judgment& Checked::judgment(const Position& a) const {
    auto it = j_->find(a);
    if (it == j_->end()) throw Error(ErrorKind::OutsideSupport, "no node at " + a.str(), a.str());
    return it->second;
}

SeqType Checked::ctx(const Position& a, const std::string& x) const {
    const auto& c = judgment(a).ctx;
    auto it = c.find(x);
    return it == c.end() ? SeqType{} : it->second;
}

SeqType Checked::L(const Position& a) const {
    if (node(a).kind != NodeData::Kind::App)
        throw Error(ErrorKind::Domain, "not an application node: " + a.str(), a.str());
    return type(a.child(1)).source();
}

SeqType Checked::R(const Position& a) const {
    const NodeData& n = node(a);
    if (n.kind != NodeData::Kind::App)
        throw Error(ErrorKind::Domain, "not an application node: " + a.str(), a.str());
    SeqType r;
    for (Track k : n.args) r.emplace(k, type(a.child(k)));
    return r;
}

std::vector<Position> Checked::app_nodes() const {
    std::vector<Position> out;
    for (const auto& [a, n] : d_->nodes)
        if (n.kind == NodeData::Kind::App) out.push_back(a);
    return out;
}

const std::string& Checked::var(const Position& a) const { return names_->at(a); }

std::vector<Position> Checked::axioms_above(const Position& a, const std::string& x) const {
    std::vector<Position> out;
    for (auto it = d_->nodes.lower_bound(a); it != d_->nodes.end() && a.is_prefix_of(it->first); ++it) {
        const Position& al = it->first;
        if (it->second.kind != NodeData::Kind::Ax || var(al) != x) continue;
        bool bound = false;
        for (std::size_t i = a.size(); i < al.size() && !bound; ++i) {
            Position b = al.prefix(i);
            bound = d_->nodes.at(b).kind == NodeData::Kind::Abs && var(b) == x;
        }
        if (!bound) out.push_back(al);
    }
    return out;
}

Position Checked::pos(const Position& a, const std::string& x, Track k) const {
    for (const auto& al : axioms_above(a, x))
        if (node(al).track == k) return al;
    throw Error(ErrorKind::Domain,
                "no axiom of " + x + " with track " + std::to_string(k) + " above " + a.str(), a.str());
}

namespace {

[[noreturn]] void malformed(const Position& a, const std::string& why) {
    throw Error(ErrorKind::MalformedShape, "malformed derivation at " + a.str() + ": " + why, a.str());
}

Context merge_ctx(const Context& c1, const Context& c2, const Position& at) {
    Context out = c1;
    for (const auto& [x, f] : c2) {
        auto it = out.find(x);
        if (it == out.end()) {
            out.emplace(x, f);
            continue;
        }
        auto conf = seq_conflicts(it->second, f);
        if (!conf.empty()) {
            std::string ts;
            for (Track k : conf) ts += (ts.empty() ? "" : ",") + std::to_string(k);
            throw Error(ErrorKind::TrackConflict,
                        "track conflict on " + x + " {" + ts + "} at " + at.str(), at.str());
        }
        it->second.insert(f.begin(), f.end());
    }
    return out;
}

}  // namespace

Checked check_derivation(const Derivation& d, Flavor f) {
    Derivation e = d;
    e.flavor = f;
    return check_derivation(e);
}

Checked check_derivation(const Derivation& d) {
    if (!d.term) malformed(Position{}, "no subject term");
    if (!d.nodes.count(Position{})) malformed(Position{}, "no root node");

    std::map<Position, std::set<Track>> kids;
    auto names = std::make_shared<std::map<Position, std::string>>();
    for (const auto& [a, n] : d.nodes) {
        if (!a.empty()) {
            if (!d.nodes.count(a.parent())) malformed(a, "parent missing");
            kids[a.parent()].insert(a.back());
        }
        Constructor c;
        try {
            c = constructor_at(d.term, a);
        } catch (const Error&) {
            malformed(a, "position outside the subject support");
        }
        names->emplace(a, c.name);
        switch (n.kind) {
        case NodeData::Kind::Ax:
            if (c.kind != Term::Kind::Var) malformed(a, "axiom on a non-variable");
            if (n.track < 2) malformed(a, "axiom track must be >= 2");
            if (!n.type.valid()) malformed(a, "axiom without type");
            break;
        case NodeData::Kind::Abs:
            if (c.kind != Term::Kind::Lam) malformed(a, "abs rule on a non-abstraction");
            break;
        case NodeData::Kind::App:
            if (c.kind != Term::Kind::App) malformed(a, "app rule on a non-application");
            for (Track k : n.args)
                if (k < 2) malformed(a, "argument track must be >= 2");
            break;
        }
    }
    for (const auto& [a, n] : d.nodes) {
        std::set<Track> expect;
        if (n.kind == NodeData::Kind::Abs) expect = {0};
        if (n.kind == NodeData::Kind::App) {
            expect = n.args;
            expect.insert(1);
        }
        auto it = kids.find(a);
        std::set<Track> have = it == kids.end() ? std::set<Track>{} : it->second;
        if (have != expect) malformed(a, "children do not match the rule");
    }

    auto js = std::make_shared<std::map<Position, Judgment>>();
    for (auto it = d.nodes.rbegin(); it != d.nodes.rend(); ++it) {
        const Position& a = it->first;
        const NodeData& n = it->second;
        Judgment j;
        switch (n.kind) {
        case NodeData::Kind::Ax:
            j.ctx[names->at(a)] = SeqType{{n.track, n.type}};
            j.type = n.type;
            break;
        case NodeData::Kind::Abs: {
            const Judgment& b = js->at(a.child(0));
            j.ctx = b.ctx;
            const std::string& x = names->at(a);
            SeqType src;
            auto cx = j.ctx.find(x);
            if (cx != j.ctx.end()) {
                src = cx->second;
                j.ctx.erase(cx);
            }
            j.type = SType::arrow(std::move(src), b.type);
            break;
        }
        case NodeData::Kind::App: {
            const Judgment& l = js->at(a.child(1));
            if (l.type.is_atom())
                throw Error(ErrorKind::AppMismatch,
                            "left premise at " + a.child(1).str() + " has atomic type", a.str());
            SeqType r;
            j.ctx = l.ctx;
            for (Track k : n.args) {
                const Judgment& ak = js->at(a.child(k));
                r.emplace(k, ak.type);
                j.ctx = merge_ctx(j.ctx, ak.ctx, a);
            }
            const SeqType& lsrc = l.type.source();
            bool ok = d.flavor == Flavor::S ? lsrc == r : equiv(lsrc, r);
            if (!ok)
                throw Error(ErrorKind::AppMismatch,
                            "app mismatch at " + a.str() + ": L=" + print_seq(lsrc) + " R=" + print_seq(r),
                            a.str());
            j.type = l.type.target();
            break;
        }
        }
        for (auto c = j.ctx.begin(); c != j.ctx.end();)
            c = c->second.empty() ? j.ctx.erase(c) : std::next(c);
        js->emplace(a, std::move(j));
    }

    Checked out;
    out.d_ = std::make_shared<const Derivation>(d);
    out.j_ = js;
    out.names_ = names;
    return out;
}

std::string Biposition::str() const {
    if (left) return "(" + a.str() + ", " + x + ", " + c.str() + ")";
    return "(" + a.str() + ", " + c.str() + ")";
}

std::string biposition_lookup(const Checked& p, const Biposition& b) {
    Labelled u = b.left ? seq_support(p.ctx(b.a, b.x)) : type_support(p.type(b.a));
    auto it = u.find(b.c);
    if (it == u.end()) throw Error(ErrorKind::OutsideSupport, "biposition " + b.str() + " outside bisupport");
    return it->second;
}

std::set<Biposition> bisupport(const Checked& p) {
    std::set<Biposition> out;
    for (const auto& [a, j] : p.nodes()) {
        for (const auto& [c, _] : type_support(p.type(a))) out.insert(Biposition{false, a, "", c});
        for (const auto& [x, f] : p.judgment(a).ctx)
            for (const auto& [c, _] : seq_support(f)) out.insert(Biposition{true, a, x, c});
    }
    return out;
}

int compare(const RNode& a, const RNode& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (int c = a.var.compare(b.var)) return c < 0 ? -1 : 1;
    if (int c = compare(a.type, b.type)) return c;
    auto i = a.ctx.begin();
    auto j = b.ctx.begin();
    for (; i != a.ctx.end() && j != b.ctx.end(); ++i, ++j) {
        if (int c = i->first.compare(j->first)) return c < 0 ? -1 : 1;
        if (int c = compare(i->second, j->second)) return c;
    }
    if (i != a.ctx.end() || j != b.ctx.end()) return i == a.ctx.end() ? -1 : 1;
    if (a.children.size() != b.children.size()) return a.children.size() < b.children.size() ? -1 : 1;
    for (std::size_t k = 0; k < a.children.size(); ++k)
        if (int c = compare(a.children[k], b.children[k])) return c;
    return 0;
}

bool operator==(const RDerivation& a, const RDerivation& b) {
    return term_equal(a.term, b.term) && compare(a.root, b.root) == 0;
}

namespace {

bool rless(const RNode& a, const RNode& b) { return compare(a, b) < 0; }

RContext collapse_ctx(const Context& c) {
    RContext r;
    for (const auto& [x, f] : c)
        if (!f.empty()) r.emplace(x, collapse_seq(f));
    return r;
}

RNode collapse_at(const Checked& p, const Position& a) {
    const NodeData& n = p.node(a);
    RNode r;
    r.kind = n.kind;
    r.origin = a;
    if (n.kind != NodeData::Kind::App) r.var = p.var(a);
    r.type = collapse_type(p.type(a));
    r.ctx = collapse_ctx(p.judgment(a).ctx);
    if (n.kind == NodeData::Kind::Abs) r.children.push_back(collapse_at(p, a.child(0)));
    if (n.kind == NodeData::Kind::App) {
        r.children.push_back(collapse_at(p, a.child(1)));
        std::vector<RNode> args;
        for (Track k : n.args) args.push_back(collapse_at(p, a.child(k)));
        std::stable_sort(args.begin(), args.end(), rless);
        for (auto& x : args) r.children.push_back(std::move(x));
    }
    return r;
}

RContext sum_ctx(const RContext& a, const RContext& b) {
    RContext out = a;
    for (const auto& [x, m] : b) out[x] = multi_sum(out[x], m);
    return out;
}

}  // namespace

RDerivation collapse_derivation(const Checked& p) { return RDerivation{p.term(), collapse_at(p, Position{})}; }

RNode normalize_rnode(const RNode& n) {
    RNode r;
    r.kind = n.kind;
    r.var = n.var;
    r.origin = n.origin;
    switch (n.kind) {
    case NodeData::Kind::Ax:
        r.type = n.type;
        r.ctx = {{n.var, RMulti{n.type}}};
        break;
    case NodeData::Kind::Abs: {
        RNode b = normalize_rnode(n.children.at(0));
        r.ctx = b.ctx;
        RMulti src;
        auto it = r.ctx.find(n.var);
        if (it != r.ctx.end()) {
            src = it->second;
            r.ctx.erase(it);
        }
        r.type = RType::arrow(src, b.type);
        r.children.push_back(std::move(b));
        break;
    }
    case NodeData::Kind::App: {
        RNode l = normalize_rnode(n.children.at(0));
        if (l.type.is_atom()) throw Error(ErrorKind::AppMismatch, "left premise has atomic type");
        r.type = l.type.target();
        r.ctx = l.ctx;
        std::vector<RNode> args;
        for (std::size_t i = 1; i < n.children.size(); ++i) args.push_back(normalize_rnode(n.children[i]));
        std::stable_sort(args.begin(), args.end(), rless);
        for (const auto& x : args) r.ctx = sum_ctx(r.ctx, x.ctx);
        r.children.push_back(std::move(l));
        for (auto& x : args) r.children.push_back(std::move(x));
        break;
    }
    }
    return r;
}

namespace {

void check_r_at(const RNode& n, const TermPtr& t, const Position& at) {
    auto fail = [&](ErrorKind k, const std::string& why) {
        throw Error(k, "R-derivation invalid at " + at.str() + ": " + why, at.str());
    };
    switch (n.kind) {
    case NodeData::Kind::Ax:
        if (!t->is_var() || t->name != n.var) fail(ErrorKind::MalformedShape, "axiom does not match the term");
        if (!n.children.empty()) fail(ErrorKind::MalformedShape, "axiom with premises");
        if (n.ctx != RContext{{n.var, RMulti{n.type}}}) fail(ErrorKind::MalformedShape, "axiom context");
        break;
    case NodeData::Kind::Abs: {
        if (!t->is_lam() || t->name != n.var) fail(ErrorKind::MalformedShape, "abs does not match the term");
        if (n.children.size() != 1) fail(ErrorKind::MalformedShape, "abs arity");
        const RNode& b = n.children[0];
        check_r_at(b, t->left, at.child(0));
        RContext c = b.ctx;
        RMulti src;
        if (auto it = c.find(n.var); it != c.end()) {
            src = it->second;
            c.erase(it);
        }
        if (!(n.type == RType::arrow(src, b.type)) || c != n.ctx) fail(ErrorKind::MalformedShape, "abs judgment");
        break;
    }
    case NodeData::Kind::App: {
        if (!t->is_app()) fail(ErrorKind::MalformedShape, "app does not match the term");
        if (n.children.empty()) fail(ErrorKind::MalformedShape, "app without left premise");
        const RNode& l = n.children[0];
        check_r_at(l, t->left, at.child(1));
        RMulti r;
        RContext c = l.ctx;
        for (std::size_t i = 1; i < n.children.size(); ++i) {
            check_r_at(n.children[i], t->right, at.child(2));
            if (i > 1 && rless(n.children[i], n.children[i - 1]))
                fail(ErrorKind::MalformedShape, "premises not in canonical order");
            r.push_back(n.children[i].type);
            c = sum_ctx(c, n.children[i].ctx);
        }
        std::sort(r.begin(), r.end());
        if (l.type.is_atom() || compare(l.type.source(), r) != 0)
            fail(ErrorKind::AppMismatch, "left source " + (l.type.is_atom() ? print_rtype(l.type) : print_multi(l.type.source())) +
                                             " vs premises " + print_multi(r));
        if (!(n.type == l.type.target()) || c != n.ctx) fail(ErrorKind::MalformedShape, "app judgment");
        break;
    }
    }
}

void paths_into(const RNode& n, std::vector<std::size_t>& cur,
                std::map<Position, std::vector<std::size_t>>& out) {
    out.emplace(n.origin, cur);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(i);
        paths_into(n.children[i], cur, out);
        cur.pop_back();
    }
}

}  // namespace

void check_R(const RDerivation& pi) { check_r_at(pi.root, pi.term, Position{}); }

std::map<Position, std::vector<std::size_t>> collapse_paths(const RNode& root) {
    std::map<Position, std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    paths_into(root, cur, out);
    return out;
}

const RNode& rnode_at(const RNode& root, const std::vector<std::size_t>& path) {
    const RNode* n = &root;
    for (std::size_t i : path) n = &n->children.at(i);
    return *n;
}

Position rpath_position(const RNode& root, const std::vector<std::size_t>& path) {
    Position p;
    const RNode* n = &root;
    for (std::size_t i : path) {
        p = p.child(n->kind == NodeData::Kind::Abs ? 0 : (i == 0 ? 1 : 2));
        n = &n->children.at(i);
    }
    return p;
}

std::string path_str(const std::vector<std::size_t>& path) {
    if (path.empty()) return "root";
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "/" : "") + std::to_string(path[i]);
    return s;
}

std::string print_context(const Context& c) {
    std::string s;
    for (const auto& [x, f] : c) {
        if (f.empty()) continue;
        s += (s.empty() ? "" : ", ") + x + ":" + print_seq(f);
    }
    return s;
}

std::string print_judgment(const TermPtr& t, const Judgment& j) {
    return print_context(j.ctx) + " |- " + print_term(t) + " : " + print_type(j.type);
}

std::string print_rcontext(const RContext& c) {
    std::string s;
    for (const auto& [x, m] : c) s += (s.empty() ? "" : ", ") + x + ":" + print_multi(m);
    return s;
}

std::string print_rderivation(const RDerivation& pi) {
    std::ostringstream os;
    std::function<void(const RNode&, const Position&, int)> go = [&](const RNode& n, const Position& at,
                                                                      int depth) {
        static const char* kinds[] = {"ax", "abs", "app"};
        os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << kinds[static_cast<int>(n.kind)] << " "
           << print_rcontext(n.ctx) << " |- " << print_term(subterm_at(pi.term, at)) << " : "
           << print_rtype(n.type) << "\n";
        for (std::size_t i = 0; i < n.children.size(); ++i)
            go(n.children[i], at.child(n.kind == NodeData::Kind::Abs ? 0 : (i == 0 ? 1 : 2)), depth + 1);
    };
    go(pi.root, Position{}, 0);
    return os.str();
}

nlohmann::json derivation_to_json(const Derivation& d) {
    nlohmann::json j;
    j["term"] = print_term(d.term);
    j["flavor"] = flavor_name(d.flavor);
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [a, n] : d.nodes) {
        nlohmann::json e;
        e["pos"] = a.str();
        switch (n.kind) {
        case NodeData::Kind::Ax:
            e["kind"] = "ax";
            e["track"] = n.track;
            e["type"] = print_type(n.type);
            break;
        case NodeData::Kind::Abs: e["kind"] = "abs"; break;
        case NodeData::Kind::App:
            e["kind"] = "app";
            e["args"] = std::vector<Track>(n.args.begin(), n.args.end());
            break;
        }
        nodes.push_back(std::move(e));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

Derivation derivation_from_json(const nlohmann::json& j) {
    try {
        Derivation d;
        d.term = parse_term(j.at("term").get<std::string>());
        d.flavor = parse_flavor(j.value("flavor", std::string("S")));
        for (const auto& e : j.at("nodes")) {
            Position a = Position::parse(e.at("pos").get<std::string>());
            std::string kind = e.at("kind").get<std::string>();
            NodeData n;
            if (kind == "ax") {
                std::uint64_t k = e.at("track").get<std::uint64_t>();
                if (k > std::numeric_limits<Track>::max()) throw Error(ErrorKind::Syntax, "track overflow");
                n = NodeData::ax(static_cast<Track>(k), parse_type(e.at("type").get<std::string>()));
            } else if (kind == "abs") {
                n = NodeData::abs();
            } else if (kind == "app") {
                std::set<Track> ks;
                for (const auto& k : e.at("args")) ks.insert(k.get<Track>());
                n = NodeData::app(std::move(ks));
            } else {
                throw Error(ErrorKind::Syntax, "unknown node kind '" + kind + "'", a.str());
            }
            if (!d.nodes.emplace(a, n).second) throw Error(ErrorKind::Syntax, "duplicate node " + a.str(), a.str());
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Syntax, std::string("derivation file: ") + e.what());
    }
}

std::string write_derivation(const Derivation& d) { return derivation_to_json(d).dump(2) + "\n"; }

Derivation read_derivation(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Syntax, std::string("derivation file: ") + e.what());
    }
    return derivation_from_json(j);
}

Derivation load_derivation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Domain, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_derivation(ss.str());
}

void save_derivation(const Derivation& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Domain, "cannot write " + path);
    out << write_derivation(d);
}

namespace {

using Shape = std::map<Position, NodeData>;

Shape shifted(const Shape& s, const Position& at) {
    Shape out;
    for (const auto& [p, n] : s) out.emplace(at.concat(p), n);
    return out;
}

std::vector<Shape> shapes_of(const TermPtr& t, const GenBudget& b) {
    switch (t->kind) {
    case Term::Kind::Var: return {Shape{{Position{}, NodeData::ax(0, SType{})}}};
    case Term::Kind::Lam: {
        std::vector<Shape> out;
        for (const auto& s : shapes_of(t->left, b)) {
            Shape r = shifted(s, Position{0});
            r.emplace(Position{}, NodeData::abs());
            out.push_back(std::move(r));
        }
        return out;
    }
    case Term::Kind::App: {
        std::vector<Shape> lefts = shapes_of(t->left, b);
        std::vector<Shape> rights = shapes_of(t->right, b);
        std::vector<Shape> out;
        for (const auto& l : lefts) {
            for (std::size_t n = 0; n <= b.width; ++n) {
                // multisets of argument shapes: nondecreasing index tuples
                std::vector<std::size_t> idx(n, 0);
                for (;;) {
                    if (out.size() >= b.max_results) return out;
                    if (n > 0 && rights.empty()) break;
                    Shape r = shifted(l, Position{1});
                    std::set<Track> ks;
                    for (std::size_t i = 0; i < n; ++i) {
                        Track k = static_cast<Track>(2 + i);
                        ks.insert(k);
                        Shape a = shifted(rights[idx[i]], Position{k});
                        r.insert(a.begin(), a.end());
                    }
                    r.emplace(Position{}, NodeData::app(ks));
                    out.push_back(std::move(r));
                    std::size_t i = n;
                    while (i > 0 && idx[i - 1] + 1 >= rights.size()) --i;
                    if (i == 0) break;
                    ++idx[i - 1];
                    for (std::size_t j = i; j < n; ++j) idx[j] = idx[i - 1];
                }
            }
        }
        return out;
    }
    }
    return {};
}

class Synth {
public:
    Synth(Shape& s, const TermPtr& t, const GenBudget& b) : s_(s), t_(t), b_(b) {}

    SType run(const Position& at) {
        TermPtr u = subterm_at(t_, at);
        if (u->is_lam()) {
            SType body = run(at.child(0));
            SeqType src;
            for (const auto& [p, n] : s_) {
                if (!at.child(0).is_prefix_of(p) || n.kind != NodeData::Kind::Ax) continue;
                if (subterm_at(t_, p)->name != u->name || rebound(at.child(0), p, u->name)) continue;
                src.emplace(n.track, n.type);
            }
            return SType::arrow(std::move(src), body);
        }
        std::vector<Position> spine;
        Position head = at;
        while (s_.at(head).kind == NodeData::Kind::App) {
            spine.push_back(head);
            head = head.child(1);
        }
        std::vector<SeqType> fs;
        for (const auto& q : spine) {
            SeqType f;
            for (Track k : s_.at(q).args) f.emplace(k, run(q.child(k)));
            fs.push_back(std::move(f));
        }
        ++atoms_;
        SType result = SType::atom("o" + std::to_string(b_.atom_pool ? (atoms_ - 1) % b_.atom_pool + 1 : atoms_));
        SType ht = result;
        for (auto& f : fs) ht = SType::arrow(std::move(f), ht);
        if (next_track_ > b_.track_pool) throw Error(ErrorKind::Budget, "fresh track pool exhausted");
        NodeData& h = s_.at(head);
        h.track = next_track_++;
        h.type = ht;
        return result;
    }

private:
    Shape& s_;
    const TermPtr& t_;
    const GenBudget& b_;
    Track next_track_ = 2;
    std::size_t atoms_ = 0;

    bool rebound(const Position& from, const Position& leaf, const std::string& x) const {
        for (std::size_t i = from.size(); i < leaf.size(); ++i) {
            Position p = leaf.prefix(i);
            if (s_.at(p).kind == NodeData::Kind::Abs && subterm_at(t_, p)->name == x) return true;
        }
        return false;
    }
};

}  // namespace

std::vector<Derivation> generate_normal_form_derivations(const TermPtr& t, const GenBudget& budget) {
    if (!is_normal(t)) throw Error(ErrorKind::Domain, "term is not beta-normal: " + print_term(t));
    std::vector<Derivation> out;
    for (auto& s : shapes_of(t, budget)) {
        Synth syn(s, t, budget);
        syn.run(Position{});
        Derivation d{t, std::move(s), Flavor::S};
        check_derivation(d);
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

SType rtype_to_stype(const RType& r) {
    if (r.is_atom()) return SType::atom(r.name());
    SeqType f;
    Track k = 2;
    for (const auto& s : r.source()) f.emplace(k++, rtype_to_stype(s));
    return SType::arrow(std::move(f), rtype_to_stype(r.target()));
}

void hybridize_at(const RNode& n, const Position& at, Track& next, Derivation& d) {
    switch (n.kind) {
    case NodeData::Kind::Ax: d.nodes.emplace(at, NodeData::ax(next++, rtype_to_stype(n.type))); break;
    case NodeData::Kind::Abs:
        d.nodes.emplace(at, NodeData::abs());
        hybridize_at(n.children.at(0), at.child(0), next, d);
        break;
    case NodeData::Kind::App: {
        std::set<Track> ks;
        for (std::size_t i = 1; i < n.children.size(); ++i) ks.insert(static_cast<Track>(i + 1));
        d.nodes.emplace(at, NodeData::app(ks));
        hybridize_at(n.children.at(0), at.child(1), next, d);
        for (std::size_t i = 1; i < n.children.size(); ++i)
            hybridize_at(n.children[i], at.child(static_cast<Track>(i + 1)), next, d);
        break;
    }
    }
}

}  // namespace

Derivation hybridize(const RDerivation& pi) {
    Derivation d;
    d.term = pi.term;
    d.flavor = Flavor::Sh;
    Track next = 2;
    hybridize_at(pi.root, Position{}, next, d);
    check_derivation(d);
    return d;
}

}  // namespace rigid
