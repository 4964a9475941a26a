#include "rigid/positions.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

namespace rigid {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::OutsideSupport: return "outside-support";
    case ErrorKind::TrackConflict: return "track-conflict";
    case ErrorKind::AppMismatch: return "app-mismatch";
    case ErrorKind::MalformedShape: return "malformed-shape";
    case ErrorKind::NotARedex: return "not-a-redex";
    case ErrorKind::Budget: return "budget-exhausted";
    case ErrorKind::InvalidInterface: return "invalid-interface";
    case ErrorKind::ChoiceMismatch: return "choice-mismatch";
    case ErrorKind::BrotherChain: return "brother-chain";
    case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

Position Position::parse(const std::string& text) {
    if (text.empty() || text == "eps") return {};
    std::vector<Track> ws;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t j = text.find('.', i);
        if (j == std::string::npos) j = text.size();
        std::uint64_t v = 0;
        const char* b = text.data() + i;
        const char* e = text.data() + j;
        auto [p, ec] = std::from_chars(b, e, v);
        if (b == e || ec != std::errc() || p != e)
            throw Error(ErrorKind::Syntax, "bad position '" + text + "'", std::to_string(i));
        if (v > std::numeric_limits<Track>::max())
            throw Error(ErrorKind::Syntax, "track overflow in '" + text + "'", std::to_string(i));
        ws.push_back(static_cast<Track>(v));
        i = j + 1;
    }
    return Position(std::move(ws));
}

std::string Position::str() const {
    if (w_.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w_[i]);
    }
    return s;
}

Position Position::child(Track k) const {
    Position p = *this;
    p.w_.push_back(k);
    return p;
}

Position Position::concat(const Position& o) const {
    Position p = *this;
    p.w_.insert(p.w_.end(), o.w_.begin(), o.w_.end());
    return p;
}

Position Position::parent() const {
    if (w_.empty()) throw Error(ErrorKind::Domain, "eps has no parent");
    return prefix(w_.size() - 1);
}

Position Position::prefix(std::size_t n) const {
    return Position(std::vector<Track>(w_.begin(), w_.begin() + std::min(n, w_.size())));
}

Position Position::suffix(std::size_t from) const {
    if (from >= w_.size()) return {};
    return Position(std::vector<Track>(w_.begin() + from, w_.end()));
}

bool Position::is_prefix_of(const Position& o) const {
    return w_.size() <= o.w_.size() && std::equal(w_.begin(), w_.end(), o.w_.begin());
}

Position operator+(const Position& a, const Position& b) { return a.concat(b); }

Track collapse_track(Track k) { return std::min<Track>(k, 2); }

Position collapse_position(const Position& a) {
    std::vector<Track> ws;
    ws.reserve(a.size());
    for (Track k : a.letters()) ws.push_back(collapse_track(k));
    return Position(std::move(ws));
}

std::size_t applicative_depth(const Position& a) {
    return static_cast<std::size_t>(
        std::count_if(a.letters().begin(), a.letters().end(), [](Track k) { return k >= 2; }));
}

bool is_tree(const PosSet& u) {
    if (!u.count(Position{})) return false;
    for (const auto& p : u)
        if (!p.empty() && !u.count(p.parent())) return false;
    return true;
}

bool is_forest(const PosSet& u) {
    for (const auto& p : u) {
        if (p.empty() || p[0] < 2) return false;
        if (p.size() > 1 && !u.count(p.parent())) return false;
    }
    return true;
}

std::set<Track> roots(const PosSet& forest) {
    std::set<Track> r;
    for (const auto& p : forest)
        if (p.size() == 1) r.insert(p[0]);
    return r;
}

PosSet mutable_support(const PosSet& u) {
    PosSet m;
    for (const auto& p : u)
        if (!p.empty() && p.back() >= 2) m.insert(p);
    return m;
}

Labelled unlabelled(const PosSet& u) {
    Labelled l;
    for (const auto& p : u) l.emplace(p, "");
    return l;
}

PosSet domain(const Labelled& u) {
    PosSet s;
    for (const auto& [p, _] : u) s.insert(p);
    return s;
}

namespace {

IsoCheck check_shape(const PosSet& d1, const PosSet& u2, const PosMap& phi) {
    std::set<Position> img;
    for (const auto& [a, b] : phi) {
        if (!u2.count(b) || a.size() != b.size()) return IsoCheck::NotIso;
        if (!img.insert(b).second) return IsoCheck::NotIso;
        if (a.empty()) continue;
        Track k = a.back();
        if (k < 2 && b.back() != k) return IsoCheck::NotIso;
        if (k >= 2 && b.back() < 2) return IsoCheck::NotIso;
        Position pa = a.parent();
        if (d1.count(pa)) {
            if (phi.at(pa) != b.parent()) return IsoCheck::NotIso;
        } else if (!pa.empty()) {
            return IsoCheck::NotIso;
        }
    }
    return img.size() == u2.size() ? IsoCheck::Ok : IsoCheck::NotIso;
}

}  // namespace

IsoCheck check_01_iso(const PosSet& u1, const PosSet& u2, const PosMap& phi) {
    PosSet d;
    for (const auto& [a, _] : phi) d.insert(a);
    if (d != u1) return IsoCheck::DomainMismatch;
    return check_shape(u1, u2, phi);
}

IsoCheck check_labelled_iso(const Labelled& u1, const Labelled& u2, const PosMap& phi) {
    IsoCheck r = check_01_iso(domain(u1), domain(u2), phi);
    if (r != IsoCheck::Ok) return r;
    for (const auto& [a, b] : phi)
        if (u1.at(a) != u2.at(b)) return IsoCheck::NotIso;
    return IsoCheck::Ok;
}

namespace {

class TreeIndex {
public:
    explicit TreeIndex(const Labelled& u) : u_(u) {
        for (const auto& [p, _] : u)
            if (!p.empty()) kids_[p.parent()].push_back(p.back());
    }

    const std::vector<Track>& kids(const Position& a) const {
        static const std::vector<Track> none;
        auto it = kids_.find(a);
        return it == kids_.end() ? none : it->second;
    }

    bool has(const Position& a) const { return u_.count(a) != 0; }

    const std::string& canon(const Position& a) {
        auto it = canon_.find(a);
        if (it != canon_.end()) return it->second;
        std::string s = u_.at(a) + "{";
        std::vector<std::string> muts;
        for (Track k : kids(a)) {
            if (k < 2)
                s += std::to_string(k) + ":" + canon(a.child(k)) + ";";
            else
                muts.push_back(canon(a.child(k)));
        }
        std::sort(muts.begin(), muts.end());
        for (const auto& m : muts) s += "*" + m + ";";
        s += "}";
        return canon_.emplace(a, std::move(s)).first->second;
    }

private:
    const Labelled& u_;
    std::map<Position, std::vector<Track>> kids_;
    std::map<Position, std::string> canon_;
};

using Isos = std::vector<PosMap>;

Isos product(const Isos& xs, const Isos& ys, std::size_t limit) {
    Isos out;
    for (const auto& x : xs) {
        for (const auto& y : ys) {
            if (out.size() >= limit) return out;
            PosMap m = x;
            m.insert(y.begin(), y.end());
            out.push_back(std::move(m));
        }
    }
    return out;
}

Isos isos_at(TreeIndex& t1, TreeIndex& t2, const Position& a1, const Position& a2,
             std::size_t limit) {
    if (t1.canon(a1) != t2.canon(a2)) return {};
    Isos acc{PosMap{{a1, a2}}};
    std::vector<Track> src, dst;
    for (Track k : t1.kids(a1)) {
        if (k < 2)
            acc = product(acc, isos_at(t1, t2, a1.child(k), a2.child(k), limit), limit);
        else
            src.push_back(k);
    }
    for (Track k : t2.kids(a2))
        if (k >= 2) dst.push_back(k);
    if (src.size() != dst.size()) return {};
    if (src.empty()) return acc;

    Isos out;
    std::vector<bool> used(dst.size(), false);
    std::vector<std::size_t> pick(src.size());
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (out.size() >= limit) return;
        if (i == src.size()) {
            Isos cur = acc;
            for (std::size_t j = 0; j < src.size() && !cur.empty(); ++j)
                cur = product(cur,
                              isos_at(t1, t2, a1.child(src[j]), a2.child(dst[pick[j]]), limit),
                              limit);
            for (auto& m : cur) {
                if (out.size() >= limit) return;
                out.push_back(std::move(m));
            }
            return;
        }
        for (std::size_t j = 0; j < dst.size(); ++j) {
            if (used[j] || t1.canon(a1.child(src[i])) != t2.canon(a2.child(dst[j]))) continue;
            used[j] = true;
            pick[i] = j;
            go(i + 1);
            used[j] = false;
        }
    };
    go(0);
    return out;
}

Labelled with_root(const Labelled& u, bool& added) {
    added = !u.count(Position{});
    if (!added) return u;
    Labelled v = u;
    v.emplace(Position{}, "#");
    return v;
}

}  // namespace

std::vector<PosMap> enumerate_labelled_isos(const Labelled& u1, const Labelled& u2,
                                            std::size_t limit) {
    bool add1 = false, add2 = false;
    Labelled v1 = with_root(u1, add1);
    Labelled v2 = with_root(u2, add2);
    if (add1 != add2 || v1.size() != v2.size()) return {};
    TreeIndex t1(v1), t2(v2);
    Isos out = isos_at(t1, t2, Position{}, Position{}, limit);
    if (add1)
        for (auto& m : out) m.erase(Position{});
    return out;
}

std::vector<PosMap> enumerate_01_isos(const PosSet& u1, const PosSet& u2, std::size_t limit) {
    return enumerate_labelled_isos(unlabelled(u1), unlabelled(u2), limit);
}

bool labelled_equiv(const Labelled& u1, const Labelled& u2) {
    bool add1 = false, add2 = false;
    Labelled v1 = with_root(u1, add1);
    Labelled v2 = with_root(u2, add2);
    if (add1 != add2) return false;
    TreeIndex t1(v1), t2(v2);
    return t1.canon(Position{}) == t2.canon(Position{});
}

std::string canonical_subtree(const Labelled& u, const Position& a) {
    TreeIndex t(u);
    return t.canon(a);
}

bool root_iso_extends(const Labelled& f1, const Labelled& f2, const RootIso& rho) {
    std::set<Track> r1 = roots(domain(f1)), r2 = roots(domain(f2));
    if (r1.size() != rho.size() || r2.size() != rho.size()) return false;
    TreeIndex t1(f1), t2(f2);
    std::set<Track> seen;
    for (const auto& [k, k2] : rho) {
        if (!r1.count(k) || !r2.count(k2) || !seen.insert(k2).second) return false;
        if (t1.canon(Position{k}) != t2.canon(Position{k2})) return false;
    }
    return true;
}

RootIso root_of(const PosMap& phi) {
    RootIso r;
    for (const auto& [a, b] : phi)
        if (a.size() == 1) r.emplace(a[0], b[0]);
    return r;
}

Resetting apply_relabelling(const PosSet& u, const Relabelling01& relab) {
    std::map<Position, std::set<Track>> used;
    for (const auto& p : u) {
        if (p.empty() || p.back() < 2) continue;
        auto it = relab.find(p);
        if (it == relab.end())
            throw Error(ErrorKind::Domain, "relabelling undefined at " + p.str(), p.str());
        if (it->second < 2)
            throw Error(ErrorKind::Domain, "relabelling to a fixed track at " + p.str(), p.str());
        if (!used[p.parent()].insert(it->second).second)
            throw Error(ErrorKind::Domain, "relabelling not sibling-injective at " + p.str(),
                        p.str());
    }
    Resetting r;
    for (const auto& p : u) {
        Position img;
        if (!p.empty()) {
            Track k = p.back();
            Track k2 = k < 2 ? k : relab.at(p);
            Position pp = p.parent();
            img = (pp.empty() && !u.count(pp) ? Position{} : r.iso.at(pp)).child(k2);
        }
        r.iso.emplace(p, img);
        r.image.insert(img);
    }
    return r;
}

PosMap identity_map(const PosSet& u) {
    PosMap m;
    for (const auto& p : u) m.emplace(p, p);
    return m;
}

PosMap inverse_map(const PosMap& phi) {
    PosMap m;
    for (const auto& [a, b] : phi) m.emplace(b, a);
    return m;
}

PosMap compose(const PosMap& g, const PosMap& f) {
    PosMap m;
    for (const auto& [a, b] : f) {
        auto it = g.find(b);
        if (it == g.end())
            throw Error(ErrorKind::Internal, "composition undefined at " + b.str(), b.str());
        m.emplace(a, it->second);
    }
    return m;
}

}  // namespace rigid
