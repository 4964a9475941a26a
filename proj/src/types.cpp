#include "rigid/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>

namespace rigid {

SType SType::atom(std::string name) {
    SType t;
    t.rep_ = std::make_shared<const STypeRep>(STypeRep{std::move(name), {}, SType{}});
    return t;
}

SType SType::arrow(std::map<Track, SType> source, SType target) {
    for (const auto& [k, _] : source)
        if (k < 2) throw Error(ErrorKind::Domain, "sequence track " + std::to_string(k) + " < 2");
    SType t;
    t.rep_ = std::make_shared<const STypeRep>(STypeRep{"", std::move(source), std::move(target)});
    return t;
}

bool SType::is_atom() const { return !rep_->atom.empty(); }
const std::string& SType::name() const { return rep_->atom; }
const SeqType& SType::source() const { return rep_->source; }
const SType& SType::target() const { return rep_->target; }

namespace {

int compare_seq(const SeqType& a, const SeqType& b) {
    auto i = a.begin();
    auto j = b.begin();
    for (; i != a.end() && j != b.end(); ++i, ++j) {
        if (i->first != j->first) return i->first < j->first ? -1 : 1;
        if (int c = compare(i->second, j->second)) return c;
    }
    if (i == a.end() && j == b.end()) return 0;
    return i == a.end() ? -1 : 1;
}

}  // namespace

int compare(const SType& a, const SType& b) {
    if (a.rep_ == b.rep_) return 0;
    if (a.is_atom() != b.is_atom()) return a.is_atom() ? -1 : 1;
    if (a.is_atom()) return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    if (int c = compare_seq(a.source(), b.source())) return c;
    return compare(a.target(), b.target());
}

namespace {

void support_into(const SType& t, const Position& at, Labelled& out) {
    if (t.is_atom()) {
        out.emplace(at, t.name());
        return;
    }
    out.emplace(at, "->");
    for (const auto& [k, s] : t.source()) support_into(s, at.child(k), out);
    support_into(t.target(), at.child(1), out);
}

using Kids = std::map<Position, std::vector<Track>>;

Kids kids_of(const Labelled& u) {
    Kids ks;
    for (const auto& [p, _] : u)
        if (!p.empty()) ks[p.parent()].push_back(p.back());
    return ks;
}

SType rebuild(const Labelled& u, const Kids& ks, const Position& at) {
    const std::string& lab = u.at(at);
    if (lab != "->") return SType::atom(lab);
    SeqType src;
    SType tgt;
    auto it = ks.find(at);
    if (it != ks.end()) {
        for (Track k : it->second) {
            if (k == 1)
                tgt = rebuild(u, ks, at.child(1));
            else if (k >= 2)
                src.emplace(k, rebuild(u, ks, at.child(k)));
            else
                throw Error(ErrorKind::Domain, "track 0 inside a type at " + at.str());
        }
    }
    if (!tgt.valid()) throw Error(ErrorKind::Domain, "arrow without target at " + at.str());
    return SType::arrow(std::move(src), std::move(tgt));
}

}  // namespace

Labelled type_support(const SType& t) {
    Labelled out;
    support_into(t, Position{}, out);
    return out;
}

Labelled seq_support(const SeqType& f) {
    Labelled out;
    for (const auto& [k, s] : f) support_into(s, Position{k}, out);
    return out;
}

SType type_at(const SType& t, const Position& c) {
    SType cur = t;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (cur.is_atom()) throw Error(ErrorKind::OutsideSupport, "position " + c.str() + " outside type");
        if (c[i] == 1) {
            cur = cur.target();
        } else {
            auto it = cur.source().find(c[i]);
            if (it == cur.source().end())
                throw Error(ErrorKind::OutsideSupport, "position " + c.str() + " outside type");
            cur = it->second;
        }
    }
    return cur;
}

SType seq_at(const SeqType& f, const Position& kc) {
    if (kc.empty()) throw Error(ErrorKind::OutsideSupport, "eps is not in a sequence type");
    auto it = f.find(kc[0]);
    if (it == f.end()) throw Error(ErrorKind::OutsideSupport, "position " + kc.str() + " outside sequence");
    return type_at(it->second, kc.suffix(1));
}

SType type_from_support(const Labelled& u) { return rebuild(u, kids_of(u), Position{}); }

SeqType seq_from_support(const Labelled& u) {
    Kids ks = kids_of(u);
    SeqType f;
    for (const auto& [p, _] : u)
        if (p.size() == 1) f.emplace(p[0], rebuild(u, ks, p));
    return f;
}

std::set<Track> seq_conflicts(const SeqType& f1, const SeqType& f2) {
    std::set<Track> c;
    for (const auto& [k, _] : f1)
        if (f2.count(k)) c.insert(k);
    return c;
}

SeqType seq_union(const SeqType& f1, const SeqType& f2) {
    auto c = seq_conflicts(f1, f2);
    if (!c.empty()) {
        std::string ts;
        for (Track k : c) ts += (ts.empty() ? "" : ",") + std::to_string(k);
        throw Error(ErrorKind::TrackConflict, "track conflict {" + ts + "}", ts);
    }
    SeqType out = f1;
    out.insert(f2.begin(), f2.end());
    return out;
}

namespace {

class TypeParser {
public:
    explicit TypeParser(const std::string& s) : s_(s) {}

    template <class F>
    auto run(F f) {
        auto r = f(*this);
        skip();
        if (i_ != s_.size()) fail("trailing input");
        return r;
    }

    SType stype() {
        skip();
        if (i_ < s_.size() && s_[i_] == '(') {
            SeqType src = seq();
            skip();
            if (s_.compare(i_, 2, "->") != 0) fail("'->' expected");
            i_ += 2;
            return SType::arrow(std::move(src), stype());
        }
        return SType::atom(atom());
    }

    SeqType seq() {
        expect('(');
        SeqType f;
        skip();
        if (peek(')')) {
            ++i_;
            return f;
        }
        for (;;) {
            Track k = nat();
            if (k < 2) fail("sequence track must be >= 2");
            expect(':');
            SType s = stype();
            if (!f.emplace(k, s).second) fail("duplicate track " + std::to_string(k));
            skip();
            if (peek(',')) {
                ++i_;
                continue;
            }
            expect(')');
            return f;
        }
    }

    RType rtype() {
        skip();
        if (peek('[')) {
            ++i_;
            std::vector<RType> src;
            skip();
            if (!peek(']')) {
                for (;;) {
                    src.push_back(rtype());
                    skip();
                    if (peek(',')) {
                        ++i_;
                        continue;
                    }
                    break;
                }
            }
            expect(']');
            skip();
            if (s_.compare(i_, 2, "->") != 0) fail("'->' expected");
            i_ += 2;
            return RType::arrow(std::move(src), rtype());
        }
        return RType::atom(atom());
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw Error(ErrorKind::Syntax, "type syntax error at offset " + std::to_string(i_) + ": " + what,
                    std::to_string(i_));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(char c) const { return i_ < s_.size() && s_[i_] == c; }
    void expect(char c) {
        skip();
        if (!peek(c)) fail(std::string("'") + c + "' expected");
        ++i_;
    }
    std::string atom() {
        skip();
        if (i_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[i_]))) fail("atom expected");
        std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        while (peek('\'')) ++i_;
        return s_.substr(b, i_ - b);
    }
    Track nat() {
        skip();
        std::uint64_t v = 0;
        const char* b = s_.data() + i_;
        const char* e = s_.data() + s_.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (p == b || ec != std::errc()) fail("track expected");
        if (v > std::numeric_limits<Track>::max()) fail("track overflow");
        i_ += static_cast<std::size_t>(p - b);
        return static_cast<Track>(v);
    }
};

}  // namespace

SType parse_type(const std::string& text) {
    TypeParser p(text);
    return p.run([](TypeParser& q) { return q.stype(); });
}

SeqType parse_seq(const std::string& text) {
    TypeParser p(text);
    return p.run([](TypeParser& q) { return q.seq(); });
}

std::string print_seq(const SeqType& f) {
    std::string s = "(";
    bool first = true;
    for (const auto& [k, t] : f) {
        if (!first) s += ", ";
        first = false;
        s += std::to_string(k) + ":" + print_type(t);
    }
    return s + ")";
}

std::string print_type(const SType& t) {
    if (t.is_atom()) return t.name();
    return print_seq(t.source()) + " -> " + print_type(t.target());
}

RType RType::atom(std::string name) {
    RType t;
    t.rep_ = std::make_shared<const RTypeRep>(RTypeRep{std::move(name), {}, RType{}});
    return t;
}

RType RType::arrow(std::vector<RType> source, RType target) {
    std::sort(source.begin(), source.end());
    RType t;
    t.rep_ = std::make_shared<const RTypeRep>(RTypeRep{"", std::move(source), std::move(target)});
    return t;
}

bool RType::is_atom() const { return !rep_->atom.empty(); }
const std::string& RType::name() const { return rep_->atom; }
const std::vector<RType>& RType::source() const { return rep_->source; }
const RType& RType::target() const { return rep_->target; }

int compare(const RMulti& a, const RMulti& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a[i], b[i])) return c;
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

int compare(const RType& a, const RType& b) {
    if (a.rep_ == b.rep_) return 0;
    if (a.is_atom() != b.is_atom()) return a.is_atom() ? -1 : 1;
    if (a.is_atom()) {
        int c = a.name().compare(b.name());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (int c = compare(a.source(), b.source())) return c;
    return compare(a.target(), b.target());
}

RMulti multi_sum(const RMulti& a, const RMulti& b) {
    RMulti out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

RType collapse_type(const SType& t) {
    if (t.is_atom()) return RType::atom(t.name());
    return RType::arrow(collapse_seq(t.source()), collapse_type(t.target()));
}

RMulti collapse_seq(const SeqType& f) {
    RMulti m;
    for (const auto& [_, s] : f) m.push_back(collapse_type(s));
    std::sort(m.begin(), m.end());
    return m;
}

std::string print_multi(const RMulti& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + print_rtype(m[i]);
    return s + "]";
}

std::string print_rtype(const RType& t) {
    if (t.is_atom()) return t.name();
    return print_multi(t.source()) + " -> " + print_rtype(t.target());
}

RType parse_rtype(const std::string& text) {
    TypeParser p(text);
    return p.run([](TypeParser& q) { return q.rtype(); });
}

bool equiv(const SType& a, const SType& b) { return collapse_type(a) == collapse_type(b); }
bool equiv(const SeqType& a, const SeqType& b) { return compare(collapse_seq(a), collapse_seq(b)) == 0; }

std::vector<TypeIso> enumerate_type_isos(const SType& a, const SType& b, std::size_t limit) {
    return enumerate_labelled_isos(type_support(a), type_support(b), limit);
}

std::vector<TypeIso> enumerate_seq_isos(const SeqType& a, const SeqType& b, std::size_t limit) {
    return enumerate_labelled_isos(seq_support(a), seq_support(b), limit);
}

std::vector<RootIso> enumerate_root_isos(const SeqType& a, const SeqType& b) {
    std::vector<RootIso> out;
    if (a.size() != b.size()) return out;
    std::vector<std::pair<Track, RType>> src, dst;
    for (const auto& [k, s] : a) src.emplace_back(k, collapse_type(s));
    for (const auto& [k, s] : b) dst.emplace_back(k, collapse_type(s));
    std::vector<bool> used(dst.size(), false);
    RootIso cur;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == src.size()) {
            out.push_back(cur);
            return;
        }
        for (std::size_t j = 0; j < dst.size(); ++j) {
            if (used[j] || src[i].second != dst[j].second) continue;
            used[j] = true;
            cur[src[i].first] = dst[j].first;
            go(i + 1);
            cur.erase(src[i].first);
            used[j] = false;
        }
    };
    go(0);
    return out;
}

bool is_type_iso(const SType& a, const SType& b, const TypeIso& phi) {
    return check_labelled_iso(type_support(a), type_support(b), phi) == IsoCheck::Ok;
}

bool is_seq_iso(const SeqType& a, const SeqType& b, const TypeIso& phi) {
    return check_labelled_iso(seq_support(a), seq_support(b), phi) == IsoCheck::Ok;
}

SType apply_type_iso(const SType& t, const TypeIso& phi) {
    Labelled img;
    for (const auto& [c, lab] : type_support(t)) img.emplace(phi.at(c), lab);
    return type_from_support(img);
}

SeqType apply_seq_iso(const SeqType& f, const TypeIso& phi) {
    Labelled img;
    for (const auto& [c, lab] : seq_support(f)) img.emplace(phi.at(c), lab);
    return seq_from_support(img);
}

TypeIso arrow_iso(const TypeIso& source, const TypeIso& target) {
    TypeIso m = source;
    m.emplace(Position{}, Position{});
    for (const auto& [c, d] : target) m.emplace(Position{1}.concat(c), Position{1}.concat(d));
    return m;
}

TypeIso target_iso(const TypeIso& phi) {
    TypeIso m;
    for (const auto& [c, d] : phi)
        if (!c.empty() && c[0] == 1) m.emplace(c.suffix(1), d.suffix(1));
    return m;
}

TypeIso source_iso(const TypeIso& phi) {
    TypeIso m;
    for (const auto& [c, d] : phi)
        if (!c.empty() && c[0] >= 2) m.emplace(c, d);
    return m;
}

}  // namespace rigid
