#include "rigid/terms.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>

namespace rigid {

TermPtr make_var(std::string x) {
    return std::make_shared<const Term>(Term{Term::Kind::Var, std::move(x), nullptr, nullptr});
}
TermPtr make_lam(std::string x, TermPtr body) {
    return std::make_shared<const Term>(Term{Term::Kind::Lam, std::move(x), std::move(body), nullptr});
}
TermPtr make_app(TermPtr f, TermPtr u) {
    return std::make_shared<const Term>(Term{Term::Kind::App, "", std::move(f), std::move(u)});
}

namespace {

class TermParser {
public:
    explicit TermParser(const std::string& s) : s_(s) {}

    TermPtr run() {
        TermPtr t = term();
        skip();
        if (i_ != s_.size()) fail("trailing input");
        return t;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw Error(ErrorKind::Syntax, "term syntax error at offset " + std::to_string(i_) + ": " + what,
                    std::to_string(i_));
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool lambda_ahead() {
        skip();
        if (i_ < s_.size() && s_[i_] == '\\') return true;
        return s_.compare(i_, 2, "\xCE\xBB") == 0;
    }

    bool ident_ahead() {
        skip();
        return i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]));
    }

    std::string ident() {
        if (!ident_ahead()) fail("identifier expected");
        std::size_t b = i_;
        while (i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
            ++i_;
        return s_.substr(b, i_ - b);
    }

    TermPtr term() {
        if (lambda_ahead()) {
            i_ += s_[i_] == '\\' ? 1 : 2;
            std::vector<std::string> xs;
            xs.push_back(ident());
            while (ident_ahead()) xs.push_back(ident());
            skip();
            if (i_ >= s_.size() || s_[i_] != '.') fail("'.' expected");
            ++i_;
            TermPtr body = term();
            for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = make_lam(*it, body);
            return body;
        }
        TermPtr t = atom();
        for (;;) {
            skip();
            if (lambda_ahead()) return make_app(t, term());
            if (i_ < s_.size() && (s_[i_] == '(' || ident_ahead()))
                t = make_app(t, atom());
            else
                return t;
        }
    }

    TermPtr atom() {
        skip();
        if (i_ < s_.size() && s_[i_] == '(') {
            ++i_;
            TermPtr t = term();
            skip();
            if (i_ >= s_.size() || s_[i_] != ')') fail("')' expected");
            ++i_;
            return t;
        }
        return make_var(ident());
    }
};

void print_into(const TermPtr& t, std::string& out) {
    switch (t->kind) {
    case Term::Kind::Var: out += t->name; break;
    case Term::Kind::Lam:
        out += "\\" + t->name + ". ";
        print_into(t->left, out);
        break;
    case Term::Kind::App:
        if (t->left->is_lam()) {
            out += "(";
            print_into(t->left, out);
            out += ")";
        } else {
            print_into(t->left, out);
        }
        out += " ";
        if (t->right->is_var()) {
            print_into(t->right, out);
        } else {
            out += "(";
            print_into(t->right, out);
            out += ")";
        }
        break;
    }
}

// De Bruijn form: bound variables carry an index, free ones their name.
struct DB;
using DBPtr = std::shared_ptr<const DB>;
struct DB {
    Term::Kind kind;
    long idx;          // -1 for a free variable
    std::string name;  // free name or binder hint
    DBPtr l, r;
};

DBPtr db_var(long i, std::string n) {
    return std::make_shared<const DB>(DB{Term::Kind::Var, i, std::move(n), nullptr, nullptr});
}

DBPtr to_db(const TermPtr& t, std::vector<std::string>& env) {
    switch (t->kind) {
    case Term::Kind::Var:
        for (std::size_t i = env.size(); i-- > 0;)
            if (env[i] == t->name) return db_var(static_cast<long>(env.size() - 1 - i), t->name);
        return db_var(-1, t->name);
    case Term::Kind::Lam: {
        env.push_back(t->name);
        DBPtr b = to_db(t->left, env);
        env.pop_back();
        return std::make_shared<const DB>(DB{Term::Kind::Lam, 0, t->name, b, nullptr});
    }
    case Term::Kind::App: {
        DBPtr l = to_db(t->left, env);
        DBPtr r = to_db(t->right, env);
        return std::make_shared<const DB>(DB{Term::Kind::App, 0, "", l, r});
    }
    }
    return nullptr;
}

DBPtr shift(const DBPtr& t, long d, long cutoff) {
    switch (t->kind) {
    case Term::Kind::Var:
        if (t->idx >= cutoff) return db_var(t->idx + d, t->name);
        return t;
    case Term::Kind::Lam:
        return std::make_shared<const DB>(DB{Term::Kind::Lam, 0, t->name, shift(t->l, d, cutoff + 1), nullptr});
    case Term::Kind::App:
        return std::make_shared<const DB>(
            DB{Term::Kind::App, 0, "", shift(t->l, d, cutoff), shift(t->r, d, cutoff)});
    }
    return t;
}

DBPtr subst(const DBPtr& t, long j, const DBPtr& s) {
    switch (t->kind) {
    case Term::Kind::Var:
        return t->idx == j ? s : t;
    case Term::Kind::Lam:
        return std::make_shared<const DB>(
            DB{Term::Kind::Lam, 0, t->name, subst(t->l, j + 1, shift(s, 1, 0)), nullptr});
    case Term::Kind::App:
        return std::make_shared<const DB>(DB{Term::Kind::App, 0, "", subst(t->l, j, s), subst(t->r, j, s)});
    }
    return t;
}

void outer_names(const DBPtr& t, long depth, const std::vector<std::string>& env,
                 std::set<std::string>& out) {
    switch (t->kind) {
    case Term::Kind::Var:
        if (t->idx < 0)
            out.insert(t->name);
        else if (t->idx >= depth)
            out.insert(env[env.size() - 1 - static_cast<std::size_t>(t->idx - depth)]);
        break;
    case Term::Kind::Lam: outer_names(t->l, depth + 1, env, out); break;
    case Term::Kind::App:
        outer_names(t->l, depth, env, out);
        outer_names(t->r, depth, env, out);
        break;
    }
}

TermPtr from_db(const DBPtr& t, std::vector<std::string>& env) {
    switch (t->kind) {
    case Term::Kind::Var:
        if (t->idx < 0) return make_var(t->name);
        return make_var(env[env.size() - 1 - static_cast<std::size_t>(t->idx)]);
    case Term::Kind::Lam: {
        std::set<std::string> avoid;
        outer_names(t->l, 1, env, avoid);
        std::string n = t->name;
        for (int i = 1; avoid.count(n); ++i) n = t->name + std::to_string(i);
        env.push_back(n);
        TermPtr b = from_db(t->l, env);
        env.pop_back();
        return make_lam(n, b);
    }
    case Term::Kind::App: {
        TermPtr l = from_db(t->l, env);
        TermPtr r = from_db(t->r, env);
        return make_app(l, r);
    }
    }
    return nullptr;
}

bool db_equal(const DBPtr& a, const DBPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Term::Kind::Var: return a->idx == b->idx && (a->idx >= 0 || a->name == b->name);
    case Term::Kind::Lam: return db_equal(a->l, b->l);
    case Term::Kind::App: return db_equal(a->l, b->l) && db_equal(a->r, b->r);
    }
    return false;
}

void collect_support(const TermPtr& t, Position& cur, PosSet& out) {
    out.insert(cur);
    switch (t->kind) {
    case Term::Kind::Var: break;
    case Term::Kind::Lam:
        cur = cur.child(0);
        collect_support(t->left, cur, out);
        cur = cur.parent();
        break;
    case Term::Kind::App:
        cur = cur.child(1);
        collect_support(t->left, cur, out);
        cur = cur.parent().child(2);
        collect_support(t->right, cur, out);
        cur = cur.parent();
        break;
    }
}

TermPtr replace_at(const TermPtr& t, const Position& b, std::size_t i, const TermPtr& with) {
    if (i == b.size()) return with;
    Track k = b[i];
    if (t->is_lam() && k == 0) return make_lam(t->name, replace_at(t->left, b, i + 1, with));
    if (t->is_app() && k == 1) return make_app(replace_at(t->left, b, i + 1, with), t->right);
    if (t->is_app() && k == 2) return make_app(t->left, replace_at(t->right, b, i + 1, with));
    throw Error(ErrorKind::OutsideSupport, "position " + b.str() + " outside support", b.str());
}

}  // namespace

TermPtr parse_term(const std::string& text) { return TermParser(text).run(); }

std::string print_term(const TermPtr& t) {
    std::string out;
    print_into(t, out);
    return out;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name) return false;
    switch (a->kind) {
    case Term::Kind::Var: return true;
    case Term::Kind::Lam: return term_equal(a->left, b->left);
    case Term::Kind::App: return term_equal(a->left, b->left) && term_equal(a->right, b->right);
    }
    return false;
}

bool alpha_equiv(const TermPtr& a, const TermPtr& b) {
    std::vector<std::string> e1, e2;
    return db_equal(to_db(a, e1), to_db(b, e2));
}

PosSet support(const TermPtr& t) {
    PosSet s;
    Position cur;
    collect_support(t, cur, s);
    return s;
}

std::size_t term_size(const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::Var: return 1;
    case Term::Kind::Lam: return 1 + term_size(t->left);
    case Term::Kind::App: return 1 + term_size(t->left) + term_size(t->right);
    }
    return 0;
}

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> out;
    std::vector<std::string> env;
    outer_names(to_db(t, env), 0, env, out);
    return out;
}

TermPtr subterm_at(const TermPtr& t, const Position& a) {
    TermPtr cur = t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Track k = collapse_track(a[i]);
        if (cur->is_lam() && k == 0)
            cur = cur->left;
        else if (cur->is_app() && k == 1)
            cur = cur->left;
        else if (cur->is_app() && k == 2)
            cur = cur->right;
        else
            throw Error(ErrorKind::OutsideSupport, "position " + a.str() + " outside support",
                        a.str());
    }
    return cur;
}

Constructor constructor_at(const TermPtr& t, const Position& a) {
    TermPtr s = subterm_at(t, a);
    return Constructor{s->kind, s->name};
}

bool is_redex(const TermPtr& t) { return t->is_app() && t->left->is_lam(); }

std::vector<Position> redexes(const TermPtr& t) {
    std::vector<Position> out;
    for (const auto& p : support(t))
        if (is_redex(subterm_at(t, p))) out.push_back(p);
    return out;
}

TermPtr beta_reduce_at(const TermPtr& t, const Position& b) {
    TermPtr r = subterm_at(t, b);
    if (!is_redex(r)) throw Error(ErrorKind::NotARedex, "no redex at " + b.str(), b.str());
    // Work on the redex under its enclosing binders so that names stay correct.
    std::vector<std::string> env;
    {
        TermPtr cur = t;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (cur->is_lam()) {
                env.push_back(cur->name);
                cur = cur->left;
            } else {
                cur = b[i] == 1 ? cur->left : cur->right;
            }
        }
    }
    std::vector<std::string> env2 = env;
    DBPtr red = to_db(r, env2);
    DBPtr reduct = shift(subst(red->l->l, 0, shift(red->r, 1, 0)), -1, 0);
    TermPtr named = from_db(reduct, env);
    return replace_at(t, b, 0, named);
}

TermPtr barendregt_rename(const TermPtr& t) {
    std::set<std::string> used = free_vars(t);
    std::function<TermPtr(const TermPtr&, std::map<std::string, std::string>&)> go =
        [&](const TermPtr& u, std::map<std::string, std::string>& env) -> TermPtr {
        switch (u->kind) {
        case Term::Kind::Var: {
            auto it = env.find(u->name);
            return make_var(it == env.end() ? u->name : it->second);
        }
        case Term::Kind::Lam: {
            std::string n = u->name;
            for (int i = 1; used.count(n); ++i) n = u->name + std::to_string(i);
            used.insert(n);
            auto saved = env.find(u->name) == env.end()
                             ? std::optional<std::string>{}
                             : std::optional<std::string>{env[u->name]};
            env[u->name] = n;
            TermPtr b = go(u->left, env);
            if (saved)
                env[u->name] = *saved;
            else
                env.erase(u->name);
            return make_lam(n, b);
        }
        case Term::Kind::App: {
            TermPtr l = go(u->left, env);
            TermPtr r = go(u->right, env);
            return make_app(l, r);
        }
        }
        return u;
    };
    std::map<std::string, std::string> env;
    return go(t, env);
}

bool is_normal(const TermPtr& t) { return redexes(t).empty(); }

TermPtr normalize(const TermPtr& t, std::size_t max_steps) {
    TermPtr cur = t;
    for (std::size_t i = 0; i <= max_steps; ++i) {
        auto rs = redexes(cur);
        if (rs.empty()) return cur;
        cur = beta_reduce_at(cur, rs.front());
    }
    return nullptr;
}

}  // namespace rigid
