// Acceptance run: one PASS/FAIL line per criterion C1..C9.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "rigid/corpus.hpp"
#include "rigid/error.hpp"
#include "rigid/threads.hpp"
#include "rigid/trivialize.hpp"

using namespace rigid;

namespace {

constexpr double kC1Seconds = 1.0;
constexpr double kC2Seconds = 30.0;
constexpr double kC5Seconds = 120.0;
constexpr std::size_t kCorpusSize = 1200;
constexpr std::size_t kDuplicationSize = 400;
constexpr std::size_t kMinCorpus = 500;
constexpr std::size_t kMaxChoices = 24;
constexpr std::size_t kMinTowers = 50;
constexpr std::size_t kTowers = 60;
constexpr std::uint64_t kSeed = 42;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Position P(const char* s) { return Position::parse(s); }

struct Outcome {
    bool ok = true;
    std::string detail;
    std::string first_failure;
    void fail(const std::string& why) {
        if (ok) first_failure = why;
        ok = false;
    }
};

int report(const char* id, const char* title, const Outcome& o) {
    std::printf("%s %s %s: %s\n", o.ok ? "PASS" : "FAIL", id, title, o.detail.c_str());
    if (!o.ok) std::printf("     first failure: %s\n", o.first_failure.c_str());
    std::fflush(stdout);
    return o.ok ? 0 : 1;
}

template <class F>
void guarded(Outcome& o, const std::string& what, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        o.fail(what + ": " + e.what());
    }
}

std::string judgment_text(const Checked& p) {
    return print_context(p.conclusion().ctx) + " |- " + print_type(p.conclusion().type);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

RNode rax(const std::string& x, const std::string& ty) {
    RNode n;
    n.kind = NodeData::Kind::Ax;
    n.var = x;
    n.type = parse_rtype(ty);
    n.ctx[x] = {n.type};
    return n;
}

// The R-derivation of lam x. x x with x : [o', [o,o',o] -> o', o, o], built by hand.
RDerivation pi_ex() {
    RNode app;
    app.kind = NodeData::Kind::App;
    app.type = parse_rtype("o'");
    app.children = {rax("x", "[o, o', o] -> o'"), rax("x", "o'"), rax("x", "o"), rax("x", "o")};
    std::sort(app.children.begin() + 1, app.children.end(),
              [](const RNode& a, const RNode& b) { return compare(a, b) < 0; });
    RMulti xs;
    for (const auto& c : app.children) xs.push_back(c.type);
    std::sort(xs.begin(), xs.end());
    app.ctx["x"] = xs;
    RNode abs;
    abs.kind = NodeData::Kind::Abs;
    abs.var = "x";
    abs.type = parse_rtype("[o', [o, o', o] -> o', o, o] -> o'");
    abs.children = {app};
    return {parse_term("\\x. x x"), abs};
}

Outcome c1_golden() {
    Outcome o;
    auto t0 = Clock::now();
    guarded(o, "P_ex", [&] {
        Checked p = check_derivation(fixtures::pex(), Flavor::S);
        if (print_type(p.conclusion().type) != print_type(parse_type("(2:o', 4:(8:o, 3:o', 2:o) -> o', 5:o, 9:o) -> o'")))
            o.fail("P_ex concludes " + print_type(p.conclusion().type));
        if (collapse_derivation(p) != pi_ex()) o.fail("P_ex collapses to " + print_rderivation(collapse_derivation(p)));
    });
    guarded(o, "Fig. 2", [&] {
        TypeIso phi = {{P("eps"), P("eps")}, {P("1"), P("1")}, {P("4"), P("5")}, {P("4.1"), P("5.1")},
                       {P("4.3"), P("5.7")}, {P("4.8"), P("5.2")}, {P("8"), P("3")}};
        if (!equiv(fixtures::t1(), fixtures::t2())) o.fail("T1 and T2 not equivalent");
        auto isos = enumerate_type_isos(fixtures::t1(), fixtures::t2());
        if (std::find(isos.begin(), isos.end(), phi) == isos.end()) o.fail("Fig. 2 iso not enumerated");
    });
    guarded(o, "Fig. 5", [&] {
        Checked p = check_derivation(fixtures::fig5(), Flavor::Sh);
        if (p.L(Position{}) != parse_seq("(8:o, 9:o)")) o.fail("L(eps) = " + print_seq(p.L(Position{})));
        if (p.R(Position{}) != parse_seq("(3:o, 5:o)")) o.fail("R(eps) = " + print_seq(p.R(Position{})));
    });
    double s = seconds_since(t0);
    if (s >= kC1Seconds) o.fail("took " + fmt("%.3f s", s));
    o.detail = "P_ex, Fig. 2, Fig. 5 in " + fmt("%.3f s", s) + " (limit 1 s)";
    return o;
}

struct Corpus {
    std::vector<CorpusItem> s;      // flavor S, term size <= 7
    std::vector<CorpusItem> dup;    // flavor S, redexes with several choices
    std::vector<std::string> names; // of the hybrid derivations
    std::vector<Operable> hybrid;   // relabelled, transported interface
    std::vector<Operable> operable; // everything fed to C6 and C7
};

Outcome c2_subject_reduction(const Corpus& c) {
    Outcome o;
    auto t0 = Clock::now();
    std::size_t redexes_typed = 0;
    for (const auto& it : c.s) {
        guarded(o, it.name, [&] {
            Checked p = check_derivation(it.d, Flavor::S);
            for (const auto& b : redexes(it.d.term)) {
                if (redex_nodes(p, b).empty()) continue;
                ++redexes_typed;
                Checked q = check_derivation(reduce_S(it.d, b), Flavor::S);
                if (judgment_text(q) != judgment_text(p))
                    o.fail(it.name + " at " + b.str() + ": " + judgment_text(q) + " vs " + judgment_text(p));
            }
        });
    }
    double s = seconds_since(t0);
    if (c.s.size() < kMinCorpus) o.fail("corpus has only " + std::to_string(c.s.size()) + " derivations");
    if (s >= kC2Seconds) o.fail("took " + fmt("%.2f s", s));
    o.detail = std::to_string(c.s.size()) + " derivations (size <= 7, width <= 2), " + std::to_string(redexes_typed) +
               " typed redexes, " + fmt("%.2f s", s) + " (limit 30 s)";
    return o;
}

Outcome c3_pseudo_sr(const Corpus& c) {
    Outcome o;
    std::size_t cases = 0;
    Rng rng(kSeed + 3);
    for (std::size_t i = 0; i < c.hybrid.size(); ++i) {
        guarded(o, c.names[i], [&] {
            Checked p = check_derivation(c.hybrid[i].d, Flavor::Sh);
            for (const auto& b : redexes(p.term())) {
                if (redex_nodes(p, b).empty()) continue;
                auto choices = enumerate_choices(p, b, 64);
                const ReductionChoice& rho = choices[draw(rng, choices.size())];
                Checked q = check_derivation(reduce_Sh(p, rho), Flavor::Sh);
                ++cases;
                if (!equiv(q.conclusion().type, p.conclusion().type))
                    o.fail(c.names[i] + " at " + b.str() + ": types not equivalent");
                if (q.conclusion().ctx != p.conclusion().ctx)
                    o.fail(c.names[i] + " at " + b.str() + ": contexts differ");
            }
        });
    }
    o.detail = std::to_string(cases) + " hybrid reductions, all with equivalent type and identical context";
    if (!o.ok) o.detail = "failures among " + std::to_string(cases) + " hybrid reductions";
    return o;
}

Outcome c4_commutation(const Corpus& c) {
    Outcome o;
    std::size_t checked = 0, skipped = 0, multi = 0;
    for (std::size_t i = 0; i < c.hybrid.size(); ++i) {
        guarded(o, c.names[i], [&] {
            Checked p = check_derivation(c.hybrid[i].d, Flavor::Sh);
            RDerivation pi = collapse_derivation(p);
            for (const auto& b : redexes(p.term())) {
                if (redex_nodes(p, b).empty()) continue;
                auto choices = enumerate_choices(p, b, kMaxChoices + 1);
                if (choices.size() > kMaxChoices) {
                    ++skipped;
                    continue;
                }
                multi += choices.size() > 1;
                for (const auto& rho : choices) {
                    ++checked;
                    RDerivation lhs = collapse_derivation(check_derivation(reduce_Sh(p, rho)));
                    RDerivation rhs = reduce_R(pi, collapse_choice(p, rho));
                    if (lhs != rhs) o.fail(c.names[i] + " at " + b.str() + ": collapse does not commute");
                }
            }
        });
    }
    o.detail = std::to_string(checked) + " choices commute exactly, " + std::to_string(multi) +
               " redexes with 2..24 choices (" + std::to_string(skipped) + " redexes over 24 choices excluded)";
    return o;
}

// Every choice sequence of length <= 3, with the states after each R-step.
void choice_sequences(const RDerivation pi, std::vector<RChoice>& seq, std::vector<RDerivation>& pis,
                      const std::function<void(const std::vector<RChoice>&, const std::vector<RDerivation>&)>& visit) {
    visit(seq, pis);
    if (seq.size() == 3) return;
    for (const auto& b : redexes(pi.term)) {
        for (const auto& ch : enumerate_reduction_choices(pi, b)) {
            seq.push_back(ch);
            pis.push_back(reduce_R(pi, ch));
            choice_sequences(pis.back(), seq, pis, visit);
            seq.pop_back();
            pis.pop_back();
        }
    }
}

Outcome c5_representation(const Corpus& c, std::vector<Operable>& produced) {
    Outcome o;
    auto t0 = Clock::now();
    std::size_t bases = 0, sequences = 0, steps = 0;
    std::vector<const CorpusItem*> items;
    for (const auto* set : {&c.s, &c.dup})
        for (const auto& it : *set) items.push_back(&it);
    for (const CorpusItem* ip : items) {
        const CorpusItem& it = *ip;
        if (redexes(it.d.term).size() > 2 || redexes(it.d.term).empty()) continue;
        ++bases;
        guarded(o, it.name, [&] {
            Checked p = check_derivation(it.d);
            std::vector<RChoice> seq;
            std::vector<RDerivation> pis{collapse_derivation(p)};
            choice_sequences(pis[0], seq, pis, [&](const std::vector<RChoice>& s, const std::vector<RDerivation>& ps) {
                if (s.empty()) return;
                ++sequences;
                Operable op = build_operable_from_choices(ps[0], Operable{it.d, {}}, s);
                if (sequences % 7 == 0) produced.push_back(op);
                for (std::size_t i = 0; i < s.size(); ++i) {
                    op = reduce_operable(op, s[i].b).result;
                    ++steps;
                    if (collapse_derivation(check_derivation(op.d)) != ps[i + 1])
                        o.fail(it.name + ": step " + std::to_string(i + 1) + " collapses elsewhere");
                }
            });
        });
    }
    double s = seconds_since(t0);
    if (s >= kC5Seconds) o.fail("took " + fmt("%.1f s", s));
    o.detail = std::to_string(bases) + " bases with 1-2 redexes, " + std::to_string(sequences) + " sequences, " +
               std::to_string(steps) + " operable steps, " + fmt("%.2f s", s) + " (limit 120 s)";
    return o;
}

Outcome c6_trivialize(const Corpus& c) {
    Outcome o;
    std::size_t n = 0;
    for (const auto& op : c.operable) {
        ++n;
        guarded(o, "operable #" + std::to_string(n), [&] {
            Checked p = check_operable(op);
            auto an = analyze_threads(p, op.iface);
            if (auto chain = find_brother_chain(p, an.th, an.arcs))
                o.fail("operable #" + std::to_string(n) + ": brother chain " + chain_str(*chain));
            Trivialization t = trivialize(op);
            Checked p0 = check_derivation(t.p0, Flavor::S);
            std::string why;
            if (!verify_derivation_iso(p, op.iface, p0, identity_interface(p0), t.psi, &why))
                o.fail("operable #" + std::to_string(n) + ": " + why);
            if (collapse_derivation(p0) != collapse_derivation(p))
                o.fail("operable #" + std::to_string(n) + ": collapse changed");
        });
    }
    o.detail = std::to_string(n) + " operable derivations trivialized, no brother chain";
    return o;
}

Outcome c7_lemmas(const Corpus& c) {
    Outcome o;
    std::size_t n = 0, arcs = 0;
    for (const auto& op : c.operable) {
        ++n;
        guarded(o, "operable #" + std::to_string(n), [&] {
            Checked p = check_operable(op);
            auto an = analyze_threads(p, op.iface);
            arcs += an.arcs.size();
            if (!check_uniqueness_of_consumption(an.arcs)) o.fail("operable #" + std::to_string(n) + ": uniqueness");
            if (!check_monotonicity(an.th, an.arcs)) o.fail("operable #" + std::to_string(n) + ": monotonicity");
        });
    }
    guarded(o, "Fig. 5", [&] {
        Operable op = fixtures::fig5_operable();
        Checked p = check_operable(op);
        auto an = analyze_threads(p, op.iface);
        auto id = [&](const Edge& e) { return an.th.of(e); };
        std::size_t t8 = id(Edge::right(P("1.1.1.0.0.1"), P("1.8"))), t9 = id(Edge::right(P("1.1.1.0.0.1"), P("1.9")));
        std::size_t t2 = id(Edge::right(P("1.6"), P("1.2"))), t7 = id(Edge::right(P("1.6"), P("1.7")));
        std::size_t t3 = id(Edge::arg(P("3"))), t5 = id(Edge::arg(P("5")));
        struct Want {
            std::size_t l, r;
            Polarity lp, rp;
            Position a;
        };
        const Want want[] = {{t8, t2, Polarity::Neg, Polarity::Pos, P("1")},
                             {t9, t7, Polarity::Neg, Polarity::Pos, P("1")},
                             {t8, t3, Polarity::Pos, Polarity::Pos, Position{}},
                             {t9, t5, Polarity::Pos, Polarity::Pos, Position{}}};
        for (const auto& w : want) {
            bool found = std::any_of(an.arcs.begin(), an.arcs.end(), [&](const ConsumptionArc& a) {
                return a.left == w.l && a.right == w.r && a.left_pol == w.lp && a.right_pol == w.rp && a.a == w.a;
            });
            if (!found) o.fail("Fig. 5 arc missing at " + w.a.str());
        }
    });
    o.detail = std::to_string(n) + " operable derivations, " + std::to_string(arcs) +
               " arcs, uniqueness and monotonicity hold; Fig. 5 four arcs reproduced";
    return o;
}

Outcome c8_collapsing() {
    Outcome o;
    std::size_t n = 0, steps = 0, erased = 0;
    std::vector<TowerInstance> towers;
    guarded(o, "towers", [&] { towers = redex_towers(kSeed, kTowers); });
    for (const auto& t : towers) {
        ++n;
        guarded(o, t.name, [&] {
            StrategyTrace tr = run_collapsing_strategy(t.op, t.arc);
            steps += tr.seq.size();
            if (tr.seq.size() != t.height) o.fail(t.name + ": " + std::to_string(tr.seq.size()) + " steps");
            // Replay the sequence independently of the trace.
            Operable cur = t.op;
            for (std::size_t i = 0; i < tr.seq.size(); ++i) {
                cur = reduce_operable(cur, tr.seq[i]).result;
                if (write_derivation(cur.d) != write_derivation(tr.states[i + 1].d) || cur.iface != tr.states[i + 1].iface)
                    o.fail(t.name + ": replay diverges at step " + std::to_string(i + 1));
            }
            if (tr.left_ref.has_value() != tr.right_ref.has_value()) {
                o.fail(t.name + ": only one referent residual survives");
            } else if (!tr.left_ref) {
                ++erased;
            } else {
                Checked last = check_operable(cur);
                Threads th = compute_threads(last);
                if (*tr.left_ref != *tr.right_ref || th.of(*tr.left_ref) != th.of(*tr.right_ref))
                    o.fail(t.name + ": residual referents differ: " + tr.left_ref->str() + " vs " + tr.right_ref->str());
            }
        });
    }
    if (n < kMinTowers) o.fail("only " + std::to_string(n) + " tower instances");
    o.detail = std::to_string(n) + " tower instances (height <= 3), " + std::to_string(steps) +
               " strategy steps replayed, referent residuals coincide (" + std::to_string(erased) +
               " erased together)";
    return o;
}

Outcome c9_round_trips(const Corpus& c) {
    Outcome o;
    std::size_t derivs = 0, terms = 0, types = 0;
    auto check_deriv = [&](const Derivation& d, const std::string& name) {
        ++derivs;
        std::string text = write_derivation(d);
        Derivation back = read_derivation(text);
        if (!derivation_equal(back, d) || write_derivation(back) != text) o.fail(name + ": derivation round-trip");
        ++terms;
        if (!term_equal(parse_term(print_term(d.term)), d.term)) o.fail(name + ": term round-trip");
        Checked p = check_derivation(d);
        for (const auto& [a, n] : d.nodes) {
            const SType& t = p.type(a);
            ++types;
            if (parse_type(print_type(t)) != t) o.fail(name + ": type round-trip at " + a.str());
            if (n.kind == NodeData::Kind::Ax && parse_type(print_type(n.type)) != n.type)
                o.fail(name + ": axiom type round-trip at " + a.str());
            for (const auto& [x, f] : p.judgment(a).ctx) {
                ++types;
                if (parse_seq(print_seq(f)) != f) o.fail(name + ": context round-trip at " + a.str());
            }
        }
        RDerivation pi = collapse_derivation(p);
        std::function<void(const RNode&)> walk = [&](const RNode& r) {
            ++types;
            if (parse_rtype(print_rtype(r.type)) != r.type) o.fail(name + ": R-type round-trip");
            for (const auto& ch : r.children) walk(ch);
        };
        walk(pi.root);
    };
    for (const auto* set : {&c.s, &c.dup})
        for (const auto& it : *set) guarded(o, it.name, [&] { check_deriv(it.d, it.name); });
    for (std::size_t i = 0; i < c.operable.size(); ++i) {
        const std::string name = "operable #" + std::to_string(i + 1);
        guarded(o, name, [&] {
            check_deriv(c.operable[i].d, name);
            if (interface_from_json(nlohmann::json::parse(interface_to_json(c.operable[i].iface).dump())) !=
                c.operable[i].iface)
                o.fail(name + ": interface round-trip");
        });
    }
    o.detail = std::to_string(derivs) + " derivations, " + std::to_string(terms) + " terms, " +
               std::to_string(types) + " types and contexts round-trip";
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    failures += report("C1", "golden examples", c1_golden());

    Corpus c;
    CorpusOptions opts;
    opts.seed = kSeed;
    opts.max_size = 7;
    opts.width = 2;
    opts.count = kCorpusSize;
    opts.per_term = 4;
    c.s = generate_corpus(opts);
    c.dup = duplication_corpus(kSeed, 9, kDuplicationSize, kMaxChoices);
    Rng rng(kSeed);
    for (const auto* set : {&c.s, &c.dup})
        for (const auto& it : *set) {
            Checked p = check_derivation(it.d);
            c.names.push_back(it.name);
            c.hybrid.push_back(random_hybrid(p, rng));
            c.operable.push_back(c.hybrid.back());
            Checked q = check_derivation(c.hybrid.back().d);
            c.operable.push_back({c.hybrid.back().d, random_interface(q, rng)});
        }

    failures += report("C2", "exact subject reduction in S", c2_subject_reduction(c));
    failures += report("C3", "pseudo subject reduction in Sh", c3_pseudo_sr(c));
    failures += report("C4", "commutation with collapse", c4_commutation(c));
    std::vector<Operable> produced;
    failures += report("C5", "representation lemma", c5_representation(c, produced));
    c.operable.insert(c.operable.end(), produced.begin(), produced.end());
    failures += report("C6", "trivialization", c6_trivialize(c));
    failures += report("C7", "consumption lemmas", c7_lemmas(c));
    failures += report("C8", "collapsing strategy", c8_collapsing());
    failures += report("C9", "round-trips", c9_round_trips(c));
    return failures == 0 ? 0 : 1;
}
