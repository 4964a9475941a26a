#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rigid/corpus.hpp"
#include "rigid/error.hpp"
#include "rigid/reduction.hpp"
#include "rigid/threads.hpp"
#include "rigid/trivialize.hpp"

using namespace rigid;
using nlohmann::json;

namespace {

struct Options {
    std::string file, flavor, pos, iface, choice, dot, out, dir;
    std::uint64_t seed = 42;
    std::size_t size = 5, width = 2, count = 100;
    bool as_json = false;
};

Derivation load(const Options& o) {
    if (!std::filesystem::exists(o.file)) throw Error(ErrorKind::Domain, "no such file: " + o.file);
    Derivation d = load_derivation(o.file);
    if (!o.flavor.empty()) d.flavor = parse_flavor(o.flavor);
    return d;
}

// Given interface, else identity for S and lexicographically least for Sh.
Operable operable(const Options& o) {
    Derivation d = load(o);
    Checked p = check_derivation(d);
    Interface i = !o.iface.empty()          ? load_interface(o.iface)
                  : d.flavor == Flavor::S ? identity_interface(p)
                                          : default_interface(p);
    return {std::move(d), std::move(i)};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Domain, "cannot write " + path);
    f << text;
}

std::string iso_str(const TypeIso& phi) {
    std::string s;
    for (const auto& [c, d] : phi) {
        if (!s.empty()) s += ", ";
        s += c.str() + "->" + d.str();
    }
    return s;
}

int cmd_check(const Options& o) {
    Derivation d = load(o);
    Checked p = check_derivation(d);
    if (o.as_json) {
        json j = {{"flavor", flavor_name(d.flavor)},
                  {"term", print_term(d.term)},
                  {"context", print_context(p.conclusion().ctx)},
                  {"type", print_type(p.conclusion().type)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << print_judgment(d.term, p.conclusion()) << "\n";
    }
    return 0;
}

int cmd_collapse(const Options& o) {
    Checked p = check_derivation(load(o));
    RDerivation pi = collapse_derivation(p);
    if (o.as_json)
        std::cout << json{{"term", print_term(pi.term)}, {"type", print_rtype(pi.root.type)},
                          {"context", print_rcontext(pi.root.ctx)}, {"derivation", print_rderivation(pi)}}
                         .dump(2)
                  << "\n";
    else
        std::cout << print_rderivation(pi);
    return 0;
}

int cmd_isos(const Options& o) {
    Checked p = check_derivation(load(o));
    Position a = Position::parse(o.pos);
    auto isos = enumerate_interfaces(p, a);
    if (o.as_json) {
        json arr = json::array();
        for (std::size_t i = 0; i < isos.size(); ++i)
            arr.push_back({{"index", i}, {"phi", interface_to_json({{a, isos[i]}})["interfaces"][0]["phi"]}});
        std::cout << json{{"pos", a.str()}, {"L", print_seq(p.L(a))}, {"R", print_seq(p.R(a))}, {"interfaces", arr}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    std::cout << "L(" << a.str() << ") = " << print_seq(p.L(a)) << "\n"
              << "R(" << a.str() << ") = " << print_seq(p.R(a)) << "\n"
              << isos.size() << " interface(s)\n";
    for (std::size_t i = 0; i < isos.size(); ++i) std::cout << "  [" << i << "] " << iso_str(isos[i]) << "\n";
    return 0;
}

int cmd_reduce(const Options& o) {
    Position b = Position::parse(o.pos);
    Operable result;
    json extra;
    if (!o.iface.empty()) {
        OperableStep s = reduce_operable(operable(o), b);
        result = std::move(s.result);
    } else {
        Derivation d = load(o);
        if (d.flavor == Flavor::S && o.choice.empty()) {
            result.d = reduce_S(d, b);
        } else {
            Checked p = check_derivation(d);
            ReductionChoice rho;
            if (!o.choice.empty()) {
                std::ifstream f(o.choice);
                if (!f) throw Error(ErrorKind::Domain, "no such file: " + o.choice);
                rho = choice_from_json(json::parse(f));
            } else {
                auto cs = enumerate_choices(p, b, 1);
                rho = cs.empty() ? ReductionChoice{b, {}} : cs.front();
            }
            result.d = reduce_Sh(p, rho);
            extra = choice_to_json(rho);
        }
    }
    Checked q = check_derivation(result.d);
    std::string text = write_derivation(result.d);
    if (!o.out.empty()) write_file(o.out, text);
    if (o.as_json) {
        json j = {{"derivation", derivation_to_json(result.d)},
                  {"context", print_context(q.conclusion().ctx)},
                  {"type", print_type(q.conclusion().type)}};
        if (!o.iface.empty()) j["interface"] = interface_to_json(result.iface);
        if (!extra.is_null()) j["choice"] = extra;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << print_judgment(result.d.term, q.conclusion()) << "\n";
        if (o.out.empty()) std::cout << text << "\n";
    }
    return 0;
}

int cmd_threads(const Options& o) {
    Operable op = operable(o);
    Checked p = check_operable(op);
    ThreadAnalysis an = analyze_threads(p, op.iface);
    if (!o.dot.empty()) write_file(o.dot, threads_dot(p, an));
    if (o.as_json)
        std::cout << threads_json(p, an).dump(2) << "\n";
    else
        std::cout << threads_report(p, an);
    return 0;
}

int cmd_trivialize(const Options& o) {
    Trivialization t = trivialize(operable(o));
    std::string text = write_derivation(t.p0);
    if (!o.out.empty()) write_file(o.out, text);
    if (o.as_json) {
        std::cout << trivialization_report(t).dump(2) << "\n";
        return 0;
    }
    Checked p0 = check_derivation(t.p0);
    std::cout << "trivial derivation: " << print_judgment(t.p0.term, p0.conclusion()) << "\n"
              << "classes: " << t.classes.members.size() << "\n";
    for (std::size_t c = 0; c < t.classes.members.size(); ++c) {
        std::cout << "  track " << t.values[c] << ":";
        for (auto id : t.classes.members[c]) std::cout << " t" << id;
        std::cout << "\n";
    }
    if (o.out.empty()) std::cout << text << "\n";
    return 0;
}

int cmd_gen(const Options& o) {
    CorpusOptions c;
    c.seed = o.seed;
    c.max_size = o.size;
    c.width = o.width;
    c.count = o.count;
    auto items = generate_corpus(c);
    if (!o.dir.empty()) std::filesystem::create_directories(o.dir);
    json names = json::array();
    for (const auto& it : items) {
        check_derivation(it.d);
        if (!o.dir.empty()) write_file(o.dir + "/" + it.name + ".deriv", write_derivation(it.d));
        names.push_back(it.name);
    }
    if (o.as_json)
        std::cout << json{{"count", items.size()}, {"files", names}}.dump(2) << "\n";
    else
        std::cout << items.size() << " derivation(s)" << (o.dir.empty() ? "" : " written to " + o.dir) << "\n";
    return 0;
}

int cmd_export_dot(const Options& o) {
    Operable op = operable(o);
    Checked p = check_operable(op);
    std::string text = threads_dot(p, analyze_threads(p, op.iface));
    if (o.dot.empty())
        std::cout << text;
    else
        write_file(o.dot, text);
    return 0;
}

json error_json(const Error& e) {
    json j = {{"error", error_kind_name(e.kind())}, {"message", e.what()}};
    if (!e.where().empty()) {
        j["derivation_position"] = e.where();
        try {
            j["term_position"] = collapse_position(Position::parse(e.where())).str();
        } catch (const Error&) {
        }
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigid intersection type derivations: checking, reduction, threads and trivialization."};
    app.require_subcommand(1);
    Options o;
    auto file = [&](CLI::App* c) { c->add_option("--file", o.file, "derivation file")->required(); };
    auto flavor = [&](CLI::App* c) {
        c->add_option("--flavor", o.flavor, "S or Sh, overriding the file")->check(CLI::IsMember({"S", "Sh"}));
    };
    auto json_flag = [&](CLI::App* c) { c->add_flag("--json", o.as_json, "structured output"); };
    auto iface = [&](CLI::App* c) { c->add_option("--interface", o.iface, "interface file (JSON)"); };

    auto* check = app.add_subcommand("check", "check a derivation and print its concluding judgment");
    file(check), flavor(check), json_flag(check);
    auto* collapse = app.add_subcommand("collapse", "print the collapsed R-derivation");
    file(collapse), flavor(collapse), json_flag(collapse);
    auto* isos = app.add_subcommand("isos", "list the interfaces at an application node");
    file(isos), flavor(isos), json_flag(isos);
    isos->add_option("--pos", o.pos, "application node")->required();
    auto* reduce = app.add_subcommand("reduce", "reduce at a redex position");
    file(reduce), flavor(reduce), json_flag(reduce), iface(reduce);
    reduce->add_option("--pos", o.pos, "redex position")->required();
    reduce->add_option("--choice", o.choice, "reduction choice file (JSON)");
    reduce->add_option("--out", o.out, "write the reduct here");
    auto* threads = app.add_subcommand("threads", "thread analysis: threads, polarities, consumption, brothers");
    file(threads), flavor(threads), json_flag(threads), iface(threads);
    threads->add_option("--dot", o.dot, "also write a DOT graph");
    auto* triv = app.add_subcommand("trivialize", "build an isomorphic trivial derivation");
    file(triv), flavor(triv), json_flag(triv), iface(triv);
    triv->add_option("--out", o.out, "write the trivial derivation here");
    auto* gen = app.add_subcommand("gen", "generate a reproducible corpus of derivations");
    gen->add_option("--seed", o.seed, "random seed");
    gen->add_option("--size", o.size, "term size bound")->check(CLI::Range(1, 9));
    gen->add_option("--width", o.width, "sequence width bound")->check(CLI::Range(0, 4));
    gen->add_option("--count", o.count, "number of derivations");
    gen->add_option("--dir", o.dir, "output directory");
    json_flag(gen);
    auto* dot = app.add_subcommand("export-dot", "DOT graph of the threads");
    file(dot), flavor(dot), iface(dot);
    dot->add_option("--dot", o.dot, "output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check) return cmd_check(o);
        if (*collapse) return cmd_collapse(o);
        if (*isos) return cmd_isos(o);
        if (*reduce) return cmd_reduce(o);
        if (*threads) return cmd_threads(o);
        if (*triv) return cmd_trivialize(o);
        if (*gen) return cmd_gen(o);
        if (*dot) return cmd_export_dot(o);
    } catch (const Error& e) {
        std::cerr << error_json(e).dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Domain"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}
