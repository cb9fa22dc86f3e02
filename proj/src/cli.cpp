#include "rht/cli.hpp"

#include "rht/catalog.hpp"
#include "rht/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace rht {

namespace {

struct Options {
    bool json = false;
    std::optional<int> max_degree;
    unsigned case_depth = 12;
    std::uint64_t seed = 1;
    std::vector<std::string> params;
    std::string algebra, expr, file;
    int betti_max = -1;
};

struct Outcome {
    std::vector<Check> checks;
    json certs = json::object();
    std::vector<std::string> text;
};

ParamOverrides overrides(const Options& o) {
    ParamOverrides ov;
    for (auto& p : o.params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected NAME=VALUE, got " + p);
        try {
            ov[p.substr(0, eq)] = std::stol(p.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--param", "value of " + p + " is not an integer");
        }
    }
    return ov;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// shared prelude for commands needing a certified volume form
struct Volume {
    EllipticityResult ell;
    std::optional<VolumeForm> vol;
    std::string failure;
};

Volume certified_volume(const LoadedAlgebra& la, const Options& o, Outcome& out) {
    const auto& alg = la.file.algebra;
    Volume v;
    v.ell = ellipticity_certificate(*alg, o.max_degree);
    out.certs["ellipticity"] = ellipticity_json(*alg, v.ell);
    if (!v.ell.certificate) {
        v.failure = "no nilpotency certificate within the search bound";
        out.checks.push_back({"elliptic", "inconclusive", v.failure});
        return v;
    }
    std::optional<Element> e = la.file.volume;
    if (!e) {
        int fd = formal_dimension(*alg, v.ell.certificate);
        CochainComplex cx(alg);
        e = find_volume_form(cx, fd);
        if (!e) {
            v.failure = "no volume form declared and none found";
            out.checks.push_back({"volume form", "fail", v.failure});
            return v;
        }
    }
    auto vc = verify_volume_form(alg, *e, v.ell.certificate);
    if (!vc.volume) {
        v.failure = vc.failure;
        out.checks.push_back({"volume form", "fail", vc.failure});
        return v;
    }
    v.vol = vc.volume;
    out.certs["volume"] = element_str(vc.volume->representative);
    out.certs["dimension"] = vc.volume->dimension;
    return v;
}

Outcome cmd_check(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = *la.file.algebra;
    const auto& G = *alg.gens();
    auto d2 = check_d_squared(alg);
    out.certs["d_squared"] = d2.pass;
    out.checks.push_back({"d^2 = 0", d2.pass ? "pass" : "fail",
                          d2.pass ? "" : "d(d(" + G[d2.failures.front().first].name + ")) = " +
                                              element_str(d2.failures.front().second)});
    auto mn = check_minimality(alg);
    out.certs["minimal"] = mn.pass;
    out.checks.push_back({"minimal", mn.pass ? "pass" : "fail",
                          mn.pass ? "" : "d(" + G[mn.offending.front().first].name + ") contains " +
                                              monomial_str(G, mn.offending.front().second)});
    auto ell = ellipticity_certificate(alg, o.max_degree);
    out.certs["ellipticity"] = ellipticity_json(alg, ell);
    if (ell.certificate) {
        std::string w;
        for (auto& x : ell.certificate->witnesses)
            w += (w.empty() ? "" : ", ") + G[x.generator].name + "^" + std::to_string(x.exponent) + " exact";
        out.checks.push_back({"elliptic", "pass", w});
    } else {
        out.checks.push_back({"elliptic", "inconclusive",
                              G[*ell.failed_generator].name + "^" + std::to_string(ell.bound) +
                                  " is not exact; not a proof of non-ellipticity"});
    }
    return out;
}

Outcome cmd_dim(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = *la.file.algebra;
    auto ell = ellipticity_certificate(alg, o.max_degree);
    out.certs["ellipticity"] = ellipticity_json(alg, ell);
    if (!ell.certificate) {
        out.checks.push_back({"formal dimension", "inconclusive", "ellipticity not certified"});
        return out;
    }
    int d = formal_dimension(alg, ell.certificate);
    out.certs["dimension"] = d;
    out.checks.push_back({"formal dimension", "pass", std::to_string(d)});
    out.text.push_back("dim = " + std::to_string(d));
    return out;
}

Outcome cmd_betti(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = la.file.algebra;
    int top = o.betti_max;
    if (top < 0) top = std::max(0, formal_dimension_heuristic(*alg));
    auto table = betti_table(alg, top);
    json b = json::array();
    std::string line;
    int total = 0, euler = 0;
    for (int n = 0; n <= top; ++n) {
        b.push_back({{"degree", n}, {"value", table[n]}});
        total += table[n];
        euler += (n % 2 ? -1 : 1) * table[n];
        if (table[n]) line += (line.empty() ? "" : " ") + std::string("b") + std::to_string(n) + "=" +
                              std::to_string(table[n]);
    }
    out.certs["betti"] = b;
    out.checks.push_back({"betti numbers", "pass", "degrees 0.." + std::to_string(top)});
    out.text.push_back(line);
    out.text.push_back("total " + std::to_string(total) + ", euler characteristic " + std::to_string(euler));
    return out;
}

Outcome cmd_exact(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = la.file.algebra;
    Element e = parse_element(*alg, o.expr);
    out.certs["element"] = element_str(e);
    bool closed = false;
    try {
        closed = is_closed(*alg, e);
    } catch (const PreconditionError& ex) {
        out.checks.push_back({"closed", "fail", ex.what()});
        out.certs["closed"] = false;
        out.certs["exact"] = false;
        out.certs["preimage"] = nullptr;
        return out;
    }
    out.certs["closed"] = closed;
    out.checks.push_back({"closed", closed ? "pass" : "fail", closed ? "" : "d = " + element_str(extend_derivation(*alg, e))});
    auto w = closed ? is_exact(alg, e) : std::nullopt;
    out.certs["exact"] = w.has_value();
    out.certs["preimage"] = w ? json(element_str(w->preimage)) : json(nullptr);
    if (closed)
        out.checks.push_back({"exact", w ? "pass" : "fail", w ? "d(" + element_str(w->preimage) + ")" : "closed, not exact"});
    return out;
}

Outcome cmd_volume(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = la.file.algebra;
    if (!la.file.volume) {
        out.checks.push_back({"volume form", "fail", "no volume declared"});
        return out;
    }
    auto ell = ellipticity_certificate(*alg, o.max_degree);
    out.certs["ellipticity"] = ellipticity_json(*alg, ell);
    out.certs["volume"] = element_str(*la.file.volume);
    auto vc = verify_volume_form(alg, *la.file.volume, ell.certificate);
    out.certs["accepted"] = vc.volume.has_value();
    out.certs["failure"] = vc.failure;
    if (vc.volume) out.certs["dimension"] = vc.volume->dimension;
    if (!ell.certificate && !vc.volume)
        out.checks.push_back({"volume form", "inconclusive", vc.failure});
    else
        out.checks.push_back({"volume form", vc.volume ? "pass" : "fail",
                              vc.volume ? "closed, not exact, degree " + std::to_string(vc.volume->dimension)
                                        : vc.failure});
    return out;
}

bool in_spectrum(const DegreeSpectrumVerdict& v, const Rational& d) {
    if (v.values.count(d)) return true;
    if (v.kind == Verdict::NoOrientationReversal) return sgn(d) >= 0;
    return !v.families.empty();
}

Outcome cmd_spectrum(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = la.file.algebra;
    auto V = certified_volume(la, o, out);
    out.certs["options"] = {{"case_depth", o.case_depth}, {"seed", o.seed}};
    if (!V.vol) return out;
    SpectrumOptions opts;
    opts.case_depth = o.case_depth;
    auto v = degree_spectrum(alg, *V.vol, opts);
    out.certs["spectrum"] = spectrum_json(*alg, v);
    std::string vals;
    for (auto& x : v.values) vals += (vals.empty() ? "" : ", ") + to_string(x);
    std::string fams;
    for (auto& d : v.families) fams += (fams.empty() ? "" : ", ") + d.text;
    std::string summary = verdict_name(v.kind) + " {" + vals + "}" + (fams.empty() ? "" : " families: " + fams);
    out.checks.push_back({"degree spectrum", v.kind == Verdict::Inconclusive ? "inconclusive" : "pass",
                          v.kind == Verdict::Inconclusive ? summary + "; " + v.reason : summary});
    out.text.push_back("verdict: " + verdict_name(v.kind));
    out.text.push_back("values: {" + vals + "}");
    if (!fams.empty()) out.text.push_back("degree families: " + fams);
    if (v.family) {
        std::string inst;
        for (auto& [t, d] : v.family->instances) inst += " t=" + t.get_str() + ": " + to_string(d);
        out.text.push_back("verified family: " + v.family->expression + " (" + inst.substr(1) + ")");
    }
    for (std::size_t i = 0; i < v.residual.size() && i < 10; ++i) out.text.push_back("residual: " + v.residual[i]);

    // random morphisms from the solved cases must land in the spectrum
    std::mt19937_64 rng(o.seed);
    auto samples = sample_morphisms(alg, v, rng, 8);
    json sj = json::array();
    bool ok = true;
    for (auto& s : samples) {
        auto chk = verify_morphism(alg, s.f, *V.vol);
        ok &= chk.valid && chk.degree == s.predicted && in_spectrum(v, chk.degree);
        sj.push_back({{"morphism", morphism_json(*alg, s.f)}, {"predicted", to_pq(s.predicted)}});
    }
    out.certs["samples"] = sj;
    if (!samples.empty())
        out.checks.push_back({"sampled morphisms", ok ? "pass" : "fail",
                              std::to_string(samples.size()) + " random morphisms verified"});
    return out;
}

Outcome cmd_flex(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = la.file.algebra;
    const auto& G = *alg->gens();
    auto mono = monomial_differential_check(*alg);
    out.certs["monomial_differential"] = {
        {"pass", mono.pass}, {"offending", mono.offending ? json(G[*mono.offending].name) : json(nullptr)}};
    auto ts = two_stage_decomposition(*alg);
    if (ts) {
        json q = json::array(), p = json::array();
        for (auto i : ts->closed) q.push_back(G[i].name);
        for (auto i : ts->rest) p.push_back(G[i].name);
        out.certs["two_stage"] = {{"closed", q}, {"rest", p}};
    } else {
        out.certs["two_stage"] = nullptr;
    }
    out.text.push_back(std::string("monomial differentials: ") + (mono.pass ? "yes" : "no"));
    out.text.push_back(std::string("two-stage: ") + (ts ? "yes" : "no"));
    out.certs["scaling"] = nullptr;
    out.certs["multiples"] = json::array();
    auto gr = construct_lower_grading(*alg);
    if (!gr.grading) {
        out.certs["grading"] = nullptr;
        out.checks.push_back({"lower grading", "fail", "some generators cannot be graded"});
        return out;
    }
    json gj = json::array();
    std::string gtext;
    for (std::size_t i = 0; i < G.size(); ++i) {
        gj.push_back({{"generator", G[i].name}, {"lower", gr.grading->lower[i]}});
        gtext += (gtext.empty() ? "" : ", ") + G[i].name + ":" + std::to_string(gr.grading->lower[i]);
    }
    out.certs["grading"] = gj;
    out.text.push_back("lower grading: " + gtext);
    auto cond = check_grading_condition(*alg, *gr.grading);
    out.checks.push_back({"grading condition", cond.pass ? "pass" : "fail", cond.detail});
    if (!cond.pass) return out;
    auto V = certified_volume(la, o, out);
    if (!V.vol) return out;
    auto sc = scaling_certificate(alg, *gr.grading, *V.vol);
    out.certs["scaling"] = {{"base", sc.base.get_str()},
                            {"degree", to_pq(sc.degree)},
                            {"exponent", sc.exponent},
                            {"morphism", morphism_json(*alg, sc.morphism)},
                            {"family", sc.family}};
    out.checks.push_back({"scaling map", "pass", "degree 2^" + std::to_string(sc.exponent) + " = " + to_string(sc.degree)});
    auto mr = multiple_family_verify(alg, *gr.grading, *V.vol, {1, 2, 3});
    for (auto& m : mr.checks)
        out.certs["multiples"].push_back({{"k", m.k.get_str()},
                                          {"valid", m.valid},
                                          {"degree", to_pq(m.degree)},
                                          {"expected", to_pq(m.expected)},
                                          {"classes", m.classes},
                                          {"failure", m.failure}});
    out.checks.push_back({"k-th multiples (k = 1, 2, 3)", mr.pass ? "pass" : "fail", sc.family});
    return out;
}

Outcome cmd_verify(const LoadedAlgebra& la, const Options& o) {
    Outcome out;
    const auto& alg = la.file.algebra;
    auto f = parse_morphism(*alg, read_file(o.file));
    out.certs["morphism"] = morphism_json(*alg, f);
    auto V = certified_volume(la, o, out);
    if (!V.vol) return out;
    auto chk = verify_morphism(alg, f, *V.vol);
    out.certs["valid"] = chk.valid;
    out.certs["degree"] = chk.valid ? json(to_pq(chk.degree)) : json(nullptr);
    out.certs["failing_generator"] =
        chk.failing_generator ? json((*alg->gens())[*chk.failing_generator].name) : json(nullptr);
    out.checks.push_back({"morphism", chk.valid ? "pass" : "fail",
                          chk.valid ? "degree " + to_string(chk.degree) : chk.detail});
    return out;
}

void print_text(std::ostream& os, const std::string& title, const Outcome& o) {
    os << title << "\n";
    for (auto& c : o.checks) {
        std::string tag = c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "INCONCLUSIVE";
        os << "  [" << tag << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    }
    for (auto& t : o.text) os << "  " << t << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sullivan algebra toolkit: ellipticity, cohomology, self-map degrees, flexibility"};
    app.name("rht");
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "machine-readable report");
    app.add_option("--max-degree", o.max_degree, "highest degree searched for nilpotency witnesses");
    app.add_option("--case-depth", o.case_depth, "maximal number of case splits");
    app.add_option("--seed", o.seed, "seed for sampled morphisms");
    app.add_option("--param", o.params, "NAME=VALUE for parameterized algebras");
    app.fallthrough();

    auto with_alg = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("algebra", o.algebra, "algebra file or catalog name")->required();
        return s;
    };
    auto* check = with_alg("check", "d^2 = 0, minimality and ellipticity");
    auto* dim = with_alg("dim", "formal dimension");
    auto* bet = with_alg("betti", "Betti numbers");
    bet->add_option("--max", o.betti_max, "highest degree");
    auto* exact = with_alg("exact", "closed / exact test with witness");
    exact->add_option("expr", o.expr, "element")->required();
    auto* volume = with_alg("volume", "verify the declared volume form");
    auto* spectrum = with_alg("spectrum", "set of self-map degrees");
    auto* flex = with_alg("flex", "lower grading and scaling certificate");
    auto* verify = with_alg("verify", "check a morphism file and compute its degree");
    verify->add_option("morphism", o.file, "morphism file")->required();
    auto* replay = app.add_subcommand("replay", "re-verify the certificates of a JSON report");
    replay->add_option("report", o.file, "report file")->required();
    auto* cat = app.add_subcommand("catalog", "list built-in algebras or print one");
    cat->add_option("name", o.algebra, "entry, e.g. A(0)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 3;
    }

    std::vector<std::string> echo(args.begin(), args.end());
    try {
        if (cat->parsed()) {
            if (o.algebra.empty()) {
                for (auto& e : catalog_entries()) out << e.signature << "\t" << e.summary << "\n";
            } else {
                out << print_algebra(load_algebra(o.algebra, overrides(o)).file);
            }
            return 0;
        }
        if (replay->parsed()) {
            json rep = json::parse(read_file(o.file));
            auto r = replay_report(rep);
            Outcome oc;
            oc.checks = r.checks;
            if (o.json) {
                json j = {{"schema", kReportSchema},
                          {"command", {{"name", "replay"}, {"argv", echo}}},
                          {"algebra", rep.at("algebra")},
                          {"status", r.exit_code == 0 ? "pass" : "fail"},
                          {"exit_code", r.exit_code},
                          {"checks", checks_json(r.checks)},
                          {"certificates", {{"replayed", rep.at("command").at("name")}}}};
                out << j.dump(2) << "\n";
            } else {
                print_text(out, "replay of " + rep.at("command").at("name").get<std::string>() + " on " +
                                    rep.at("algebra").at("name").get<std::string>(), oc);
            }
            return r.exit_code;
        }

        LoadedAlgebra la = load_algebra(o.algebra, overrides(o));
        std::string name;
        Outcome oc;
        if (check->parsed()) name = "check", oc = cmd_check(la, o);
        else if (dim->parsed()) name = "dim", oc = cmd_dim(la, o);
        else if (bet->parsed()) name = "betti", oc = cmd_betti(la, o);
        else if (exact->parsed()) name = "exact", oc = cmd_exact(la, o);
        else if (volume->parsed()) name = "volume", oc = cmd_volume(la, o);
        else if (spectrum->parsed()) name = "spectrum", oc = cmd_spectrum(la, o);
        else if (flex->parsed()) name = "flex", oc = cmd_flex(la, o);
        else if (verify->parsed()) name = "verify", oc = cmd_verify(la, o);
        int code = exit_code_for(oc.checks);
        if (o.json) {
            json j = {{"schema", kReportSchema},
                      {"command", {{"name", name}, {"argv", echo}}},
                      {"algebra", algebra_json(la)},
                      {"status", code == 0 ? "pass" : code == 1 ? "fail" : "inconclusive"},
                      {"exit_code", code},
                      {"checks", checks_json(oc.checks)},
                      {"certificates", oc.certs}};
            out << j.dump(2) << "\n";
        } else {
            print_text(out, name + " " + la.file.algebra->name(), oc);
        }
        return code;
    } catch (const ParseError& e) {
        err << "parse error at line " << e.line << ", column " << e.col << ": " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        err << "error: malformed report: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace rht
