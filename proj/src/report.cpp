#include "rht/report.hpp"

#include "rht/catalog.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace rht {

LoadedAlgebra load_algebra(const std::string& arg, const ParamOverrides& overrides) {
    LoadedAlgebra out;
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        out.file = parse_algebra(ss.str(), overrides);
        return out;
    }
    if (!overrides.empty() && arg.find('(') == std::string::npos) {
        // catalog template with --param values
        out.file = parse_algebra(catalog_template(arg), overrides);
        out.catalog_name = out.file.algebra->name();
        return out;
    }
    out.file = catalog(arg);
    out.catalog_name = arg;
    return out;
}

json algebra_json(const LoadedAlgebra& a) {
    json g = json::array();
    const auto& G = *a.file.algebra->gens();
    for (std::size_t i = 0; i < G.size(); ++i) g.push_back({{"name", G[i].name}, {"degree", G[i].degree}});
    return {{"name", a.file.algebra->name()},
            {"catalog", a.catalog_name ? json(*a.catalog_name) : json(nullptr)},
            {"source", print_algebra(a.file)},
            {"generators", g}};
}

LoadedAlgebra algebra_from_json(const json& j) {
    LoadedAlgebra a;
    if (!j.at("catalog").is_null()) {
        a.catalog_name = j.at("catalog").get<std::string>();
        a.file = catalog(*a.catalog_name);
        // a template instantiated through --param has no call syntax; fall back to the text
        if (print_algebra(a.file) != j.at("source").get<std::string>()) a.file = parse_algebra(j.at("source"));
        return a;
    }
    a.file = parse_algebra(j.at("source").get<std::string>());
    return a;
}

json morphism_json(const SullivanAlgebra& alg, const ConcreteMorphism& f) {
    json out = json::array();
    const auto& G = *alg.gens();
    for (std::size_t i = 0; i < f.images.size(); ++i)
        out.push_back({{"generator", G[i].name}, {"image", element_str(f.images[i])}});
    return out;
}

ConcreteMorphism morphism_from_json(const SullivanAlgebra& alg, const json& j) {
    ConcreteMorphism f;
    f.images.assign(alg.size(), alg.zero());
    std::vector<bool> seen(alg.size(), false);
    for (auto& e : j) {
        std::size_t g = alg.gens()->index(e.at("generator").get<std::string>());
        f.images[g] = parse_element(alg, e.at("image").get<std::string>());
        seen[g] = true;
    }
    for (std::size_t g = 0; g < alg.size(); ++g)
        if (!seen[g]) throw StructuralError("morphism misses generator " + (*alg.gens())[g].name);
    return f;
}

json ellipticity_json(const SullivanAlgebra& alg, const EllipticityResult& r) {
    const auto& G = *alg.gens();
    json j = {{"certified", r.certificate.has_value()}, {"witnesses", json::array()}};
    if (r.certificate)
        for (auto& w : r.certificate->witnesses)
            j["witnesses"].push_back({{"generator", G[w.generator].name},
                                      {"exponent", w.exponent},
                                      {"preimage", element_str(w.preimage)}});
    j["failed_generator"] = r.failed_generator ? json(G[*r.failed_generator].name) : json(nullptr);
    j["bound"] = r.bound;
    return j;
}

std::optional<EllipticityCertificate> ellipticity_from_json(const SullivanAlgebra& alg, const json& j) {
    if (!j.at("certified").get<bool>()) return std::nullopt;
    EllipticityCertificate c;
    for (auto& w : j.at("witnesses"))
        c.witnesses.push_back({alg.gens()->index(w.at("generator").get<std::string>()),
                               w.at("exponent").get<unsigned>(),
                               parse_element(alg, w.at("preimage").get<std::string>())});
    return c;
}

json case_node_json(const CaseNode& n) {
    json degrees = json::array();
    for (auto& d : n.degrees)
        degrees.push_back({{"text", d.text}, {"params", d.params}, {"nonnegative", d.nonnegative}});
    json children = json::array();
    for (auto& c : n.children) children.push_back(case_node_json(c));
    return {{"decision", n.decision},     {"outcome", outcome_name(n.outcome)},
            {"note", n.note},             {"substitutions", n.substitutions},
            {"degrees", degrees},         {"residual", n.residual},
            {"children", children}};
}

json spectrum_json(const SullivanAlgebra& alg, const DegreeSpectrumVerdict& v) {
    json values = json::array();
    for (auto& x : v.values) values.push_back(to_pq(x));
    json families = json::array();
    for (auto& d : v.families)
        families.push_back({{"text", d.text}, {"params", d.params}, {"nonnegative", d.nonnegative}});
    json family = nullptr;
    if (v.family) {
        family = {{"expression", v.family->expression}, {"instances", json::array()}};
        for (std::size_t i = 0; i < v.family->instances.size(); ++i)
            family["instances"].push_back({{"t", v.family->instances[i].first.get_str()},
                                           {"degree", to_pq(v.family->instances[i].second)},
                                           {"morphism", morphism_json(alg, v.family->morphisms[i])}});
    }
    return {{"verdict", verdict_name(v.kind)},
            {"values", values},
            {"families", families},
            {"family", family},
            {"unknowns", v.ansatz ? v.ansatz->unknown_count() : 0},
            {"reason", v.reason},
            {"residual", v.residual},
            {"tree", case_node_json(v.tree)}};
}

json checks_json(const std::vector<Check>& checks) {
    json a = json::array();
    for (auto& c : checks) a.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    return a;
}

int exit_code_for(const std::vector<Check>& checks) {
    int code = 0;
    for (auto& c : checks) {
        if (c.status == "fail") return 1;
        if (c.status == "inconclusive") code = 2;
    }
    return code;
}

// ---- replay

namespace {

struct Replayer {
    std::vector<Check> checks;

    void add(const std::string& name, bool ok, const std::string& detail = "") {
        checks.push_back({name, ok ? "pass" : "fail", detail});
    }

    std::optional<EllipticityCertificate> ellipticity(const SullivanAlgebra& alg, const json& j) {
        auto cert = ellipticity_from_json(alg, j);
        if (cert) add("ellipticity witnesses replay", cert->replay(alg));
        return cert;
    }

    void morphism(const AlgebraPtr& alg, const json& mj, const VolumeForm& vol, const Rational& degree,
                  const std::string& what) {
        auto f = morphism_from_json(*alg, mj);
        auto chk = verify_morphism(alg, f, vol);
        add(what + " is a morphism", chk.valid, chk.detail);
        if (chk.valid)
            add(what + " degree", chk.degree == degree,
                "recomputed " + to_pq(chk.degree) + ", reported " + to_pq(degree));
    }
};

VolumeForm volume_from(const SullivanAlgebra& alg, const json& certs) {
    return {parse_element(alg, certs.at("volume").get<std::string>()), certs.at("dimension").get<int>()};
}

}  // namespace

ReplayOutcome replay_report(const json& report) {
    Replayer R;
    if (report.value("schema", "") != kReportSchema) {
        R.add("schema", false, "not a " + std::string(kReportSchema) + " report");
        return {R.checks, 1};
    }
    LoadedAlgebra la = algebra_from_json(report.at("algebra"));
    const AlgebraPtr& alg = la.file.algebra;
    R.add("algebra reloads", print_algebra(la.file) == report["algebra"]["source"].get<std::string>());
    std::string cmd = report.at("command").at("name");
    const json& C = report.at("certificates");

    if (cmd == "check") {
        R.add("d squared", check_d_squared(*alg).pass == C.at("d_squared").get<bool>());
        R.add("minimality", check_minimality(*alg).pass == C.at("minimal").get<bool>());
        R.ellipticity(*alg, C.at("ellipticity"));
    } else if (cmd == "dim") {
        auto cert = R.ellipticity(*alg, C.at("ellipticity"));
        if (cert) {
            int d = formal_dimension(*alg, cert);
            R.add("formal dimension", d == C.at("dimension").get<int>(), std::to_string(d));
        }
    } else if (cmd == "volume") {
        auto cert = R.ellipticity(*alg, C.at("ellipticity"));
        Element vol = parse_element(*alg, C.at("volume").get<std::string>());
        R.add("volume closed", is_closed(*alg, vol));
        auto vc = verify_volume_form(alg, vol, cert);
        R.add("volume verdict", vc.volume.has_value() == C.at("accepted").get<bool>(), vc.failure);
    } else if (cmd == "exact") {
        Element e = parse_element(*alg, C.at("element").get<std::string>());
        if (C.at("exact").get<bool>()) {
            Element w = parse_element(*alg, C.at("preimage").get<std::string>());
            R.add("preimage", extend_derivation(*alg, w) == e);
        } else {
            bool closed = is_closed(*alg, e);
            R.add("closedness", closed == C.at("closed").get<bool>());
            if (closed) R.add("not exact", !is_exact(alg, e).has_value());
        }
    } else if (cmd == "betti") {
        for (auto& b : C.at("betti")) {
            int n = b.at("degree"), v = b.at("value");
            R.add("b" + std::to_string(n), betti(alg, n) == v);
        }
    } else if (cmd == "spectrum") {
        auto cert = R.ellipticity(*alg, C.at("ellipticity"));
        VolumeForm vol = volume_from(*alg, C);
        const json& S = C.at("spectrum");
        if (!S.at("family").is_null())
            for (auto& inst : S["family"]["instances"])
                R.morphism(alg, inst.at("morphism"), vol, parse_rational(inst.at("degree")),
                           "family instance t=" + inst.at("t").get<std::string>());
        std::set<Rational> values;
        for (auto& v : S.at("values")) values.insert(parse_rational(v));
        for (auto& s : C.at("samples")) {
            Rational pred = parse_rational(s.at("predicted"));
            R.morphism(alg, s.at("morphism"), vol, pred, "sampled morphism");
        }
        SpectrumOptions opts;
        opts.case_depth = C.at("options").at("case_depth");
        auto again = degree_spectrum(alg, vol, opts);
        R.add("verdict reproduces", spectrum_json(*alg, again) == S, verdict_name(again.kind));
    } else if (cmd == "flex") {
        if (!C.at("scaling").is_null()) {
            auto cert = R.ellipticity(*alg, C.at("ellipticity"));
            VolumeForm vol = volume_from(*alg, C);
            LowerGrading g;
            for (auto& e : C.at("grading")) g.lower.push_back(e.at("lower").get<unsigned>());
            R.add("grading condition", check_grading_condition(*alg, g).pass);
            R.morphism(alg, C["scaling"].at("morphism"), vol, parse_rational(C["scaling"].at("degree")),
                       "scaling map");
            for (auto& m : C.at("multiples")) {
                Integer k(m.at("k").get<std::string>());
                auto f = scaling_morphism(*alg, g, 2 * k);
                auto chk = verify_morphism(alg, f, vol);
                R.add("multiple k=" + k.get_str(), chk.valid && chk.degree == parse_rational(m.at("degree")));
            }
        } else if (C.at("grading").is_null()) {
            R.add("no lower grading", !construct_lower_grading(*alg).grading.has_value());
        } else {
            LowerGrading g;
            for (auto& e : C.at("grading")) g.lower.push_back(e.at("lower").get<unsigned>());
            R.add("grading condition fails", !check_grading_condition(*alg, g).pass);
        }
    } else if (cmd == "verify") {
        auto cert = R.ellipticity(*alg, C.at("ellipticity"));
        VolumeForm vol = volume_from(*alg, C);
        auto f = morphism_from_json(*alg, C.at("morphism"));
        auto chk = verify_morphism(alg, f, vol);
        R.add("validity", chk.valid == C.at("valid").get<bool>(), chk.detail);
        if (chk.valid) R.add("degree", to_pq(chk.degree) == C.at("degree").get<std::string>());
    } else {
        R.add("command", false, "nothing to replay for '" + cmd + "'");
    }
    int code = 0;
    for (auto& c : R.checks)
        if (c.status != "pass") code = 1;
    return {R.checks, code};
}

}  // namespace rht
