// Acceptance run: one PASS/FAIL line per criterion, sub-checks indented.
// Exit status is nonzero when any criterion fails.

#include "rht/flexcert.hpp"
#include "support.hpp"

#include <array>
#include <chrono>
#include <iostream>
#include <map>
#include <sstream>

using namespace rht;
using rht::testing::load;
using rht::testing::random_element;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::pair<bool, std::string>> items;
    double seconds = 0;

    void check(bool ok, const std::string& what) { items.emplace_back(ok, what); }
    bool pass() const {
        for (auto& [ok, w] : items)
            if (!ok) return false;
        return !items.empty();
    }
};

std::vector<Criterion> results;

template <class F>
void run(int id, const std::string& title, double budget, F&& body) {
    Criterion c{id, title, {}};
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.check(false, std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << c.seconds << " s (budget " << budget << " s)";
    c.check(c.seconds <= budget, "runtime " + t.str());
    std::cout << (c.pass() ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "\n";
    for (auto& [ok, w] : c.items) std::cout << "      [" << (ok ? "ok" : "FAILED") << "] " << w << "\n";
    std::cout.flush();
    results.push_back(std::move(c));
}

std::optional<VolumeForm> volume(const AlgebraPtr& alg, const Element& e) {
    return verify_volume_form(alg, e, ellipticity_certificate(*alg).certificate).volume;
}

std::string values_str(const std::set<Rational>& s) {
    std::string out;
    for (auto& v : s) out += (out.empty() ? "" : ",") + to_string(v);
    return "{" + out + "}";
}

std::string families_str(const DegreeSpectrumVerdict& v) {
    std::string out;
    for (auto& d : v.families) out += (out.empty() ? "" : ", ") + d.text;
    return out;
}

std::set<Rational> ints(std::initializer_list<long> xs) {
    std::set<Rational> s;
    for (long x : xs) s.insert(Rational(x));
    return s;
}

const CaseNode* find_solved(const CaseNode& n) {
    if (n.outcome == CaseNode::Outcome::Solved && !n.substitutions.empty()) return &n;
    for (auto& c : n.children)
        if (auto* p = find_solved(c)) return p;
    return nullptr;
}

bool any_unresolved(const CaseNode& n) {
    if (n.outcome == CaseNode::Outcome::Unresolved) return true;
    for (auto& c : n.children)
        if (any_unresolved(c)) return true;
    return false;
}

// "k1^8 - k2^5 = 0" -> exponent vector lhs - rhs
std::optional<std::map<std::string, long>> binomial_exponents(const std::string& text) {
    auto eq = text.find(" = 0");
    auto mid = text.find(" - ");
    if (eq == std::string::npos || mid == std::string::npos) return std::nullopt;
    std::map<std::string, long> v;
    auto add = [&](const std::string& mono, long sign) {
        std::stringstream ss(mono);
        std::string f;
        while (std::getline(ss, f, '*')) {
            auto c = f.find('^');
            v[f.substr(0, c)] += sign * (c == std::string::npos ? 1 : std::stol(f.substr(c + 1)));
        }
    };
    add(text.substr(0, mid), 1);
    add(text.substr(mid + 3, eq - mid - 3), -1);
    return v;
}

// the rows of U and V (2 x 2, integer) span the same lattice
bool same_lattice(const std::array<std::array<long, 2>, 2>& U, const std::array<std::array<long, 2>, 2>& V) {
    auto inside = [](const std::array<std::array<long, 2>, 2>& B, const std::array<long, 2>& w) {
        long det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
        if (det == 0) return false;
        long a = w[0] * B[1][1] - w[1] * B[1][0], b = B[0][0] * w[1] - B[0][1] * w[0];
        return a % det == 0 && b % det == 0;
    };
    return inside(U, V[0]) && inside(U, V[1]) && inside(V, U[0]) && inside(V, U[1]);
}

void criterion1() {
    run(1, "A(i), i = 0,1,2: check, dim = 231+4i, volume form", 180, [](Criterion& c) {
        for (int i = 0; i <= 2; ++i) {
            auto f = catalog("A(" + std::to_string(i) + ")");
            const auto& alg = f.algebra;
            std::string tag = "A(" + std::to_string(i) + ")";
            c.check(check_d_squared(*alg).pass, tag + " d^2 = 0");
            c.check(check_minimality(*alg).pass, tag + " minimal");
            auto ell = ellipticity_certificate(*alg);
            c.check(ell.certificate && ell.certificate->replay(*alg), tag + " elliptic, witnesses replay");
            std::map<std::string, unsigned> ex;
            if (ell.certificate)
                for (auto& w : ell.certificate->witnesses) ex[(*alg->gens())[w.generator].name] = w.exponent;
            c.check(ex["x1"] == 19u + i, tag + " certificate x1-exponent " + std::to_string(ex["x1"]) +
                                              " (expected " + std::to_string(19 + i) + ")");
            c.check(ex["x2"] == 26u, tag + " certificate x2-exponent " + std::to_string(ex["x2"]) + " (expected 26)");
            std::string e1 = "x1^" + std::to_string(19 + i);
            auto w1 = is_exact(alg, parse_element(*alg, e1));
            auto w2 = is_exact(alg, parse_element(*alg, "x2^26"));
            c.check(w1 && w1->replay(*alg) && !is_exact(alg, parse_element(*alg, "x1^" + std::to_string(18 + i))),
                    tag + " " + e1 + " exact, x1^" + std::to_string(18 + i) + " not");
            c.check(w2 && w2->replay(*alg), tag + " x2^26 exact");
            int dim = formal_dimension(*alg, ell.certificate);
            c.check(dim == 231 + 4 * i, tag + " dim = " + std::to_string(dim));
            Element vol = parse_element(*alg, "x2^26*z' - x1^" + std::to_string(15 + i) + "*x2^24*y1");
            auto vc = verify_volume_form(alg, vol, ell.certificate);
            c.check(vc.volume && is_closed(*alg, vol) && !is_exact(alg, vol), tag + " volume x2^26 z' - x1^(15+i) x2^24 y1 accepted");
        }
    });
}

void criterion2() {
    run(2, "A(0), A(1): inflexible, degrees (+-1)^(i+1), commutation constraints", 600, [](Criterion& c) {
        for (int i = 0; i <= 1; ++i) {
            std::string tag = "A(" + std::to_string(i) + ")";
            auto f = catalog(tag);
            const auto& alg = f.algebra;
            auto vol = volume(alg, *f.volume);
            if (!vol) {
                c.check(false, tag + " volume");
                continue;
            }
            auto v = degree_spectrum(alg, *vol);
            c.check(v.kind == Verdict::Inflexible, tag + " verdict " + verdict_name(v.kind));
            auto want = i == 0 ? ints({-1, 0, 1}) : ints({0, 1});
            c.check(v.values == want, tag + " degrees " + values_str(v.values));

            // k1..k6 in the customary numbering, located by position in the ansatz
            const auto& A = *v.ansatz;
            const auto& G = *alg->gens();
            auto sym = [&](const std::string& g, const std::string& mono) {
                auto m = parse_element(*alg, mono).terms().begin()->first;
                return A.symbols.name(*A.symbol(G.index(g), m));
            };
            std::string k1 = sym("x1", "x1"), k2 = sym("x2", "x2"), k3 = sym("y1", "y1"), k4 = sym("y2", "y2"),
                        k5 = sym("y3", "y3"), k6 = sym("y3", "x1*y1");
            const CaseNode* leaf = find_solved(v.tree);
            if (!leaf) {
                c.check(false, tag + " no solved case with k1, k2 != 0");
                continue;
            }
            auto has = [&](const std::string& s) {
                return std::find(leaf->substitutions.begin(), leaf->substitutions.end(), s) != leaf->substitutions.end();
            };
            c.check(has(k3 + " := " + k1 + "^4*" + k2 + "^2"), tag + " k3 = k1^4 k2^2");
            c.check(has(k4 + " := " + k1 + "^3*" + k2 + "^3"), tag + " k4 = k1^3 k2^3");
            c.check(has(k5 + " := " + k1 + "^2*" + k2 + "^4"), tag + " k5 = k1^2 k2^4");
            // k6 = 0 is a constraint on its own
            bool k6_zero = false;
            auto sid = *A.symbols.find(k6);
            for (auto& pc : extract_constraints(*alg, A))
                if (pc.poly == Polynomial::variable(sid) || pc.poly == -Polynomial::variable(sid)) k6_zero = true;
            c.check(k6_zero, tag + " k6 = 0");
            // k1^8 k2^8 = k1^18 k2 = k2^13 as a lattice of exponent relations
            std::vector<std::array<long, 2>> rows;
            bool parsed = true;
            for (auto& r : leaf->residual) {
                auto e = binomial_exponents(r);
                if (!e) {
                    parsed = false;
                    continue;
                }
                rows.push_back({(*e)[k1], (*e)[k2]});
            }
            bool triple = parsed && rows.size() == 2 &&
                          same_lattice({rows[0], rows[1]}, {std::array<long, 2>{8, 8 - 13}, {18, 1 - 13}});
            std::string res;
            for (auto& r : leaf->residual) res += (res.empty() ? "" : "; ") + r;
            c.check(triple, tag + " residual equivalent to k1^8k2^8 = k1^18k2 = k2^13 (" + res + ")");
        }
    });
}

void criterion3() {
    run(3, "ex01: contractible pair, dim 66, volume xb2^33, inflexible", 120, [](Criterion& c) {
        auto fib = catalog("CL-fibered");
        c.check(check_d_squared(*fib.algebra).pass && !check_minimality(*fib.algebra).pass,
                "fibered presentation parses (d^2 = 0, not minimal)");
        auto red = eliminate_contractible_pair(*fib.algebra, "x2'", "x2");
        c.check(check_minimality(*red).pass, "reduced algebra is minimal");
        auto ell = ellipticity_certificate(*red);
        int dim = formal_dimension(*red, ell.certificate);
        c.check(dim == 66, "dim = " + std::to_string(dim));
        auto vol = verify_volume_form(red, parse_element(*red, "xb2^33"), ell.certificate).volume;
        c.check(vol.has_value(), "volume xb2^33 accepted");
        if (!vol) return;
        auto v = degree_spectrum(red, *vol);
        c.check(v.kind == Verdict::Inflexible && v.values == ints({-1, 0, 1}),
                "spectrum " + verdict_name(v.kind) + " " + values_str(v.values));
    });
}

void criterion4() {
    run(4, "prop1(4,2), prop2(4), prop3(5): no orientation reversal", 600, [](Criterion& c) {
        struct Case {
            std::string name;
            int dim;
            std::string family;
        };
        for (auto& k : std::vector<Case>{{"prop1(4,2)", 54, "t^28"}, {"prop2(4)", 73, "t^38"}, {"prop3(5)", 47, "t^24"}}) {
            auto f = catalog(k.name);
            const auto& alg = f.algebra;
            auto ell = ellipticity_certificate(*alg);
            int dim = formal_dimension(*alg, ell.certificate);
            c.check(dim == k.dim, k.name + " dim = " + std::to_string(dim));
            auto vol = volume(alg, *f.volume);
            if (!vol) {
                c.check(false, k.name + " volume");
                continue;
            }
            auto v = degree_spectrum(alg, *vol);
            std::string fam = families_str(v);
            c.check(v.kind == Verdict::NoOrientationReversal && fam == k.family,
                    k.name + " " + verdict_name(v.kind) + ", degrees " + values_str(v.values) + " " + fam +
                        " (expected NoOrientationReversal, " + k.family + ")");
            if (k.name == "prop3(5)") c.check(!any_unresolved(v.tree), k.name + " every case discharged");
        }
    });
}

void criterion5() {
    run(5, "ex02 flexibility certificate; CP(4)", 30, [](Criterion& c) {
        auto f = catalog("ex02");
        const auto& alg = f.algebra;
        c.check(monomial_differential_check(*alg).pass, "monomial differentials");
        auto gr = construct_lower_grading(*alg);
        c.check(gr.grading && gr.grading->lower == std::vector<unsigned>{0, 0, 1, 2}, "lower grading (0,0,1,2)");
        if (!gr.grading) return;
        c.check(check_grading_condition(*alg, *gr.grading).pass, "grading condition");
        auto vol = volume(alg, *f.volume);
        if (!vol) {
            c.check(false, "volume");
            return;
        }
        auto sc = scaling_certificate(alg, *gr.grading, *vol);
        c.check(sc.degree == Rational(Integer(1) << 21), "scaling degree " + to_string(sc.degree) + " = 2^21");
        auto mr = multiple_family_verify(alg, *gr.grading, *vol, {1, 2, 3});
        bool ok = mr.pass && mr.checks.size() == 3;
        for (auto& m : mr.checks) {
            Integer e = 1;
            for (int i = 0; i < 21; ++i) e *= 2 * m.k;
            ok &= m.degree == Rational(e);
        }
        c.check(ok, "k-th multiples, k = 1,2,3, degrees (2k)^21");
        Element bn = parse_element(*alg, "b*n");
        c.check(is_closed(*alg, bn) && !is_exact(alg, bn), "bn closed and not exact");
        c.check(!two_stage_decomposition(*alg), "not two-stage");

        auto cp = catalog("CP(4)");
        auto cvol = volume(cp.algebra, *cp.volume);
        if (!cvol) {
            c.check(false, "CP(4) volume");
            return;
        }
        auto v = degree_spectrum(cp.algebra, *cvol);
        c.check(v.kind == Verdict::NoOrientationReversal && families_str(v) == "t^8" && v.family,
                "CP(4): " + verdict_name(v.kind) + " " + families_str(v) + (v.family ? ", family verified" : ""));
    });
}

void criterion6() {
    run(6, "A(0) x A(0): dim 462, product volume, spectrum, swap", 300, [](Criterion& c) {
        auto f = catalog("tensor(A(0),A(0))");
        const auto& alg = f.algebra;
        auto ell = ellipticity_certificate(*alg);
        int dim = formal_dimension(*alg, ell.certificate);
        c.check(dim == 462, "dim = " + std::to_string(dim));
        auto vol = verify_volume_form(alg, *f.volume, ell.certificate).volume;
        c.check(vol.has_value(), "product volume form verifies");
        if (!vol) return;
        auto v = degree_spectrum(alg, *vol);
        c.check(v.kind == Verdict::Inconclusive,
                "spectrum returns " + verdict_name(v.kind) + " " + values_str(v.values) + " (expected Inconclusive)");
        std::size_t h = alg->size() / 2;
        ConcreteMorphism swap;
        for (std::size_t i = 0; i < alg->size(); ++i) swap.images.push_back(alg->generator(i < h ? i + h : i - h));
        auto chk = verify_morphism(alg, swap, *vol);
        c.check(chk.valid, "swap of factors is a morphism");
        c.check(chk.valid && chk.degree == 1, "swap degree " + to_string(chk.degree) + " (expected +1)");
    });
}

void criterion7() {
    run(7, "property suites, seed fixed", 300, [](Criterion& c) {
        std::mt19937_64 rng(7);
        std::vector<AlgebraPtr> algs;
        for (auto& n : rht::testing::catalog_sample()) algs.push_back(load(n));
        auto pick = [&]() -> const AlgebraPtr& {
            return algs[std::uniform_int_distribution<std::size_t>(0, algs.size() - 1)(rng)];
        };
        auto deg = [&](int hi) { return std::uniform_int_distribution<int>(0, hi)(rng); };
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto& alg = pick();
            int p = deg(30), q = deg(30);
            Element a = random_element(*alg, p, rng), b = random_element(*alg, q, rng);
            if (a * b != ((p * q) % 2 ? -(b * a) : b * a)) ++bad;
        }
        c.check(bad == 0, "Koszul sign rule, 1000 cases, " + std::to_string(bad) + " failures");
        bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto& alg = pick();
            int p = deg(25);
            Element a = random_element(*alg, p, rng, 3), b = random_element(*alg, deg(25), rng, 3);
            Element da = extend_derivation(*alg, a), db = extend_derivation(*alg, b);
            if (extend_derivation(*alg, a * b) != da * b + (p % 2 ? -(a * db) : a * db)) ++bad;
            if (!extend_derivation(*alg, da).is_zero()) ++bad;
        }
        c.check(bad == 0, "Leibniz rule and d^2 = 0, 1000 cases, " + std::to_string(bad) + " failures");
        bad = 0;
        std::map<const SullivanAlgebra*, std::shared_ptr<CochainComplex>> cxs;
        auto cx_of = [&](const AlgebraPtr& alg) {
            auto& cx = cxs[alg.get()];
            if (!cx) cx = std::make_shared<CochainComplex>(alg);
            return cx;
        };
        for (int i = 0; i < 1000; ++i) {
            const auto& alg = pick();
            auto cx = cx_of(alg);
            int n = deg(40);
            if (cx->basis(n).size() != cx->rank(n) + cx->kernel_basis(n).size()) ++bad;
        }
        c.check(bad == 0, "rank-nullity, 1000 cases, " + std::to_string(bad) + " failures");
        bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto& alg = pick();
            auto cx = cx_of(alg);
            Element e = extend_derivation(*alg, random_element(*alg, deg(35), rng));
            auto w = is_exact(*cx, e);
            if (!w || !w->replay(*alg)) ++bad;
        }
        c.check(bad == 0, "exactness witnesses replay, 1000 cases, " + std::to_string(bad) + " failures");

        auto ex02 = load("ex02");
        auto b = betti_table(ex02, 18);
        bool pd = b.size() == 19;
        for (int n = 0; pd && n <= 18; ++n) pd = b[n] == b[18 - n];
        c.check(pd, "Poincare duality of ex02 Betti numbers, degrees 0..18");

        bool counts = true;
        for (auto& alg : algs) {
            auto s = rht::testing::series_counts(*alg->gens(), 40);
            for (int n = 0; n <= 40; ++n)
                counts &= static_cast<long>(basis_of_degree(*alg->gens(), n).size()) == s[n];
        }
        c.check(counts, "basis sizes match the Poincare series, degrees <= 40, " + std::to_string(algs.size()) + " algebras");
    });
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    int failed = 0;
    for (auto& c : results) failed += !c.pass();
    std::cout << "\n" << results.size() - failed << "/" << results.size() << " criteria pass\n";
    return failed ? 1 : 0;
}
