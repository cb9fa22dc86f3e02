#include "rht/flexcert.hpp"

#include <stdexcept>

namespace rht {

MonomialDifferentialCheck monomial_differential_check(const SullivanAlgebra& alg) {
    MonomialDifferentialCheck r;
    for (std::size_t g = 0; g < alg.size(); ++g)
        if (alg.d(g).size() > 1) {
            r.pass = false;
            r.offending = g;
            break;
        }
    return r;
}

unsigned LowerGrading::of(const Monomial& m) const {
    unsigned s = 0;
    for (std::size_t g = 0; g < lower.size(); ++g) s += m[g] * lower[g];
    return s;
}

GradingResult construct_lower_grading(const SullivanAlgebra& alg) {
    const std::size_t n = alg.size();
    std::vector<std::optional<unsigned>> lv(n);
    for (std::size_t g = 0; g < n; ++g)
        if (alg.d(g).is_zero()) lv[g] = 0;
    for (unsigned i = 0;; ++i) {
        // assignments of this round only see earlier rounds
        auto before = lv;
        bool progress = false;
        for (std::size_t g = 0; g < n; ++g) {
            if (lv[g]) continue;
            bool ok = true;
            for (auto& [m, c] : alg.d(g).terms())
                for (std::size_t h = 0; h < n && ok; ++h)
                    if (m[h] && (!before[h] || *before[h] > i)) ok = false;
            if (ok) {
                lv[g] = i + 1;
                progress = true;
            }
        }
        bool done = true;
        for (auto& x : lv) done &= x.has_value();
        if (done) break;
        // a round without progress cannot unlock later rounds
        if (!progress) {
            GradingResult r;
            for (std::size_t g = 0; g < n; ++g)
                if (!lv[g]) r.unassigned.push_back(g);
            return r;
        }
    }
    LowerGrading gr;
    for (auto& x : lv) gr.lower.push_back(*x);
    return {gr, {}};
}

GradingCondition check_grading_condition(const SullivanAlgebra& alg, const LowerGrading& g) {
    GradingCondition r;
    const auto& G = *alg.gens();
    for (std::size_t v = 0; v < alg.size(); ++v)
        for (auto& [m, c] : alg.d(v).terms())
            if (g.lower[v] == 0 || g.of(m) != g.lower[v] - 1) {
                r.pass = false;
                r.offending = v;
                r.detail = "d(" + G[v].name + ") contains " + monomial_str(G, m) + " of lower degree " +
                           std::to_string(g.of(m)) + ", expected " + std::to_string(int(g.lower[v]) - 1);
                return r;
            }
    return r;
}

std::optional<TwoStage> two_stage_decomposition(const SullivanAlgebra& alg) {
    TwoStage ts;
    std::vector<bool> closed(alg.size());
    for (std::size_t g = 0; g < alg.size(); ++g) {
        closed[g] = alg.d(g).is_zero();
        (closed[g] ? ts.closed : ts.rest).push_back(g);
    }
    for (auto p : ts.rest)
        for (auto& [m, c] : alg.d(p).terms())
            for (std::size_t h = 0; h < alg.size(); ++h)
                if (m[h] && !closed[h]) return std::nullopt;
    return ts;
}

LowerGrading two_stage_grading(const SullivanAlgebra& alg, const TwoStage& ts) {
    LowerGrading g;
    g.lower.assign(alg.size(), 0);
    for (auto p : ts.rest) g.lower[p] = 1;
    return g;
}

namespace {

Integer ipow(const Integer& b, unsigned e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

}  // namespace

ConcreteMorphism scaling_morphism(const SullivanAlgebra& alg, const LowerGrading& g, const Integer& base) {
    ConcreteMorphism f;
    for (std::size_t v = 0; v < alg.size(); ++v)
        f.images.push_back(alg.generator(v).scaled(Rational(ipow(base, g.lower[v] + alg.gens()->degree(v)))));
    return f;
}

ScalingCertificate scaling_certificate(const AlgebraPtr& alg, const LowerGrading& g, const VolumeForm& vol,
                                       const Integer& base) {
    ScalingCertificate c;
    c.base = base;
    c.grading = g;
    c.morphism = scaling_morphism(*alg, g, base);
    auto chk = verify_morphism(alg, c.morphism, vol);
    if (!chk.valid) throw std::logic_error("scaling map is not a morphism: " + chk.detail);
    c.degree = chk.degree;
    if (sgn(c.degree) == 0) throw std::logic_error("scaling map has degree 0");
    // degree should be a pure power of the base
    Rational x = c.degree;
    unsigned e = 0;
    while (x != 1 && x.get_den() == 1 && x.get_num() % base == 0) {
        x /= Rational(base);
        ++e;
    }
    if (x != 1) throw std::logic_error("scaling degree " + to_string(c.degree) + " is not a power of the base");
    c.exponent = e;
    c.family = "k-th multiple: v -> (" + base.get_str() + "k)^(lower+deg) v, degree (" + base.get_str() + "k)^" +
               std::to_string(e);
    return c;
}

MultipleReport multiple_family_verify(const AlgebraPtr& alg, const LowerGrading& g, const VolumeForm& vol,
                                      const std::vector<Integer>& ks) {
    MultipleReport rep;
    ScalingCertificate base = scaling_certificate(alg, g, vol);
    auto cx = std::make_shared<CochainComplex>(alg);
    // bihomogeneous classes: lower-degree components of a cohomology basis
    std::vector<std::pair<Element, unsigned>> classes;  // element, lower + deg
    for (int n = 0; n <= vol.dimension; ++n)
        for (auto& rep_n : cx->cohomology_basis(n)) {
            std::map<unsigned, Element> parts;
            for (auto& [m, c] : rep_n.terms()) {
                auto [it, fresh] = parts.try_emplace(g.of(m), alg->gens());
                it->second.add_term(m, c);
            }
            for (auto& [l, e] : parts)
                if (!is_exact(*cx, e)) classes.emplace_back(e, l + n);
        }
    for (auto& k : ks) {
        MultipleCheck mc;
        mc.k = k;
        Integer b = 2 * k;
        auto f = scaling_morphism(*alg, g, b);
        auto chk = verify_morphism(alg, f, vol);
        mc.valid = chk.valid;
        mc.degree = chk.degree;
        mc.expected = Rational(ipow(b, base.exponent));
        if (!chk.valid) {
            mc.failure = chk.detail;
        } else if (mc.degree != mc.expected) {
            mc.failure = "degree " + to_string(mc.degree) + " differs from " + to_string(mc.expected);
        } else {
            for (auto& [e, w] : classes) {
                Element diff = apply(f, e) - e.scaled(Rational(ipow(b, w)));
                ++mc.classes;
                if (!diff.is_zero() && !is_exact(*cx, diff)) {
                    mc.failure = "class of " + element_str(e) + " is not scaled by " + b.get_str() + "^" +
                                 std::to_string(w);
                    break;
                }
            }
        }
        if (!mc.failure.empty()) {
            mc.valid = false;
            rep.pass = false;
        }
        rep.checks.push_back(std::move(mc));
    }
    return rep;
}

}  // namespace rht
