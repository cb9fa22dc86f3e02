#include "rht/endo.hpp"

#include <algorithm>
#include <set>

namespace rht {

ConcreteMorphism identity_morphism(const SullivanAlgebra& alg) {
    ConcreteMorphism f;
    for (std::size_t i = 0; i < alg.size(); ++i) f.images.push_back(alg.generator(i));
    return f;
}

Element apply(const ConcreteMorphism& f, const Element& e) {
    if (e.is_zero()) return e;
    return apply_map(e, f.images, e.gens());
}

namespace {

MorphismCheck check_commutes(const AlgebraPtr& alg, const ConcreteMorphism& f) {
    MorphismCheck r;
    const auto& G = *alg->gens();
    if (f.images.size() != G.size()) {
        r.detail = "morphism must give one image per generator";
        return r;
    }
    for (std::size_t g = 0; g < G.size(); ++g)
        if (!f.images[g].is_homogeneous(G.degree(g))) {
            r.failing_generator = g;
            r.detail = "image of " + G[g].name + " has the wrong degree";
            return r;
        }
    for (std::size_t g = 0; g < G.size(); ++g) {
        Element lhs = extend_derivation(*alg, f.images[g]);
        Element rhs = apply_map(alg->d(g), f.images, alg->gens());
        if (!(lhs == rhs)) {
            r.failing_generator = g;
            r.detail = "d(f(" + G[g].name + ")) = " + element_str(lhs) + " but f(d(" + G[g].name +
                       ")) = " + element_str(rhs);
            return r;
        }
    }
    r.valid = true;
    return r;
}

}  // namespace

MorphismCheck verify_morphism(const AlgebraPtr& alg, const ConcreteMorphism& f, const TopFunctional& phi,
                              const Element& vol) {
    MorphismCheck r = check_commutes(alg, f);
    if (r.valid) r.degree = phi.apply(apply_map(vol, f.images, alg->gens()));
    return r;
}

MorphismCheck verify_morphism(const AlgebraPtr& alg, const ConcreteMorphism& f, const VolumeForm& vol) {
    MorphismCheck r = check_commutes(alg, f);
    if (!r.valid) return r;
    TopFunctional phi = make_top_functional(alg, vol.representative);
    r.degree = phi.apply(apply_map(vol.representative, f.images, alg->gens()));
    return r;
}

std::optional<SymbolId> EndoAnsatz::symbol(std::size_t gen, const Monomial& m) const {
    for (auto& e : entries.at(gen))
        if (e.mono == m) return e.symbol;
    return std::nullopt;
}

SymElement EndoAnsatz::image(const SullivanAlgebra& alg, std::size_t gen) const {
    SymElement e(alg.gens());
    for (auto& en : entries.at(gen)) e.add_term(en.mono, Polynomial::variable(en.symbol));
    return e;
}

EndoAnsatz generic_ansatz(const SullivanAlgebra& alg) {
    EndoAnsatz a;
    const auto& G = *alg.gens();
    std::map<int, std::vector<Monomial>> bases;
    for (std::size_t g = 0; g < G.size(); ++g) {
        int d = G.degree(g);
        if (!bases.count(d)) bases[d] = basis_of_degree(G, d);
        std::vector<AnsatzEntry> row;
        for (auto& m : bases[d]) {
            SymbolId s = a.symbols.add("k" + std::to_string(a.symbols.size() + 1));
            a.owner.push_back(g);
            a.diagonal.push_back(m == Monomial::generator(G.size(), g));
            row.push_back({s, m});
        }
        a.entries.push_back(std::move(row));
    }
    return a;
}

std::vector<PolynomialConstraint> extract_constraints(const SullivanAlgebra& alg, const EndoAnsatz& ansatz) {
    std::vector<SymElement> images;
    for (std::size_t g = 0; g < alg.size(); ++g) images.push_back(ansatz.image(alg, g));
    std::vector<PolynomialConstraint> out;
    for (std::size_t g = 0; g < alg.size(); ++g) {
        SymElement diff = extend_derivation(alg, images[g]) - apply_map(alg.d(g), images, alg.gens());
        for (auto& [m, p] : diff.terms()) out.push_back({p, g, m});
    }
    return out;
}

Polynomial CaseContext::apply(const Polynomial& p) const { return p.substitute(subs); }

void CaseContext::eliminate(SymbolId u, const Polynomial& p) {
    std::map<SymbolId, Polynomial> one{{u, p}};
    for (auto& [v, q] : subs)
        if (q.contains(u)) q = q.substitute(one);
    subs[u] = p;
}

void CaseContext::set_zero(SymbolId u) {
    eliminate(u, Polynomial());
    nonzero[u] = false;
}

namespace {

// u occurs exactly once, as a bare linear term a*u
std::optional<Rational> linear_coefficient(const Polynomial& c, SymbolId u) {
    std::optional<Rational> a;
    for (auto& [m, q] : c.terms()) {
        auto e = m.degree_in(u);
        if (!e) continue;
        if (a || e != 1 || m.factors.size() != 1) return std::nullopt;
        a = q;
    }
    return a;
}

}  // namespace

SimplifyResult simplify(std::vector<Polynomial> constraints, CaseContext ctx, const std::vector<bool>* diagonal) {
    SimplifyResult out;
    bool changed = true;
    std::optional<SymbolId> split;
    while (changed) {
        changed = false;
        split.reset();
        std::vector<Polynomial> next;
        for (auto& c0 : constraints) {
            Polynomial c = ctx.apply(c0);
            if (c.is_zero()) continue;
            if (c.is_constant()) {
                out.contradiction = true;
                out.why = "nonzero constant " + to_string(c.constant_value()) + " = 0";
                out.ctx = std::move(ctx);
                return out;
            }
            // monomial content: nonzero factors divide out, others are product = 0
            PolyMonomial content = c.content();
            PolyMonomial nz;
            std::vector<SymbolId> undecided;
            for (auto& [v, e] : content.factors) {
                if (ctx.is_nonzero(v))
                    nz.factors.emplace_back(v, e);
                else
                    undecided.push_back(v);
            }
            if (!nz.is_one()) c = c.divide_monomial(nz);
            if (c.is_constant()) {
                out.contradiction = true;
                out.why = "monomial in nonzero unknowns vanishes";
                out.ctx = std::move(ctx);
                return out;
            }
            if (c.is_monomial() && undecided.size() == 1) {
                ctx.set_zero(undecided.front());
                changed = true;
                break;
            }
            if (!undecided.empty() && !split) split = undecided.front();
            next.push_back(std::move(c));
        }
        if (changed) continue;
        constraints = std::move(next);

        // linear elimination u := P, latest unknown first, unassumed preferred
        for (auto& c : constraints) {
            if (!c.content().is_one()) continue;
            std::optional<SymbolId> pick;
            bool pick_assumed = true;
            auto vars = c.variables();
            for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
                auto a = linear_coefficient(c, *it);
                if (!a) continue;
                bool assumed = ctx.is_nonzero(*it);
                if (assumed) {
                    Polynomial rest = c - Polynomial::term(*a, PolyMonomial{{{*it, 1}}});
                    if (!rest.is_monomial()) continue;
                }
                if (!pick || (pick_assumed && !assumed)) {
                    pick = *it;
                    pick_assumed = assumed;
                    if (!assumed) break;
                }
            }
            if (!pick) continue;
            Rational a = *linear_coefficient(c, *pick);
            Polynomial p = -(c - Polynomial::term(a, PolyMonomial{{{*pick, 1}}}));
            p = p * Polynomial(1 / a);
            if (pick_assumed)
                for (auto v : p.variables()) ctx.nonzero[v] = true;
            ctx.eliminate(*pick, p);
            changed = true;
            break;
        }
    }

    // monic, without repeats
    std::set<Polynomial::Terms> seen;
    for (auto& c : constraints) {
        Polynomial m = c * Polynomial(1 / c.leading_term().second);
        if (seen.insert(m.terms()).second) out.constraints.push_back(std::move(m));
    }
    out.ctx = std::move(ctx);
    if (split) {
        out.split = split;
        return out;
    }
    if (diagonal) {
        // remaining binomials etc.: branch on an undecided diagonal unknown
        for (auto& c : out.constraints)
            for (auto v : c.variables())
                if (v < diagonal->size() && (*diagonal)[v] && !out.ctx.is_decided(v)) {
                    out.split = v;
                    return out;
                }
    }
    return out;
}

Polynomial volume_degree_polynomial(const SullivanAlgebra& alg, const std::vector<SymElement>& images,
                                    const Element& vol, const TopFunctional& phi) {
    return phi.apply(apply_map(vol, images, alg.gens()));
}

}  // namespace rht
