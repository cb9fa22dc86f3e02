#include "rht/sullivan.hpp"

#include <set>

namespace rht {

SullivanAlgebra::SullivanAlgebra(std::string name, GeneratorSetPtr gens,
                                 std::vector<Element> differential,
                                 std::vector<TensorFactor> factors)
    : name_(std::move(name)),
      gens_(std::move(gens)),
      diff_(std::move(differential)),
      factors_(std::move(factors)) {
    if (!gens_) throw StructuralError("algebra without generator set");
    if (diff_.size() != gens_->size())
        throw StructuralError("differential must give one image per generator");
    for (std::size_t i = 0; i < diff_.size(); ++i) {
        auto& e = diff_[i];
        if (!e.gens()) e = Element(gens_);
        if (e.gens() != gens_ && !(*e.gens() == *gens_))
            throw StructuralError("d(" + (*gens_)[i].name + ") uses foreign generators");
        int want = gens_->degree(i) + 1;
        if (!e.is_homogeneous(want))
            throw StructuralError("d(" + (*gens_)[i].name + ") must be homogeneous of degree " +
                                  std::to_string(want));
    }
}

AlgebraPtr make_algebra(std::string name, std::vector<Generator> gens,
                        const std::vector<std::pair<std::string, Element>>& diffs) {
    auto gs = std::make_shared<const GeneratorSet>(std::move(gens));
    std::vector<Element> d(gs->size(), Element(gs));
    for (auto& [g, e] : diffs) d[gs->index(g)] = e;
    return std::make_shared<const SullivanAlgebra>(std::move(name), gs, std::move(d));
}

namespace {

Element d_monomial(const SullivanAlgebra& alg, const Monomial& m) {
    const auto& gs = alg.gens();
    const auto& G = *gs;
    Element out(gs);
    if (m.size() != G.size()) throw StructuralError("monomial over unknown generators");

    Monomial odd_part(G.size()), even_part(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) (G.is_odd(i) ? odd_part : even_part)[i] = m[i];

    // even factors: a * (E/g) * dg * O
    Element odd_el(gs, odd_part);
    for (std::size_t g : G.even_indices()) {
        if (!m[g] || alg.d(g).is_zero()) continue;
        Monomial rest = even_part;
        rest[g] -= 1;
        Element t = Element(gs, rest, Rational(m[g])) * alg.d(g) * odd_el;
        out += t;
    }
    // odd factors, left to right with alternating sign
    std::vector<std::size_t> odds;
    for (std::size_t g : G.odd_indices())
        if (m[g]) odds.push_back(g);
    for (std::size_t j = 0; j < odds.size(); ++j) {
        if (alg.d(odds[j]).is_zero()) continue;
        Monomial left = even_part, right(G.size());
        for (std::size_t k = 0; k < j; ++k) left[odds[k]] = 1;
        for (std::size_t k = j + 1; k < odds.size(); ++k) right[odds[k]] = 1;
        Element t = Element(gs, left) * alg.d(odds[j]) * Element(gs, right);
        if (j % 2) t = -t;
        out += t;
    }
    return out;
}

}  // namespace

Element extend_derivation(const SullivanAlgebra& alg, const Element& e) {
    Element out(alg.gens());
    for (auto& [m, c] : e.terms()) out += d_monomial(alg, m).scaled(c);
    return out;
}

SymElement extend_derivation(const SullivanAlgebra& alg, const SymElement& e) {
    SymElement out(alg.gens());
    for (auto& [m, c] : e.terms()) {
        Element dm = d_monomial(alg, m);
        for (auto& [mm, cc] : dm.terms()) out.add_term(mm, c * Polynomial(cc));
    }
    return out;
}

DSquaredReport check_d_squared(const SullivanAlgebra& alg) {
    DSquaredReport r;
    for (std::size_t g = 0; g < alg.size(); ++g) {
        Element dd = extend_derivation(alg, alg.d(g));
        if (!dd.is_zero()) {
            r.pass = false;
            r.failures.emplace_back(g, std::move(dd));
        }
    }
    return r;
}

MinimalityReport check_minimality(const SullivanAlgebra& alg) {
    MinimalityReport r;
    for (std::size_t g = 0; g < alg.size(); ++g)
        for (auto& [m, c] : alg.d(g).terms())
            if (m.word_length() < 2) {
                r.pass = false;
                r.offending.emplace_back(g, m);
            }
    return r;
}

bool EllipticityCertificate::replay(const SullivanAlgebra& alg) const {
    std::set<std::size_t> covered;
    for (auto& w : witnesses) {
        if (w.generator >= alg.size() || alg.gens()->is_odd(w.generator)) return false;
        Monomial xn(alg.size());
        xn[w.generator] = w.exponent;
        if (!(extend_derivation(alg, w.preimage) == Element(alg.gens(), xn))) return false;
        covered.insert(w.generator);
    }
    return covered.size() == alg.gens()->even_indices().size();
}

int formal_dimension_heuristic(const SullivanAlgebra& alg) {
    int fd = 0;
    for (auto& g : alg.gens()->generators()) fd += g.odd() ? g.degree : -(g.degree - 1);
    return fd;
}

unsigned nilpotency_bound(const SullivanAlgebra& alg, std::size_t x) {
    int maxdeg = 0;
    for (auto& g : alg.gens()->generators()) maxdeg = std::max(maxdeg, g.degree);
    int ceiling = formal_dimension_heuristic(alg) + maxdeg;
    int dx = alg.gens()->degree(x);
    unsigned n = 1;
    while (static_cast<int>(n) * dx <= ceiling) ++n;
    return n;
}

int formal_dimension(const SullivanAlgebra& alg, const std::optional<EllipticityCertificate>& cert) {
    if (!cert) throw PreconditionError("formal dimension needs an ellipticity certificate");
    if (!cert->replay(alg)) throw PreconditionError("ellipticity certificate does not replay");
    return formal_dimension_heuristic(alg);
}

namespace {

std::vector<TensorFactor> flatten(const AlgebraPtr& a, std::size_t offset) {
    std::vector<TensorFactor> out;
    if (a->factors().empty()) {
        if (a->size()) out.push_back({a, offset});
        return out;
    }
    for (auto& f : a->factors()) out.push_back({f.algebra, f.offset + offset});
    return out;
}

}  // namespace

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b) {
    if (b->size() == 0) return a;
    if (a->size() == 0) return b;
    std::vector<Generator> gens;
    std::set<std::string> names;
    bool clash = false;
    for (auto& g : a->gens()->generators()) names.insert(g.name);
    for (auto& g : b->gens()->generators()) clash |= names.count(g.name) > 0;
    for (auto& g : a->gens()->generators())
        gens.push_back({clash ? g.name + "_1" : g.name, g.degree});
    for (auto& g : b->gens()->generators())
        gens.push_back({clash ? g.name + "_2" : g.name, g.degree});
    auto gs = std::make_shared<const GeneratorSet>(std::move(gens));

    std::size_t na = a->size();
    auto images = [&](std::size_t offset, std::size_t n) {
        std::vector<Element> im;
        for (std::size_t i = 0; i < n; ++i) im.push_back(Element::generator(gs, offset + i));
        return im;
    };
    auto ia = images(0, na), ib = images(na, b->size());
    std::vector<Element> d;
    for (std::size_t i = 0; i < na; ++i) d.push_back(apply_map(a->d(i), ia, gs));
    for (std::size_t i = 0; i < b->size(); ++i) d.push_back(apply_map(b->d(i), ib, gs));

    auto factors = flatten(a, 0);
    for (auto& f : flatten(b, na)) factors.push_back(f);
    return std::make_shared<const SullivanAlgebra>("tensor(" + a->name() + "," + b->name() + ")",
                                                   gs, std::move(d), std::move(factors));
}

Element embed_factor(const SullivanAlgebra& product, std::size_t k, const Element& e) {
    const auto& f = product.factors().at(k);
    std::vector<Element> im;
    for (std::size_t i = 0; i < f.algebra->size(); ++i)
        im.push_back(Element::generator(product.gens(), f.offset + i));
    return apply_map(e, im, product.gens());
}

AlgebraPtr eliminate_contractible_pair(const SullivanAlgebra& alg, const std::string& wn,
                                       const std::string& xn) {
    const auto& G = *alg.gens();
    auto wi = G.find(wn), xi = G.find(xn);
    if (!wi || !xi) throw PreconditionError("contractible pair: unknown generator");
    std::size_t w = *wi, x = *xi;
    if (w == x) throw PreconditionError("contractible pair needs two distinct generators");
    if (!alg.d(x).is_zero()) throw PreconditionError(xn + " is not closed");

    Monomial xm = Monomial::generator(G.size(), x);
    Element dw = alg.d(w);
    Rational c = dw.coefficient(xm);
    if (is_zero(c)) throw PreconditionError("d(" + wn + ") has no linear " + xn + " term");
    // d(w) = m + c*x  =>  x ~ -m/c
    Element m = dw - Element(alg.gens(), xm, c);
    for (auto& [mono, q] : m.terms())
        if (mono[x] || mono[w])
            throw PreconditionError("d(" + wn + ") - linear part involves " + xn + " or " + wn);
    for (std::size_t g = 0; g < G.size(); ++g) {
        if (g == w) continue;
        for (auto& [mono, q] : alg.d(g).terms())
            if (mono[w])
                throw PreconditionError("d(" + G[g].name + ") requires " + wn);
    }

    std::vector<Generator> kept;
    std::vector<std::size_t> newpos(G.size(), 0);
    for (std::size_t g = 0; g < G.size(); ++g)
        if (g != w && g != x) {
            newpos[g] = kept.size();
            kept.push_back(G[g]);
        }
    auto gs = std::make_shared<const GeneratorSet>(std::move(kept));
    std::vector<Element> images(G.size(), Element(gs));
    for (std::size_t g = 0; g < G.size(); ++g)
        if (g != w && g != x) images[g] = Element::generator(gs, newpos[g]);
    images[x] = apply_map(m, images, gs).scaled(-1 / c);

    std::vector<Element> d;
    for (std::size_t g = 0; g < G.size(); ++g)
        if (g != w && g != x) d.push_back(apply_map(alg.d(g), images, gs));
    return std::make_shared<const SullivanAlgebra>(alg.name() + "/(" + wn + "," + xn + ")", gs,
                                                   std::move(d));
}

}  // namespace rht
