#include "rht/cohomology.hpp"

#include <numeric>

namespace rht {

DifferentialMatrix d_matrix(const SullivanAlgebra& alg, int n) {
    DifferentialMatrix M;
    M.degree = n;
    M.domain = basis_of_degree(*alg.gens(), n);
    M.codomain = basis_of_degree(*alg.gens(), n + 1);
    std::map<Monomial, std::uint32_t> idx;
    for (std::uint32_t i = 0; i < M.codomain.size(); ++i) idx.emplace(M.codomain[i], i);
    for (auto& b : M.domain) {
        Element db = extend_derivation(alg, Element(alg.gens(), b));
        SparseColumn col;
        for (auto& [m, c] : db.terms()) col.emplace_back(idx.at(m), c);
        std::sort(col.begin(), col.end(), [](auto& a, auto& b) { return a.first < b.first; });
        M.columns.push_back(std::move(col));
    }
    return M;
}

namespace {

// a*x + b*y
IntVec axpby(const Integer& a, const IntVec& x, const Integer& b, const IntVec& y) {
    IntVec r;
    r.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            r.emplace_back(x[i].first, a * x[i].second);
            ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
            r.emplace_back(y[j].first, b * y[j].second);
            ++j;
        } else {
            Integer v = a * x[i].second + b * y[j].second;
            if (v != 0) r.emplace_back(x[i].first, std::move(v));
            ++i, ++j;
        }
    }
    return r;
}

void gcd_into(Integer& g, const IntVec& v) {
    for (auto& [i, c] : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) return;
    }
}

void divide(IntVec& v, const Integer& g) {
    for (auto& [i, c] : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

CochainComplex::CochainComplex(AlgebraPtr alg) : alg_(std::move(alg)) {}

CochainComplex::Graded& CochainComplex::graded(int n) {
    auto it = graded_.find(n);
    if (it != graded_.end()) return it->second;
    Graded g;
    g.basis = basis_of_degree(*alg_->gens(), n);
    for (std::uint32_t i = 0; i < g.basis.size(); ++i) g.index.emplace(g.basis[i], i);
    return graded_.emplace(n, std::move(g)).first->second;
}

const std::vector<Monomial>& CochainComplex::basis(int n) {
    std::lock_guard lk(mu_);
    return graded(n).basis;
}

std::optional<std::uint32_t> CochainComplex::index(int n, const Monomial& m) {
    std::lock_guard lk(mu_);
    auto& g = graded(n);
    auto it = g.index.find(m);
    if (it == g.index.end()) return std::nullopt;
    return it->second;
}

IntVec CochainComplex::to_intvec(const Element& e, int n, Integer& scale) {
    auto& g = graded(n);
    scale = 1;
    for (auto& [m, c] : e.terms()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
    IntVec v;
    v.reserve(e.size());
    for (auto& [m, c] : e.terms()) {
        auto it = g.index.find(m);
        if (it == g.index.end())
            throw PreconditionError("element is not homogeneous of degree " + std::to_string(n));
        Integer x = scale / c.get_den();
        x *= c.get_num();
        v.emplace_back(it->second, std::move(x));
    }
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return v;
}

Element CochainComplex::from_intvec(const IntVec& v, int n, const Integer& denom) {
    auto& g = graded(n);
    Element e(alg_->gens());
    for (auto& [i, c] : v) {
        Rational q(c, denom);
        q.canonicalize();
        e.add_term(g.basis[i], q);
    }
    return e;
}

CochainComplex::Echelon& CochainComplex::echelon(int n) {
    auto it = echelon_.find(n);
    if (it != echelon_.end()) return it->second;
    Echelon E;
    const auto src = graded(n - 1).basis;  // copy: graded() may rehash the map
    graded(n);
    for (std::uint32_t j = 0; j < src.size(); ++j) {
        Element dj = extend_derivation(*alg_, Element(alg_->gens(), src[j]));
        Integer L;
        IntVec v = to_intvec(dj, n, L);
        IntVec c{{j, L}};
        while (!v.empty()) {
            auto p = E.pivot.find(v.front().first);
            if (p == E.pivot.end()) break;
            const Row& r = E.rows[p->second];
            Integer g = gcd(r.img.front().second, v.front().second);
            Integer a = r.img.front().second / g, b = v.front().second / g;
            v = axpby(a, v, -b, r.img);
            c = axpby(a, c, -b, r.comb);
            Integer h = 0;
            gcd_into(h, v);
            gcd_into(h, c);
            if (h > 1) divide(v, h), divide(c, h);
        }
        if (v.empty()) {
            E.kernel.push_back(std::move(c));
        } else {
            E.pivot.emplace(v.front().first, E.rows.size());
            E.rows.push_back({std::move(v), std::move(c)});
        }
    }
    return echelon_.emplace(n, std::move(E)).first->second;
}

CochainComplex::Reduced CochainComplex::reduce(const Element& e, int n, bool full) {
    auto& E = echelon(n);
    Reduced R;
    R.v = to_intvec(e, n, R.alpha);
    std::size_t k = 0;
    while (k < R.v.size()) {
        auto p = E.pivot.find(R.v[k].first);
        if (p == E.pivot.end()) {
            if (!full) break;
            ++k;
            continue;
        }
        const Row& r = E.rows[p->second];
        Integer g = gcd(r.img.front().second, R.v[k].second);
        Integer a = r.img.front().second / g, b = R.v[k].second / g;
        R.v = axpby(a, R.v, -b, r.img);
        R.c = axpby(a, R.c, b, r.comb);
        R.alpha *= a;
        Integer h = R.alpha;
        gcd_into(h, R.v);
        gcd_into(h, R.c);
        if (h < 0) h = -h;
        if (h > 1) {
            divide(R.v, h), divide(R.c, h);
            mpz_divexact(R.alpha.get_mpz_t(), R.alpha.get_mpz_t(), h.get_mpz_t());
        }
    }
    return R;
}

std::size_t CochainComplex::rank(int n) {
    std::lock_guard lk(mu_);
    if (n < 0) return 0;
    return echelon(n + 1).rows.size();
}

int CochainComplex::betti(int n) {
    std::lock_guard lk(mu_);
    if (n < 0) return 0;
    return static_cast<int>(graded(n).basis.size() - rank(n) - rank(n - 1));
}

std::vector<Element> CochainComplex::kernel_basis(int n) {
    std::lock_guard lk(mu_);
    std::vector<Element> out;
    if (n < 0) return out;
    for (auto& k : echelon(n + 1).kernel) out.push_back(from_intvec(k, n, Integer(1)));
    return out;
}

std::optional<Element> CochainComplex::preimage(const Element& target, int n) {
    std::lock_guard lk(mu_);
    if (target.is_zero()) return Element(alg_->gens());
    Reduced R = reduce(target, n, false);
    if (!R.v.empty()) return std::nullopt;
    return from_intvec(R.c, n - 1, R.alpha);
}

Element CochainComplex::normal_form(const Element& e, int n) {
    std::lock_guard lk(mu_);
    if (e.is_zero()) return e;
    Reduced R = reduce(e, n, true);
    return from_intvec(R.v, n, R.alpha);
}

std::vector<Element> CochainComplex::cohomology_basis(int n) {
    std::lock_guard lk(mu_);
    std::vector<Element> out;
    if (n < 0) return out;
    // independent normal forms of cycles span H^n
    std::vector<IntVec> rows;
    std::unordered_map<std::uint32_t, std::size_t> piv;
    for (auto& z : kernel_basis(n)) {
        Element nf = normal_form(z, n);
        if (nf.is_zero()) continue;
        Integer s;
        IntVec v = to_intvec(nf, n, s);
        while (!v.empty()) {
            auto p = piv.find(v.front().first);
            if (p == piv.end()) break;
            const IntVec& r = rows[p->second];
            Integer g = gcd(r.front().second, v.front().second);
            v = axpby(r.front().second / g, v, -(v.front().second / g), r);
        }
        if (v.empty()) continue;
        piv.emplace(v.front().first, rows.size());
        rows.push_back(std::move(v));
        out.push_back(nf);
    }
    return out;
}

bool is_closed(const SullivanAlgebra& alg, const Element& e) {
    if (!e.is_zero() && !e.degree()) throw PreconditionError("element is not homogeneous");
    return extend_derivation(alg, e).is_zero();
}

bool ExactnessWitness::replay(const SullivanAlgebra& alg) const {
    return extend_derivation(alg, preimage) == target;
}

std::optional<ExactnessWitness> is_exact(CochainComplex& cx, const Element& e) {
    if (!is_closed(cx.algebra(), e)) throw PreconditionError("exactness test needs a closed element");
    if (e.is_zero()) return ExactnessWitness{e, cx.algebra().zero()};
    auto w = cx.preimage(e, *e.degree());
    if (!w) return std::nullopt;
    return ExactnessWitness{e, *w};
}

std::optional<ExactnessWitness> is_exact(const AlgebraPtr& alg, const Element& e) {
    CochainComplex cx(alg);
    return is_exact(cx, e);
}

int betti(const AlgebraPtr& alg, int n) {
    CochainComplex cx(alg);
    return cx.betti(n);
}

std::vector<int> betti_table(const AlgebraPtr& alg, int up_to) {
    CochainComplex cx(alg);
    std::vector<int> t;
    for (int n = 0; n <= up_to; ++n) t.push_back(cx.betti(n));
    return t;
}

Rational TopFunctional::raw(const Monomial& m) const {
    if (parts_.empty()) {
        const auto& B = cx_->basis(degree_);
        Element nf = cx_->normal_form(Element(cx_->algebra().gens(), m), degree_);
        return nf.coefficient(B[probe_]);
    }
    // canonical product monomial = m_1 * m_2 * ... with sign +1, since factor
    // generators come in blocks
    Rational v = 1;
    for (auto& p : parts_) {
        Monomial sub(std::vector<std::uint32_t>(m.exponents().begin() + p.offset,
                                                m.exponents().begin() + p.offset + p.size));
        const auto& fg = *p.f->cx_->algebra().gens();
        if (fg.degree(sub) != p.f->degree()) return 0;
        v *= (*p.f)(sub);
        if (is_zero(v)) return 0;
    }
    return v;
}

Rational TopFunctional::operator()(const Monomial& m) const {
    {
        std::lock_guard lk(*mu_);
        auto it = memo_->find(m);
        if (it != memo_->end()) return it->second;
    }
    Rational v = 0;
    if (!parts_.empty() || cx_->algebra().gens()->degree(m) == degree_) v = raw(m) * scale_;
    std::lock_guard lk(*mu_);
    memo_->emplace(m, v);
    return v;
}

std::vector<std::pair<Monomial, Rational>> TopFunctional::table() const {
    std::vector<std::pair<Monomial, Rational>> out;
    if (!parts_.empty()) return out;
    for (auto& m : cx_->basis(degree_)) {
        Rational v = (*this)(m);
        if (!is_zero(v)) out.emplace_back(m, v);
    }
    return out;
}

std::optional<Element> find_volume_form(CochainComplex& cx, int top) {
    for (auto& z : cx.kernel_basis(top))
        if (!cx.normal_form(z, top).is_zero()) return z;
    return std::nullopt;
}

TopFunctional make_top_functional(std::shared_ptr<CochainComplex> cx, const Element& vol) {
    auto deg = vol.degree();
    if (!deg) throw PreconditionError("volume form must be nonzero and homogeneous");
    if (!is_closed(cx->algebra(), vol)) throw PreconditionError("volume form is not closed");
    int b = cx->betti(*deg);
    if (b != 1)
        throw PreconditionError("top cohomology has dimension " + std::to_string(b) + ", not 1");
    Element nf = cx->normal_form(vol, *deg);
    if (nf.is_zero()) throw PreconditionError("volume form is exact");
    TopFunctional f;
    f.degree_ = *deg;
    f.cx_ = cx;
    const Monomial& lead = nf.terms().begin()->first;
    f.probe_ = *cx->index(*deg, lead);
    f.scale_ = 1 / nf.terms().begin()->second;
    return f;
}

namespace {

struct FactorData {
    std::shared_ptr<TopFunctional> f;
    int top = 0;
};
using FactorMemo = std::map<const SullivanAlgebra*, FactorData>;

FactorData factor_functional(const AlgebraPtr& a, FactorMemo& memo) {
    auto it = memo.find(a.get());
    if (it != memo.end()) return it->second;
    auto er = ellipticity_certificate(*a);
    if (!er.certificate) throw PreconditionError("tensor factor " + a->name() + " not certified elliptic");
    int top = formal_dimension(*a, er.certificate);
    auto cx = std::make_shared<CochainComplex>(a);
    auto v = find_volume_form(*cx, top);
    if (!v) throw PreconditionError("tensor factor " + a->name() + " has no top class");
    FactorData fd{std::make_shared<TopFunctional>(make_top_functional(cx, *v)), top};
    memo.emplace(a.get(), fd);
    return fd;
}

}  // namespace

std::optional<TopFunctional> TopFunctional::product_of(const SullivanAlgebra& alg, int deg) {
    if (alg.factors().size() < 2) return std::nullopt;
    FactorMemo memo;
    TopFunctional f;
    f.degree_ = deg;
    int total = 0;
    for (auto& fac : alg.factors()) {
        auto fd = factor_functional(fac.algebra, memo);
        total += fd.top;
        f.parts_.push_back({fd.f, fac.offset, fac.algebra->size()});
    }
    if (total != deg) return std::nullopt;
    return f;
}

Rational TopFunctional::unnormalized(const Element& e) const {
    Rational r = 0;
    for (auto& [m, c] : e.terms()) r += c * raw(m);
    return r;
}

TopFunctional make_top_functional(const AlgebraPtr& alg, const Element& vol) {
    auto deg = vol.degree();
    if (!deg) throw PreconditionError("volume form must be nonzero and homogeneous");
    auto f = TopFunctional::product_of(*alg, *deg);
    if (!f) return make_top_functional(std::make_shared<CochainComplex>(alg), vol);
    if (!is_closed(*alg, vol)) throw PreconditionError("volume form is not closed");
    // Kunneth: top cohomology of the product is the tensor of the factor tops
    Rational r = f->unnormalized(vol);
    if (is_zero(r)) throw PreconditionError("volume form is exact");
    f->scale_ = 1 / r;
    return *f;
}

VolumeCheck verify_volume_form(const AlgebraPtr& alg, const Element& e,
                               const std::optional<EllipticityCertificate>& cert) {
    VolumeCheck out;
    int fd = formal_dimension(*alg, cert);
    auto deg = e.degree();
    if (e.is_zero()) {
        out.failure = "zero element";
        return out;
    }
    if (!deg) {
        out.failure = "not homogeneous";
        return out;
    }
    if (*deg != fd) {
        out.failure = "degree " + std::to_string(*deg) + " != formal dimension " + std::to_string(fd);
        return out;
    }
    if (!is_closed(*alg, e)) {
        out.failure = "not closed";
        return out;
    }
    bool exact;
    if (auto pf = TopFunctional::product_of(*alg, fd))
        exact = is_zero(pf->unnormalized(e));
    else
        exact = is_exact(alg, e).has_value();
    if (exact) {
        out.failure = "exact";
        return out;
    }
    out.volume = VolumeForm{e, fd};
    return out;
}

Rational top_class_coefficient(const AlgebraPtr& alg, const Element& e, const VolumeForm& vol) {
    TopFunctional f = make_top_functional(alg, vol.representative);
    if (!e.is_zero()) {
        if (!e.is_homogeneous(vol.dimension)) throw PreconditionError("element is not of top degree");
        if (!is_closed(*alg, e)) throw PreconditionError("element is not closed");
    }
    return f.apply(e);
}

}  // namespace rht
