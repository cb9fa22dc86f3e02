#pragma once

#include "rht/sullivan.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rht {

using SparseColumn = std::vector<std::pair<std::uint32_t, Rational>>;

struct DifferentialMatrix {
    int degree = 0;
    std::vector<Monomial> domain;    // degree n
    std::vector<Monomial> codomain;  // degree n+1
    std::vector<SparseColumn> columns;
};

DifferentialMatrix d_matrix(const SullivanAlgebra& alg, int n);

// sparse integer vector, strictly increasing indices, no zero entries
using IntVec = std::vector<std::pair<std::uint32_t, Integer>>;

// Caches graded bases and an incremental echelon form of each d-image.
// Thread-safe; all answers are exact and independent of call order.
class CochainComplex {
public:
    explicit CochainComplex(AlgebraPtr alg);

    const SullivanAlgebra& algebra() const { return *alg_; }
    const AlgebraPtr& algebra_ptr() const { return alg_; }

    const std::vector<Monomial>& basis(int n);
    std::optional<std::uint32_t> index(int n, const Monomial& m);
    std::size_t rank(int n);  // rank of d : A^n -> A^{n+1}
    int betti(int n);
    std::vector<Element> kernel_basis(int n);  // basis of closed elements of degree n

    // w with d(w) = target (target homogeneous of degree n), or nothing
    std::optional<Element> preimage(const Element& target, int n);
    // reduced representative modulo exact forms of degree n
    Element normal_form(const Element& e, int n);
    // representatives of a basis of H^n, deterministic
    std::vector<Element> cohomology_basis(int n);

private:
    struct Row {
        IntVec img;   // in A^n coordinates
        IntVec comb;  // in A^{n-1} coordinates, d(comb) = img
    };
    struct Echelon {
        std::vector<Row> rows;
        std::unordered_map<std::uint32_t, std::size_t> pivot;  // lead index -> row
        std::vector<IntVec> kernel;                             // of d_{n-1}
    };
    struct Reduced {
        IntVec v;
        IntVec c;
        Integer alpha;  // alpha * target = v + d(c)
    };

    struct Graded {
        std::vector<Monomial> basis;
        std::unordered_map<Monomial, std::uint32_t, MonomialHash> index;
    };
    Graded& graded(int n);
    Echelon& echelon(int n);  // image of d into degree n
    IntVec to_intvec(const Element& e, int n, Integer& scale);
    Element from_intvec(const IntVec& v, int n, const Integer& denom);
    Reduced reduce(const Element& e, int n, bool full);

    AlgebraPtr alg_;
    std::recursive_mutex mu_;
    std::map<int, Graded> graded_;
    std::map<int, Echelon> echelon_;
};

bool is_closed(const SullivanAlgebra& alg, const Element& e);

struct ExactnessWitness {
    Element target;
    Element preimage;
    bool replay(const SullivanAlgebra& alg) const;
};

std::optional<ExactnessWitness> is_exact(CochainComplex& cx, const Element& e);
std::optional<ExactnessWitness> is_exact(const AlgebraPtr& alg, const Element& e);

int betti(const AlgebraPtr& alg, int n);
std::vector<int> betti_table(const AlgebraPtr& alg, int up_to);

struct VolumeForm {
    Element representative;
    int dimension = 0;
};

// Linear functional on A^N vanishing on exact forms, normalized to 1 on the
// volume form.  For tensor products it is the product of factor functionals.
class TopFunctional {
public:
    int degree() const { return degree_; }
    Rational operator()(const Monomial& m) const;
    template <class C>
    C apply(const BasicElement<C>& e) const {
        C total(0);
        for (auto& [m, c] : e.terms()) {
            Rational v = (*this)(m);
            if (!is_zero(v)) total += c * C(v);
        }
        return total;
    }
    bool is_product() const { return !parts_.empty(); }
    // dense values over basis(N), direct functionals only
    std::vector<std::pair<Monomial, Rational>> table() const;

    // unnormalized tensor functional when alg is a product and deg its top degree
    static std::optional<TopFunctional> product_of(const SullivanAlgebra& alg, int deg);
    Rational unnormalized(const Element& e) const;

private:
    friend TopFunctional make_top_functional(const AlgebraPtr&, const Element&);
    friend TopFunctional make_top_functional(std::shared_ptr<CochainComplex>, const Element&);
    Rational raw(const Monomial& m) const;

    int degree_ = 0;
    Rational scale_ = 1;
    // direct form
    std::shared_ptr<CochainComplex> cx_;
    std::uint32_t probe_ = 0;
    // product form
    struct Part {
        std::shared_ptr<TopFunctional> f;
        std::size_t offset = 0, size = 0;
    };
    std::vector<Part> parts_;
    mutable std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    mutable std::shared_ptr<std::map<Monomial, Rational>> memo_ =
        std::make_shared<std::map<Monomial, Rational>>();
};

// throws PreconditionError unless vol is a closed, non-exact top class and
// top cohomology is one-dimensional
TopFunctional make_top_functional(const AlgebraPtr& alg, const Element& vol);
TopFunctional make_top_functional(std::shared_ptr<CochainComplex> cx, const Element& vol);

// closed non-exact element of top degree, found by elimination (direct algebras)
std::optional<Element> find_volume_form(CochainComplex& cx, int top);

struct VolumeCheck {
    std::optional<VolumeForm> volume;
    std::string failure;  // empty on acceptance
};
VolumeCheck verify_volume_form(const AlgebraPtr& alg, const Element& e,
                               const std::optional<EllipticityCertificate>& cert);

Rational top_class_coefficient(const AlgebraPtr& alg, const Element& e, const VolumeForm& vol);

}  // namespace rht
