#pragma once

#include "rht/gca.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rht {

class SullivanAlgebra;
using AlgebraPtr = std::shared_ptr<const SullivanAlgebra>;

// provenance of a tensor factor: generators [offset, offset + algebra->size())
struct TensorFactor {
    AlgebraPtr algebra;
    std::size_t offset = 0;
};

class SullivanAlgebra {
public:
    // validates: one image per generator, each homogeneous of degree deg+1
    SullivanAlgebra(std::string name, GeneratorSetPtr gens, std::vector<Element> differential,
                    std::vector<TensorFactor> factors = {});

    const std::string& name() const { return name_; }
    const GeneratorSetPtr& gens() const { return gens_; }
    std::size_t size() const { return gens_->size(); }
    const Element& d(std::size_t g) const { return diff_[g]; }
    const std::vector<Element>& differential() const { return diff_; }
    const std::vector<TensorFactor>& factors() const { return factors_; }

    Element generator(std::size_t i) const { return Element::generator(gens_, i); }
    Element generator(const std::string& name) const { return generator(gens_->index(name)); }
    Element zero() const { return Element(gens_); }
    Element one() const { return Element::one(gens_); }

private:
    std::string name_;
    GeneratorSetPtr gens_;
    std::vector<Element> diff_;
    std::vector<TensorFactor> factors_;
};

AlgebraPtr make_algebra(std::string name, std::vector<Generator> gens,
                        const std::vector<std::pair<std::string, Element>>& diffs);

Element extend_derivation(const SullivanAlgebra& alg, const Element& e);
// derivation on symbolic coefficients (coefficients are scalars, d acts on monomials)
SymElement extend_derivation(const SullivanAlgebra& alg, const SymElement& e);

struct DSquaredReport {
    bool pass = true;
    std::vector<std::pair<std::size_t, Element>> failures;  // generator, d(d(g))
};
DSquaredReport check_d_squared(const SullivanAlgebra& alg);

struct MinimalityReport {
    bool pass = true;
    std::vector<std::pair<std::size_t, Monomial>> offending;  // generator, short monomial
};
MinimalityReport check_minimality(const SullivanAlgebra& alg);

struct NilpotencyWitness {
    std::size_t generator = 0;
    unsigned exponent = 0;
    Element preimage;  // d(preimage) = x^exponent
};

struct EllipticityCertificate {
    std::vector<NilpotencyWitness> witnesses;  // one per even generator
    bool replay(const SullivanAlgebra& alg) const;
};

struct EllipticityResult {
    std::optional<EllipticityCertificate> certificate;
    std::optional<std::size_t> failed_generator;  // exceeded the search bound
    unsigned bound = 0;
};

int formal_dimension_heuristic(const SullivanAlgebra& alg);
unsigned nilpotency_bound(const SullivanAlgebra& alg, std::size_t even_gen);
// search x^N up to N*deg(x) <= max_degree (default: nilpotency_bound)
EllipticityResult ellipticity_certificate(const SullivanAlgebra& alg, std::optional<int> max_degree = std::nullopt);

int formal_dimension(const SullivanAlgebra& alg, const std::optional<EllipticityCertificate>& cert);

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);

AlgebraPtr eliminate_contractible_pair(const SullivanAlgebra& alg, const std::string& w,
                                       const std::string& x);

// embed an element of a tensor factor into the product
Element embed_factor(const SullivanAlgebra& product, std::size_t factor, const Element& e);

}  // namespace rht
