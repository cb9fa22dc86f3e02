#include "rht/cohomology.hpp"
#include "rht/sullivan.hpp"

#include <algorithm>

namespace rht {

namespace {

// witness for x^N in a single complex, if exact
std::optional<Element> power_preimage(CochainComplex& cx, std::size_t x, unsigned N) {
    const auto& alg = cx.algebra();
    Monomial m(alg.size());
    m[x] = N;
    return cx.preimage(Element(alg.gens(), m), static_cast<int>(N) * alg.gens()->degree(x));
}

}  // namespace

EllipticityResult ellipticity_certificate(const SullivanAlgebra& alg, std::optional<int> max_degree) {
    EllipticityResult out;
    EllipticityCertificate cert;

    // products: nilpotency exponents are those of the factors (Kunneth)
    if (alg.factors().size() >= 2) {
        for (std::size_t k = 0; k < alg.factors().size(); ++k) {
            auto sub = ellipticity_certificate(*alg.factors()[k].algebra, max_degree);
            if (!sub.certificate) {
                out.failed_generator = alg.factors()[k].offset + *sub.failed_generator;
                out.bound = sub.bound;
                return out;
            }
            for (auto w : sub.certificate->witnesses) {
                w.generator += alg.factors()[k].offset;
                w.preimage = embed_factor(alg, k, w.preimage);
                cert.witnesses.push_back(std::move(w));
            }
        }
        out.certificate = std::move(cert);
        return out;
    }

    // const_pointer_cast-free: complex keeps an aliasing pointer that does not own alg
    AlgebraPtr view(std::shared_ptr<const SullivanAlgebra>(), &alg);
    CochainComplex cx(view);
    for (std::size_t x : alg.gens()->even_indices()) {
        unsigned hi = max_degree ? static_cast<unsigned>(std::max(1, *max_degree / alg.gens()->degree(x)))
                                 : nilpotency_bound(alg, x);
        auto top = power_preimage(cx, x, hi);
        if (!top) {
            out.failed_generator = x;
            out.bound = hi;
            return out;
        }
        // exactness of x^N is monotone in N, so bisect for the least exponent
        unsigned lo = 0;  // x^lo known not exact (x^0 = 1 never is)
        Element best = *top;
        while (hi - lo > 1) {
            unsigned mid = lo + (hi - lo) / 2;
            if (auto w = power_preimage(cx, x, mid)) {
                hi = mid;
                best = *w;
            } else {
                lo = mid;
            }
        }
        cert.witnesses.push_back({x, hi, best});
    }
    out.certificate = std::move(cert);
    return out;
}

}  // namespace rht
