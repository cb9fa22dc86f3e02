#pragma once

#include "rht/catalog.hpp"
#include "rht/cohomology.hpp"
#include "rht/dsl.hpp"
#include "rht/endo.hpp"

#include <random>

namespace rht::testing {

inline AlgebraPtr load(const std::string& name) { return catalog(name).algebra; }

inline const std::vector<std::string>& catalog_sample() {
    static const std::vector<std::string> names = {
        "A(0)", "A(1)", "A(2)", "CL-base", "CL-fibered", "ex01", "prop1(4,2)", "prop1(2,3)",
        "prop2(4)", "prop3(5)", "ex02", "CP(1)", "CP(4)", "sphere(2)", "sphere(7)", "tensor(ex02,sphere(3))"};
    return names;
}

inline Rational small_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 3);
    return make_rational(num(rng), den(rng));
}

// random homogeneous element of degree n (zero if A^n = 0)
inline Element random_element(const SullivanAlgebra& alg, int n, std::mt19937_64& rng, std::size_t max_terms = 4) {
    Element e = alg.zero();
    auto basis = basis_of_degree(*alg.gens(), n);
    if (basis.empty()) return e;
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1), count(1, max_terms);
    for (std::size_t k = count(rng); k > 0; --k) e.add_term(basis[pick(rng)], small_rational(rng));
    return e;
}

// number of monomials of degree n, from the Poincare series
// prod (1 + t^odd) / prod (1 - t^even)
inline std::vector<long> series_counts(const GeneratorSet& G, int top) {
    std::vector<long> c(top + 1, 0);
    c[0] = 1;
    for (std::size_t i = 0; i < G.size(); ++i) {
        int d = G.degree(i);
        if (G.is_odd(i)) {
            for (int n = top; n >= d; --n) c[n] += c[n - d];
        } else {
            for (int n = d; n <= top; ++n) c[n] += c[n - d];
        }
    }
    return c;
}

}  // namespace rht::testing
