#pragma once

// Flexibility certificates: a grading of the generators by "lower degree"
// under which d lowers the grading by exactly one gives the scaling maps
// v -> b^(lower + deg) v, and with them self-maps of arbitrarily large degree.

#include "rht/cohomology.hpp"
#include "rht/endo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rht {

struct MonomialDifferentialCheck {
    bool pass = true;
    std::optional<std::size_t> offending;  // generator whose d has several terms
};
MonomialDifferentialCheck monomial_differential_check(const SullivanAlgebra& alg);

struct LowerGrading {
    std::vector<unsigned> lower;  // per generator
    unsigned of(const Monomial& m) const;
};

struct GradingResult {
    std::optional<LowerGrading> grading;
    std::vector<std::size_t> unassigned;  // on failure
};
// V_0 = closed generators; a generator gets i+1 as soon as its differential
// lies in the subalgebra on generators of lower degree <= i
GradingResult construct_lower_grading(const SullivanAlgebra& alg);

struct GradingCondition {
    bool pass = true;
    std::optional<std::size_t> offending;
    std::string detail;
};
// every d(v) homogeneous of lower degree lower(v) - 1
GradingCondition check_grading_condition(const SullivanAlgebra& alg, const LowerGrading& g);

struct TwoStage {
    std::vector<std::size_t> closed, rest;  // Q and P
};
std::optional<TwoStage> two_stage_decomposition(const SullivanAlgebra& alg);
LowerGrading two_stage_grading(const SullivanAlgebra& alg, const TwoStage& ts);

ConcreteMorphism scaling_morphism(const SullivanAlgebra& alg, const LowerGrading& g, const Integer& base);

struct ScalingCertificate {
    Integer base = 2;
    LowerGrading grading;
    ConcreteMorphism morphism;
    Rational degree;
    unsigned exponent = 0;  // degree = base^exponent
    std::string family;     // description of the k-th multiples
};
// throws std::logic_error if the morphism fails to verify (grading bug)
ScalingCertificate scaling_certificate(const AlgebraPtr& alg, const LowerGrading& g, const VolumeForm& vol,
                                       const Integer& base = 2);

struct MultipleCheck {
    Integer k;
    bool valid = false;
    Rational degree, expected;
    std::size_t classes = 0;  // bihomogeneous classes checked
    std::string failure;
};
struct MultipleReport {
    bool pass = true;
    std::vector<MultipleCheck> checks;
};
// k f(v) = (2k)^(lower + deg) v; checks the morphism, its degree (2k)^exponent
// and its action on a bihomogeneous cohomology basis up to the top degree
MultipleReport multiple_family_verify(const AlgebraPtr& alg, const LowerGrading& g, const VolumeForm& vol,
                                      const std::vector<Integer>& ks);

}  // namespace rht
