#pragma once

// Self-maps of a Sullivan algebra: generic ansatz, commutation constraints,
// a case-splitting solver and the resulting set of mapping degrees.

#include "rht/cohomology.hpp"
#include "rht/polynomial.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace rht {

struct ConcreteMorphism {
    std::vector<Element> images;  // one per generator, same degree
};

ConcreteMorphism identity_morphism(const SullivanAlgebra& alg);
Element apply(const ConcreteMorphism& f, const Element& e);

struct MorphismCheck {
    bool valid = false;
    std::optional<std::size_t> failing_generator;
    std::string detail;
    Rational degree = 0;
};

MorphismCheck verify_morphism(const AlgebraPtr& alg, const ConcreteMorphism& f, const TopFunctional& phi,
                              const Element& vol);
MorphismCheck verify_morphism(const AlgebraPtr& alg, const ConcreteMorphism& f, const VolumeForm& vol);

// ---- ansatz and constraints

struct AnsatzEntry {
    SymbolId symbol;
    Monomial mono;
};

struct EndoAnsatz {
    SymbolTable symbols;
    std::vector<std::vector<AnsatzEntry>> entries;  // per generator
    std::vector<std::size_t> owner;                 // symbol -> generator
    std::vector<bool> diagonal;                     // symbol is the coefficient of g on g

    std::size_t unknown_count() const { return symbols.size(); }
    std::optional<SymbolId> symbol(std::size_t gen, const Monomial& m) const;
    SymElement image(const SullivanAlgebra& alg, std::size_t gen) const;
};

EndoAnsatz generic_ansatz(const SullivanAlgebra& alg);

struct PolynomialConstraint {
    Polynomial poly;
    std::size_t generator = 0;
    Monomial row;  // codomain monomial whose coefficient must vanish
};

std::vector<PolynomialConstraint> extract_constraints(const SullivanAlgebra& alg, const EndoAnsatz& ansatz);

// ---- case contexts

struct CaseContext {
    std::map<SymbolId, bool> nonzero;  // true: u != 0, false: u = 0
    std::map<SymbolId, Polynomial> subs;

    Polynomial apply(const Polynomial& p) const;
    bool is_nonzero(SymbolId v) const {
        auto it = nonzero.find(v);
        return it != nonzero.end() && it->second;
    }
    bool is_decided(SymbolId v) const { return nonzero.count(v) > 0 || subs.count(v) > 0; }
    // record u := p, rewriting earlier substitutions so they stay acyclic
    void eliminate(SymbolId u, const Polynomial& p);
    void set_zero(SymbolId u);
};

struct SimplifyResult {
    std::vector<Polynomial> constraints;
    CaseContext ctx;
    bool contradiction = false;
    std::string why;                 // for contradictions
    std::optional<SymbolId> split;   // a branch on u = 0 / u != 0 is needed
};

// Linear elimination, forced zeros, constant checks; requests a split when a
// product-equals-zero constraint has several undecided factors.  `diagonal`
// (optional) marks the symbols that may be split on outside monomial content.
SimplifyResult simplify(std::vector<Polynomial> constraints, CaseContext ctx,
                        const std::vector<bool>* diagonal = nullptr);

// ---- monomial equations over the nonzero rationals

struct MonomialEquation {
    PolyMonomial lhs, rhs;
    int sign = 1;  // lhs = sign * rhs
};

struct MonomialEquationSystem {
    std::vector<SymbolId> vars;
    std::vector<MonomialEquation> equations;
};

struct MonomialSolution {
    std::vector<SymbolId> vars;
    bool consistent = true;
    // |v_i| = prod_j t_j^{kernel[i][j]}, t_j positive rationals
    std::vector<std::vector<Integer>> kernel;
    std::size_t parameters() const { return kernel.empty() ? 0 : kernel.front().size(); }
    // sign vectors (1 = negative) form  particular + span(sign_kernel) over GF(2)
    std::vector<std::uint8_t> sign_particular;
    std::vector<std::vector<std::uint8_t>> sign_kernel;

    bool finite() const { return consistent && parameters() == 0; }
    // all sign vectors (capped); with finite() these are the complete solutions (+-1 entries)
    std::vector<std::vector<int>> sign_points(std::size_t cap = 4096) const;
};

MonomialSolution solve_monomial_system(const MonomialEquationSystem& sys);

// integer kernel basis (columns) of an integer matrix, via unimodular column reduction
std::vector<std::vector<Integer>> integer_kernel(const std::vector<std::vector<Integer>>& rows, std::size_t ncols);

// ---- degrees

Polynomial volume_degree_polynomial(const SullivanAlgebra& alg, const std::vector<SymElement>& images,
                                    const Element& vol, const TopFunctional& phi);

enum class Verdict { Inflexible, NoOrientationReversal, Flexible, Inconclusive };
std::string verdict_name(Verdict v);

struct DegreeExpression {
    Polynomial value;                   // in `params`
    std::vector<std::string> params;    // names as printed
    std::string text;
    bool constant = false;
    bool nonnegative = false;           // certified: positive coefficients, even exponents
};

struct LeafData;  // internal: what a solved leaf needs for sampling

struct CaseNode {
    std::string decision;   // "k2 = 0", "k2 != 0", "root"
    enum class Outcome { Split, Contradiction, ZeroDegree, Solved, Unresolved } outcome = Outcome::Split;
    std::string note;
    std::vector<std::string> substitutions;  // "k3 := k1^4*k2^2" at this node
    std::vector<DegreeExpression> degrees;
    std::vector<std::string> residual;
    std::vector<CaseNode> children;
    std::shared_ptr<const LeafData> leaf;
};

std::string outcome_name(CaseNode::Outcome o);

struct FlexibleFamily {
    std::string expression;
    std::vector<std::pair<Integer, Rational>> instances;  // t, verified degree
    std::vector<ConcreteMorphism> morphisms;
};

struct SpectrumOptions {
    unsigned case_depth = 12;
    std::size_t max_unknowns = 4000;
    std::size_t max_terms = 250000;
    std::size_t max_nodes = 20000;
};

struct DegreeSpectrumVerdict {
    Verdict kind = Verdict::Inconclusive;
    std::set<Rational> values;             // finite part of the spectrum
    std::vector<DegreeExpression> families;
    std::optional<FlexibleFamily> family;  // verified unbounded family
    CaseNode tree;
    std::vector<std::string> residual;
    std::string reason;
    std::shared_ptr<const EndoAnsatz> ansatz;
};

DegreeSpectrumVerdict degree_spectrum(const AlgebraPtr& alg, const VolumeForm& vol,
                                      const SpectrumOptions& opts = {});

// random concrete morphisms from the solved leaves, coefficients of height <= h
struct SampledMorphism {
    ConcreteMorphism f;
    Rational predicted;  // degree the leaf's expression gives
};
std::vector<SampledMorphism> sample_morphisms(const AlgebraPtr& alg, const DegreeSpectrumVerdict& v,
                                              std::mt19937_64& rng, std::size_t count, long height = 5);

}  // namespace rht
