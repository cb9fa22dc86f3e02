#pragma once

// Text format for algebras and morphisms.
//
//   name A
//   param i = 0 range 0..
//   gen x1 : 4
//   gen z' : 75 + 4*i
//   d y1 = x1^4*x2^2
//   volume x2^26*z' - x1^(15+i)*x2^24*y1
//
// Morphism files use `f NAME = EXPR` lines.  `#` starts a comment.

#include "rht/sullivan.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rht {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line, int col, const std::string& msg);
};

struct ParamDecl {
    std::string name;
    long value = 0;
    std::optional<long> min, max;
};

struct AlgebraFile {
    std::string name;
    std::vector<ParamDecl> params;
    AlgebraPtr algebra;
    std::optional<Element> volume;
    std::string source;
};

using ParamOverrides = std::map<std::string, long>;

AlgebraFile parse_algebra(const std::string& text, const ParamOverrides& overrides = {});
// canonical text: parameters instantiated, differentials expanded
std::string print_algebra(const SullivanAlgebra& alg, const std::optional<Element>& volume = std::nullopt);
std::string print_algebra(const AlgebraFile& f);

// single expression over alg's generators
Element parse_element(const SullivanAlgebra& alg, const std::string& text);

struct ConcreteMorphism;
ConcreteMorphism parse_morphism(const SullivanAlgebra& alg, const std::string& text);
std::string print_morphism(const ConcreteMorphism& f);

}  // namespace rht
