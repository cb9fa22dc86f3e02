#pragma once

// Built-in algebras, as DSL templates expanded on load.

#include "rht/dsl.hpp"

#include <string>
#include <vector>

namespace rht {

struct CatalogEntry {
    std::string name;       // "A", "prop1", ...
    std::string signature;  // "A(i)", "prop1(l1,l2)"
    std::string summary;
};

const std::vector<CatalogEntry>& catalog_entries();

// "A(0)", "prop1(4,2)", "ex02", "tensor(A(0),A(0))"; throws std::invalid_argument
// for unknown names and PreconditionError / ParseError for bad parameters
AlgebraFile catalog(const std::string& spec);

// the template text of a plain entry (no tensor / reduction)
std::string catalog_template(const std::string& name);

}  // namespace rht
