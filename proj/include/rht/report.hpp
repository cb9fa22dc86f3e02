#pragma once

// JSON reports: every certificate a command produces, in a form `replay`
// can check again.  Rationals are always "p/q" strings.

#include "rht/dsl.hpp"
#include "rht/endo.hpp"
#include "rht/flexcert.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rht {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "rht-report/1";

struct LoadedAlgebra {
    AlgebraFile file;
    std::optional<std::string> catalog_name;  // set when loaded from the catalog
};

// a readable file path, otherwise a catalog name; overrides apply to parameters
LoadedAlgebra load_algebra(const std::string& arg, const ParamOverrides& overrides = {});

json algebra_json(const LoadedAlgebra& a);
LoadedAlgebra algebra_from_json(const json& j);

json morphism_json(const SullivanAlgebra& alg, const ConcreteMorphism& f);
ConcreteMorphism morphism_from_json(const SullivanAlgebra& alg, const json& j);

json ellipticity_json(const SullivanAlgebra& alg, const EllipticityResult& r);
std::optional<EllipticityCertificate> ellipticity_from_json(const SullivanAlgebra& alg, const json& j);

json case_node_json(const CaseNode& n);
json spectrum_json(const SullivanAlgebra& alg, const DegreeSpectrumVerdict& v);

struct Check {
    std::string name;
    std::string status;  // "pass", "fail", "inconclusive"
    std::string detail;
};
json checks_json(const std::vector<Check>& checks);

// 0 pass, 1 some check failed, 2 otherwise inconclusive
int exit_code_for(const std::vector<Check>& checks);

struct ReplayOutcome {
    std::vector<Check> checks;
    int exit_code = 0;
};
ReplayOutcome replay_report(const json& report);

}  // namespace rht
