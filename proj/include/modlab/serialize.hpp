#pragma once

#include <string>

#include <json.hpp>

#include "modlab/landau.hpp"
#include "modlab/modular.hpp"
#include "modlab/quasi.hpp"
#include "modlab/wigner.hpp"

namespace modlab {

using Json = nlohmann::json;

// Complex values serialize as [re, im]; HsElements as row-major arrays of
// those pairs.
Json to_json(const Complex& z);
Json to_json(const HsElement& x);
Json to_json(const RealVector& v);

Json to_json(const modular::KmsReport& report);
Json to_json(const modular::PolarCheckReport& report);
Json to_json(const landau::DegeneracyReport& report);
Json to_json(const landau::SecondRepAudit& audit);
Json to_json(const wigner::IntertwiningReport& report);
Json to_json(const quasi::TruncationSweep& sweep);
Json to_json(const quasi::IdealDiagnostic& diag);
Json to_json(const quasi::BoundednessReport& report);
Json to_json(const quasi::StructureReport& report);

// {"kind": "gibbs"|"zeta"|"custom", "beta": ..., "s": ..., "weights": [...]}
quasi::WeightFamily weight_family_from_json(const Json& j);

// CSV with header x,y,re,im, one row per grid point, x-major.
void write_grid_csv(const wigner::GridFunction& f, const std::string& path);

} // namespace modlab
