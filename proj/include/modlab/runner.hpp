#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modlab/serialize.hpp"

namespace modlab::cli {

// Invalid configs are user errors and exit with status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TGridSpec {
    double tMin = -5.0;
    double tMax = 5.0;
    int count = 101;
};

struct ExperimentConfig {
    std::string experiment;
    std::optional<int> dim;
    std::optional<int> levels;
    std::optional<int> degeneracy;
    std::optional<int> dimPerAxis;
    std::optional<double> beta;
    std::optional<quasi::WeightFamily> weights;
    std::optional<wigner::GridSpec> grid;
    std::optional<TGridSpec> tGrid;
    std::uint64_t seed = 7;
    double tolScale = 1.0;
    Json raw;  // verbatim input, echoed in the report envelope
};

const std::vector<std::string>& experiment_names();

// Strict parse: unknown fields and out-of-range values are usage errors
// naming the offending field.
ExperimentConfig parse_config(const Json& j);

struct RunOutcome {
    Json envelope;
    bool pass = false;
};

// Deterministic given (config, seed): rerunning reproduces the results and
// summary sections byte-for-byte. Writes report.json (plus CSV grids for
// wigner-verify) into outDir when one is given.
RunOutcome run(const ExperimentConfig& cfg, const std::string& outDir = "");

} // namespace modlab::cli
