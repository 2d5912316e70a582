#include "modlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace modlab::cli {

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kSchemaVersion = 1;

const Complex kI(0.0, 1.0);

// Pass/fail bookkeeping for one run; "<=" thresholds stretch with tolScale,
// ">" detector floors do not.
struct Criteria {
    double tolScale = 1.0;
    Json items = Json::array();
    bool pass = true;

    void le(const std::string& name, double value, double threshold) {
        const double scaled = threshold * tolScale;
        const bool ok = value <= scaled;
        items.push_back(Json{{"name", name},
                             {"value", value},
                             {"threshold", scaled},
                             {"comparison", "<="},
                             {"pass", ok}});
        pass = pass && ok;
    }

    void gt(const std::string& name, double value, double threshold) {
        const bool ok = value > threshold;
        items.push_back(Json{{"name", name},
                             {"value", value},
                             {"threshold", threshold},
                             {"comparison", ">"},
                             {"pass", ok}});
        pass = pass && ok;
    }

    void isTrue(const std::string& name, bool value) {
        items.push_back(Json{{"name", name},
                             {"value", value},
                             {"comparison", "=="},
                             {"threshold", true},
                             {"pass", value}});
        pass = pass && value;
    }
};

Matrix random_matrix(int dim, Rng& rng) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.complexGaussian();
    return m;
}

RealVector linspace(double lo, double hi, int count) {
    RealVector out(count);
    if (count == 1) {
        out(0) = lo;
        return out;
    }
    for (int i = 0; i < count; ++i) out(i) = lo + i * (hi - lo) / (count - 1);
    return out;
}

// ---------------------------------------------------------------- modular

Json run_modular_report(const ExperimentConfig& cfg, Criteria& crit) {
    Json results;
    Rng rng(cfg.seed);

    // Hilbert-Schmidt structure: orthonormality and exact expansion
    {
        const int dim = cfg.dim.value_or(8);
        OscillatorBasis basis(dim);
        double ortho = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k)
                    for (int l = 0; l < dim; ++l) {
                        Complex g = hs_inner(matrix_unit(i, j, basis), matrix_unit(k, l, basis));
                        Complex expected = (i == k && j == l) ? 1.0 : 0.0;
                        ortho = std::max(ortho, std::abs(g - expected));
                    }
        HsElement z{basis, random_matrix(dim, rng)};
        HsElement rebuilt = HsElement::zero(basis);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                HsElement unit = matrix_unit(i, j, basis);
                rebuilt = rebuilt + hs_inner(unit, z) * unit;
            }
        const double completeness = hs_norm(rebuilt - z);
        results["hsStructure"] =
            Json{{"dim", dim}, {"orthonormality", ortho}, {"completeness", completeness}};
        crit.le("hs-orthonormality", ortho, 1e-12);
        crit.le("hs-completeness", completeness, 1e-12);
    }

    // commutant and conjugation at dim 6, 50 seeded pairs
    {
        OscillatorBasis basis(6);
        AntilinearMap jay = modular_conjugation(basis);
        DenseSuperOp jSquared = compose(jay, jay);
        const double jsq = (jSquared.mat - DenseSuperOp::identity(basis).mat).norm();

        double maxComm = 0.0, maxInterchange = 0.0;
        const int samples = 50;
        for (int s = 0; s < samples; ++s) {
            TruncatedOperator a{basis, random_matrix(6, rng)};
            TruncatedOperator b{basis, random_matrix(6, rng)};
            DenseSuperOp left = densify(lift_left(a));
            DenseSuperOp right = densify(lift_right(b));
            maxComm = std::max(maxComm, (left.mat * right.mat - right.mat * left.mat).norm());
            DenseSuperOp conjugated = compose(jay, compose(left, jay));
            maxInterchange =
                std::max(maxInterchange, (conjugated.mat - densify(lift_right(a)).mat).norm());
        }
        results["commutant"] = Json{{"dim", 6},
                                    {"samples", samples},
                                    {"maxCommutator", maxComm},
                                    {"maxInterchange", maxInterchange},
                                    {"jSquared", jsq}};
        crit.le("commutant-commutation", maxComm, 1e-12);
        crit.le("conjugation-interchange", maxInterchange, 1e-12);
        crit.le("j-squared", jsq, 0.0);
    }

    // Tomita polar decomposition across betas and dims
    {
        Json polar = Json::array();
        double worst = 0.0;
        for (double beta : {0.5, 1.0, 2.0})
            for (int dim : {4, 6, 8, 10}) {
                modular::WeightSequence w = modular::gibbs_weights(OscillatorBasis(dim), beta);
                modular::PolarCheckReport report = modular::polar_check(w);
                double basisVsClosed = 0.0;
                for (int k = 0; k < dim; ++k)
                    for (int l = 0; l < dim; ++l) {
                        HsElement unit = matrix_unit(k, l, w.basis);
                        basisVsClosed = std::max(
                            basisVsClosed,
                            hs_norm(modular::tomita_s(w).apply(unit) -
                                    modular::tomita_s_closed_form(w, unit)));
                    }
                worst = std::max({worst, report.vsComposition, report.vsPolarUnitary,
                                  report.vsPolarPositive, report.deltaVsStS, basisVsClosed});
                Json entry = to_json(report);
                entry["beta"] = beta;
                entry["dim"] = dim;
                entry["basisVsClosedForm"] = basisVsClosed;
                polar.push_back(entry);
            }
        results["polar"] = polar;
        crit.le("tomita-polar", worst, 1e-10);
    }

    // structural state properties at brute-force scale
    {
        Json props = Json::array();
        bool faithful = true, cyclic = true, separating = true;
        const double beta = cfg.beta.value_or(1.0);
        for (int dim : {4, 5, 6}) {
            quasi::StructureReport report =
                quasi::structure_property_checks(quasi::gibbs_family(beta), dim, rng);
            faithful = faithful && report.faithful &&
                       report.faithfulnessIdentityResidual <= 1e-12;
            cyclic = cyclic && report.cyclic;
            separating = separating && report.separating &&
                         report.separatingSmallestSingular > 1e-12;
            props.push_back(to_json(report));
        }
        results["stateProperties"] = props;
        crit.isTrue("state-faithful", faithful);
        crit.isTrue("state-cyclic", cyclic);
        crit.isTrue("state-separating", separating);
    }

    // the assembled structure at the configured size
    {
        const int dim = cfg.dim.value_or(8);
        const double beta = cfg.beta.value_or(1.0);
        modular::WeightSequence w = modular::gibbs_weights(OscillatorBasis(dim), beta);
        modular::ModularStructure s = modular::build_modular_structure(w);
        RealVector hDiag(dim);
        for (int i = 0; i < dim; ++i) hDiag(i) = s.hPhi.mat(i, i).real();
        results["structure"] = Json{{"dim", dim},
                                    {"beta", beta},
                                    {"weights", to_json(w.weights)},
                                    {"renormalization", w.rawSum},
                                    {"modularHamiltonianDiagonal", to_json(hDiag)},
                                    {"phi", to_json(s.phi)}};
    }
    return results;
}

// ---------------------------------------------------------------- kms

Json run_kms_check(const ExperimentConfig& cfg, Criteria& crit) {
    Json results;
    Rng rng(cfg.seed);
    const int dim = cfg.dim.value_or(12);
    const TGridSpec tg = cfg.tGrid.value_or(TGridSpec{});
    RealVector tGrid = linspace(tg.tMin, tg.tMax, tg.count);

    std::vector<double> betas = cfg.beta ? std::vector<double>{*cfg.beta}
                                         : std::vector<double>{0.5, 1.0, 2.0};
    Json perBeta = Json::array();
    for (double beta : betas) {
        OscillatorBasis basis(dim);
        modular::WeightSequence w = modular::gibbs_weights(basis, beta);
        auto ensemble = modular::kms_test_ensemble(basis, 10, rng);
        auto pairs = modular::draw_pairs(ensemble, 19, rng);
        pairs.insert(pairs.begin(), modular::canonical_kms_pair(basis));
        modular::KmsReport report = modular::kms_residual(w, pairs, tGrid);

        modular::WeightSequence mismatched = modular::gibbs_weights(basis, beta * 1.1);
        modular::KmsReport control =
            modular::kms_residual_mismatched(w, mismatched, pairs, tGrid);

        Json entry = Json{{"report", to_json(report)},
                          {"negativeControlMaxResidual", control.maxResidual}};
        perBeta.push_back(entry);

        std::ostringstream tag;
        tag << "[beta=" << beta << "]";
        crit.le("kms-residual" + tag.str(), report.maxResidual, 1e-9);
        crit.gt("kms-negative-control" + tag.str(), control.maxResidual, 1e-3);
        crit.le("kms-state-invariance" + tag.str(), report.maxInvariance, 1e-12);
        crit.le("kms-flow-invariance" + tag.str(), report.flowInvariance, 1e-12);
    }
    results["dim"] = dim;
    results["betas"] = betas;
    results["runs"] = perBeta;
    return results;
}

// ---------------------------------------------------------------- landau

Json run_landau_spectrum(const ExperimentConfig& cfg, Criteria& crit) {
    const int levels = cfg.levels.value_or(12);
    const int degeneracy = cfg.degeneracy.value_or(12);
    landau::LandauBasis basis(degeneracy, levels);
    landau::DegeneracyReport report = landau::degeneracy_lift_check(basis);

    landau::HamiltonianSet h = landau::build_hamiltonians(basis);
    RealVector upSpectrum(basis.size()), downSpectrum(basis.size());
    for (int idx = 0; idx < basis.size(); ++idx) {
        upSpectrum(idx) = h.up.mat(idx, idx).real();
        downSpectrum(idx) = h.down.mat(idx, idx).real();
    }

    crit.isTrue("landau-marginal-multiplicity", report.marginalsMatch);
    crit.isTrue("landau-joint-simple", report.jointSimple);
    crit.le("landau-h-commutator", report.commutatorNorm, 0.0);
    crit.le("landau-int-sum", report.intSumNorm, 0.0);
    crit.le("landau-split-consistency", report.splitResidual, 0.0);

    Json results = to_json(report);
    results["levels"] = levels;
    results["degeneracy"] = degeneracy;
    results["upSpectrum"] = to_json(upSpectrum);
    results["downSpectrum"] = to_json(downSpectrum);
    return results;
}

Json run_landau_audit(const ExperimentConfig& cfg, Criteria& crit) {
    const int dimPerAxis = cfg.dimPerAxis.value_or(24);
    landau::SecondRepAudit audit = landau::second_rep_audit(dimPerAxis);

    landau::CartesianOps ops = landau::build_cartesian(dimPerAxis);
    landau::CartesianPm pm = landau::cartesian_pm(ops);
    const Matrix proj = landau::cartesian_interior_projector(ops.basis, 2);
    const Matrix id = Matrix::Identity(ops.basis.size(), ops.basis.size());
    auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
    auto interior = [&](const Matrix& m) { return (proj * m * proj).norm(); };

    const double ccrPlus = interior(comm(pm.qPlus, pm.pPlus) - kI * id);
    const double ccrMinus = interior(comm(pm.qMinus, pm.pMinus) - kI * id);
    const double cross = std::max({interior(comm(pm.qPlus, pm.qMinus)),
                                   interior(comm(pm.pPlus, pm.qMinus)),
                                   interior(comm(pm.qPlus, pm.pMinus)),
                                   interior(comm(pm.pPlus, pm.pMinus))});

    crit.le("cartesian-ccr", std::max(ccrPlus, ccrMinus), 1e-8);
    crit.le("cartesian-cross-commutators", cross, 1e-8);
    crit.le("audit-ccr-plus", audit.ccrResidualPlus, 1e-8);
    crit.le("audit-ccr-minus", audit.ccrResidualMinus, 1e-8);
    crit.le("audit-cross-commutator", audit.crossCommutatorResidual, 1e-8);
    crit.le("audit-ax-coefficient", std::abs(audit.aPlus.fitted[0] - Complex(0.75)), 1e-6);

    Json results = to_json(audit);
    results["quadratureCcr"] = Json{{"plus", ccrPlus}, {"minus", ccrMinus}, {"cross", cross}};
    return results;
}

// ---------------------------------------------------------------- wigner

Json run_wigner_verify(const ExperimentConfig& cfg, Criteria& crit, const std::string& outDir) {
    const wigner::GridSpec grid = cfg.grid.value_or(wigner::GridSpec(-3, 3, -3, 3, 121));
    const int topDim = cfg.dim.value_or(64);
    if (topDim < 8) throw UsageError("config.dim: wigner-verify needs dim >= 8");
    std::vector<int> dims = {topDim / 2, topDim};

    wigner::IntertwiningReport report = wigner::intertwining_check(2, grid, dims);

    crit.le("wigner-gaussian", report.gaussianDeviation.back(), 1e-4);
    crit.le("wigner-generator-blocks", report.generatorDeviationMatched, 1e-4);
    crit.le("wigner-hamiltonian-blocks", report.hamiltonianBlockDeviation, 1e-4);
    crit.le("wigner-gram", report.gramDeviation, 1e-4);
    crit.isTrue("wigner-convergence",
                report.gaussianDeviation.front() > report.gaussianDeviation.back());

    if (!outDir.empty()) {
        OscillatorBasis basis(topDim);
        wigner::GridFunction x00 = wigner::wigner_transform_unit(0, 0, basis, grid);
        write_grid_csv(x00, outDir + "/wigner_x00.csv");
        wigner::GridFunction ground = wigner::ground_state_grid(grid);
        write_grid_csv(ground, outDir + "/ground_state.csv");
    }
    return to_json(report);
}

// ---------------------------------------------------------------- quasi

Json run_quasi_kms(const ExperimentConfig& cfg, Criteria& crit) {
    Json results;
    Rng rng(cfg.seed);
    const int dim = cfg.dim.value_or(16);
    const double beta = cfg.beta.value_or(1.0);
    quasi::WeightFamily family = cfg.weights.value_or(quasi::zeta_family(2.0, beta));
    results["family"] = family.name();
    results["dim"] = dim;

    OscillatorBasis basis(dim);
    const int maxLabel = std::min(8, dim - 3);
    std::vector<modular::NamedOperator> ensemble;
    for (int k = 0; k <= maxLabel; ++k)
        for (int l = 0; l <= maxLabel; ++l) {
            std::ostringstream name;
            name << "X(" << k << "," << l << ")";
            ensemble.push_back({name.str(), {basis, matrix_unit(k, l, basis).mat}});
        }
    auto pairs = modular::draw_pairs(ensemble, 20, rng);
    const TGridSpec tg = cfg.tGrid.value_or(TGridSpec{-3.0, 3.0, 61});
    RealVector tGrid = linspace(tg.tMin, tg.tMax, tg.count);
    modular::KmsReport kms = quasi::quasi_kms_residual(family, dim, pairs, tGrid);
    results["kms"] = to_json(kms);
    crit.le("quasi-kms-residual", kms.maxResidual, 1e-9);
    crit.le("quasi-state-invariance", kms.maxInvariance, 1e-12);
    crit.le("quasi-flow-invariance", kms.flowInvariance, 1e-12);

    // gibbs-kind outputs against the modular module directly
    {
        quasi::QuasiModular viaQuasi = quasi::quasi_modular(quasi::gibbs_family(beta), dim);
        modular::ModularStructure direct =
            modular::build_modular_structure(modular::gibbs_weights(basis, beta));
        double dev = 0.0;
        dev = std::max(dev, (viaQuasi.structure.phi.mat - direct.phi.mat).norm());
        dev = std::max(dev, (viaQuasi.structure.rho.mat - direct.rho.mat).norm());
        dev = std::max(dev, (viaQuasi.structure.hPhi.mat - direct.hPhi.mat).norm());
        dev = std::max(dev, (viaQuasi.structure.delta.mat - direct.delta.mat).norm());
        dev = std::max(dev,
                       (viaQuasi.structure.tomitaS.linearPart - direct.tomitaS.linearPart).norm());
        results["gibbsConsistency"] = dev;
        crit.le("quasi-gibbs-consistency", dev, 1e-12);
    }

    // phiTilde(1 v A) against phi(A v 1)
    {
        modular::WeightSequence seq = family.sequence(dim);
        HsElement phi = modular::kms_vector(seq);
        double dev = 0.0;
        std::vector<TruncatedOperator> testOps = {
            TruncatedOperator::identity(basis),
            {basis, matrix_unit(0, 0, basis).mat},
            build_ladder(basis).first,
            {basis, random_matrix(dim, rng)}};
        for (const TruncatedOperator& a : testOps) {
            Complex left = hs_inner(phi, apply_super(lift_left(a), phi));
            Complex right = std::conj(hs_inner(phi, apply_super(lift_right(a), phi)));
            dev = std::max(dev, std::abs(left - right));
        }
        results["stateSymmetry"] = dev;
        crit.le("quasi-state-symmetry", dev, 1e-12);

        const double traceDefect =
            std::abs(modular::density_operator(seq).trace() - Complex(1.0));
        results["rhoTraceDefect"] = traceDefect;
        crit.le("quasi-rho-trace", traceDefect, 1e-10);
    }

    // e^{ith} = e^{itH} v e^{itH} on the dense matrixizations
    {
        double worst = 0.0;
        for (double t : {0.7, 1.9})
            worst = std::max(worst, quasi::flow_factorization_residual(family, dim, t));
        results["flowFactorization"] = worst;
        crit.le("quasi-flow-factorization", worst, 1e-10);
    }

    // the Phi trace-ideal diagnostic is reported data, not a gate
    quasi::QuasiModular qm = quasi::quasi_modular(family, dim);
    results["phiMembership"] = to_json(qm.phiMembership);
    results["phiInIdeal"] = qm.phiInIdeal;
    return results;
}

Json run_quasi_ideal(const ExperimentConfig& cfg, Criteria& crit) {
    Json results;
    Rng rng(cfg.seed);
    const std::vector<int> dims = {16, 32, 64, 128, 256};

    quasi::OperatorRule rankOne =
        quasi::rule_rank_one({Complex(1.0), Complex(0.0, 0.5)}, {Complex(0.25), Complex(1.0)});
    quasi::IdealDiagnostic rankOneDiag =
        quasi::ideal_membership(rankOne, quasi::default_test_family(), dims);
    results["rankOne"] = to_json(rankOneDiag);
    crit.isTrue("ideal-rankone-member", rankOneDiag.verdict == quasi::IdealVerdict::member);

    std::vector<quasi::OperatorRule> nOnly = {quasi::rule_number()};
    quasi::IdealDiagnostic diag2 =
        quasi::ideal_membership(quasi::rule_diag_power(-2.0), nOnly, dims);
    results["diagPowerMinus2"] = to_json(diag2);
    crit.isTrue("ideal-diag2-nonmember", diag2.verdict == quasi::IdealVerdict::nonMember);

    quasi::IdealDiagnostic diag4 =
        quasi::ideal_membership(quasi::rule_diag_power(-4.0), nOnly, dims);
    results["diagPowerMinus4"] = to_json(diag4);

    quasi::WeightFamily family = cfg.weights.value_or(quasi::zeta_family(2.0));
    quasi::IdealDiagnostic phiDiag = quasi::ideal_membership(
        "Phi[" + family.name() + "]", quasi::phi_diagonal_builder(family),
        quasi::default_test_family(), dims);
    results["phiMembership"] = to_json(phiDiag);

    const int boundDim = cfg.dim.value_or(10);
    quasi::BoundednessReport bound = quasi::boundedness_check(100, boundDim, rng);
    results["boundedness"] = to_json(bound);
    crit.isTrue("boundedness", bound.allHold);

    // seminorm sweeps for the named families
    Json seminorms = Json::array();
    {
        quasi::SeminormSpec expK1;
        expK1.k = 1;
        quasi::TruncationSweep s1 =
            quasi::seminorm_eval(quasi::rule_matrix_unit(0, 1), expK1, dims);
        seminorms.push_back(Json{{"operator", "X(0,1)"}, {"spec", expK1.name()},
                                 {"sweep", to_json(s1)}});

        quasi::SeminormSpec expK0;
        quasi::TruncationSweep s2 =
            quasi::seminorm_eval(quasi::rule_number_power(2), expK0, dims);
        seminorms.push_back(Json{{"operator", "N^2"}, {"spec", expK0.name()},
                                 {"sweep", to_json(s2)}});

        quasi::SeminormSpec dual;
        dual.dualForm = true;
        quasi::TruncationSweep s3 = quasi::seminorm_eval(quasi::rule_number(), dual, dims);
        seminorms.push_back(Json{{"operator", "N"}, {"spec", dual.name()},
                                 {"sweep", to_json(s3)}});
    }
    results["seminorms"] = seminorms;
    return results;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "modular-report", "kms-check", "landau-spectrum", "landau-audit",
        "wigner-verify",  "quasi-kms", "quasi-ideal"};
    return names;
}

namespace {

void reject_unknown(const Json& j, const std::vector<std::string>& allowed,
                    const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw UsageError("unknown field: " + path + "." + key);
    }
}

int require_int(const Json& j, const std::string& path, int lo, int hi) {
    if (!j.is_number_integer())
        throw UsageError(path + ": must be an integer");
    const int v = j.get<int>();
    if (v < lo || v > hi) {
        std::ostringstream msg;
        msg << path << ": must be in [" << lo << ", " << hi << "], got " << v;
        throw UsageError(msg.str());
    }
    return v;
}

double require_positive(const Json& j, const std::string& path, double hi) {
    if (!j.is_number())
        throw UsageError(path + ": must be a number");
    const double v = j.get<double>();
    if (!(v > 0.0) || v > hi) {
        std::ostringstream msg;
        msg << path << ": must be in (0, " << hi << "], got " << v;
        throw UsageError(msg.str());
    }
    return v;
}

} // namespace

ExperimentConfig parse_config(const Json& j) {
    if (!j.is_object())
        throw UsageError("config: must be a JSON object");
    reject_unknown(j,
                   {"experiment", "dim", "levels", "degeneracy", "dimPerAxis", "beta",
                    "weightKind", "weightParams", "grid", "tGrid", "seed", "tolScale"},
                   "config");

    ExperimentConfig cfg;
    cfg.raw = j;
    if (!j.contains("experiment"))
        throw UsageError("config.experiment: required");
    cfg.experiment = j.at("experiment").get<std::string>();
    // short aliases accepted for the common groups
    if (cfg.experiment == "kms") cfg.experiment = "kms-check";
    if (cfg.experiment == "modular") cfg.experiment = "modular-report";
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
        throw UsageError("config.experiment: unknown experiment \"" + cfg.experiment + "\"");

    if (j.contains("dim")) cfg.dim = require_int(j.at("dim"), "config.dim", 2, 128);
    if (j.contains("levels")) cfg.levels = require_int(j.at("levels"), "config.levels", 2, 64);
    if (j.contains("degeneracy"))
        cfg.degeneracy = require_int(j.at("degeneracy"), "config.degeneracy", 2, 64);
    if (j.contains("dimPerAxis"))
        cfg.dimPerAxis = require_int(j.at("dimPerAxis"), "config.dimPerAxis", 8, 40);
    if (j.contains("beta")) cfg.beta = require_positive(j.at("beta"), "config.beta", 50.0);

    if (j.contains("weightKind")) {
        Json spec = Json{{"kind", j.at("weightKind").get<std::string>()}};
        if (j.contains("weightParams")) {
            const Json& params = j.at("weightParams");
            reject_unknown(params, {"beta", "s", "weights"}, "config.weightParams");
            for (const auto& [key, value] : params.items()) spec[key] = value;
        }
        try {
            cfg.weights = weight_family_from_json(spec);
        } catch (const std::exception& e) {
            throw UsageError(std::string("config.weightKind: ") + e.what());
        }
    } else if (j.contains("weightParams")) {
        throw UsageError("config.weightParams: weightKind required");
    }

    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        reject_unknown(g, {"xMin", "xMax", "yMin", "yMax", "pointsPerAxis"}, "config.grid");
        try {
            cfg.grid = wigner::GridSpec(g.value("xMin", -3.0), g.value("xMax", 3.0),
                                        g.value("yMin", -3.0), g.value("yMax", 3.0),
                                        require_int(g.value("pointsPerAxis", Json(121)),
                                                    "config.grid.pointsPerAxis", 3, 1001));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("config.grid: ") + e.what());
        }
    }

    if (j.contains("tGrid")) {
        const Json& t = j.at("tGrid");
        TGridSpec tg;
        if (t.is_array() && t.size() == 3) {
            tg.tMin = t.at(0).get<double>();
            tg.tMax = t.at(1).get<double>();
            tg.count = require_int(t.at(2), "config.tGrid[2]", 1, 100001);
        } else if (t.is_object()) {
            reject_unknown(t, {"min", "max", "count"}, "config.tGrid");
            tg.tMin = t.value("min", -5.0);
            tg.tMax = t.value("max", 5.0);
            tg.count = require_int(t.value("count", Json(101)), "config.tGrid.count", 1, 100001);
        } else {
            throw UsageError("config.tGrid: must be [min, max, count] or an object");
        }
        if (!(tg.tMin <= tg.tMax))
            throw UsageError("config.tGrid: min must not exceed max");
        cfg.tGrid = tg;
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            throw UsageError("config.seed: must be a nonnegative integer");
        const auto seed = j.at("seed").get<long long>();
        if (seed < 0) throw UsageError("config.seed: must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (j.contains("tolScale"))
        cfg.tolScale = require_positive(j.at("tolScale"), "config.tolScale", 1e6);
    return cfg;
}

RunOutcome run(const ExperimentConfig& cfg, const std::string& outDir) {
    const auto start = std::chrono::steady_clock::now();
    const std::string startedAt = iso_timestamp();
    if (!outDir.empty()) std::filesystem::create_directories(outDir);

    Criteria crit;
    crit.tolScale = cfg.tolScale;
    Json results;
    if (cfg.experiment == "modular-report")
        results = run_modular_report(cfg, crit);
    else if (cfg.experiment == "kms-check")
        results = run_kms_check(cfg, crit);
    else if (cfg.experiment == "landau-spectrum")
        results = run_landau_spectrum(cfg, crit);
    else if (cfg.experiment == "landau-audit")
        results = run_landau_audit(cfg, crit);
    else if (cfg.experiment == "wigner-verify")
        results = run_wigner_verify(cfg, crit, outDir);
    else if (cfg.experiment == "quasi-kms")
        results = run_quasi_kms(cfg, crit);
    else if (cfg.experiment == "quasi-ideal")
        results = run_quasi_ideal(cfg, crit);
    else
        throw UsageError("config.experiment: unknown experiment \"" + cfg.experiment + "\"");

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunOutcome outcome;
    outcome.pass = crit.pass;
    outcome.envelope = Json{{"schemaVersion", kSchemaVersion},
                            {"toolVersion", kToolVersion},
                            {"experiment", cfg.experiment},
                            {"startedAt", startedAt},
                            {"durationSeconds", seconds},
                            {"configEcho", cfg.raw},
                            {"seed", cfg.seed},
                            {"results", results},
                            {"summary", Json{{"criteria", crit.items}, {"pass", crit.pass}}}};

    if (!outDir.empty()) {
        std::ofstream out(outDir + "/report.json");
        if (!out)
            throw std::runtime_error("run: cannot write " + outDir + "/report.json");
        out << outcome.envelope.dump(2) << '\n';
    }
    return outcome;
}

} // namespace modlab::cli
