#include "modlab/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace modlab {

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const HsElement& x) {
    Json rows = Json::array();
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j)
            rows.push_back(to_json(x.mat(i, j)));
    return Json{{"dim", x.dim()}, {"entries", rows}};
}

Json to_json(const RealVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const modular::KmsReport& report) {
    return Json{{"beta", report.beta},
                {"dim", report.dim},
                {"weights", to_json(report.weights)},
                {"tGrid", to_json(report.tGrid)},
                {"pairs", report.pairs},
                {"residuals", report.residuals},
                {"invarianceResiduals", report.invarianceResiduals},
                {"maxResidual", report.maxResidual},
                {"maxInvariance", report.maxInvariance},
                {"flowInvariance", report.flowInvariance},
                {"analyticityResidual", report.analyticityResidual}};
}

Json to_json(const modular::PolarCheckReport& report) {
    return Json{{"vsComposition", report.vsComposition},
                {"vsPolarUnitary", report.vsPolarUnitary},
                {"vsPolarPositive", report.vsPolarPositive},
                {"deltaVsStS", report.deltaVsStS},
                {"pass", report.pass}};
}

Json to_json(const landau::DegeneracyReport& report) {
    return Json{{"distinctJointPairs", report.distinctJointPairs},
                {"jointSimple", report.jointSimple},
                {"marginalsMatch", report.marginalsMatch},
                {"commutatorNorm", report.commutatorNorm},
                {"intSumNorm", report.intSumNorm},
                {"splitResidual", report.splitResidual}};
}

namespace {
Json coefficients_json(const std::array<Complex, 4>& c) {
    return Json{{"a_x", to_json(c[0])},
                {"a_y", to_json(c[1])},
                {"a_x_dag", to_json(c[2])},
                {"a_y_dag", to_json(c[3])}};
}

Json fit_json(const landau::LadderFit& fit) {
    return Json{{"fitted", coefficients_json(fit.fitted)},
                {"claimed", coefficients_json(fit.claimed)},
                {"fitResidual", fit.fitResidual},
                {"maxCoefficientDeviation", fit.maxCoefficientDeviation}};
}
} // namespace

Json to_json(const landau::SecondRepAudit& audit) {
    return Json{{"dimPerAxis", audit.dimPerAxis},
                {"aPlus", fit_json(audit.aPlus)},
                {"aMinus", fit_json(audit.aMinus)},
                {"ccrResidualPlus", audit.ccrResidualPlus},
                {"ccrResidualMinus", audit.ccrResidualMinus},
                {"crossCommutatorResidual", audit.crossCommutatorResidual},
                {"hIntMinusHalfResidual", audit.hIntMinusHalfResidual},
                {"hIntPlusHalfResidual", audit.hIntPlusHalfResidual},
                {"hIntConvention", audit.hIntConvention},
                {"h0HalfSpectrumDeviation", audit.h0HalfSpectrumDeviation},
                {"h0FullSpectrumDeviation", audit.h0FullSpectrumDeviation}};
}

Json to_json(const wigner::IntertwiningReport& report) {
    return Json{{"maxLabel", report.maxLabel},
                {"dims", report.dims},
                {"gaussianDeviation", report.gaussianDeviation},
                {"pointwiseDirect", report.pointwiseDirect},
                {"pointwiseTransposed", report.pointwiseTransposed},
                {"arrangement", report.arrangement},
                {"generatorDeviationMatched", report.generatorDeviationMatched},
                {"generatorDeviationPrinted", report.generatorDeviationPrinted},
                {"hamiltonianBlockDeviation", report.hamiltonianBlockDeviation},
                {"gramDeviation", report.gramDeviation}};
}

Json to_json(const quasi::TruncationSweep& sweep) {
    return Json{{"dims", sweep.dims},
                {"values", sweep.values},
                {"verdict", quasi::to_string(sweep.verdict)},
                {"growthExponent", sweep.growthExponent}};
}

Json to_json(const quasi::IdealDiagnostic& diag) {
    Json sweeps = Json::array();
    for (const auto& sweep : diag.traceSweeps) sweeps.push_back(to_json(sweep));
    return Json{{"candidate", diag.candidate},
                {"testPairs", diag.testPairs},
                {"traceSweeps", sweeps},
                {"verdict", quasi::to_string(diag.verdict)}};
}

Json to_json(const quasi::BoundednessReport& report) {
    return Json{{"samples", report.samples},
                {"dim", report.dim},
                {"maxExcess", report.maxExcess},
                {"allHold", report.allHold}};
}

Json to_json(const quasi::StructureReport& report) {
    return Json{{"dim", report.dim},
                {"faithfulnessIdentityResidual", report.faithfulnessIdentityResidual},
                {"faithful", report.faithful},
                {"gramRank", report.gramRank},
                {"cyclic", report.cyclic},
                {"separatingSmallestSingular", report.separatingSmallestSingular},
                {"separating", report.separating},
                {"orthonormalityDeviation", report.orthonormalityDeviation},
                {"completenessResidual", report.completenessResidual}};
}

quasi::WeightFamily weight_family_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("weight family: need an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    const double beta = j.value("beta", 1.0);
    if (kind == "gibbs") return quasi::gibbs_family(j.value("beta", 1.0));
    if (kind == "zeta") return quasi::zeta_family(j.value("s", 2.0), beta);
    if (kind == "custom") {
        if (!j.contains("weights"))
            throw std::invalid_argument("weight family: custom kind needs \"weights\"");
        return quasi::custom_family(j.at("weights").get<std::vector<double>>(), beta);
    }
    throw std::invalid_argument("weight family: unknown kind \"" + kind + "\"");
}

void write_grid_csv(const wigner::GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_grid_csv: cannot open " + path);
    out << "x,y,re,im\n";
    out.precision(17);
    for (int i = 0; i < f.grid.pointsPerAxis; ++i)
        for (int j = 0; j < f.grid.pointsPerAxis; ++j)
            out << f.grid.x(i) << ',' << f.grid.y(j) << ',' << f.values(i, j).real() << ','
                << f.values(i, j).imag() << '\n';
}

} // namespace modlab
