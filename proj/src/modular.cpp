#include "modlab/modular.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modlab::modular {

WeightSequence weight_sequence(const OscillatorBasis& b, const RealVector& raw, double beta) {
    if (beta <= 0.0)
        throw std::domain_error("weight_sequence: beta must be positive");
    if (raw.size() != b.dim)
        throw std::invalid_argument("weight_sequence: need one weight per level");
    for (Eigen::Index i = 0; i < raw.size(); ++i)
        if (!(raw(i) > 0.0) || !std::isfinite(raw(i)))
            throw std::domain_error("weight_sequence: weights must be strictly positive");
    const double sum = raw.sum();
    return {b, raw / sum, beta, sum};
}

WeightSequence gibbs_weights(const OscillatorBasis& b, double beta) {
    if (beta <= 0.0)
        throw std::domain_error("gibbs_weights: beta must be positive");
    RealVector raw(b.dim);
    const double prefactor = 1.0 - std::exp(-beta);
    for (int n = 0; n < b.dim; ++n)
        raw(n) = prefactor * std::exp(-beta * n);
    return weight_sequence(b, raw, beta);
}

HsElement kms_vector(const WeightSequence& w) {
    Matrix m = Matrix::Zero(w.dim(), w.dim());
    for (int i = 0; i < w.dim(); ++i)
        m(i, i) = std::sqrt(w.weights(i));
    return {w.basis, m};
}

TruncatedOperator density_operator(const WeightSequence& w) {
    Matrix m = Matrix::Zero(w.dim(), w.dim());
    for (int i = 0; i < w.dim(); ++i)
        m(i, i) = w.weights(i);
    return {w.basis, m};
}

Complex state_eval(const WeightSequence& w, const TruncatedOperator& a, const Tolerances& tol) {
    require_same_basis(w.basis, a.basis, "state_eval");
    HsElement phi = kms_vector(w);
    Complex viaVector = hs_inner(phi, apply_super(lift_left(a), phi));
    Complex viaTrace = (density_operator(w).mat * a.mat).trace();
    double scale = std::max(1.0, std::abs(viaTrace));
    if (std::abs(viaVector - viaTrace) > tol.stateConsistency * scale) {
        std::ostringstream msg;
        msg << "state_eval: internal consistency failure, |<Phi,(AvI)Phi> - Tr[rho A]| = "
            << std::abs(viaVector - viaTrace);
        throw std::logic_error(msg.str());
    }
    return viaVector;
}

TruncatedOperator modular_hamiltonian(const WeightSequence& w) {
    Matrix m = Matrix::Zero(w.dim(), w.dim());
    for (int i = 0; i < w.dim(); ++i)
        m(i, i) = -std::log(w.weights(i)) / w.beta;
    return {w.basis, m};
}

DenseSuperOp liouvillian(const WeightSequence& w) {
    const int d = w.dim();
    Matrix m = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int idx = hs_flat_index(i, j, d);
            m(idx, idx) = -std::log(w.weights(i) / w.weights(j)) / w.beta;
        }
    return {w.basis, m};
}

DenseSuperOp modular_operator(const WeightSequence& w) {
    const int d = w.dim();
    Matrix m = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int idx = hs_flat_index(i, j, d);
            m(idx, idx) = w.weights(i) / w.weights(j);
        }
    return {w.basis, m};
}

AntilinearMap tomita_s(const WeightSequence& w) {
    const int d = w.dim();
    Matrix m = Matrix::Zero(d * d, d * d);
    // S maps X_kl to (alpha_k/alpha_l)^{1/2} X_lk
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            m(hs_flat_index(l, k, d), hs_flat_index(k, l, d)) =
                std::sqrt(w.weights(k) / w.weights(l));
    return {w.basis, m};
}

HsElement tomita_s_closed_form(const WeightSequence& w, const HsElement& x) {
    require_same_basis(w.basis, x.basis, "tomita_s_closed_form");
    const int d = w.dim();
    Matrix rootInv = Matrix::Zero(d, d);
    Matrix root = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        root(i, i) = std::sqrt(w.weights(i));
        rootInv(i, i) = 1.0 / root(i, i).real();
    }
    return {x.basis, rootInv * x.mat.adjoint() * root};
}

HsElement modular_closed_form(const WeightSequence& w, const HsElement& x) {
    require_same_basis(w.basis, x.basis, "modular_closed_form");
    const int d = w.dim();
    Matrix rho = Matrix::Zero(d, d);
    Matrix rhoInv = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        rho(i, i) = w.weights(i);
        rhoInv(i, i) = 1.0 / w.weights(i);
    }
    return {x.basis, rho * x.mat * rhoInv};
}

ModularStructure build_modular_structure(const WeightSequence& w, const Tolerances& tol) {
    ModularStructure s{w,
                       kms_vector(w),
                       density_operator(w),
                       modular_hamiltonian(w),
                       liouvillian(w),
                       modular_operator(w),
                       modular_conjugation(w.basis),
                       tomita_s(w)};
    // S = J Delta^{1/2} is the one identity a sign flip would break; pin it here.
    Matrix deltaHalf = matrix_function_hermitian(s.delta.mat,
                                                 [](double x) { return std::sqrt(x); }, tol);
    double residual = (s.tomitaS.linearPart - s.jay.linearPart * deltaHalf).norm();
    if (residual > tol.modularIdentity * std::max(1.0, s.tomitaS.linearPart.norm()))
        throw std::logic_error("build_modular_structure: S != J Delta^{1/2}");
    return s;
}

PolarCheckReport polar_check(const WeightSequence& w, const Tolerances& tol) {
    AntilinearMap s = tomita_s(w);
    AntilinearMap jay = modular_conjugation(w.basis);
    DenseSuperOp delta = modular_operator(w);

    Matrix deltaHalf = matrix_function_hermitian(delta.mat,
                                                 [](double x) { return std::sqrt(x); }, tol);

    // residuals are relative to the operand scale; Delta's entries reach
    // e^{beta (dim-1)}, where an absolute comparison would only measure eps
    // amplification
    PolarCheckReport report{};
    report.vsComposition =
        (s.linearPart - jay.linearPart * deltaHalf).norm() / std::max(1.0, s.linearPart.norm());

    PolarFactors polar = polar_decompose(s.linearPart, tol);
    report.vsPolarUnitary =
        (polar.unitaryPart - jay.linearPart).norm() / jay.linearPart.norm();
    report.vsPolarPositive =
        (polar.positivePart - deltaHalf).norm() / std::max(1.0, deltaHalf.norm());

    DenseSuperOp sts = compose(antilinear_adjoint(s), s);
    report.deltaVsStS = (delta.mat - sts.mat).norm() / std::max(1.0, delta.mat.norm());

    report.pass = report.vsComposition <= tol.modularIdentity &&
                  report.vsPolarUnitary <= tol.modularIdentity &&
                  report.vsPolarPositive <= tol.modularIdentity &&
                  report.deltaVsStS <= tol.modularIdentity;
    return report;
}

TruncatedOperator evolve_operator(const WeightSequence& w, Complex z, const TruncatedOperator& a) {
    require_same_basis(w.basis, a.basis, "evolve_operator");
    const int d = w.dim();
    Matrix out(d, d);
    const Complex iz = Complex(0.0, 1.0) * z;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            // spectral phase e^{iz(H_j - H_k)} with H_j = -ln(alpha_j)/beta;
            // the exponent stays modest even when individual e^{izH} would not
            double gap = -std::log(w.weights(j) / w.weights(k)) / w.beta;
            out(j, k) = std::exp(iz * gap) * a.mat(j, k);
        }
    return {w.basis, out};
}

FactorizedSuperOp modular_flow(const WeightSequence& w, double t, const FactorizedSuperOp& s,
                               const Tolerances& tol) {
    require_same_basis(w.basis, s.basis(), "modular_flow");
    const Matrix identity = Matrix::Identity(w.dim(), w.dim());
    const double rightDefect = (s.right.mat - identity).norm();
    if (rightDefect > tol.stateConsistency * std::max(1.0, s.right.mat.norm())) {
        std::ostringstream msg;
        msg << "modular_flow: wrong algebra, operator is not left-lifted (||right - I|| = "
            << rightDefect << ")";
        throw std::invalid_argument(msg.str());
    }
    return lift_left(evolve_operator(w, t, s.left));
}

Complex kms_function(const WeightSequence& w, const TruncatedOperator& a,
                     const TruncatedOperator& b, Complex z) {
    TruncatedOperator evolved = evolve_operator(w, z, b);
    return (density_operator(w).mat * a.mat * evolved.mat).trace();
}

std::vector<NamedOperator> kms_test_ensemble(const OscillatorBasis& b, int randomCount, Rng& rng) {
    std::vector<NamedOperator> out;
    const int interior = b.dim - 2;
    for (int k = 0; k < interior; ++k)
        for (int l = 0; l < interior; ++l) {
            std::ostringstream name;
            name << "X(" << k << "," << l << ")";
            out.push_back({name.str(), {b, matrix_unit(k, l, b).mat}});
        }

    auto [a, adag] = build_ladder(b);
    const std::vector<Matrix> monomials = {
        Matrix::Identity(b.dim, b.dim), a.mat,        adag.mat,      a.mat * a.mat,
        adag.mat * adag.mat,            adag.mat * a.mat, a.mat * adag.mat};
    const Matrix proj = interior_projector(b, 2).mat;
    for (int r = 0; r < randomCount; ++r) {
        Matrix m = Matrix::Zero(b.dim, b.dim);
        for (const Matrix& mono : monomials)
            m += rng.complexGaussian() * mono;
        m = proj * m * proj;
        const double norm = m.norm();
        if (norm > 0) m /= norm;
        std::ostringstream name;
        name << "poly#" << r;
        out.push_back({name.str(), {b, m}});
    }
    return out;
}

std::vector<OperatorPair> draw_pairs(const std::vector<NamedOperator>& ensemble,
                                     int count, Rng& rng) {
    if (ensemble.empty())
        throw std::invalid_argument("draw_pairs: empty ensemble");
    std::vector<OperatorPair> pairs;
    pairs.reserve(count);
    for (int i = 0; i < count; ++i) {
        const NamedOperator& a = ensemble[rng.below(ensemble.size())];
        const NamedOperator& b = ensemble[rng.below(ensemble.size())];
        pairs.push_back({a.name + " | " + b.name, a.op, b.op});
    }
    return pairs;
}

OperatorPair canonical_kms_pair(const OscillatorBasis& b) {
    return {"X(0,1) | X(1,0)",
            {b, matrix_unit(0, 1, b).mat},
            {b, matrix_unit(1, 0, b).mat}};
}

namespace {

KmsReport kms_residual_impl(const WeightSequence& state, const WeightSequence& flow,
                            const std::vector<OperatorPair>& pairs, const RealVector& tGrid) {
    if (tGrid.size() < 1)
        throw std::invalid_argument("kms_residual: empty t grid");

    KmsReport report;
    report.beta = state.beta;
    report.dim = state.dim();
    report.weights = state.weights;
    report.tGrid = tGrid;

    const TruncatedOperator rho = density_operator(state);
    const Complex iBeta(0.0, flow.beta);

    for (const OperatorPair& pair : pairs) {
        double worst = 0.0;
        double worstInv = 0.0;
        const Complex phiA = (rho.mat * pair.a.mat).trace();
        for (Eigen::Index ti = 0; ti < tGrid.size(); ++ti) {
            const double t = tGrid(ti);
            TruncatedOperator bShifted = evolve_operator(flow, Complex(t, 0.0) + iBeta, pair.b);
            TruncatedOperator bReal = evolve_operator(flow, Complex(t, 0.0), pair.b);
            Complex lhs = (rho.mat * pair.a.mat * bShifted.mat).trace();
            Complex rhs = (rho.mat * bReal.mat * pair.a.mat).trace();
            worst = std::max(worst, std::abs(lhs - rhs));

            TruncatedOperator aEvolved = evolve_operator(flow, Complex(t, 0.0), pair.a);
            worstInv = std::max(worstInv, std::abs((rho.mat * aEvolved.mat).trace() - phiA));
        }
        report.pairs.push_back(pair.name);
        report.residuals.push_back(worst);
        report.invarianceResiduals.push_back(worstInv);
        report.maxResidual = std::max(report.maxResidual, worst);
        report.maxInvariance = std::max(report.maxInvariance, worstInv);

        // strip analyticity: compare the two Cauchy-Riemann difference
        // quotients of F at mid-strip
        const Complex z0(0.5 * (tGrid(0) + tGrid(tGrid.size() - 1)), 0.5 * flow.beta);
        const double h = 1e-4;
        auto F = [&](Complex z) {
            TruncatedOperator evolved = evolve_operator(flow, z, pair.b);
            return Complex((rho.mat * pair.a.mat * evolved.mat).trace());
        };
        Complex dRe = (F(z0 + h) - F(z0 - h)) / (2.0 * h);
        Complex dIm = (F(z0 + Complex(0, h)) - F(z0 - Complex(0, h))) / Complex(0, 2.0 * h);
        report.analyticityResidual = std::max(report.analyticityResidual, std::abs(dRe - dIm));
    }

    // invariance of Phi under e^{ith}: phases vanish on the diagonal, but run
    // the honest computation anyway
    HsElement phi = kms_vector(state);
    for (Eigen::Index ti = 0; ti < tGrid.size(); ++ti) {
        const int d = state.dim();
        Matrix evolved(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double gap = -std::log(flow.weights(i) / flow.weights(j)) / flow.beta;
                evolved(i, j) = std::exp(Complex(0.0, tGrid(ti) * gap)) * phi.mat(i, j);
            }
        report.flowInvariance = std::max(report.flowInvariance, (evolved - phi.mat).norm());
    }
    return report;
}

} // namespace

KmsReport kms_residual(const WeightSequence& w, const std::vector<OperatorPair>& pairs,
                       const RealVector& tGrid) {
    return kms_residual_impl(w, w, pairs, tGrid);
}

KmsReport kms_residual_mismatched(const WeightSequence& state, const WeightSequence& flow,
                                  const std::vector<OperatorPair>& pairs,
                                  const RealVector& tGrid) {
    require_same_basis(state.basis, flow.basis, "kms_residual_mismatched");
    return kms_residual_impl(state, flow, pairs, tGrid);
}

} // namespace modlab::modular
